//! TOML configuration holding the tag map and filter settings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::filter::FilterConfig;
use super::tags::TagMap;
use crate::corpus::OrthographyClass;
use crate::error::{Error, Result};

/// The configuration file shipped with the toolkit.
pub const DEFAULT_CONFIG_TOML: &str = include_str!("../../config/default.toml");

#[derive(Debug, Clone, PartialEq)]
pub struct IngestConfig {
    pub tags: TagMap,
    pub filter: FilterConfig,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    tags: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    filter: Option<FilterConfig>,
}

/// Built-in template aliases; each class is reachable by its code and
/// by the `Graf<CODE>` / `Grafia <CODE>` forms.
pub fn default_tag_map() -> TagMap {
    let mut map = TagMap::new();
    let mut classes = OrthographyClass::TAGGABLE;
    classes.sort_by_key(|c| c.as_str());
    for class in classes {
        let code = class.as_str();
        for alias in [code.to_string(), format!("Graf{code}"), format!("Grafia {code}")] {
            map.insert(&alias, class).expect("built-in aliases are distinct");
        }
        if class == OrthographyClass::Milclass {
            map.insert("GrafMIL", class).expect("built-in aliases are distinct");
        }
    }
    map
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            tags: default_tag_map(),
            filter: FilterConfig::default(),
        }
    }
}

impl IngestConfig {
    pub fn from_toml_str(src: &str) -> Result<Self> {
        let file: ConfigFile =
            toml::from_str(src).map_err(|e| Error::Config(format!("invalid configuration: {e}")))?;
        let tags = match file.tags {
            None => default_tag_map(),
            Some(table) => {
                let mut map = TagMap::new();
                for (class, aliases) in table {
                    let class: OrthographyClass = class
                        .parse()
                        .map_err(|_| Error::Config(format!("unknown orthography class {class:?} in [tags]")))?;
                    for alias in aliases {
                        map.insert(&alias, class)?;
                    }
                }
                map
            }
        };
        let filter = file.filter.unwrap_or_default();
        let config = Self { tags, filter };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&src)
    }

    /// Checks thresholds and compiles every pattern.
    pub fn validate(&self) -> Result<()> {
        super::filter::LineFilter::new(self.filter.clone()).map(|_| ())
    }

    pub fn to_toml_string(&self) -> String {
        let mut tags: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (alias, class) in self.tags.entries() {
            tags.entry(class.as_str().to_string()).or_default().push(alias.clone());
        }
        let file = ConfigFile { tags: Some(tags), filter: Some(self.filter.clone()) };
        toml::to_string_pretty(&file).expect("configuration serializes")
    }
}
