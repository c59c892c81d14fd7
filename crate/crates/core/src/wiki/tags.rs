//! Orthography template detection.

use std::collections::HashMap;

use crate::corpus::OrthographyClass;
use crate::error::{Error, Result};

/// Ordered template-name to class mapping. Names are compared after
/// trimming, lowercasing and treating `_` as a space.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TagMap {
    entries: Vec<(String, OrthographyClass)>,
    index: HashMap<String, OrthographyClass>,
}

pub fn normalize_template_name(name: &str) -> String {
    name.replace('_', " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

impl TagMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, OrthographyClass)>,
        S: AsRef<str>,
    {
        let mut map = Self::new();
        for (name, class) in pairs {
            map.insert(name.as_ref(), class)?;
        }
        Ok(map)
    }

    pub fn insert(&mut self, name: &str, class: OrthographyClass) -> Result<()> {
        if !class.is_taggable() {
            return Err(Error::Config(format!("template {name:?} cannot map to {class}")));
        }
        let key = normalize_template_name(name);
        if key.is_empty() {
            return Err(Error::Config("empty template name in tag map".into()));
        }
        if self.index.contains_key(&key) {
            return Err(Error::Config(format!("duplicate template name {name:?} in tag map")));
        }
        self.index.insert(key, class);
        self.entries.push((name.trim().to_string(), class));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<OrthographyClass> {
        self.index.get(&normalize_template_name(name)).copied()
    }

    pub fn entries(&self) -> &[(String, OrthographyClass)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn aliases(&self, class: OrthographyClass) -> impl Iterator<Item = &str> {
        self.entries.iter().filter(move |(_, c)| *c == class).map(|(n, _)| n.as_str())
    }
}

/// Names of every `{{...}}` invocation in document order, nested ones
/// included. Triple-brace parameters are skipped.
pub fn template_names(wikitext: &str) -> impl Iterator<Item = &str> {
    let bytes = wikitext.as_bytes();
    let mut pos = 0;
    std::iter::from_fn(move || loop {
        let k = wikitext[pos..].find("{{")?;
        let mut start = pos + k + 2;
        if bytes.get(start) == Some(&b'{') {
            while bytes.get(start) == Some(&b'{') {
                start += 1;
            }
            pos = start;
            continue;
        }
        let rest = &wikitext[start..];
        let end = rest.find(['|', '}', '{', '\n']).unwrap_or(rest.len());
        pos = start;
        let name = rest[..end].trim();
        if !name.is_empty() {
            return Some(name);
        }
    })
}

/// Orthography classes of all matching templates, in document order.
pub fn scan_orthography_tags(wikitext: &str, tag_map: &TagMap) -> Vec<OrthographyClass> {
    template_names(wikitext).filter_map(|n| tag_map.get(n)).collect()
}

/// Class of the first matching orthography template, or `NoTag`.
pub fn detect_orthography_tag(wikitext: &str, tag_map: &TagMap) -> OrthographyClass {
    detect_with_conflict(wikitext, tag_map).0
}

/// Like [`detect_orthography_tag`], also reporting whether a different
/// orthography template appears later in the page.
pub fn detect_with_conflict(wikitext: &str, tag_map: &TagMap) -> (OrthographyClass, bool) {
    let tags = scan_orthography_tags(wikitext, tag_map);
    match tags.first() {
        None => (OrthographyClass::NoTag, false),
        Some(&first) => {
            let conflict = tags.iter().any(|&t| t != first);
            if conflict {
                log::warn!("conflicting orthography templates {tags:?}; using {first}");
            }
            (first, conflict)
        }
    }
}
