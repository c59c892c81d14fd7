//! MediaWiki dump ingestion: page extraction, markup stripping, tag
//! detection and line filtering.

mod config;
mod dump;
mod filter;
mod markup;
mod tags;

use std::io::BufRead;

use serde::Serialize;

pub use config::{default_tag_map, IngestConfig, DEFAULT_CONFIG_TOML};
pub use dump::{extract_pages, PageIter, RawPage};
pub use filter::{
    filter_lines, is_latin_letter, latin_ratio, normalize_line, ClassCounts, FilterConfig,
    FilterOutput, FilterReport, LineFilter, RemovalReason, RemovedCounts, ReviewItem,
    DEFAULT_BOILERPLATE, DEFAULT_ENGLISH_STOPWORDS, DEFAULT_ITALIAN_STOPWORDS,
};
pub use markup::strip_markup;
pub use tags::{
    detect_orthography_tag, detect_with_conflict, normalize_template_name, scan_orthography_tags,
    template_names, TagMap,
};

use crate::corpus::OrthographyClass;
use crate::error::Result;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PageCounts {
    pub articles: usize,
    pub tagged: usize,
    pub conflicting_tags: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IngestReport {
    pub pages: PageCounts,
    pub lines: FilterReport,
}

impl IngestReport {
    /// Structured text form written next to the corpus.
    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Default)]
pub struct IngestOutput {
    pub filtered: FilterOutput,
    pub pages: PageCounts,
}

impl IngestOutput {
    pub fn report(&self) -> IngestReport {
        IngestReport {
            pages: self.pages.clone(),
            lines: self.filtered.report.clone(),
        }
    }
}

/// Lines of one page, each labelled with the page's orthography tag.
pub fn page_lines(page: &RawPage, tag_map: &TagMap) -> (OrthographyClass, bool, Vec<String>) {
    let (tag, conflict) = detect_with_conflict(&page.wikitext, tag_map);
    if conflict {
        log::warn!("page {:?} carries conflicting orthography templates", page.title);
    }
    (tag, conflict, strip_markup(&page.wikitext))
}

/// Runs the full pipeline over a dump stream.
pub fn ingest<R: BufRead>(dump: R, config: &IngestConfig) -> Result<IngestOutput> {
    let filter = LineFilter::new(config.filter.clone())?;
    let mut pages = PageCounts::default();
    let mut lines: Vec<(String, OrthographyClass)> = Vec::new();
    for page in extract_pages(dump) {
        let page = page?;
        let (tag, conflict, text) = page_lines(&page, &config.tags);
        pages.articles += 1;
        pages.tagged += (tag != OrthographyClass::NoTag) as usize;
        pages.conflicting_tags += conflict as usize;
        lines.extend(text.into_iter().map(|l| (l, tag)));
    }
    log::info!("extracted {} lines from {} articles", lines.len(), pages.articles);
    Ok(IngestOutput {
        filtered: filter.filter(lines),
        pages,
    })
}
