//! Line-level quality filters applied after markup stripping.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use regex::{Regex, RegexSet};
use serde::{Deserialize, Serialize};

use crate::corpus::{OrthographyClass, Sample};
use crate::error::{Error, Result};

pub const DEFAULT_ITALIAN_STOPWORDS: &[&str] = &[
    "il", "lo", "gli", "della", "delle", "dello", "degli", "nella", "nelle", "nello", "negli",
    "alla", "alle", "allo", "agli", "dalla", "dalle", "dagli", "sulla", "sulle", "nel", "sono",
    "è", "questo", "questa", "questi", "queste", "anche", "essere", "stato", "stata", "molto",
    "tutti", "tutte", "dopo", "aveva", "hanno", "erano", "viene", "vengono", "però", "perché",
    "più", "sua", "suo", "suoi", "loro", "non", "con", "una", "uno", "da", "in", "e",
    "che", "per", "si", "ha", "la", "le", "al", "del", "dei", "ed", "ma", "come",
];

pub const DEFAULT_ENGLISH_STOPWORDS: &[&str] = &[
    "the", "of", "and", "to", "in", "is", "was", "for", "on", "with", "as", "by", "at", "from",
    "that", "this", "which", "are", "were", "be", "been", "has", "have", "had", "it", "its",
    "an", "or", "not", "but", "their", "they", "he", "she", "his", "her", "also", "after",
    "who", "into", "during", "than", "there", "these", "about",
];

pub const DEFAULT_BOILERPLATE: &[&str] = &[
    r"(?i)^(el|l')\s*\d{1,4}\s+(a\s+)?l'(è|é|e)\s+'?(n|un|on|ü)\s+ann\b",
    r"(?i)\bl'(è|é|e)\s+(un|on|ü|'?n)\s+(cumün|comun|comune|cümü|cümün|cömü|comü)\b",
    r"(?i)\bl'(è|é|e)\s+(una|vuna|'?na)\s+(stazion|stazzion|staziù|stassiù|stasiù)\b",
    r"(?i)\bl'(è|é|e)\s+(una|vuna|'?na)\s+(frazion|frazzion|frassiù|fraziù)\b",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    #[serde(default = "defaults::min_words")]
    pub min_words: usize,
    #[serde(default = "defaults::dedup")]
    pub dedup: bool,
    #[serde(default = "defaults::latin_ratio")]
    pub latin_ratio_threshold: f64,
    #[serde(default = "defaults::foreign_ratio")]
    pub foreign_ratio_threshold: f64,
    #[serde(default = "defaults::boilerplate")]
    pub boilerplate_patterns: Vec<String>,
    /// Stopword lists keyed by language name.
    #[serde(default = "defaults::stoplists")]
    pub stoplists: BTreeMap<String, Vec<String>>,
}

mod defaults {
    use super::*;

    fn list(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }
    pub fn boilerplate() -> Vec<String> {
        list(DEFAULT_BOILERPLATE)
    }
    pub fn stoplists() -> BTreeMap<String, Vec<String>> {
        BTreeMap::from([
            ("english".to_string(), list(DEFAULT_ENGLISH_STOPWORDS)),
            ("italian".to_string(), list(DEFAULT_ITALIAN_STOPWORDS)),
        ])
    }
    pub fn min_words() -> usize {
        4
    }
    pub fn dedup() -> bool {
        true
    }
    pub fn latin_ratio() -> f64 {
        0.5
    }
    pub fn foreign_ratio() -> f64 {
        0.6
    }
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            min_words: defaults::min_words(),
            dedup: defaults::dedup(),
            latin_ratio_threshold: defaults::latin_ratio(),
            foreign_ratio_threshold: defaults::foreign_ratio(),
            boilerplate_patterns: defaults::boilerplate(),
            stoplists: defaults::stoplists(),
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_words < 1 {
            return Err(Error::Config("min_words must be at least 1".into()));
        }
        for (name, v) in [
            ("latin_ratio_threshold", self.latin_ratio_threshold),
            ("foreign_ratio_threshold", self.foreign_ratio_threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must be in [0, 1], got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalReason {
    NoTag,
    Duplicate,
    TooShort,
    NonLatin,
    ForeignLanguage,
    Boilerplate,
}

impl RemovalReason {
    pub const ALL: [RemovalReason; 6] = [
        Self::NoTag,
        Self::Duplicate,
        Self::TooShort,
        Self::NonLatin,
        Self::ForeignLanguage,
        Self::Boilerplate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::NoTag => "no_tag",
            Self::Duplicate => "duplicate",
            Self::TooShort => "too_short",
            Self::NonLatin => "non_latin",
            Self::ForeignLanguage => "foreign_language",
            Self::Boilerplate => "boilerplate",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovedCounts {
    pub no_tag: usize,
    pub duplicate: usize,
    pub too_short: usize,
    pub non_latin: usize,
    pub foreign_language: usize,
    pub boilerplate: usize,
}

impl RemovedCounts {
    pub fn get(&self, reason: RemovalReason) -> usize {
        match reason {
            RemovalReason::NoTag => self.no_tag,
            RemovalReason::Duplicate => self.duplicate,
            RemovalReason::TooShort => self.too_short,
            RemovalReason::NonLatin => self.non_latin,
            RemovalReason::ForeignLanguage => self.foreign_language,
            RemovalReason::Boilerplate => self.boilerplate,
        }
    }

    fn bump(&mut self, reason: RemovalReason) {
        let slot = match reason {
            RemovalReason::NoTag => &mut self.no_tag,
            RemovalReason::Duplicate => &mut self.duplicate,
            RemovalReason::TooShort => &mut self.too_short,
            RemovalReason::NonLatin => &mut self.non_latin,
            RemovalReason::ForeignLanguage => &mut self.foreign_language,
            RemovalReason::Boilerplate => &mut self.boilerplate,
        };
        *slot += 1;
    }

    pub fn total(&self) -> usize {
        RemovalReason::ALL.iter().map(|&r| self.get(r)).sum()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub input: usize,
    pub kept: usize,
}

/// Line accounting: `kept + removed.total() == input`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FilterReport {
    pub input: usize,
    pub kept: usize,
    pub removed: RemovedCounts,
    pub per_class: BTreeMap<OrthographyClass, ClassCounts>,
}

impl FilterReport {
    pub fn removed_fraction(&self) -> f64 {
        if self.input == 0 {
            0.0
        } else {
            self.removed.total() as f64 / self.input as f64
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.kept + self.removed.total() == self.input
    }
}

impl fmt::Display for FilterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input lines: {}", self.input)?;
        writeln!(f, "kept:        {}", self.kept)?;
        for reason in RemovalReason::ALL {
            writeln!(f, "  {:<17} {}", reason.as_str(), self.removed.get(reason))?;
        }
        write!(f, "removed:     {} ({:.2}%)", self.removed.total(), 100.0 * self.removed_fraction())
    }
}

/// A kept line flagged for manual inspection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReviewItem {
    pub text: String,
    pub tag: OrthographyClass,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct FilterOutput {
    pub kept: Vec<Sample>,
    /// Untagged lines, whitespace-normalized but otherwise unfiltered.
    pub untagged: Vec<Sample>,
    pub report: FilterReport,
    pub review: Vec<ReviewItem>,
}

/// Compiled form of a [`FilterConfig`]. Construction validates every
/// pattern so that filtering itself cannot fail.
#[derive(Debug, Clone)]
pub struct LineFilter {
    config: FilterConfig,
    boilerplate: RegexSet,
    stoplists: Vec<(String, HashSet<String>)>,
}

/// Margin inside which a passing line is reported as borderline.
const REVIEW_MARGIN: f64 = 0.2;

impl LineFilter {
    pub fn new(config: FilterConfig) -> Result<Self> {
        config.validate()?;
        for p in &config.boilerplate_patterns {
            Regex::new(p).map_err(|e| Error::Config(format!("invalid boilerplate pattern {p:?}: {e}")))?;
        }
        let boilerplate = RegexSet::new(&config.boilerplate_patterns)
            .map_err(|e| Error::Config(format!("invalid boilerplate patterns: {e}")))?;
        let stoplists = config
            .stoplists
            .iter()
            .map(|(lang, words)| (lang.clone(), words.iter().map(|w| w.to_lowercase()).collect()))
            .collect();
        Ok(Self { config, boilerplate, stoplists })
    }

    pub fn config(&self) -> &FilterConfig {
        &self.config
    }

    /// Largest per-language share of tokens found in a stoplist.
    pub fn foreign_ratio(&self, text: &str) -> (f64, Option<&str>) {
        let tokens: Vec<String> = text.split_whitespace().map(stop_token).collect();
        if tokens.is_empty() {
            return (0.0, None);
        }
        let mut best = (0.0, None);
        for (lang, words) in &self.stoplists {
            let hits = tokens.iter().filter(|t| words.contains(t.as_str())).count();
            let ratio = hits as f64 / tokens.len() as f64;
            if ratio > best.0 {
                best = (ratio, Some(lang.as_str()));
            }
        }
        best
    }

    /// First filter (after tag and duplicate checks) that rejects `text`.
    pub fn check(&self, text: &str) -> Option<RemovalReason> {
        if text.split_whitespace().count() < self.config.min_words {
            return Some(RemovalReason::TooShort);
        }
        if latin_ratio(text) < self.config.latin_ratio_threshold {
            return Some(RemovalReason::NonLatin);
        }
        if !self.stoplists.is_empty() && self.foreign_ratio(text).0 >= self.config.foreign_ratio_threshold {
            return Some(RemovalReason::ForeignLanguage);
        }
        if self.boilerplate.is_match(text) {
            return Some(RemovalReason::Boilerplate);
        }
        None
    }

    fn review_reasons(&self, text: &str) -> Vec<String> {
        let mut reasons = Vec::new();
        if text.split_whitespace().count() == self.config.min_words {
            reasons.push("at minimum length".to_string());
        }
        let latin = latin_ratio(text);
        if latin < (self.config.latin_ratio_threshold + REVIEW_MARGIN).min(1.0) {
            reasons.push(format!("mixed script (latin ratio {latin:.2})"));
        }
        if let (ratio, Some(lang)) = self.foreign_ratio(text) {
            if ratio >= self.config.foreign_ratio_threshold - REVIEW_MARGIN {
                reasons.push(format!("possibly {lang} (stopword ratio {ratio:.2})"));
            }
        }
        reasons
    }

    /// Runs the filters in order: tag, duplicate, length, script,
    /// language, boilerplate.
    pub fn filter<I, S>(&self, lines: I) -> FilterOutput
    where
        I: IntoIterator<Item = (S, OrthographyClass)>,
        S: AsRef<str>,
    {
        let mut out = FilterOutput::default();
        let mut seen: HashSet<String> = HashSet::new();
        for (raw, tag) in lines {
            out.report.input += 1;
            let text = normalize_line(raw.as_ref());
            if tag == OrthographyClass::NoTag {
                out.report.removed.bump(RemovalReason::NoTag);
                if let Ok(s) = Sample::new(text, tag) {
                    out.untagged.push(s);
                }
                continue;
            }
            out.report.per_class.entry(tag).or_default().input += 1;
            if self.config.dedup && !seen.insert(text.clone()) {
                out.report.removed.bump(RemovalReason::Duplicate);
                continue;
            }
            if let Some(reason) = self.check(&text) {
                out.report.removed.bump(reason);
                continue;
            }
            let reasons = self.review_reasons(&text);
            if !reasons.is_empty() {
                out.review.push(ReviewItem { text: text.clone(), tag, reasons });
            }
            match Sample::new(text, tag) {
                Ok(sample) => {
                    out.report.kept += 1;
                    out.report.per_class.entry(tag).or_default().kept += 1;
                    out.kept.push(sample);
                }
                Err(_) => out.report.removed.bump(RemovalReason::TooShort),
            }
        }
        out
    }
}

/// Filters tagged lines with a freshly compiled [`LineFilter`].
pub fn filter_lines<I, S>(lines: I, config: &FilterConfig) -> Result<(Vec<Sample>, FilterReport)>
where
    I: IntoIterator<Item = (S, OrthographyClass)>,
    S: AsRef<str>,
{
    let out = LineFilter::new(config.clone())?.filter(lines);
    Ok((out.kept, out.report))
}

/// Trims and collapses line breaks so the text is a valid single line.
pub fn normalize_line(text: &str) -> String {
    let trimmed = text.trim();
    if trimmed.contains(['\n', '\r']) {
        trimmed.split(['\n', '\r']).map(str::trim).filter(|s| !s.is_empty()).collect::<Vec<_>>().join(" ")
    } else {
        trimmed.to_string()
    }
}

fn stop_token(token: &str) -> String {
    token.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase()
}

pub fn is_latin_letter(c: char) -> bool {
    matches!(c,
        'A'..='Z' | 'a'..='z' | '\u{AA}' | '\u{BA}'
        | '\u{C0}'..='\u{D6}' | '\u{D8}'..='\u{F6}' | '\u{F8}'..='\u{24F}'
        | '\u{1E00}'..='\u{1EFF}' | '\u{2C60}'..='\u{2C7F}' | '\u{A720}'..='\u{A7FF}'
        | '\u{AB30}'..='\u{AB6F}' | '\u{FB00}'..='\u{FB06}'
        | '\u{FF21}'..='\u{FF3A}' | '\u{FF41}'..='\u{FF5A}')
}

/// Share of Latin-script letters among all letters; 0 when there are none.
pub fn latin_ratio(text: &str) -> f64 {
    let (mut letters, mut latin) = (0usize, 0usize);
    for c in text.chars().filter(|c| c.is_alphabetic()) {
        letters += 1;
        latin += is_latin_letter(c) as usize;
    }
    if letters == 0 {
        0.0
    } else {
        latin as f64 / letters as f64
    }
}
