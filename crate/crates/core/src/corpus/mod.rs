//! The orthography-tagged corpus: labels, samples, JSONL I/O and summaries.

mod split;

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use split::{allocate_split_sizes, stratified_split, SplitRatios, SplitSet};

/// Orthographic system of a line.
///
/// Variants are declared in ascending label order, so the derived `Ord`
/// is the sorted label order used for class lists in trained models.
/// `NoTag` sorts last and is never a training label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrthographyClass {
    Bergduc,
    Bremod,
    Cres,
    Locc,
    Lorunif,
    Lsi,
    Milclass,
    Nol,
    Sl,
    NoTag,
}

impl OrthographyClass {
    /// The nine taggable labels in corpus-table order.
    pub const TAGGABLE: [OrthographyClass; 9] = [
        OrthographyClass::Milclass,
        OrthographyClass::Locc,
        OrthographyClass::Lorunif,
        OrthographyClass::Sl,
        OrthographyClass::Nol,
        OrthographyClass::Cres,
        OrthographyClass::Bremod,
        OrthographyClass::Bergduc,
        OrthographyClass::Lsi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OrthographyClass::Milclass => "MILCLASS",
            OrthographyClass::Locc => "LOCC",
            OrthographyClass::Lorunif => "LORUNIF",
            OrthographyClass::Sl => "SL",
            OrthographyClass::Nol => "NOL",
            OrthographyClass::Cres => "CRES",
            OrthographyClass::Bremod => "BREMOD",
            OrthographyClass::Bergduc => "BERGDUC",
            OrthographyClass::Lsi => "LSI",
            OrthographyClass::NoTag => "NO_TAG",
        }
    }

    pub fn is_taggable(self) -> bool {
        self != OrthographyClass::NoTag
    }
}

impl fmt::Display for OrthographyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown tag {}", self.0)
    }
}

impl std::error::Error for UnknownTag {}

impl FromStr for OrthographyClass {
    type Err = UnknownTag;

    /// Case-sensitive: `"milclass"` is rejected.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "MILCLASS" => OrthographyClass::Milclass,
            "LOCC" => OrthographyClass::Locc,
            "LORUNIF" => OrthographyClass::Lorunif,
            "SL" => OrthographyClass::Sl,
            "NOL" => OrthographyClass::Nol,
            "CRES" => OrthographyClass::Cres,
            "BREMOD" => OrthographyClass::Bremod,
            "BERGDUC" => OrthographyClass::Bergduc,
            "LSI" => OrthographyClass::Lsi,
            "NO_TAG" => OrthographyClass::NoTag,
            other => return Err(UnknownTag(other.to_string())),
        })
    }
}

impl Serialize for OrthographyClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for OrthographyClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One corpus line with its orthography label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sample {
    pub text: String,
    pub tag: OrthographyClass,
}

impl Sample {
    /// Builds a sample, enforcing the one-line, non-blank text invariant.
    pub fn new(text: impl Into<String>, tag: OrthographyClass) -> Result<Self> {
        let text = text.into();
        check_text(&text).map_err(|reason| Error::InvalidSample { line: 0, reason })?;
        Ok(Sample { text, tag })
    }

    /// Serializes as one JSONL record: `{"text": "...", "tag": "..."}`.
    pub fn to_jsonl(&self) -> String {
        // serde_json string escaping never fails for a &str
        let text = serde_json::to_string(&self.text).expect("string serialization");
        format!("{{\"text\": {}, \"tag\": \"{}\"}}", text, self.tag)
    }
}

fn check_text(text: &str) -> std::result::Result<(), String> {
    if text.trim().is_empty() {
        return Err("text is empty".into());
    }
    if text.contains(['\n', '\r']) {
        return Err("text contains a line break".into());
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    text: String,
    tag: String,
}

/// Parses a single JSONL record. `line` is 1-based and only used in errors.
pub fn parse_jsonl_line(raw: &str, line: usize) -> Result<Sample> {
    let record: Record = serde_json::from_str(raw).map_err(|e| Error::MalformedLine {
        line,
        message: e.to_string(),
    })?;
    let tag = record.tag.parse::<OrthographyClass>().map_err(|e| Error::UnknownTag {
        tag: e.0,
        line,
    })?;
    check_text(&record.text).map_err(|reason| Error::InvalidSample { line, reason })?;
    Ok(Sample {
        text: record.text,
        tag,
    })
}

/// Reads samples from any buffered reader; blank lines are skipped.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<Sample>> {
    let mut samples = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        samples.push(parse_jsonl_line(&line, i + 1)?);
    }
    Ok(samples)
}

/// Loads a corpus file in file order.
pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Vec<Sample>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_jsonl(BufReader::new(file)).map_err(|e| match e {
        Error::Stream(source) => Error::io(path, source),
        other => other,
    })
}

pub fn write_jsonl_to<W: Write>(mut writer: W, samples: &[Sample]) -> std::io::Result<()> {
    for sample in samples {
        writeln!(writer, "{}", sample.to_jsonl())?;
    }
    writer.flush()
}

pub fn write_jsonl(path: impl AsRef<Path>, samples: &[Sample]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_jsonl_to(BufWriter::new(file), samples).map_err(|e| Error::io(path, e))
}

/// Per-class counts and shares of a sample collection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassDistribution {
    pub total: usize,
    /// One entry per taggable class, in corpus-table order, plus `NO_TAG`
    /// when any untagged samples are present.
    pub entries: Vec<ClassShare>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassShare {
    pub class: OrthographyClass,
    pub count: usize,
    /// Fraction of the total in `[0, 1]`; 0 for an empty collection.
    pub fraction: f64,
}

impl ClassDistribution {
    pub fn count(&self, class: OrthographyClass) -> usize {
        self.entries
            .iter()
            .find(|e| e.class == class)
            .map_or(0, |e| e.count)
    }

    pub fn fraction(&self, class: OrthographyClass) -> f64 {
        self.entries
            .iter()
            .find(|e| e.class == class)
            .map_or(0.0, |e| e.fraction)
    }

    pub fn percentage(&self, class: OrthographyClass) -> f64 {
        100.0 * self.fraction(class)
    }
}

impl fmt::Display for ClassDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>8} {:>8}", "class", "N", "%")?;
        for e in &self.entries {
            writeln!(
                f,
                "{:<10} {:>8} {:>8.2}",
                e.class.as_str(),
                e.count,
                100.0 * e.fraction
            )?;
        }
        write!(f, "{:<10} {:>8} {:>8.2}", "total", self.total, 100.0)
    }
}

pub fn class_distribution(samples: &[Sample]) -> ClassDistribution {
    let mut counts = [0usize; 10];
    for s in samples {
        counts[s.tag as usize] += 1;
    }
    let total = samples.len();
    let share = |class: OrthographyClass| {
        let count = counts[class as usize];
        ClassShare {
            class,
            count,
            fraction: if total == 0 {
                0.0
            } else {
                count as f64 / total as f64
            },
        }
    };
    let mut entries: Vec<ClassShare> = OrthographyClass::TAGGABLE.iter().map(|&c| share(c)).collect();
    if counts[OrthographyClass::NoTag as usize] > 0 {
        entries.push(share(OrthographyClass::NoTag));
    }
    ClassDistribution { total, entries }
}
