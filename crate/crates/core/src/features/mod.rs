//! TF-IDF weighted n-gram features.
//!
//! Three analyzers are supported: raw UTF-8 bytes, Unicode scalar values
//! and whitespace-separated words. A [`Vectorizer`] is fitted on a corpus and
//! maps text to an L2-normalized [`SparseVector`]; a [`FeatureUnion`] lays
//! several vectorizers side by side.

mod sparse;
mod tokenize;
mod union;
mod vectorizer;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use sparse::SparseVector;
pub use tokenize::{for_each_ngram, tokenize};
pub use union::{fit_union, transform_union, FeatureUnion};
pub use vectorizer::{fit_vectorizer, idf_weight, transform, Vectorizer};

/// An n-gram key: raw bytes, since byte n-grams need not be valid UTF-8.
pub type Ngram = Vec<u8>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Analyzer {
    Byte,
    Char,
    Word,
}

impl Analyzer {
    pub fn as_str(self) -> &'static str {
        match self {
            Analyzer::Byte => "byte",
            Analyzer::Char => "char",
            Analyzer::Word => "word",
        }
    }
}

impl fmt::Display for Analyzer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Analyzer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "byte" => Ok(Analyzer::Byte),
            "char" => Ok(Analyzer::Char),
            "word" => Ok(Analyzer::Word),
            other => Err(Error::Features(format!(
                "unknown analyzer {other:?} (expected byte, char or word)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NgramConfig {
    pub analyzer: Analyzer,
    pub n_min: usize,
    pub n_max: usize,
    pub max_features: usize,
    pub lowercase: bool,
}

impl NgramConfig {
    /// 1- to 4-grams, 10,000 features, lowercased.
    pub fn new(analyzer: Analyzer) -> Self {
        NgramConfig {
            analyzer,
            n_min: 1,
            n_max: 4,
            max_features: 10_000,
            lowercase: true,
        }
    }

    pub fn with_range(mut self, n_min: usize, n_max: usize) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self
    }

    pub fn with_max_features(mut self, max_features: usize) -> Self {
        self.max_features = max_features;
        self
    }

    pub fn with_lowercase(mut self, lowercase: bool) -> Self {
        self.lowercase = lowercase;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::Features(format!(
                "n-gram range must satisfy 1 <= n_min <= n_max, got {}..={}",
                self.n_min, self.n_max
            )));
        }
        if self.max_features == 0 {
            return Err(Error::Features("max_features must be at least 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for NgramConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}-{} (max {})",
            self.analyzer, self.n_min, self.n_max, self.max_features
        )
    }
}
