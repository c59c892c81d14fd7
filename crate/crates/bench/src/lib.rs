//! Shared fixtures for the benchmarks.

use grafia_core::synthetic::synthetic_corpus;
use grafia_core::{fit_union, Analyzer, FeatureUnion, NgramConfig, OrthographyClass, Sample, SparseVector};

pub const LINES_PER_CLASS: usize = 400;
pub const SEED: u64 = 11;

pub fn corpus() -> Vec<Sample> {
    synthetic_corpus(LINES_PER_CLASS, SEED)
}

pub fn texts(samples: &[Sample]) -> Vec<&str> {
    samples.iter().map(|s| s.text.as_str()).collect()
}

pub fn config(analyzer: Analyzer) -> NgramConfig {
    NgramConfig::new(analyzer)
}

pub fn combined() -> Vec<NgramConfig> {
    vec![config(Analyzer::Byte), config(Analyzer::Char), config(Analyzer::Word)]
}

/// Fitted features plus the transformed training matrix.
pub struct Matrix {
    pub union: FeatureUnion,
    pub x: Vec<SparseVector>,
    pub y: Vec<OrthographyClass>,
}

pub fn matrix(samples: &[Sample], configs: &[NgramConfig]) -> Matrix {
    let docs = texts(samples);
    let union = fit_union(&docs, configs).expect("fit");
    let x = docs.iter().map(|t| union.transform(t)).collect();
    let y = samples.iter().map(|s| s.tag).collect();
    Matrix { union, x, y }
}
