use std::collections::BTreeMap;

use crate::corpus::OrthographyClass;
use crate::error::{Error, Result};

/// Balanced class weights `w_c = N / (K * N_c)` over the classes present.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassWeights {
    weights: BTreeMap<OrthographyClass, f64>,
}

impl ClassWeights {
    pub fn get(&self, class: OrthographyClass) -> Option<f64> {
        self.weights.get(&class).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (OrthographyClass, f64)> + '_ {
        self.weights.iter().map(|(&c, &w)| (c, w))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weights aligned with a sorted class list.
    pub fn for_classes(&self, classes: &[OrthographyClass]) -> Vec<f64> {
        classes.iter().map(|c| self.weights[c]).collect()
    }
}

pub fn balanced_class_weights(labels: &[OrthographyClass]) -> Result<ClassWeights> {
    if labels.is_empty() {
        return Err(Error::Training("cannot weight an empty label list".into()));
    }
    let mut counts: BTreeMap<OrthographyClass, usize> = BTreeMap::new();
    for &l in labels {
        *counts.entry(l).or_default() += 1;
    }
    let n = labels.len() as f64;
    let k = counts.len() as f64;
    let weights = counts
        .into_iter()
        .map(|(c, nc)| (c, n / (k * nc as f64)))
        .collect();
    Ok(ClassWeights { weights })
}

/// Per-class weights for integer class indices `0..k`.
pub(crate) fn balanced_index_weights(y: &[usize], k: usize) -> Vec<f64> {
    let mut counts = vec![0usize; k];
    for &c in y {
        counts[c] += 1;
    }
    let present = counts.iter().filter(|&&c| c > 0).count() as f64;
    let n = y.len() as f64;
    counts
        .iter()
        .map(|&c| if c == 0 { 0.0 } else { n / (present * c as f64) })
        .collect()
}
