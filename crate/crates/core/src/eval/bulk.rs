use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::classifiers::TrainedModel;
use crate::corpus::OrthographyClass;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BulkRecord {
    pub text: String,
    /// `None` means UNKNOWN (below the confidence threshold).
    pub label: Option<OrthographyClass>,
    pub confidence: f64,
    /// Set for blank lines and for predictions below the threshold.
    pub low_confidence: bool,
}

impl BulkRecord {
    pub fn label_str(&self) -> &'static str {
        self.label.map_or("UNKNOWN", OrthographyClass::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelShare {
    pub label: Option<OrthographyClass>,
    pub count: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BulkReport {
    pub records: Vec<BulkRecord>,
    /// Predicted labels in class order, UNKNOWN last.
    pub distribution: Vec<LabelShare>,
    /// 0 for empty input.
    pub mean_confidence: f64,
}

impl BulkReport {
    pub fn fraction(&self, label: Option<OrthographyClass>) -> f64 {
        self.distribution
            .iter()
            .find(|s| s.label == label)
            .map_or(0.0, |s| s.fraction)
    }
}

/// Classifies every line; order of `records` follows `lines`.
pub fn bulk_classify<S: AsRef<str> + Sync>(
    model: &TrainedModel,
    lines: &[S],
    min_confidence: Option<f64>,
) -> BulkReport {
    let records: Vec<BulkRecord> = lines
        .par_iter()
        .map(|line| {
            let text = line.as_ref();
            let p = model.classify(text);
            let below = min_confidence.is_some_and(|t| p.confidence < t);
            BulkRecord {
                text: text.to_string(),
                label: (!below).then_some(p.label),
                confidence: p.confidence,
                low_confidence: below || text.trim().is_empty(),
            }
        })
        .collect();

    // None sorts first in Option's Ord; UNKNOWN goes last instead
    let mut counts: BTreeMap<(bool, Option<OrthographyClass>), usize> = BTreeMap::new();
    for r in &records {
        *counts.entry((r.label.is_none(), r.label)).or_default() += 1;
    }
    let n = records.len();
    let distribution = counts
        .into_iter()
        .map(|((_, label), count)| LabelShare {
            label,
            count,
            fraction: count as f64 / n as f64,
        })
        .collect();
    let mean_confidence = if n == 0 {
        0.0
    } else {
        records.iter().map(|r| r.confidence).sum::<f64>() / n as f64
    };
    BulkReport {
        records,
        distribution,
        mean_confidence,
    }
}
