//! Metrics, confusion analysis, model selection and bulk classification.

mod bulk;
mod confusion;
mod metrics;

use rayon::prelude::*;
use serde::Serialize;

use crate::classifiers::TrainedModel;
use crate::corpus::{OrthographyClass, Sample};
use crate::error::{Error, Result};
use crate::features::NgramConfig;

pub use bulk::{bulk_classify, BulkRecord, BulkReport, LabelShare};
pub use confusion::{confusion_matrix, confusion_matrix_with_classes, ConfusionMatrix, ErrorPair};
pub use metrics::{accuracy_range, metrics, metrics_over, AccuracyRange, ClassAccuracy, MetricsReport, RangeReport};

/// Predicted labels for every sample, in input order.
pub fn predict_samples(model: &TrainedModel, samples: &[Sample]) -> Vec<OrthographyClass> {
    samples
        .par_iter()
        .map(|s| model.classify(&s.text).label)
        .collect()
}

/// Confusion matrix over the gold labels and the model's classes, plus
/// metrics whose class average covers the model's classes only.
pub fn evaluate(model: &TrainedModel, samples: &[Sample]) -> Result<(ConfusionMatrix, MetricsReport)> {
    let gold: Vec<OrthographyClass> = samples.iter().map(|s| s.tag).collect();
    let pred = predict_samples(model, samples);
    let cm = confusion_matrix_with_classes(&gold, &pred, model.classes())?;
    let report = metrics_over(&cm, model.classes());
    Ok((cm, report))
}

/// Id of the candidate with the best validation accuracy; the earliest
/// candidate wins ties.
pub fn select_best<I: Clone>(
    candidates: &[(I, TrainedModel)],
    valid: &[Sample],
) -> Result<(I, f64)> {
    if candidates.is_empty() {
        return Err(Error::InvalidInput("no candidate models".into()));
    }
    if valid.is_empty() {
        return Err(Error::InvalidInput("empty validation set".into()));
    }
    let mut best: Option<(usize, f64)> = None;
    for (i, (_, model)) in candidates.iter().enumerate() {
        let pred = predict_samples(model, valid);
        let correct = pred.iter().zip(valid).filter(|(p, s)| **p == s.tag).count();
        let acc = correct as f64 / valid.len() as f64;
        if best.is_none_or(|(_, b)| acc > b) {
            best = Some((i, acc));
        }
    }
    let (i, acc) = best.expect("non-empty candidates");
    Ok((candidates[i].0.clone(), acc))
}

/// Machine-readable record of one evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct EvaluationDocument {
    pub model_id: String,
    pub model_kind: String,
    pub features: Vec<NgramConfig>,
    pub metrics: MetricsReport,
    pub confusion: ConfusionMatrix,
    pub error_pairs: Vec<ErrorPair>,
}

impl EvaluationDocument {
    pub fn new(model_id: impl Into<String>, model: &TrainedModel, cm: ConfusionMatrix, metrics: MetricsReport) -> Self {
        EvaluationDocument {
            model_id: model_id.into(),
            model_kind: model.classifier.kind_name().to_string(),
            features: model.features.configs(),
            error_pairs: cm.error_pairs(),
            metrics,
            confusion: cm,
        }
    }
}
