use std::fmt;

use serde::Serialize;

use super::ConfusionMatrix;
use crate::corpus::OrthographyClass;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassAccuracy {
    pub class: OrthographyClass,
    /// Number of gold samples of this class.
    pub support: u64,
    pub correct: u64,
    /// Recall: correct / support; `None` without gold samples.
    pub accuracy: Option<f64>,
    /// Extra column, not part of the averaged metrics: correct / predicted.
    pub precision: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub overall_accuracy: f64,
    /// Mean per-class accuracy over the averaged classes with gold samples.
    pub avg_class_accuracy: f64,
    pub per_class: Vec<ClassAccuracy>,
    /// Classes that entered the class average.
    pub averaged_classes: Vec<OrthographyClass>,
    pub n_correct: u64,
    pub n_total: u64,
}

impl MetricsReport {
    pub fn class_accuracy(&self, class: OrthographyClass) -> Option<f64> {
        self.per_class
            .iter()
            .find(|c| c.class == class)
            .and_then(|c| c.accuracy)
    }
}

/// Metrics with the class average over every class that has gold samples.
pub fn metrics(cm: &ConfusionMatrix) -> MetricsReport {
    metrics_over(cm, &cm.classes)
}

/// Like [`metrics`], but the class average is restricted to `classes`
/// (typically the classes a model was trained on). Overall accuracy
/// always counts every sample.
pub fn metrics_over(cm: &ConfusionMatrix, classes: &[OrthographyClass]) -> MetricsReport {
    let n_total = cm.total();
    let n_correct = cm.trace();
    let per_class: Vec<ClassAccuracy> = cm
        .classes
        .iter()
        .enumerate()
        .map(|(i, &class)| {
            let support = cm.row_sum(i);
            let predicted = cm.col_sum(i);
            let correct = cm.counts[i][i];
            ClassAccuracy {
                class,
                support,
                correct,
                accuracy: (support > 0).then(|| correct as f64 / support as f64),
                precision: (predicted > 0).then(|| correct as f64 / predicted as f64),
            }
        })
        .collect();
    let averaged: Vec<&ClassAccuracy> = per_class
        .iter()
        .filter(|c| c.support > 0 && classes.contains(&c.class))
        .collect();
    let avg_class_accuracy = if averaged.is_empty() {
        0.0
    } else {
        averaged.iter().map(|c| c.accuracy.unwrap()).sum::<f64>() / averaged.len() as f64
    };
    MetricsReport {
        overall_accuracy: if n_total == 0 {
            0.0
        } else {
            n_correct as f64 / n_total as f64
        },
        avg_class_accuracy,
        averaged_classes: averaged.iter().map(|c| c.class).collect(),
        per_class,
        n_correct,
        n_total,
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>7} {:>9} {:>10}", "class", "support", "accuracy", "precision")?;
        let pct = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{:.2}", 100.0 * v));
        for c in &self.per_class {
            writeln!(
                f,
                "{:<10} {:>7} {:>9} {:>10}",
                c.class.as_str(),
                c.support,
                pct(c.accuracy),
                pct(c.precision)
            )?;
        }
        writeln!(
            f,
            "overall accuracy:       {:.2} ({}/{})",
            100.0 * self.overall_accuracy,
            self.n_correct,
            self.n_total
        )?;
        write!(
            f,
            "average class accuracy: {:.2} (over {} classes)",
            100.0 * self.avg_class_accuracy,
            self.averaged_classes.len()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyRange {
    /// `None` for the overall-accuracy row.
    pub class: Option<OrthographyClass>,
    pub best: f64,
    pub worst: f64,
    pub range: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeReport {
    pub per_class: Vec<AccuracyRange>,
    pub overall: AccuracyRange,
}

/// Best, worst and spread of each class accuracy across models. Classes a
/// report has no gold samples for are skipped for that report.
pub fn accuracy_range(reports: &[MetricsReport]) -> Option<RangeReport> {
    if reports.is_empty() {
        return None;
    }
    let span = |class, values: &mut dyn Iterator<Item = f64>| {
        let (mut best, mut worst) = (f64::NEG_INFINITY, f64::INFINITY);
        for v in values {
            best = best.max(v);
            worst = worst.min(v);
        }
        (best.is_finite()).then_some(AccuracyRange {
            class,
            best,
            worst,
            range: best - worst,
        })
    };
    let mut classes: Vec<OrthographyClass> = reports
        .iter()
        .flat_map(|r| r.per_class.iter().map(|c| c.class))
        .collect();
    classes.sort();
    classes.dedup();
    let per_class = classes
        .into_iter()
        .filter_map(|class| {
            span(
                Some(class),
                &mut reports.iter().filter_map(|r| r.class_accuracy(class)),
            )
        })
        .collect();
    let overall = span(None, &mut reports.iter().map(|r| r.overall_accuracy))?;
    Some(RangeReport { per_class, overall })
}
