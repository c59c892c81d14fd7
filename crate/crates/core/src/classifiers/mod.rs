//! The four traditional classifiers and the trained-model container.
//!
//! Class lists are always the sorted set of training labels; every score
//! vector in a [`Prediction`] is aligned with that list.

mod forest;
mod lbfgs;
mod logreg;
mod nb;
mod persist;
mod pipeline;
mod svm;
mod weights;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::OrthographyClass;
use crate::error::{Error, Result};
use crate::features::{FeatureUnion, SparseVector};

pub use forest::{train_rf, ForestModel, RfParams, Tree, TreeNode};
pub use lbfgs::{minimize_lbfgs, LbfgsParams, OptimTrace};
pub use logreg::{train_logreg, train_logreg_traced, LogRegObjective, LogRegParams};
pub use nb::{train_nb, NbModel, NbParams};
pub use persist::{load_model, read_model, save_model, write_model, MODEL_FORMAT_VERSION};
pub use pipeline::{train_classifier, train_model, ModelKind, ModelParams};
pub use svm::{train_svm, SvmLoss, SvmParams};
pub use weights::{balanced_class_weights, ClassWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinearKind {
    Logreg,
    Svm,
}

/// Linear scores `W x + b`, one row of `W` per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub kind: LinearKind,
    pub classes: Vec<OrthographyClass>,
    pub dim: usize,
    /// Row-major `classes.len() x dim`.
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl LinearModel {
    pub fn zeros(kind: LinearKind, classes: Vec<OrthographyClass>, dim: usize) -> Self {
        let k = classes.len();
        LinearModel {
            kind,
            classes,
            dim,
            weights: vec![0.0; k * dim],
            bias: vec![0.0; k],
        }
    }

    pub fn row(&self, class: usize) -> &[f64] {
        &self.weights[class * self.dim..(class + 1) * self.dim]
    }

    /// Raw decision values `w_k . x + b_k`.
    pub fn decision(&self, x: &SparseVector) -> Vec<f64> {
        (0..self.classes.len())
            .map(|k| x.dot_dense(self.row(k)) + self.bias[k])
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let k = self.classes.len();
        if self.weights.len() != k * self.dim || self.bias.len() != k {
            return Err(Error::ModelCorrupt(format!(
                "linear model parameter shapes do not match {k} classes x {} features",
                self.dim
            )));
        }
        if self.weights.iter().chain(&self.bias).any(|w| !w.is_finite()) {
            return Err(Error::ModelCorrupt("non-finite linear parameters".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classifier {
    Logreg(LinearModel),
    Svm(LinearModel),
    Nb(NbModel),
    Rf(ForestModel),
}

impl Classifier {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Classifier::Logreg(_) => "logreg",
            Classifier::Svm(_) => "svm",
            Classifier::Nb(_) => "nb",
            Classifier::Rf(_) => "rf",
        }
    }

    pub fn classes(&self) -> &[OrthographyClass] {
        match self {
            Classifier::Logreg(m) | Classifier::Svm(m) => &m.classes,
            Classifier::Nb(m) => &m.classes,
            Classifier::Rf(m) => &m.classes,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Classifier::Logreg(m) | Classifier::Svm(m) => m.dim,
            Classifier::Nb(m) => m.dim,
            Classifier::Rf(m) => m.dim,
        }
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Prediction> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let classes = self.classes();
        let (scores, probabilities) = match self {
            Classifier::Logreg(m) => {
                let p = softmax(&m.decision(x));
                (p.clone(), p)
            }
            Classifier::Svm(m) => {
                let d = m.decision(x);
                let p = softmax(&d);
                (d, p)
            }
            Classifier::Nb(m) => {
                let j = m.joint_log_likelihood(x);
                let p = softmax(&j);
                (j, p)
            }
            Classifier::Rf(m) => {
                let p = m.predict_proba(x);
                (p.clone(), p)
            }
        };
        let best = argmax(&scores);
        Ok(Prediction {
            label: classes[best],
            confidence: probabilities[best],
            scores,
        })
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            Classifier::Logreg(m) | Classifier::Svm(m) => m.validate(),
            Classifier::Nb(m) => m.validate(),
            Classifier::Rf(m) => m.validate(),
        }
    }
}

/// Predicted label with per-class scores.
///
/// `scores` are probabilities for logreg and rf, raw decision values for
/// svm and joint log-likelihoods for nb. `confidence` is the largest
/// softmax-normalized score; for svm it is not a calibrated probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: OrthographyClass,
    pub scores: Vec<f64>,
    pub confidence: f64,
}

/// A classifier bundled with the feature space it was trained on.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub features: FeatureUnion,
    pub classifier: Classifier,
}

impl TrainedModel {
    pub fn new(features: FeatureUnion, classifier: Classifier) -> Result<Self> {
        if features.total_dim() != classifier.dim() {
            return Err(Error::DimensionMismatch {
                expected: classifier.dim(),
                found: features.total_dim(),
            });
        }
        Ok(TrainedModel {
            features,
            classifier,
        })
    }

    pub fn classes(&self) -> &[OrthographyClass] {
        self.classifier.classes()
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Prediction> {
        self.classifier.predict(x)
    }

    /// Vectorizes `text` and predicts.
    pub fn classify(&self, text: &str) -> Prediction {
        let x = self.features.transform(text);
        self.classifier
            .predict(&x)
            .expect("feature space and classifier dimensions agree")
    }
}

pub fn predict(model: &TrainedModel, x: &SparseVector) -> Result<Prediction> {
    model.predict(x)
}

/// Index of the first maximal entry.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Shared input validation: returns the sorted class list and the class
/// index of every sample.
pub(crate) fn prepare_labels(
    x: &[SparseVector],
    y: &[OrthographyClass],
    min_classes: usize,
) -> Result<(Vec<OrthographyClass>, Vec<usize>, usize)> {
    if x.is_empty() {
        return Err(Error::Training("no training samples".into()));
    }
    if x.len() != y.len() {
        return Err(Error::Training(format!(
            "{} feature vectors but {} labels",
            x.len(),
            y.len()
        )));
    }
    if y.contains(&OrthographyClass::NoTag) {
        return Err(Error::Training("NO_TAG is not a training label".into()));
    }
    let dim = x[0].dim();
    if let Some(bad) = x.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    if x.iter().any(|v| v.values().iter().any(|f| !f.is_finite())) {
        return Err(Error::Training("non-finite feature value".into()));
    }
    let classes: Vec<OrthographyClass> = y.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if classes.len() < min_classes {
        return Err(Error::Training(format!(
            "need at least {min_classes} classes, training data has {}",
            classes.len()
        )));
    }
    let index: Vec<usize> = y
        .iter()
        .map(|c| classes.binary_search(c).expect("class present"))
        .collect();
    Ok((classes, index, dim))
}
