//! Featurize-then-train convenience over the individual trainers.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    train_logreg, train_nb, train_rf, train_svm, Classifier, LogRegParams, NbParams, RfParams,
    SvmParams, TrainedModel,
};
use crate::corpus::{OrthographyClass, Sample};
use crate::error::{Error, Result};
use crate::features::{fit_union, NgramConfig, SparseVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Logreg,
    Svm,
    Nb,
    Rf,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [Self::Logreg, Self::Svm, Self::Nb, Self::Rf];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Logreg => "logreg",
            Self::Svm => "svm",
            Self::Nb => "nb",
            Self::Rf => "rf",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown model kind {s:?} (expected logreg, svm, nb or rf)")))
    }
}

/// Hyperparameters for every model kind; only the selected kind's
/// block is used.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub logreg: LogRegParams,
    pub svm: SvmParams,
    pub nb: NbParams,
    pub rf: RfParams,
}

pub fn train_classifier(
    kind: ModelKind,
    x: &[SparseVector],
    y: &[OrthographyClass],
    params: &ModelParams,
) -> Result<Classifier> {
    Ok(match kind {
        ModelKind::Logreg => Classifier::Logreg(train_logreg(x, y, &params.logreg)?),
        ModelKind::Svm => Classifier::Svm(train_svm(x, y, &params.svm)?),
        ModelKind::Nb => Classifier::Nb(train_nb(x, y, &params.nb)?),
        ModelKind::Rf => Classifier::Rf(train_rf(x, y, &params.rf)?),
    })
}

/// Fits the feature union on the training texts and trains `kind` on the
/// resulting vectors.
pub fn train_model(
    kind: ModelKind,
    features: &[NgramConfig],
    train: &[Sample],
    params: &ModelParams,
) -> Result<TrainedModel> {
    let texts: Vec<&str> = train.iter().map(|s| s.text.as_str()).collect();
    let union = fit_union(&texts, features)?;
    let x: Vec<SparseVector> = texts.par_iter().map(|t| union.transform(t)).collect();
    let y: Vec<OrthographyClass> = train.iter().map(|s| s.tag).collect();
    let classifier = train_classifier(kind, &x, &y, params)?;
    TrainedModel::new(union, classifier)
}
