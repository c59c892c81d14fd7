//! Multinomial Naive Bayes over non-negative feature values.

use serde::{Deserialize, Serialize};

use super::prepare_labels;
use super::weights::balanced_index_weights;
use crate::corpus::OrthographyClass;
use crate::error::{Error, Result};
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    /// Additive (Laplace/Lidstone) smoothing.
    pub alpha: f64,
    /// Weight samples by balanced class weights; off by default.
    pub weighted: bool,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams {
            alpha: 1.0,
            weighted: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbModel {
    pub classes: Vec<OrthographyClass>,
    pub dim: usize,
    pub alpha: f64,
    pub log_prior: Vec<f64>,
    /// Row-major `classes.len() x dim` table of `log theta_{c,t}`.
    pub log_likelihood: Vec<f64>,
}

impl NbModel {
    pub fn log_theta(&self, class: usize) -> &[f64] {
        &self.log_likelihood[class * self.dim..(class + 1) * self.dim]
    }

    /// `log P(c) + sum_t x_t log theta_{c,t}` for every class.
    pub fn joint_log_likelihood(&self, x: &SparseVector) -> Vec<f64> {
        (0..self.classes.len())
            .map(|c| self.log_prior[c] + x.dot_dense(self.log_theta(c)))
            .collect()
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let k = self.classes.len();
        if self.log_prior.len() != k || self.log_likelihood.len() != k * self.dim {
            return Err(Error::ModelCorrupt("naive Bayes table shapes are inconsistent".into()));
        }
        if self
            .log_prior
            .iter()
            .chain(&self.log_likelihood)
            .any(|v| !v.is_finite())
        {
            return Err(Error::ModelCorrupt("non-finite naive Bayes parameters".into()));
        }
        Ok(())
    }
}

pub fn train_nb(x: &[SparseVector], y: &[OrthographyClass], params: &NbParams) -> Result<NbModel> {
    let (classes, y_idx, dim) = prepare_labels(x, y, 1)?;
    if params.alpha <= 0.0 || !params.alpha.is_finite() {
        return Err(Error::Training(format!(
            "smoothing alpha must be positive, got {}",
            params.alpha
        )));
    }
    if let Some(pos) = x
        .iter()
        .position(|v| v.values().iter().any(|&f| f < 0.0))
    {
        return Err(Error::Training(format!(
            "naive Bayes requires non-negative features; sample {pos} has a negative value"
        )));
    }
    let k = classes.len();
    let sample_weight: Vec<f64> = if params.weighted {
        let cw = balanced_index_weights(&y_idx, k);
        y_idx.iter().map(|&c| cw[c]).collect()
    } else {
        vec![1.0; y_idx.len()]
    };

    let mut feature_sum = vec![0.0; k * dim];
    let mut class_weight = vec![0.0; k];
    for ((v, &c), &sw) in x.iter().zip(&y_idx).zip(&sample_weight) {
        class_weight[c] += sw;
        let row = &mut feature_sum[c * dim..(c + 1) * dim];
        for (j, f) in v.iter() {
            row[j] += sw * f;
        }
    }
    let total_weight: f64 = class_weight.iter().sum();
    let log_prior = class_weight
        .iter()
        .map(|w| (w / total_weight).ln())
        .collect();

    let mut log_likelihood = vec![0.0; k * dim];
    for c in 0..k {
        let row = &feature_sum[c * dim..(c + 1) * dim];
        let denom = (row.iter().sum::<f64>() + params.alpha * dim as f64).ln();
        for (out, &count) in log_likelihood[c * dim..(c + 1) * dim].iter_mut().zip(row) {
            *out = (count + params.alpha).ln() - denom;
        }
    }
    Ok(NbModel {
        classes,
        dim,
        alpha: params.alpha,
        log_prior,
        log_likelihood,
    })
}
