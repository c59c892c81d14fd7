//! Multinomial logistic regression with balanced class weights.
//!
//! Objective over `W` (K x D) and unregularized bias `b`:
//!
//! ```text
//! J(W, b) = sum_i w_{y_i} * CE(softmax(W x_i + b), y_i) + (l2 / 2) * ||W||^2
//! ```

use serde::{Deserialize, Serialize};

use super::lbfgs::{minimize_lbfgs, LbfgsParams, OptimTrace};
use super::weights::balanced_index_weights;
use super::{prepare_labels, LinearKind, LinearModel};
use crate::corpus::OrthographyClass;
use crate::error::Result;
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRegParams {
    pub max_iter: usize,
    /// Gradient tolerance, applied to the gradient divided by the total
    /// sample weight (equal to N under balanced weights).
    pub tol: f64,
    pub l2: f64,
    /// Use balanced class weights; off means every sample weighs 1.
    pub balanced: bool,
}

impl Default for LogRegParams {
    fn default() -> Self {
        LogRegParams {
            max_iter: 1000,
            tol: 1e-4,
            l2: 1.0,
            balanced: true,
        }
    }
}

/// The weighted, L2-regularized cross-entropy objective.
///
/// Parameters are packed as `[W row-major (K x D), b (K)]`.
pub struct LogRegObjective<'a> {
    x: &'a [SparseVector],
    y: Vec<usize>,
    sample_weight: Vec<f64>,
    n_classes: usize,
    dim: usize,
    l2: f64,
}

impl<'a> LogRegObjective<'a> {
    /// `y` holds class indices in `0..n_classes`.
    pub fn new(
        x: &'a [SparseVector],
        y: Vec<usize>,
        sample_weight: Vec<f64>,
        n_classes: usize,
        l2: f64,
    ) -> Self {
        let dim = x.first().map_or(0, SparseVector::dim);
        LogRegObjective {
            x,
            y,
            sample_weight,
            n_classes,
            dim,
            l2,
        }
    }

    /// Objective built with balanced class weights.
    pub fn balanced(x: &'a [SparseVector], y: Vec<usize>, n_classes: usize, l2: f64) -> Self {
        let cw = balanced_index_weights(&y, n_classes);
        let sw = y.iter().map(|&c| cw[c]).collect();
        LogRegObjective::new(x, y, sw, n_classes, l2)
    }

    pub fn n_params(&self) -> usize {
        self.n_classes * (self.dim + 1)
    }

    pub fn total_weight(&self) -> f64 {
        self.sample_weight.iter().sum()
    }

    pub fn value(&self, theta: &[f64]) -> f64 {
        let mut scratch = vec![0.0; theta.len()];
        self.value_and_gradient(theta, &mut scratch)
    }

    pub fn value_and_gradient(&self, theta: &[f64], grad: &mut [f64]) -> f64 {
        let (k, d) = (self.n_classes, self.dim);
        let (w, b) = theta.split_at(k * d);
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut loss = 0.0;
        let mut logits = vec![0.0; k];
        for ((x, &yi), &si) in self.x.iter().zip(&self.y).zip(&self.sample_weight) {
            for c in 0..k {
                logits[c] = x.dot_dense(&w[c * d..(c + 1) * d]) + b[c];
            }
            let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = logits.iter().map(|z| (z - max).exp()).sum();
            let lse = max + sum.ln();
            loss += si * (lse - logits[yi]);
            for c in 0..k {
                let p = (logits[c] - lse).exp();
                let r = si * (p - if c == yi { 1.0 } else { 0.0 });
                if r == 0.0 {
                    continue;
                }
                let row = &mut grad[c * d..(c + 1) * d];
                for (j, v) in x.iter() {
                    row[j] += r * v;
                }
                grad[k * d + c] += r;
            }
        }
        let mut reg = 0.0;
        for (g, &wi) in grad[..k * d].iter_mut().zip(w) {
            reg += wi * wi;
            *g += self.l2 * wi;
        }
        loss + 0.5 * self.l2 * reg
    }
}

pub fn train_logreg(
    x: &[SparseVector],
    y: &[OrthographyClass],
    params: &LogRegParams,
) -> Result<LinearModel> {
    train_logreg_traced(x, y, params).map(|(m, _)| m)
}

/// Trains from zero initialization and also returns the optimizer trace.
pub fn train_logreg_traced(
    x: &[SparseVector],
    y: &[OrthographyClass],
    params: &LogRegParams,
) -> Result<(LinearModel, OptimTrace)> {
    let (classes, y_idx, dim) = prepare_labels(x, y, 2)?;
    let k = classes.len();
    let objective = if params.balanced {
        LogRegObjective::balanced(x, y_idx, k, params.l2)
    } else {
        let n = y_idx.len();
        LogRegObjective::new(x, y_idx, vec![1.0; n], k, params.l2)
    };
    let mut theta = vec![0.0; objective.n_params()];
    let lbfgs = LbfgsParams {
        max_iter: params.max_iter,
        gradient_tol: params.tol * objective.total_weight(),
        ..Default::default()
    };
    let trace = minimize_lbfgs(&mut theta, lbfgs, |t, g| objective.value_and_gradient(t, g));
    if !trace.converged {
        log::warn!(
            "logistic regression stopped after {} iterations with max |gradient| {:.3e}",
            trace.iterations,
            trace.final_gradient_max
        );
    }
    let bias = theta.split_off(k * dim);
    Ok((
        LinearModel {
            kind: LinearKind::Logreg,
            classes,
            dim,
            weights: theta,
            bias,
        },
        trace,
    ))
}
