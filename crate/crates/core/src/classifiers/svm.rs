//! One-vs-rest linear SVM trained by dual coordinate descent.
//!
//! For each class `k` the primal problem is
//!
//! ```text
//! min (1/2) ||w_k||^2 + sum_i C_i * loss(1 - s_i (w_k . x_i + b_k))
//! ```
//!
//! with `s_i = +1` for class `k` and `-1` otherwise, `C_i = C * w_{y_i}`
//! (balanced class weights) and `loss` the squared hinge by default. The
//! bias is learned as the weight of a constant feature equal to 1.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::weights::balanced_index_weights;
use super::{prepare_labels, LinearKind, LinearModel};
use crate::corpus::OrthographyClass;
use crate::error::Result;
use crate::features::SparseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SvmLoss {
    SquaredHinge,
    Hinge,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    /// Cap on passes over the data per class.
    pub max_iter: usize,
    pub c: f64,
    /// Stop when the projected-gradient spread of a pass is at most `tol`.
    pub tol: f64,
    pub loss: SvmLoss,
    pub balanced: bool,
    /// Seeds the coordinate visiting order.
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            max_iter: 4000,
            c: 1.0,
            tol: 1e-4,
            loss: SvmLoss::SquaredHinge,
            balanced: true,
            seed: 0,
        }
    }
}

pub fn train_svm(
    x: &[SparseVector],
    y: &[OrthographyClass],
    params: &SvmParams,
) -> Result<LinearModel> {
    let (classes, y_idx, dim) = prepare_labels(x, y, 2)?;
    let k = classes.len();
    let cost: Vec<f64> = if params.balanced {
        let cw = balanced_index_weights(&y_idx, k);
        y_idx.iter().map(|&c| params.c * cw[c]).collect()
    } else {
        vec![params.c; y_idx.len()]
    };
    let sq_norms: Vec<f64> = x.iter().map(|v| v.squared_norm() + 1.0).collect();

    let solutions: Vec<(Vec<f64>, f64)> = (0..k)
        .into_par_iter()
        .map(|class| {
            let signs: Vec<f64> = y_idx
                .iter()
                .map(|&c| if c == class { 1.0 } else { -1.0 })
                .collect();
            let (w, b, passes, converged) = solve_binary(x, &signs, &cost, &sq_norms, dim, params, class);
            if !converged {
                log::warn!(
                    "svm class {} reached max_iter={} without meeting tol",
                    classes[class],
                    passes
                );
            }
            (w, b)
        })
        .collect();

    let mut model = LinearModel::zeros(LinearKind::Svm, classes, dim);
    for (class, (w, b)) in solutions.into_iter().enumerate() {
        model.weights[class * dim..(class + 1) * dim].copy_from_slice(&w);
        model.bias[class] = b;
    }
    Ok(model)
}

/// Dual coordinate descent for one binary problem (with shrinking).
/// Returns `(w, b, passes, converged)`.
fn solve_binary(
    x: &[SparseVector],
    signs: &[f64],
    cost: &[f64],
    sq_norms: &[f64],
    dim: usize,
    params: &SvmParams,
    class: usize,
) -> (Vec<f64>, f64, usize, bool) {
    let n = x.len();
    let (diag, upper): (Vec<f64>, Vec<f64>) = match params.loss {
        SvmLoss::SquaredHinge => cost.iter().map(|&c| (0.5 / c, f64::INFINITY)).unzip(),
        SvmLoss::Hinge => cost.iter().map(|&c| (0.0, c)).unzip(),
    };
    let qd: Vec<f64> = sq_norms.iter().zip(&diag).map(|(q, d)| q + d).collect();

    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut alpha = vec![0.0; n];
    let mut index: Vec<usize> = (0..n).collect();
    let mut active = n;
    let mut pg_max_old = f64::INFINITY;
    let mut pg_min_old = f64::NEG_INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(class as u64);

    let mut pass = 0;
    let mut converged = false;
    while pass < params.max_iter {
        let mut pg_max_new = f64::NEG_INFINITY;
        let mut pg_min_new = f64::INFINITY;
        index[..active].shuffle(&mut rng);

        let mut s = 0;
        while s < active {
            let i = index[s];
            let yi = signs[i];
            let g = yi * (x[i].dot_dense(&w) + b) - 1.0 + alpha[i] * diag[i];
            let mut pg = 0.0;
            if alpha[i] == 0.0 {
                if g > pg_max_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                } else if g < 0.0 {
                    pg = g;
                }
            } else if alpha[i] >= upper[i] {
                if g < pg_min_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                } else if g > 0.0 {
                    pg = g;
                }
            } else {
                pg = g;
            }
            pg_max_new = pg_max_new.max(pg);
            pg_min_new = pg_min_new.min(pg);

            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (alpha[i] - g / qd[i]).clamp(0.0, upper[i]);
                let delta = (alpha[i] - old) * yi;
                for (j, v) in x[i].iter() {
                    w[j] += delta * v;
                }
                b += delta;
            }
            s += 1;
        }
        pass += 1;

        if pg_max_new - pg_min_new <= params.tol {
            if active == n {
                converged = true;
                break;
            }
            // re-check the full problem before declaring convergence
            active = n;
            pg_max_old = f64::INFINITY;
            pg_min_old = f64::NEG_INFINITY;
            continue;
        }
        pg_max_old = if pg_max_new <= 0.0 { f64::INFINITY } else { pg_max_new };
        pg_min_old = if pg_min_new >= 0.0 { f64::NEG_INFINITY } else { pg_min_new };
    }
    (w, b, pass, converged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::Classifier;
    use OrthographyClass::*;

    #[test]
    fn separable_line_zero_hinge() {
        let x: Vec<SparseVector> = [-2.0, -1.0, 1.0, 2.0]
            .iter()
            .map(|&v| SparseVector::from_dense(&[v]).unwrap())
            .collect();
        let y = vec![Locc, Locc, Sl, Sl];
        let model = train_svm(&x, &y, &SvmParams::default()).unwrap();
        let clf = Classifier::Svm(model.clone());
        for (xi, yi) in x.iter().zip(&y) {
            assert_eq!(clf.predict(xi).unwrap().label, *yi);
        }
        // margins of the positive-class machine
        let sl = model.classes.iter().position(|&c| c == Sl).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            let s = if *yi == Sl { 1.0 } else { -1.0 };
            let margin = s * (xi.dot_dense(model.row(sl)) + model.bias[sl]);
            assert!(margin > 0.0);
        }
    }

    #[test]
    fn hinge_variant_trains() {
        let x: Vec<SparseVector> = [-1.0, 1.0]
            .iter()
            .map(|&v| SparseVector::from_dense(&[v, 0.5]).unwrap())
            .collect();
        let params = SvmParams {
            loss: SvmLoss::Hinge,
            ..Default::default()
        };
        let model = train_svm(&x, &[Locc, Sl], &params).unwrap();
        let clf = Classifier::Svm(model);
        assert_eq!(clf.predict(&x[0]).unwrap().label, Locc);
        assert_eq!(clf.predict(&x[1]).unwrap().label, Sl);
    }

    #[test]
    fn single_class_rejected() {
        let x = vec![SparseVector::zeros(1); 2];
        assert!(train_svm(&x, &[Sl, Sl], &SvmParams::default()).is_err());
    }
}
