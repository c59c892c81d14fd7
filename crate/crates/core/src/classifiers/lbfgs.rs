//! Limited-memory BFGS with a backtracking Armijo line search.
//!
//! Every accepted step strictly decreases the objective, so the recorded
//! objective trace is non-increasing.

use std::collections::VecDeque;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsParams {
    /// Number of curvature pairs kept.
    pub memory: usize,
    pub max_iter: usize,
    /// Stop once the largest absolute gradient entry is at most this.
    pub gradient_tol: f64,
}

impl Default for LbfgsParams {
    fn default() -> Self {
        LbfgsParams {
            memory: 10,
            max_iter: 1000,
            gradient_tol: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OptimTrace {
    pub iterations: usize,
    pub converged: bool,
    /// Objective at the start and after every accepted step.
    pub objective: Vec<f64>,
    pub final_gradient_max: f64,
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 50;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Minimizes `f` starting from `x` (updated in place).
///
/// `f(x, grad)` returns the objective and writes the gradient.
pub fn minimize_lbfgs<F>(x: &mut [f64], params: LbfgsParams, mut f: F) -> OptimTrace
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x.len();
    let mut grad = vec![0.0; n];
    let mut value = f(x, &mut grad);
    let mut trace = OptimTrace {
        objective: vec![value],
        ..Default::default()
    };
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(params.memory);
    let mut direction = vec![0.0; n];
    let mut alpha_buf = vec![0.0; params.memory];
    let mut x_new = vec![0.0; n];
    let mut grad_new = vec![0.0; n];

    while trace.iterations < params.max_iter {
        if max_abs(&grad) <= params.gradient_tol {
            trace.converged = true;
            break;
        }

        // two-loop recursion: direction = -H grad
        direction.copy_from_slice(&grad);
        for (i, (s, y, rho)) in history.iter().enumerate().rev() {
            let a = rho * dot(s, &direction);
            alpha_buf[i] = a;
            for (d, yi) in direction.iter_mut().zip(y) {
                *d -= a * yi;
            }
        }
        if let Some((s, y, _)) = history.back() {
            let gamma = dot(s, y) / dot(y, y);
            for d in direction.iter_mut() {
                *d *= gamma;
            }
        }
        for (i, (s, y, rho)) in history.iter().enumerate() {
            let b = rho * dot(y, &direction);
            for (d, si) in direction.iter_mut().zip(s) {
                *d += (alpha_buf[i] - b) * si;
            }
        }
        for d in direction.iter_mut() {
            *d = -*d;
        }

        let mut slope = dot(&grad, &direction);
        if slope >= 0.0 || !slope.is_finite() {
            // not a descent direction: restart from steepest descent
            history.clear();
            for (d, g) in direction.iter_mut().zip(&grad) {
                *d = -g;
            }
            slope = dot(&grad, &direction);
        }

        let mut step = if history.is_empty() {
            (1.0 / dot(&grad, &grad).sqrt()).min(1.0)
        } else {
            1.0
        };
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            for ((xn, xi), d) in x_new.iter_mut().zip(x.iter()).zip(&direction) {
                *xn = xi + step * d;
            }
            let candidate = f(&x_new, &mut grad_new);
            if candidate.is_finite() && candidate <= value + ARMIJO_C1 * step * slope && candidate < value {
                accepted = Some(candidate);
                break;
            }
            step *= 0.5;
        }
        let Some(new_value) = accepted else {
            // no decrease representable at this precision
            break;
        };

        let s: Vec<f64> = x_new.iter().zip(x.iter()).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = grad_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() && sy > 0.0 {
            if history.len() == params.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        x.copy_from_slice(&x_new);
        grad.copy_from_slice(&grad_new);
        value = new_value;
        trace.objective.push(value);
        trace.iterations += 1;
    }
    trace.converged |= max_abs(&grad) <= params.gradient_tol;
    trace.final_gradient_max = max_abs(&grad);
    trace
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let mut x = vec![-1.2, 1.0];
        let trace = minimize_lbfgs(
            &mut x,
            LbfgsParams {
                max_iter: 500,
                gradient_tol: 1e-8,
                ..Default::default()
            },
            |p, g| {
                let (a, b) = (p[0], p[1]);
                g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
                g[1] = 200.0 * (b - a * a);
                (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
            },
        );
        assert!(trace.converged, "{trace:?}");
        assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 1.0).abs() < 1e-6);
        assert!(trace.objective.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn quadratic_converges_quickly() {
        let target = [3.0, -1.0, 0.5, 2.0];
        let mut x = vec![0.0; 4];
        let trace = minimize_lbfgs(&mut x, LbfgsParams::default(), |p, g| {
            let mut v = 0.0;
            for i in 0..4 {
                let scale = (i + 1) as f64;
                g[i] = scale * (p[i] - target[i]);
                v += 0.5 * scale * (p[i] - target[i]).powi(2);
            }
            v
        });
        assert!(trace.converged);
        assert!(trace.iterations < 30);
        for (a, b) in x.iter().zip(&target) {
            assert!((a - b).abs() < 1e-4);
        }
    }
}
