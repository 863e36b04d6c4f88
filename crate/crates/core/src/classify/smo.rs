//! Binary soft-margin SVM trained by sequential minimal optimization.
//!
//! Pair selection follows the maximal-violating-pair rule; the bias is the
//! mean of the free-vector gradients, or the midpoint of the feasible
//! interval when no vector is free.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::kernel::cubic_unchecked;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoParams<F> {
    pub c_reg: F,
    /// Stopping gap between the maximal violating pair.
    pub tolerance: F,
    pub max_iter: usize,
}

impl Default for SmoParams<f64> {
    fn default() -> Self {
        Self {
            c_reg: 1.0,
            tolerance: 1e-3,
            max_iter: 1_000_000,
        }
    }
}

impl<F: Scalar> SmoParams<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_reg > F::zero()) || !self.c_reg.is_finite() {
            return Err(Error::Domain(format!("c_reg must be positive, got {}", self.c_reg)));
        }
        if !(self.tolerance > F::zero()) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }
}

/// Dual solution over the full training set.
#[derive(Debug, Clone)]
pub struct SmoSolution<F> {
    pub alpha: Vec<F>,
    /// Decision function is `Σ alpha_i y_i K(x_i, x) + bias`.
    pub bias: F,
    pub iterations: usize,
    pub converged: bool,
}

impl<F: Scalar> SmoSolution<F> {
    pub fn decision(&self, points: &[Vec<F>], y: &[F], x: &[F]) -> F {
        points
            .iter()
            .zip(&self.alpha)
            .zip(y)
            .filter(|((_, a), _)| **a > F::zero())
            .fold(self.bias, |acc, ((p, &a), &yi)| acc + a * yi * cubic_unchecked(p, x))
    }
}

/// Solve `min ½ αᵀQα − Σα` s.t. `yᵀα = 0`, `0 ≤ α ≤ C`, with `Q_ij = y_i y_j K_ij`.
///
/// `y` holds ±1. The kernel matrix is precomputed.
pub fn solve<F: Scalar>(points: &[Vec<F>], y: &[F], params: &SmoParams<F>) -> Result<SmoSolution<F>> {
    params.validate()?;
    let l = points.len();
    if y.len() != l {
        return Err(Error::Shape { expected: l, got: y.len() });
    }
    let has_pos = y.iter().any(|&v| v > F::zero());
    let has_neg = y.iter().any(|&v| v < F::zero());
    if !(has_pos && has_neg) {
        return Err(Error::Training("both classes need at least one sample".into()));
    }
    let k: Vec<Vec<F>> = points
        .iter()
        .map(|p| points.iter().map(|q| cubic_unchecked(p, q)).collect())
        .collect();
    let c = params.c_reg;
    let tau = F::lit(1e-12);
    let mut alpha = vec![F::zero(); l];
    let mut grad = vec![-F::one(); l];
    let is_up = |a: F, yt: F| (yt > F::zero() && a < c) || (yt < F::zero() && a > F::zero());
    let is_low = |a: F, yt: F| (yt > F::zero() && a > F::zero()) || (yt < F::zero() && a < c);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iter {
        let mut i = usize::MAX;
        let mut gmax = F::neg_infinity();
        let mut j = usize::MAX;
        let mut gmin = F::infinity();
        for t in 0..l {
            let v = -y[t] * grad[t];
            if is_up(alpha[t], y[t]) && v > gmax {
                gmax = v;
                i = t;
            }
            if is_low(alpha[t], y[t]) && v < gmin {
                gmin = v;
                j = t;
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax - gmin < params.tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let q_ij = y[i] * y[j] * k[i][j];
        if y[i] != y[j] {
            let mut quad = k[i][i] + k[j][j] + q_ij + q_ij;
            if quad <= F::zero() {
                quad = tau;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] = alpha[i] + delta;
            alpha[j] = alpha[j] + delta;
            if diff > F::zero() {
                if alpha[j] < F::zero() {
                    alpha[j] = F::zero();
                    alpha[i] = diff;
                }
            } else if alpha[i] < F::zero() {
                alpha[i] = F::zero();
                alpha[j] = -diff;
            }
            if diff > F::zero() {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = k[i][i] + k[j][j] - q_ij - q_ij;
            if quad <= F::zero() {
                quad = tau;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] = alpha[i] - delta;
            alpha[j] = alpha[j] + delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < F::zero() {
                alpha[j] = F::zero();
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < F::zero() {
                alpha[i] = F::zero();
                alpha[j] = sum;
            }
        }

        let di = alpha[i] - old_i;
        let dj = alpha[j] - old_j;
        for t in 0..l {
            grad[t] = grad[t] + y[t] * (y[i] * k[t][i] * di + y[j] * k[t][j] * dj);
        }
    }

    // rho such that f(x) = Σ α y K − rho
    let mut ub = F::infinity();
    let mut lb = F::neg_infinity();
    let mut sum_free = F::zero();
    let mut n_free = 0usize;
    for t in 0..l {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < F::zero() {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= F::zero() {
            if y[t] > F::zero() {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free = sum_free + yg;
        }
    }
    let rho = if n_free > 0 {
        sum_free / F::from_usize_lossy(n_free)
    } else {
        (ub + lb) * F::lit(0.5)
    };

    Ok(SmoSolution {
        alpha,
        bias: -rho,
        iterations,
        converged,
    })
}

/// Largest KKT violation of `sol` measured on the margins `y_i f(x_i)`.
pub fn kkt_violation<F: Scalar>(points: &[Vec<F>], y: &[F], sol: &SmoSolution<F>, c_reg: F) -> F {
    let mut worst = F::zero();
    for (t, p) in points.iter().enumerate() {
        let margin = y[t] * sol.decision(points, y, p);
        let a = sol.alpha[t];
        let v = if a <= F::zero() {
            (F::one() - margin).max(F::zero())
        } else if a >= c_reg {
            (margin - F::one()).max(F::zero())
        } else {
            (margin - F::one()).abs()
        };
        worst = worst.max(v);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clusters() -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut pts = Vec::new();
        let mut y = Vec::new();
        for k in 0..12 {
            let a = k as f64 * 0.7;
            pts.push(vec![1.5 + 0.2 * a.cos(), 1.0 + 0.2 * a.sin()]);
            y.push(1.0);
            pts.push(vec![-1.5 + 0.2 * a.sin(), -1.0 + 0.2 * a.cos()]);
            y.push(-1.0);
        }
        (pts, y)
    }

    #[test]
    fn separable_clusters_fit_exactly() {
        let (pts, y) = clusters();
        let params = SmoParams::default();
        let sol = solve(&pts, &y, &params).unwrap();
        assert!(sol.converged);
        for (p, &t) in pts.iter().zip(&y) {
            assert!(sol.decision(&pts, &y, p) * t > 0.0);
        }
        assert!(kkt_violation(&pts, &y, &sol, 1.0) <= 1e-3);
        let signed: f64 = sol.alpha.iter().zip(&y).map(|(a, t)| a * t).sum();
        assert!(signed.abs() < 1e-6);
        assert!(sol.alpha.iter().all(|&a| (0.0..=1.0).contains(&a)));
    }

    #[test]
    fn overlapping_classes_respect_box() {
        let pts: Vec<Vec<f64>> = (0..30).map(|k| vec![(k as f64 * 1.3).sin(), (k as f64 * 0.77).cos()]).collect();
        let y: Vec<f64> = (0..30).map(|k| if k % 3 == 0 { 1.0 } else { -1.0 }).collect();
        let sol = solve(&pts, &y, &SmoParams { c_reg: 0.5, ..SmoParams::default() }).unwrap();
        assert!(sol.converged);
        assert!(sol.alpha.iter().all(|&a| (0.0..=0.5).contains(&a)));
        assert!(kkt_violation(&pts, &y, &sol, 0.5) <= 1e-3);
    }

    #[test]
    fn one_class_rejected() {
        let pts = vec![vec![0.0], vec![1.0]];
        assert!(matches!(solve(&pts, &[1.0, 1.0], &SmoParams::default()), Err(Error::Training(_))));
        assert!(matches!(
            solve(&pts, &[1.0, -1.0], &SmoParams { c_reg: 0.0, ..SmoParams::default() }),
            Err(Error::Domain(_))
        ));
    }
}
