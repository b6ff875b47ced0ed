//! L-BFGS maximization with Armijo backtracking.
//!
//! Used for MAP estimates, sampler smoke tests and the joint optimizer that
//! cross-checks the closed-form coordinate updates.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OptimizeOptions {
    pub max_iterations: usize,
    /// Termination threshold on the Euclidean gradient norm.
    pub grad_tol: f64,
    /// Number of curvature pairs kept for the two-loop recursion.
    pub memory: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            grad_tol: 1e-6,
            memory: 12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Maximum {
    pub point: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Maximizes `f` from `x0`. `f` writes the gradient of the objective into its
/// second argument and returns the objective value.
///
/// Fails with [`Error::BudgetExhausted`] (carrying the best point) when the
/// gradient norm has not dropped below `grad_tol` within the budget.
pub fn maximize<F>(mut f: F, x0: &[f64], opts: &OptimizeOptions) -> Result<Maximum>
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let dim = x0.len();
    let mut x = x0.to_vec();
    let mut grad = vec![0.0; dim];
    let mut value = f(&x, &mut grad);
    if !value.is_finite() {
        return Err(Error::ParamDomain(
            "objective is not finite at the starting point".into(),
        ));
    }

    // (s, y) pairs for the two-loop recursion, newest last.
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();

    for iteration in 0..opts.max_iterations {
        let gnorm = norm(&grad);
        if gnorm < opts.grad_tol {
            return Ok(Maximum {
                point: x,
                value,
                grad_norm: gnorm,
                iterations: iteration,
            });
        }

        // Ascent direction from L-BFGS on the negated objective.
        let mut direction = grad.clone();
        let mut alphas = vec![0.0; pairs.len()];
        for (k, (s, y)) in pairs.iter().enumerate().rev() {
            let rho = 1.0 / dot(y, s);
            let a = rho * dot(s, &direction);
            alphas[k] = a;
            for d in 0..dim {
                direction[d] -= a * y[d];
            }
        }
        if let Some((s, y)) = pairs.last() {
            let scale = dot(s, y) / dot(y, y);
            for d in direction.iter_mut() {
                *d *= scale;
            }
        }
        for (k, (s, y)) in pairs.iter().enumerate() {
            let rho = 1.0 / dot(y, s);
            let b = rho * dot(y, &direction);
            for d in 0..dim {
                direction[d] += s[d] * (alphas[k] - b);
            }
        }
        // Fall back to steepest ascent if the memory produced a non-ascent
        // direction.
        if dot(&direction, &grad) <= 0.0 {
            direction.copy_from_slice(&grad);
        }

        // Backtracking Armijo line search.
        let slope = dot(&direction, &grad);
        let mut step = if pairs.is_empty() { 1.0 / norm(&direction).max(1.0) } else { 1.0 };
        let mut new_x = vec![0.0; dim];
        let mut new_grad = vec![0.0; dim];
        let mut accepted = false;
        for _ in 0..60 {
            for d in 0..dim {
                new_x[d] = x[d] + step * direction[d];
            }
            let new_value = f(&new_x, &mut new_grad);
            if new_value.is_finite() && new_value >= value + 1e-4 * step * slope {
                let s: Vec<f64> = (0..dim).map(|d| new_x[d] - x[d]).collect();
                // y is the gradient change of the *negated* objective.
                let y: Vec<f64> = (0..dim).map(|d| grad[d] - new_grad[d]).collect();
                if dot(&s, &y) > 1e-12 {
                    pairs.push((s, y));
                    if pairs.len() > opts.memory {
                        pairs.remove(0);
                    }
                }
                x.copy_from_slice(&new_x);
                grad.copy_from_slice(&new_grad);
                value = new_value;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // Line search stalled: either converged to float resolution or
            // the memory is stale. Drop it once, then give up.
            if pairs.is_empty() {
                let gnorm = norm(&grad);
                if gnorm < opts.grad_tol {
                    return Ok(Maximum {
                        point: x,
                        value,
                        grad_norm: gnorm,
                        iterations: iteration,
                    });
                }
                return Err(Error::BudgetExhausted {
                    iterations: iteration,
                    grad_norm: gnorm,
                    best: x,
                });
            }
            pairs.clear();
        }
    }

    let gnorm = norm(&grad);
    if gnorm < opts.grad_tol {
        Ok(Maximum {
            point: x,
            value,
            grad_norm: gnorm,
            iterations: opts.max_iterations,
        })
    } else {
        Err(Error::BudgetExhausted {
            iterations: opts.max_iterations,
            grad_norm: gnorm,
            best: x,
        })
    }
}
