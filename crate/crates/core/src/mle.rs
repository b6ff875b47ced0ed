//! Closed-form maximum-likelihood coordinate updates for the simplified
//! models (ground-truth transmission observed directly), with a
//! coordinate-ascent driver and the grid-search / joint-optimizer routes used
//! to cross-check them.
//!
//! Two simplified models are covered:
//!
//! * noisy-R: `log R = log R0 - sum_i alpha_i x_i + eps`. The conditional ML
//!   update for `exp(-alpha_i)` is a ratio of geometric means over the
//!   country-days where NPI `i` is active.
//! * default (growth noise): `log g = rate * (R_pred^{1/shape} - 1) + eps`.
//!   The update is a ratio of generalized weighted means with exponent
//!   `1/shape` and weights `R_tilde^{1/shape}`.

use crate::data::NpiPanel;
use crate::epi::{growth_to_r, GenerationInterval};
use crate::grid::Grid;
use crate::inference::optimize::{maximize, OptimizeOptions};
use crate::{Error, Result};

/// Which simplified likelihood a routine targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplifiedModel {
    /// Noise on `log R` (theorem 1).
    NoisyR,
    /// Noise on the log growth multiplier (theorem 2).
    GrowthNoise,
}

/// What the simplified models get to observe directly.
#[derive(Debug, Clone)]
pub enum GroundTruth {
    /// `R` observed on every country-day.
    ReproductionNumber(Grid<f64>),
    /// Daily growth multipliers observed; converted to `R` through the
    /// exponential-growth inverse.
    GrowthMultiplier(Grid<f64>),
}

/// A simplified-model instance: observed transmission, basic reproduction
/// numbers, activations and the generation interval.
#[derive(Debug, Clone)]
pub struct MlProblem {
    pub x: NpiPanel,
    pub r0: Vec<f64>,
    pub gi: GenerationInterval,
    pub truth: GroundTruth,
}

impl MlProblem {
    pub fn new(x: NpiPanel, r0: Vec<f64>, gi: GenerationInterval, truth: GroundTruth) -> Result<Self> {
        let grid = match &truth {
            GroundTruth::ReproductionNumber(g) | GroundTruth::GrowthMultiplier(g) => g,
        };
        if grid.n_days() != x.n_days() || grid.n_countries() != x.n_countries() {
            return Err(Error::Shape(format!(
                "ground truth is {}x{}, panel is {}x{}",
                grid.n_days(),
                grid.n_countries(),
                x.n_days(),
                x.n_countries()
            )));
        }
        if r0.len() != x.n_countries() {
            return Err(Error::Shape(format!(
                "{} R0 values for {} countries",
                r0.len(),
                x.n_countries()
            )));
        }
        if r0.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::ParamDomain("R0 values must be positive".into()));
        }
        Ok(Self { x, r0, gi, truth })
    }

    pub fn n_npis(&self) -> usize {
        self.x.n_npis()
    }

    /// Ground-truth `R` on every country-day, converting growth multipliers
    /// through the exponential-growth inverse where necessary.
    pub fn r_bar(&self) -> Result<Grid<f64>> {
        match &self.truth {
            GroundTruth::ReproductionNumber(g) => Ok(g.clone()),
            GroundTruth::GrowthMultiplier(m) => {
                let mut out = Grid::zeros(m.n_days(), m.n_countries());
                for (t, c, v) in m.iter_indexed() {
                    out.set(t, c, growth_to_r(*v, &self.gi)?);
                }
                Ok(out)
            }
        }
    }

    /// Predicted `R` with NPI `i`'s effect removed:
    /// `R0_c * prod_{j != i} exp(-alpha_j x_j)`.
    pub fn r_tilde_excluding(&self, npi: usize, alpha: &[f64]) -> Grid<f64> {
        Grid::from_fn(self.x.n_days(), self.x.n_countries(), |t, c| {
            let mut exponent = 0.0;
            for j in 0..self.x.n_npis() {
                if j != npi && self.x.is_active(j, t, c) {
                    exponent += alpha[j];
                }
            }
            self.r0[c] * (-exponent).exp()
        })
    }

    fn active_set(&self, npi: usize) -> Result<Vec<(usize, usize)>> {
        let set = self.x.active_set(npi);
        if set.is_empty() {
            return Err(Error::Identifiability(format!(
                "NPI '{}' is never active; its effect cannot be estimated",
                self.x.npi_names()[npi]
            )));
        }
        Ok(set)
    }
}

/// Geometric mean of a non-empty set of positive reals, computed in the log
/// domain.
pub fn geometric_mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::ParamDomain("geometric mean of an empty set".into()));
    }
    if values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::ParamDomain("geometric mean needs positive values".into()));
    }
    let log_mean = values.iter().map(|v| v.ln()).sum::<f64>() / values.len() as f64;
    Ok(log_mean.exp())
}

/// Generalized weighted mean `(sum w v^p / sum w)^{1/p}`.
pub fn generalized_weighted_mean(values: &[f64], exponent: f64, weights: &[f64]) -> Result<f64> {
    if values.is_empty() || values.len() != weights.len() {
        return Err(Error::ParamDomain(
            "generalized mean needs matching non-empty values and weights".into(),
        ));
    }
    if exponent == 0.0 {
        return Err(Error::ParamDomain("generalized mean exponent must be nonzero".into()));
    }
    if values.iter().any(|v| !(*v > 0.0)) || weights.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::ParamDomain(
            "generalized mean needs positive values and weights".into(),
        ));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (v, w) in values.iter().zip(weights) {
        num += w * v.powf(exponent);
        den += w;
    }
    Ok((num / den).powf(1.0 / exponent))
}

/// Conditional ML update for `exp(-alpha_i)` under the simplified noisy-R
/// model: the ratio of the geometric means of observed `R` and of the
/// prediction excluding NPI `i`, over the active set.
pub fn theorem1_update(problem: &MlProblem, npi: usize, alpha: &[f64]) -> Result<f64> {
    let set = problem.active_set(npi)?;
    let r_bar = problem.r_bar()?;
    let r_tilde = problem.r_tilde_excluding(npi, alpha);
    let observed: Vec<f64> = set.iter().map(|&(t, c)| *r_bar.get(t, c)).collect();
    let predicted: Vec<f64> = set.iter().map(|&(t, c)| *r_tilde.get(t, c)).collect();
    Ok(geometric_mean(&observed)? / geometric_mean(&predicted)?)
}

/// Conditional ML update for `exp(-alpha_i)` under the simplified
/// growth-noise model, in the ratio-of-sums form:
/// `(sum Rtilde^{1/shape} Rbar^{1/shape} / sum Rtilde^{2/shape})^{shape}`.
pub fn theorem2_update(problem: &MlProblem, npi: usize, alpha: &[f64]) -> Result<f64> {
    let set = problem.active_set(npi)?;
    let inv_shape = 1.0 / problem.gi.shape;
    let r_bar = problem.r_bar()?;
    let r_tilde = problem.r_tilde_excluding(npi, alpha);
    let mut num = 0.0;
    let mut den = 0.0;
    for &(t, c) in &set {
        let tilde_pow = r_tilde.get(t, c).powf(inv_shape);
        num += tilde_pow * r_bar.get(t, c).powf(inv_shape);
        den += tilde_pow * tilde_pow;
    }
    Ok((num / den).powf(problem.gi.shape))
}

fn update_for(model: SimplifiedModel, problem: &MlProblem, npi: usize, alpha: &[f64]) -> Result<f64> {
    match model {
        SimplifiedModel::NoisyR => theorem1_update(problem, npi, alpha),
        SimplifiedModel::GrowthNoise => theorem2_update(problem, npi, alpha),
    }
}

/// Simplified log-likelihood up to a constant, with unit noise scale.
pub fn simplified_loglik(problem: &MlProblem, model: SimplifiedModel, alpha: &[f64]) -> Result<f64> {
    Ok(simplified_loglik_grad(problem, model, alpha)?.0)
}

/// Simplified log-likelihood and its gradient with respect to `alpha`.
pub fn simplified_loglik_grad(
    problem: &MlProblem,
    model: SimplifiedModel,
    alpha: &[f64],
) -> Result<(f64, Vec<f64>)> {
    if alpha.len() != problem.n_npis() {
        return Err(Error::Shape(format!(
            "{} alpha values for {} NPIs",
            alpha.len(),
            problem.n_npis()
        )));
    }
    let r_bar = problem.r_bar()?;
    let gi = &problem.gi;
    let mut value = 0.0;
    let mut grad = vec![0.0; alpha.len()];
    for t in 0..problem.x.n_days() {
        for c in 0..problem.x.n_countries() {
            let mut exponent = 0.0;
            for j in 0..problem.x.n_npis() {
                if problem.x.is_active(j, t, c) {
                    exponent += alpha[j];
                }
            }
            let log_pred = problem.r0[c].ln() - exponent;
            match model {
                SimplifiedModel::NoisyR => {
                    let residual = r_bar.get(t, c).ln() - log_pred;
                    value -= 0.5 * residual * residual;
                    // d residual / d alpha_i = +x_i
                    for j in 0..alpha.len() {
                        if problem.x.is_active(j, t, c) {
                            grad[j] -= residual;
                        }
                    }
                }
                SimplifiedModel::GrowthNoise => {
                    let pred_pow = (log_pred / gi.shape).exp();
                    let observed_pow = r_bar.get(t, c).powf(1.0 / gi.shape);
                    // log g residual under the growth conversion.
                    let residual = gi.rate * (observed_pow - pred_pow);
                    value -= 0.5 * residual * residual;
                    // d residual / d alpha_i = (rate / shape) pred_pow x_i
                    let d = gi.rate / gi.shape * pred_pow;
                    for j in 0..alpha.len() {
                        if problem.x.is_active(j, t, c) {
                            grad[j] -= residual * d;
                        }
                    }
                }
            }
        }
    }
    Ok((value, grad))
}

/// 1-D maximizer of the simplified likelihood over a uniform grid on the
/// `exp(-alpha_i)` scale; the independent route against the closed forms.
pub fn grid_search_update(
    problem: &MlProblem,
    model: SimplifiedModel,
    npi: usize,
    alpha: &[f64],
    range: (f64, f64),
    step: f64,
) -> Result<f64> {
    let set = problem.active_set(npi)?;
    let r_bar = problem.r_bar()?;
    let r_tilde = problem.r_tilde_excluding(npi, alpha);
    // Only active-set cells depend on alpha_i; everything else is constant.
    let cells: Vec<(f64, f64)> = set
        .iter()
        .map(|&(t, c)| (*r_bar.get(t, c), *r_tilde.get(t, c)))
        .collect();
    let objective = |q: f64| -> f64 {
        let mut value = 0.0;
        match model {
            SimplifiedModel::NoisyR => {
                for &(observed, tilde) in &cells {
                    let residual = observed.ln() - (tilde * q).ln();
                    value -= 0.5 * residual * residual;
                }
            }
            SimplifiedModel::GrowthNoise => {
                let inv_shape = 1.0 / problem.gi.shape;
                for &(observed, tilde) in &cells {
                    let residual =
                        problem.gi.rate * (observed.powf(inv_shape) - (tilde * q).powf(inv_shape));
                    value -= 0.5 * residual * residual;
                }
            }
        }
        value
    };
    let mut best_q = range.0;
    let mut best_value = f64::NEG_INFINITY;
    let mut q = range.0;
    while q <= range.1 {
        let value = objective(q);
        if value > best_value {
            best_value = value;
            best_q = q;
        }
        q += step;
    }
    Ok(best_q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentOptions {
    /// Convergence threshold on the per-coordinate change of `exp(-alpha)`.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_sweeps: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AscentResult {
    pub alpha: Vec<f64>,
    pub sweeps: usize,
    /// `|dL/d alpha_i|` of the simplified likelihood at the returned point.
    pub grad_residuals: Vec<f64>,
}

/// Cycles the closed-form coordinate updates in ascending NPI order until the
/// largest per-coordinate change of `exp(-alpha)` falls below `tol`.
pub fn coordinate_ascent(
    problem: &MlProblem,
    model: SimplifiedModel,
    opts: &AscentOptions,
) -> Result<AscentResult> {
    for npi in 0..problem.n_npis() {
        problem.active_set(npi)?;
    }
    let mut alpha = vec![0.0; problem.n_npis()];
    for sweep in 1..=opts.max_sweeps {
        let mut max_change = 0.0f64;
        for npi in 0..problem.n_npis() {
            let q_new = update_for(model, problem, npi, &alpha)?;
            let q_old = (-alpha[npi]).exp();
            max_change = max_change.max((q_new - q_old).abs());
            alpha[npi] = -q_new.ln();
        }
        if max_change < opts.tol {
            let (_, grad) = simplified_loglik_grad(problem, model, &alpha)?;
            return Ok(AscentResult {
                alpha,
                sweeps: sweep,
                grad_residuals: grad.iter().map(|g| g.abs()).collect(),
            });
        }
    }
    let (_, grad) = simplified_loglik_grad(problem, model, &alpha)?;
    Err(Error::BudgetExhausted {
        iterations: opts.max_sweeps,
        grad_norm: grad.iter().map(|g| g * g).sum::<f64>().sqrt(),
        best: alpha,
    })
}

/// Joint ML estimate of all effects by L-BFGS on the simplified likelihood;
/// the independent route against [`coordinate_ascent`].
pub fn joint_ml(problem: &MlProblem, model: SimplifiedModel, init: &[f64]) -> Result<Vec<f64>> {
    let objective = |alpha: &[f64], grad_out: &mut [f64]| -> f64 {
        let (value, grad) = simplified_loglik_grad(problem, model, alpha)
            .expect("simplified likelihood is defined for all real alpha");
        grad_out.copy_from_slice(&grad);
        value
    };
    let opts = OptimizeOptions {
        grad_tol: 1e-8,
        ..OptimizeOptions::default()
    };
    Ok(maximize(objective, init, &opts)?.point)
}
