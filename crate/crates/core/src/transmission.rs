//! Reproduction-number grids from NPI activations, and transmission noise.
//!
//! Effect forms:
//! * multiplicative: `R_{t,c} = R_{0,c} * exp(-sum_i alpha_i x_{i,t,c})`
//! * additive: `R_{t,c} = R_{0,c} * (alpha_hat + sum_i alpha_i (1 - x_{i,t,c}))`
//!   with `(alpha_1.., alpha_hat)` on the simplex
//! * different effects: multiplicative with per-country `alpha_{i,c}`
//!   centred on a shared `alpha_i`

use serde::{Deserialize, Serialize};

use crate::data::NpiPanel;
use crate::grid::Grid;
use crate::{Error, Result};

pub const SIMPLEX_TOL: f64 = 1e-12;

/// How NPI effects combine into `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectForm {
    Multiplicative,
    Additive,
    DifferentEffects,
}

/// Where multiplicative transmission noise enters, if anywhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoisePlacement {
    /// `exp(eps)` multiplies the daily growth multiplier; field is the noise
    /// scale `sigma_g`.
    GrowthRate(f64),
    /// `exp(eps)` multiplies `R` itself; field is `sigma_R`.
    ReproductionNumber(f64),
    None,
}

impl NoisePlacement {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoisePlacement::GrowthRate(s) | NoisePlacement::ReproductionNumber(s) if !(*s > 0.0) => {
                Err(Error::Config(format!("noise scale must be positive (got {s})")))
            }
            _ => Ok(()),
        }
    }

    pub fn sigma(&self) -> Option<f64> {
        match self {
            NoisePlacement::GrowthRate(s) | NoisePlacement::ReproductionNumber(s) => Some(*s),
            NoisePlacement::None => None,
        }
    }
}

/// NPI effect parameters under one of the three forms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EffectParams {
    Multiplicative {
        /// Log-scale effect per NPI; positive means the NPI reduces `R`.
        alpha: Vec<f64>,
    },
    Additive {
        /// Proportion of baseline transmission eliminated by each NPI.
        alpha: Vec<f64>,
        /// Proportion of transmission remaining with every NPI active.
        alpha_hat: f64,
    },
    DifferentEffects {
        /// Shared mean effect per NPI.
        alpha: Vec<f64>,
        /// `alpha_country[i][c]`, drawn around `alpha[i]` with sd `sigma_alpha`.
        alpha_country: Vec<Vec<f64>>,
        sigma_alpha: f64,
    },
}

impl EffectParams {
    pub fn form(&self) -> EffectForm {
        match self {
            EffectParams::Multiplicative { .. } => EffectForm::Multiplicative,
            EffectParams::Additive { .. } => EffectForm::Additive,
            EffectParams::DifferentEffects { .. } => EffectForm::DifferentEffects,
        }
    }

    pub fn n_npis(&self) -> usize {
        match self {
            EffectParams::Multiplicative { alpha }
            | EffectParams::Additive { alpha, .. }
            | EffectParams::DifferentEffects { alpha, .. } => alpha.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EffectParams::Multiplicative { .. } => Ok(()),
            EffectParams::Additive { alpha, alpha_hat } => {
                if alpha.iter().any(|a| !(*a > 0.0)) || !(*alpha_hat > 0.0) {
                    return Err(Error::ParamDomain(
                        "additive effects require alpha_i > 0 and alpha_hat > 0".into(),
                    ));
                }
                let total = alpha_hat + alpha.iter().sum::<f64>();
                if (total - 1.0).abs() > SIMPLEX_TOL {
                    return Err(Error::ParamDomain(format!(
                        "additive effects must lie on the simplex; alpha_hat + sum(alpha) = {total}"
                    )));
                }
                Ok(())
            }
            EffectParams::DifferentEffects {
                alpha,
                alpha_country,
                sigma_alpha,
            } => {
                if !(*sigma_alpha > 0.0) {
                    return Err(Error::ParamDomain("sigma_alpha must be positive".into()));
                }
                if alpha_country.len() != alpha.len() {
                    return Err(Error::Shape(format!(
                        "alpha_country has {} rows for {} NPIs",
                        alpha_country.len(),
                        alpha.len()
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Per-country basic reproduction numbers. The prior scale over countries is
/// a latent variable of the inference module and does not appear here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R0Params {
    pub r0: Vec<f64>,
    pub prior_mean: f64,
}

pub const DEFAULT_R0_PRIOR_MEAN: f64 = 3.25;

impl R0Params {
    pub fn new(r0: Vec<f64>) -> Result<Self> {
        Self::with_prior_mean(r0, DEFAULT_R0_PRIOR_MEAN)
    }

    pub fn with_prior_mean(r0: Vec<f64>, prior_mean: f64) -> Result<Self> {
        if r0.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::ParamDomain("all R0 values must be positive".into()));
        }
        Ok(Self { r0, prior_mean })
    }
}

fn check_dims(r0: &R0Params, n_npis: usize, x: &NpiPanel) -> Result<()> {
    if n_npis != x.n_npis() {
        return Err(Error::Shape(format!(
            "{} effect parameters for {} panel NPIs",
            n_npis,
            x.n_npis()
        )));
    }
    if r0.r0.len() != x.n_countries() {
        return Err(Error::Shape(format!(
            "{} R0 values for {} countries",
            r0.r0.len(),
            x.n_countries()
        )));
    }
    Ok(())
}

/// `R_{t,c}` under the multiplicative or different-effects form.
pub fn rt_multiplicative(r0: &R0Params, effects: &EffectParams, x: &NpiPanel) -> Result<Grid<f64>> {
    effects.validate()?;
    check_dims(r0, effects.n_npis(), x)?;
    let alpha_at = |npi: usize, country: usize| -> f64 {
        match effects {
            EffectParams::Multiplicative { alpha } => alpha[npi],
            EffectParams::DifferentEffects { alpha_country, .. } => alpha_country[npi][country],
            EffectParams::Additive { .. } => unreachable!(),
        }
    };
    if matches!(effects, EffectParams::Additive { .. }) {
        return Err(Error::Config(
            "rt_multiplicative called with additive effect parameters".into(),
        ));
    }
    if let EffectParams::DifferentEffects { alpha_country, .. } = effects {
        if alpha_country.iter().any(|row| row.len() != x.n_countries()) {
            return Err(Error::Shape(
                "alpha_country rows must have one entry per country".into(),
            ));
        }
    }
    Ok(Grid::from_fn(x.n_days(), x.n_countries(), |t, c| {
        let mut exponent = 0.0;
        for i in 0..x.n_npis() {
            if x.is_active(i, t, c) {
                exponent += alpha_at(i, c);
            }
        }
        r0.r0[c] * (-exponent).exp()
    }))
}

/// `R_{t,c}` under the additive effect form.
pub fn rt_additive(r0: &R0Params, effects: &EffectParams, x: &NpiPanel) -> Result<Grid<f64>> {
    let (alpha, alpha_hat) = match effects {
        EffectParams::Additive { alpha, alpha_hat } => (alpha, *alpha_hat),
        _ => {
            return Err(Error::Config(
                "rt_additive requires additive effect parameters".into(),
            ))
        }
    };
    effects.validate()?;
    check_dims(r0, alpha.len(), x)?;
    Ok(Grid::from_fn(x.n_days(), x.n_countries(), |t, c| {
        let mut remaining = alpha_hat;
        for i in 0..x.n_npis() {
            if !x.is_active(i, t, c) {
                remaining += alpha[i];
            }
        }
        r0.r0[c] * remaining
    }))
}

/// `R_{t,c}` under whichever form `effects` carries.
pub fn r_grid(r0: &R0Params, effects: &EffectParams, x: &NpiPanel) -> Result<Grid<f64>> {
    match effects.form() {
        EffectForm::Multiplicative | EffectForm::DifferentEffects => rt_multiplicative(r0, effects, x),
        EffectForm::Additive => rt_additive(r0, effects, x),
    }
}

/// Applies multiplicative noise `exp(eps)` to a base grid, once per output
/// stream. For `GrowthRate` the base is a multiplier grid; for
/// `ReproductionNumber` it is an `R` grid; for `None` both outputs equal the
/// base and no noise grids may be supplied.
pub fn apply_noise(
    base: &Grid<f64>,
    placement: &NoisePlacement,
    eps_cases: Option<&Grid<f64>>,
    eps_deaths: Option<&Grid<f64>>,
) -> Result<(Grid<f64>, Grid<f64>)> {
    placement.validate()?;
    match placement {
        NoisePlacement::None => {
            if eps_cases.is_some() || eps_deaths.is_some() {
                return Err(Error::Config(
                    "noise grids supplied but noise placement is none".into(),
                ));
            }
            Ok((base.clone(), base.clone()))
        }
        NoisePlacement::GrowthRate(_) | NoisePlacement::ReproductionNumber(_) => {
            let (ec, ed) = match (eps_cases, eps_deaths) {
                (Some(ec), Some(ed)) => (ec, ed),
                _ => {
                    return Err(Error::Config(
                        "noise placement requires one noise grid per stream".into(),
                    ))
                }
            };
            if !base.same_shape(ec) || !base.same_shape(ed) {
                return Err(Error::Shape("noise grids must match the base grid".into()));
            }
            let noised = |eps: &Grid<f64>| {
                Grid::from_fn(base.n_days(), base.n_countries(), |t, c| {
                    base.get(t, c) * eps.get(t, c).exp()
                })
            };
            Ok((noised(ec), noised(ed)))
        }
    }
}
