//! Epidemiological primitives: discretized reporting delays, the generation
//! interval, and the reproduction-number-to-growth conversion.
//!
//! Conventions fixed here and relied on everywhere else:
//!
//! * Reporting delays are negative binomial PMFs evaluated pointwise at
//!   integer lags `0..truncation-1`, then renormalized.
//! * The generation interval is a `Gamma(shape, rate)` matched to the given
//!   mean and standard deviation.
//! * Growth is carried as the *daily multiplier* `m` with
//!   `N_t = m_t * N_{t-1}`. Under constant exponential growth,
//!   `m = exp(rate * (R^{1/shape} - 1))`; sources that define a rate-style
//!   `g` with `N_t = (g + 1) * N_{t-1}` map onto this as `m = g + 1`.

use serde::{Deserialize, Serialize};

use crate::math;
use crate::{Error, Result};

/// Infection-to-report delay distribution parameters.
///
/// The PMF support is lags `0..truncation-1` (days).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelaySpec {
    /// Mean delay in days.
    pub mean: f64,
    /// Negative binomial dispersion; larger means less spread.
    pub dispersion: f64,
    /// Number of PMF bins.
    pub truncation: usize,
}

impl DelaySpec {
    pub fn new(mean: f64, dispersion: f64, truncation: usize) -> Result<Self> {
        if !(mean > 0.0) || !(dispersion > 0.0) {
            return Err(Error::ParamDomain(format!(
                "delay mean and dispersion must be positive (got {mean}, {dispersion})"
            )));
        }
        if truncation < 1 {
            return Err(Error::ParamDomain("delay truncation must be >= 1".into()));
        }
        Ok(Self {
            mean,
            dispersion,
            truncation,
        })
    }

    /// Infection to case confirmation.
    pub fn case_default() -> Self {
        Self {
            mean: 10.92,
            dispersion: 5.41,
            truncation: 32,
        }
    }

    /// Infection to death.
    pub fn death_default() -> Self {
        Self {
            mean: 21.82,
            dispersion: 14.26,
            truncation: 48,
        }
    }

    /// Same distribution with the mean shifted by `days`, dispersion and
    /// truncation unchanged. Used by the delay sensitivity grid.
    pub fn shifted(&self, days: f64) -> Result<Self> {
        Self::new(self.mean + days, self.dispersion, self.truncation)
    }
}

/// Normalized delay PMF over integer lags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelayPmf {
    probabilities: Vec<f64>,
}

impl DelayPmf {
    /// Wraps a raw vector, renormalizing. Entries must be non-negative with a
    /// positive sum.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::ParamDomain("delay PMF cannot be empty".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::ParamDomain("delay PMF weights must be finite and >= 0".into()));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::ParamDomain("delay PMF weights sum to zero".into()));
        }
        Ok(Self {
            probabilities: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    /// All mass on a single lag index.
    pub fn delta(len: usize, index: usize) -> Self {
        assert!(index < len);
        let mut probabilities = vec![0.0; len];
        probabilities[index] = 1.0;
        Self { probabilities }
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn argmax(&self) -> usize {
        self.probabilities
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap()
    }
}

/// Discretizes a delay spec into a truncated, renormalized negative binomial
/// PMF evaluated at integer lags `0..truncation-1`.
pub fn discretize_delay(spec: &DelaySpec) -> Result<DelayPmf> {
    DelaySpec::new(spec.mean, spec.dispersion, spec.truncation)?;
    let weights: Vec<f64> = (0..spec.truncation)
        .map(|lag| math::nb_ln_pmf_unchecked(lag as f64, spec.mean, spec.dispersion).exp())
        .collect();
    DelayPmf::from_weights(weights)
}

/// Gamma-parameterized generation interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationInterval {
    /// Mean in days.
    pub mean: f64,
    /// Standard deviation in days.
    pub sd: f64,
    /// Gamma shape, `mean^2 / sd^2`.
    pub shape: f64,
    /// Gamma rate, `mean / sd^2` (1/days).
    pub rate: f64,
    /// Support of the discretized PMF used by the renewal process (lags
    /// `1..=pmf_truncation`).
    pub pmf_truncation: usize,
}

pub const DEFAULT_GI_MEAN: f64 = 5.06;
pub const DEFAULT_GI_SD: f64 = 2.11;
pub const DEFAULT_GI_TRUNCATION: usize = 28;

/// Moment-matches a Gamma generation interval to the given mean and sd.
pub fn gi_params(mean: f64, sd: f64) -> Result<GenerationInterval> {
    gi_params_truncated(mean, sd, DEFAULT_GI_TRUNCATION)
}

pub fn gi_params_truncated(mean: f64, sd: f64, pmf_truncation: usize) -> Result<GenerationInterval> {
    if !(mean > 0.0) || !(sd > 0.0) {
        return Err(Error::ParamDomain(format!(
            "generation interval mean and sd must be positive (got {mean}, {sd})"
        )));
    }
    if pmf_truncation < 1 {
        return Err(Error::ParamDomain("GI pmf truncation must be >= 1".into()));
    }
    let var = sd * sd;
    Ok(GenerationInterval {
        mean,
        sd,
        shape: mean * mean / var,
        rate: mean / var,
        pmf_truncation,
    })
}

impl Default for GenerationInterval {
    fn default() -> Self {
        gi_params(DEFAULT_GI_MEAN, DEFAULT_GI_SD).unwrap()
    }
}

impl GenerationInterval {
    /// Discretized GI for the renewal process: the Gamma density evaluated at
    /// integer lags `1..=pmf_truncation`, renormalized. Lag 0 is excluded
    /// (the renewal sum starts at lag 1), so `probabilities()[k]` is the
    /// weight of lag `k + 1`.
    pub fn renewal_pmf(&self) -> DelayPmf {
        let weights: Vec<f64> = (1..=self.pmf_truncation)
            .map(|lag| math::gamma_ln_pdf(lag as f64, self.shape, self.rate).exp())
            .collect();
        DelayPmf::from_weights(weights).expect("gamma density is positive on integer lags")
    }
}

/// Converts a reproduction number into the daily growth multiplier under the
/// constant-exponential-growth assumption: `m = exp(rate * (R^{1/shape} - 1))`.
pub fn r_to_growth(r: f64, gi: &GenerationInterval) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::ParamDomain(format!(
            "reproduction number must be positive (got {r})"
        )));
    }
    Ok((gi.rate * (r.powf(1.0 / gi.shape) - 1.0)).exp())
}

/// Inverse of [`r_to_growth`]: recovers `R` from a daily multiplier.
///
/// Fails when `ln(m)/rate <= -1`, where the inverse leaves the Gamma
/// moment-generating function's domain.
pub fn growth_to_r(multiplier: f64, gi: &GenerationInterval) -> Result<f64> {
    if !(multiplier > 0.0) {
        return Err(Error::ParamDomain(format!(
            "growth multiplier must be positive (got {multiplier})"
        )));
    }
    let base = 1.0 + multiplier.ln() / gi.rate;
    if !(base > 0.0) {
        return Err(Error::ParamDomain(format!(
            "multiplier {multiplier} is below the range expressible by this generation interval"
        )));
    }
    Ok(base.powf(gi.shape))
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{Discrete, NegativeBinomial};

    #[test]
    fn case_delay_pmf_normalizes() {
        let pmf = discretize_delay(&DelaySpec::case_default()).unwrap();
        assert_eq!(pmf.len(), 32);
        let total: f64 = pmf.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(pmf.probabilities().iter().all(|p| *p >= 0.0));
    }

    #[test]
    fn truncation_one_is_a_delta() {
        let pmf = discretize_delay(&DelaySpec::new(10.92, 5.41, 1).unwrap()).unwrap();
        assert_eq!(pmf.probabilities(), &[1.0]);
    }

    #[test]
    fn death_delay_argmax_matches_reference_pmf() {
        // statrs' (r, p) negative binomial is the independent route: with
        // r = dispersion and p = alpha / (alpha + mu) it has mean mu and
        // variance mu + mu^2/alpha.
        let spec = DelaySpec::death_default();
        let p = spec.dispersion / (spec.dispersion + spec.mean);
        let reference = NegativeBinomial::new(spec.dispersion, p).unwrap();
        let expected_argmax = (0..spec.truncation)
            .max_by(|a, b| {
                reference
                    .ln_pmf(*a as u64)
                    .partial_cmp(&reference.ln_pmf(*b as u64))
                    .unwrap()
            })
            .unwrap();
        let pmf = discretize_delay(&spec).unwrap();
        assert_eq!(pmf.argmax(), expected_argmax);
    }

    #[test]
    fn delay_pmf_matches_reference_pointwise() {
        let spec = DelaySpec::case_default();
        let p = spec.dispersion / (spec.dispersion + spec.mean);
        let reference = NegativeBinomial::new(spec.dispersion, p).unwrap();
        let norm: f64 = (0..spec.truncation).map(|k| reference.pmf(k as u64)).sum();
        let pmf = discretize_delay(&spec).unwrap();
        for (k, prob) in pmf.probabilities().iter().enumerate() {
            let want = reference.pmf(k as u64) / norm;
            assert!((prob - want).abs() < 1e-12, "lag {k}: {prob} vs {want}");
        }
    }

    #[test]
    fn invalid_delay_specs_rejected() {
        assert!(DelaySpec::new(0.0, 5.0, 10).is_err());
        assert!(DelaySpec::new(5.0, -1.0, 10).is_err());
        assert!(DelaySpec::new(5.0, 5.0, 0).is_err());
    }

    #[test]
    fn gi_params_default_values() {
        let gi = gi_params(5.06, 2.11).unwrap();
        assert!((gi.shape - 5.7509).abs() < 1e-4);
        assert!((gi.rate - 1.1365).abs() < 1e-4);
    }

    #[test]
    fn gi_params_unit_moments() {
        let gi = gi_params(1.0, 1.0).unwrap();
        assert_eq!(gi.shape, 1.0);
        assert_eq!(gi.rate, 1.0);
    }

    #[test]
    fn gi_params_sensitivity_value() {
        // One of the GI sensitivity grid points: mean shifted, sd fixed.
        let gi = gi_params(6.06, 2.11).unwrap();
        assert!((gi.shape - 6.06 * 6.06 / (2.11 * 2.11)).abs() < 1e-12);
        assert!((gi.rate - 6.06 / (2.11 * 2.11)).abs() < 1e-12);
    }

    #[test]
    fn gi_params_rejects_nonpositive() {
        assert!(gi_params(-1.0, 2.0).is_err());
        assert!(gi_params(5.0, 0.0).is_err());
    }

    #[test]
    fn r_one_maps_to_unit_multiplier_exactly() {
        let gi = GenerationInterval::default();
        assert_eq!(r_to_growth(1.0, &gi).unwrap(), 1.0);
    }

    #[test]
    fn default_r0_growth_value() {
        let gi = GenerationInterval::default();
        let m = r_to_growth(3.25, &gi).unwrap();
        assert!((m - 1.295).abs() < 1e-3, "multiplier {m}");
    }

    #[test]
    fn growth_is_monotone_in_r() {
        let gi = GenerationInterval::default();
        let grid = [0.5, 1.0, 2.0, 4.0];
        let values: Vec<f64> = grid.iter().map(|r| r_to_growth(*r, &gi).unwrap()).collect();
        for pair in values.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn growth_rejects_nonpositive_r() {
        let gi = GenerationInterval::default();
        assert!(r_to_growth(0.0, &gi).is_err());
        assert!(r_to_growth(-2.0, &gi).is_err());
    }

    #[test]
    fn growth_to_r_inverts_r_to_growth() {
        let gi = GenerationInterval::default();
        for r in [0.3, 0.9, 1.0, 1.7, 3.25, 5.0] {
            let m = r_to_growth(r, &gi).unwrap();
            let back = growth_to_r(m, &gi).unwrap();
            assert!((back - r).abs() < 1e-10, "r {r} -> {back}");
        }
    }

    #[test]
    fn growth_to_r_rejects_out_of_range() {
        let gi = GenerationInterval::default();
        // ln(m)/rate <= -1  <=>  m <= exp(-rate)
        let too_small = (-gi.rate).exp() * 0.9;
        assert!(growth_to_r(too_small, &gi).is_err());
    }

    #[test]
    fn renewal_pmf_excludes_lag_zero_and_normalizes() {
        let gi = GenerationInterval::default();
        let pmf = gi.renewal_pmf();
        assert_eq!(pmf.len(), 28);
        let total: f64 = pmf.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        // probabilities()[k] is lag k+1; the modal lag should sit near the mean.
        let modal_lag = pmf.argmax() + 1;
        assert!((3..=7).contains(&modal_lag), "modal lag {modal_lag}");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn delay_pmf_always_normalized(
                mean in 0.5f64..40.0,
                dispersion in 0.5f64..30.0,
                truncation in 1usize..64,
            ) {
                let pmf = discretize_delay(&DelaySpec::new(mean, dispersion, truncation).unwrap()).unwrap();
                let total: f64 = pmf.probabilities().iter().sum();
                prop_assert!((total - 1.0).abs() < 1e-12);
                prop_assert!(pmf.probabilities().iter().all(|p| *p >= 0.0));
            }

            #[test]
            fn gi_moment_round_trip(mean in 0.2f64..20.0, sd in 0.2f64..8.0) {
                let gi = gi_params(mean, sd).unwrap();
                // A Gamma(shape, rate) has mean shape/rate and sd sqrt(shape)/rate.
                prop_assert!((gi.shape / gi.rate - mean).abs() < 1e-12);
                prop_assert!((gi.shape.sqrt() / gi.rate - sd).abs() < 1e-12);
            }

            #[test]
            fn unit_r_is_fixed_point(mean in 0.5f64..15.0, sd in 0.2f64..6.0) {
                let gi = gi_params(mean, sd).unwrap();
                prop_assert_eq!(r_to_growth(1.0, &gi).unwrap(), 1.0);
            }
        }
    }
}
