//! Latent infection propagation and the negative binomial observation model.
//!
//! Two infection processes are supported: deterministic exponential growth
//! driven by daily multipliers, and a discrete renewal process driven by `R`
//! and a discretized generation interval. Both treat the day-0 value as the
//! initial outbreak size and pad pre-window history with it.

use serde::{Deserialize, Serialize};

use crate::epi::DelayPmf;
use crate::grid::Grid;
use crate::math;
use crate::{Error, Result};

/// Which process links `R` to daily infections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfectionProcess {
    ExponentialGrowth,
    DiscreteRenewal,
}

/// Latent infection series for both streams, plus their initial sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatentInfections {
    pub n_cases: Grid<f64>,
    pub n_deaths: Grid<f64>,
    pub n0_cases: Vec<f64>,
    pub n0_deaths: Vec<f64>,
}

/// Negative binomial dispersions for the two output streams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationParams {
    pub psi_cases: f64,
    pub psi_deaths: f64,
}

impl ObservationParams {
    pub fn new(psi_cases: f64, psi_deaths: f64) -> Result<Self> {
        if !(psi_cases > 0.0) || !(psi_deaths > 0.0) {
            return Err(Error::ParamDomain(format!(
                "dispersions must be positive (got {psi_cases}, {psi_deaths})"
            )));
        }
        Ok(Self {
            psi_cases,
            psi_deaths,
        })
    }
}

/// Propagates infections by daily multipliers: `N_t = m_t * N_{t-1}`.
///
/// `multipliers` holds the transitions: row `k` moves day `k` to day `k+1`,
/// so the returned series has one more day than `multipliers`.
pub fn propagate_growth(n0: &[f64], multipliers: &Grid<f64>) -> Result<Grid<f64>> {
    if n0.len() != multipliers.n_countries() {
        return Err(Error::Shape(format!(
            "{} initial sizes for {} countries",
            n0.len(),
            multipliers.n_countries()
        )));
    }
    if n0.iter().any(|n| !(*n > 0.0)) {
        return Err(Error::ParamDomain("initial sizes must be positive".into()));
    }
    let n_days = multipliers.n_days() + 1;
    let n_countries = multipliers.n_countries();
    let mut out = Grid::zeros(n_days, n_countries);
    for c in 0..n_countries {
        out.set(0, c, n0[c]);
        for t in 1..n_days {
            let prev = *out.get(t - 1, c);
            out.set(t, c, prev * multipliers.get(t - 1, c));
        }
    }
    Ok(out)
}

/// Propagates infections through the discrete renewal process:
/// `N_t = R_t * sum_{tau=1..L} N_{t-tau} * pmf[tau]`.
///
/// `r` holds `R` for days `1..`, row `k` belonging to day `k+1`, matching the
/// [`propagate_growth`] transition layout. `gi_pmf` is indexed from lag 1
/// (see [`crate::epi::GenerationInterval::renewal_pmf`]). History before day
/// 0 is padded with the day-0 size.
pub fn propagate_renewal(n0: &[f64], r: &Grid<f64>, gi_pmf: &DelayPmf) -> Result<Grid<f64>> {
    if n0.len() != r.n_countries() {
        return Err(Error::Shape(format!(
            "{} initial sizes for {} countries",
            n0.len(),
            r.n_countries()
        )));
    }
    if gi_pmf.is_empty() {
        return Err(Error::Shape("renewal GI pmf is empty".into()));
    }
    if n0.iter().any(|n| !(*n > 0.0)) {
        return Err(Error::ParamDomain("initial sizes must be positive".into()));
    }
    let n_days = r.n_days() + 1;
    let n_countries = r.n_countries();
    let pmf = gi_pmf.probabilities();
    let mut out = Grid::zeros(n_days, n_countries);
    for c in 0..n_countries {
        out.set(0, c, n0[c]);
        for t in 1..n_days {
            let mut load = 0.0;
            for (k, w) in pmf.iter().enumerate() {
                let lag = k + 1;
                let past = if lag > t { n0[c] } else { *out.get(t - lag, c) };
                load += past * w;
            }
            out.set(t, c, r.get(t - 1, c) * load);
        }
    }
    Ok(out)
}

/// Convolves an infection series with a reporting delay PMF:
/// `ybar_t = sum_{tau} N_{t-tau} * pmf[tau]`, with pre-window history padded
/// by each country's day-0 value.
pub fn expected_counts(n: &Grid<f64>, delay: &DelayPmf) -> Result<Grid<f64>> {
    if delay.is_empty() {
        return Err(Error::Shape("delay pmf is empty".into()));
    }
    let pmf = delay.probabilities();
    let mut out = Grid::zeros(n.n_days(), n.n_countries());
    for c in 0..n.n_countries() {
        let n0 = *n.get(0, c);
        for t in 0..n.n_days() {
            let mut acc = 0.0;
            for (lag, w) in pmf.iter().enumerate() {
                let past = if lag > t { n0 } else { *n.get(t - lag, c) };
                acc += past * w;
            }
            out.set(t, c, acc);
        }
    }
    Ok(out)
}

/// Log PMF of the negative binomial observation distribution with mean `mu`
/// and dispersion `psi` (variance `mu + mu^2/psi`).
pub fn nb_logpmf(y: u64, mu: f64, psi: f64) -> Result<f64> {
    if !(mu > 0.0) || !(psi > 0.0) {
        return Err(Error::ParamDomain(format!(
            "negative binomial needs mu > 0 and psi > 0 (got {mu}, {psi})"
        )));
    }
    Ok(math::nb_ln_pmf_unchecked(y as f64, mu, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epi::{discretize_delay, DelaySpec};

    #[test]
    fn unit_multipliers_hold_constant() {
        let m = Grid::fill(5, 2, 1.0);
        let n = propagate_growth(&[100.0, 7.0], &m).unwrap();
        for (_, c, v) in n.iter_indexed() {
            assert_eq!(*v, [100.0, 7.0][c]);
        }
    }

    #[test]
    fn two_days_of_growth() {
        let m = Grid::fill(2, 1, 1.2);
        let n = propagate_growth(&[100.0], &m).unwrap();
        assert!((n.get(2, 0) - 144.0).abs() < 1e-10);
    }

    #[test]
    fn growth_matches_log_domain_route() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let m = Grid::from_fn(30, 1, |_, _| rng.random_range(0.8..1.3));
        let n = propagate_growth(&[42.0], &m).unwrap();
        let mut log_n = 42.0f64.ln();
        for t in 1..=30 {
            log_n += m.get(t - 1, 0).ln();
            let rel = (n.get(t, 0) - log_n.exp()).abs() / log_n.exp();
            assert!(rel < 1e-12, "day {t}");
        }
    }

    #[test]
    fn nonpositive_n0_rejected() {
        let m = Grid::fill(2, 1, 1.2);
        assert!(matches!(
            propagate_growth(&[0.0], &m),
            Err(Error::ParamDomain(_))
        ));
    }

    #[test]
    fn delta_gi_renewal_is_geometric() {
        let r = Grid::fill(10, 1, 2.0);
        let pmf = DelayPmf::delta(5, 0); // all mass at lag 1
        let n = propagate_renewal(&[1.0], &r, &pmf).unwrap();
        for t in 0..=10 {
            assert_eq!(*n.get(t, 0), 2.0f64.powi(t as i32), "day {t}");
        }
    }

    #[test]
    fn zero_r_extinguishes() {
        let r = Grid::fill(4, 1, 0.0);
        let pmf = DelayPmf::delta(3, 0);
        let n = propagate_renewal(&[5.0], &r, &pmf).unwrap();
        assert_eq!(*n.get(0, 0), 5.0);
        for t in 1..=4 {
            assert_eq!(*n.get(t, 0), 0.0);
        }
    }

    #[test]
    fn unit_r_delta_gi_is_fixed_point() {
        let r = Grid::fill(6, 1, 1.0);
        let pmf = DelayPmf::delta(4, 0);
        let n = propagate_renewal(&[3.5], &r, &pmf).unwrap();
        for t in 0..=6 {
            assert_eq!(*n.get(t, 0), 3.5);
        }
    }

    #[test]
    fn delta_gi_renewal_equals_growth_bitwise() {
        let r_value = 1.37;
        let days = 50;
        let r = Grid::fill(days, 2, r_value);
        let pmf = DelayPmf::delta(8, 0);
        let renewal = propagate_renewal(&[3.0, 11.0], &r, &pmf).unwrap();
        let growth = propagate_growth(&[3.0, 11.0], &r).unwrap();
        assert_eq!(renewal, growth);
    }

    #[test]
    fn renewal_uses_n0_padding_before_window() {
        // Uniform GI over lags 1..=3; at t=1 the whole lookback is padding.
        let pmf = DelayPmf::from_weights(vec![1.0, 1.0, 1.0]).unwrap();
        let r = Grid::fill(1, 1, 1.5);
        let n = propagate_renewal(&[9.0], &r, &pmf).unwrap();
        assert!((n.get(1, 0) - 1.5 * 9.0).abs() < 1e-12);
    }

    #[test]
    fn delta_delay_is_identity_convolution() {
        let n = Grid::from_fn(6, 2, |t, c| (1 + t * 3 + c) as f64);
        let out = expected_counts(&n, &DelayPmf::delta(1, 0)).unwrap();
        assert_eq!(out, n);
    }

    #[test]
    fn constant_series_is_convolution_fixed_point() {
        let n = Grid::fill(40, 1, 123.0);
        let delay = discretize_delay(&DelaySpec::case_default()).unwrap();
        let out = expected_counts(&n, &delay).unwrap();
        for (_, _, v) in out.iter_indexed() {
            assert!((v - 123.0).abs() < 1e-10);
        }
    }

    #[test]
    fn convolution_matches_double_loop_oracle() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = Grid::from_fn(25, 3, |_, _| rng.random_range(1.0..500.0));
        let weights: Vec<f64> = (0..9).map(|_| rng.random_range(0.01..1.0)).collect();
        let delay = DelayPmf::from_weights(weights).unwrap();
        let out = expected_counts(&n, &delay).unwrap();
        for c in 0..3 {
            for t in 0..25 {
                let mut want = 0.0;
                for (lag, w) in delay.probabilities().iter().enumerate() {
                    let past = if lag > t { *n.get(0, c) } else { *n.get(t - lag, c) };
                    want += past * w;
                }
                assert!((out.get(t, c) - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn convolution_is_linear_in_n() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let a = Grid::from_fn(15, 1, |_, _| rng.random_range(1.0..10.0));
        let b = Grid::from_fn(15, 1, |_, _| rng.random_range(1.0..10.0));
        let sum = Grid::from_fn(15, 1, |t, c| a.get(t, c) + 2.0 * b.get(t, c));
        let delay = DelayPmf::from_weights(vec![0.2, 0.5, 0.3]).unwrap();
        let via_sum = expected_counts(&sum, &delay).unwrap();
        let ya = expected_counts(&a, &delay).unwrap();
        let yb = expected_counts(&b, &delay).unwrap();
        for (t, c, v) in via_sum.iter_indexed() {
            assert!((v - (ya.get(t, c) + 2.0 * yb.get(t, c))).abs() < 1e-10);
        }
    }

    #[test]
    fn nb_zero_count_closed_form() {
        // P(0) = (psi/(psi+mu))^psi; with mu = psi = 1 that is 1/2.
        let lp = nb_logpmf(0, 1.0, 1.0).unwrap();
        assert!((lp + 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn nb_variance_matches_parameterization() {
        // Var = mu + mu^2/psi = 30 for mu = 10, psi = 5; check by summation.
        let (mu, psi) = (10.0, 5.0);
        let mut mean = 0.0;
        let mut second = 0.0;
        let mut mass = 0.0;
        for y in 0..4000u64 {
            let p = nb_logpmf(y, mu, psi).unwrap().exp();
            mean += y as f64 * p;
            second += (y as f64) * (y as f64) * p;
            mass += p;
        }
        assert!((mass - 1.0).abs() < 1e-10);
        assert!((mean - mu).abs() < 1e-8);
        assert!((second - mean * mean - 30.0).abs() < 1e-6);
    }

    #[test]
    fn nb_mass_normalizes() {
        let total: f64 = (0..10_000u64)
            .map(|y| nb_logpmf(y, 5.0, 2.0).unwrap().exp())
            .sum();
        assert!((total - 1.0).abs() < 1e-8);
    }

    #[test]
    fn nb_mode_sits_near_mean() {
        let lps: Vec<f64> = (0..200u64).map(|y| nb_logpmf(y, 50.0, 10.0).unwrap()).collect();
        let argmax = lps
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert!((argmax as i64 - 50).abs() <= 6, "mode {argmax}");
    }

    #[test]
    fn nb_matches_statrs_parameterization() {
        use statrs::distribution::{Discrete, NegativeBinomial};
        let (mu, psi) = (17.3, 4.2);
        let reference = NegativeBinomial::new(psi, psi / (psi + mu)).unwrap();
        for y in [0u64, 1, 5, 17, 60] {
            let ours = nb_logpmf(y, mu, psi).unwrap();
            let theirs = reference.ln_pmf(y);
            assert!((ours - theirs).abs() < 1e-10, "y={y}: {ours} vs {theirs}");
        }
    }

    #[test]
    fn nb_rejects_bad_domain() {
        assert!(nb_logpmf(1, 0.0, 1.0).is_err());
        assert!(nb_logpmf(1, 1.0, -2.0).is_err());
    }
}
