//! Small numeric helpers shared across modules.

pub use statrs::function::gamma::{digamma, ln_gamma};

/// Log PMF of a negative binomial in mean/dispersion form.
///
/// `NB(k; mu, alpha)` with `E = mu` and `Var = mu + mu^2/alpha`. No argument
/// checking; callers validate their own domains.
#[inline]
pub fn nb_ln_pmf_unchecked(k: f64, mu: f64, alpha: f64) -> f64 {
    ln_gamma(k + alpha) - ln_gamma(alpha) - ln_gamma(k + 1.0)
        + alpha * (alpha / (alpha + mu)).ln()
        + k * (mu / (alpha + mu)).ln()
}

/// Log density of `Gamma(shape, rate)` at `x > 0`.
#[inline]
pub fn gamma_ln_pdf(x: f64, shape: f64, rate: f64) -> f64 {
    shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
}

#[inline]
pub fn normal_ln_pdf(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - sd.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

/// Log density of `HalfNormal(sigma)` at `x >= 0`.
#[inline]
pub fn half_normal_ln_pdf(x: f64, sd: f64) -> f64 {
    let z = x / sd;
    -0.5 * z * z - sd.ln() + (2.0 / std::f64::consts::PI).sqrt().ln()
}

pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Unbiased sample variance (denominator `n - 1`).
pub fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

/// Population standard deviation (denominator `n`).
pub fn population_std(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Linearly interpolated quantile (R type 7). `q` in `[0, 1]`; input need not
/// be sorted.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty() && (0.0..=1.0).contains(&q));
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let w = pos - lo as f64;
        sorted[lo] * (1.0 - w) + sorted[hi] * w
    }
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_matches_direct() {
        let v = [-1.0f64, 0.5, 2.0];
        let direct: f64 = v.iter().map(|x| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&v) - direct).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_handles_large_magnitudes() {
        let v = [-1000.0, -1001.0];
        let expected = -1000.0 + (1.0 + (-1.0f64).exp()).ln();
        assert!((log_sum_exp(&v) - expected).abs() < 1e-12);
    }

    #[test]
    fn quantile_endpoints_and_median() {
        let v = [3.0, 1.0, 2.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 3.0);
        assert_eq!(median(&v), 2.0);
    }

    #[test]
    fn population_std_of_two_points() {
        assert!((population_std(&[10.0, 14.0]) - 2.0).abs() < 1e-12);
        assert_eq!(population_std(&[5.0, 5.0]), 0.0);
    }
}
