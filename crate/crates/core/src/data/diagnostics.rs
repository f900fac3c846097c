//! Descriptive and residual diagnostics: moments, Jarque–Bera, Ljung–Box.

use serde::Serialize;

use crate::stats::chi2_sf;

use super::{DataError, MonthlySeries};

/// Panel-C style diagnostics for a single series.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticsReport {
    pub n: usize,
    /// Moment-estimator sample skewness m3 / m2^{3/2}.
    pub skewness: f64,
    /// Excess kurtosis m4 / m2^2 - 3.
    pub excess_kurtosis: f64,
    /// JB = T (S^2/6 + K^2/24), chi-squared(2) under normality.
    pub jarque_bera: TestStat,
    /// Q(L) = T(T+2) sum_{k<=L} rho_k^2 / (T-k), chi-squared(L).
    pub ljung_box: LjungBox,
}

#[derive(Debug, Clone, Serialize)]
pub struct TestStat {
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LjungBox {
    pub lags: usize,
    pub statistic: f64,
    pub p_value: f64,
}

/// Compute skewness, excess kurtosis, Jarque–Bera and Ljung–Box Q.
pub fn descriptive_stats(x: &MonthlySeries, lb_lags: usize) -> Result<DiagnosticsReport, DataError> {
    let values = x.values();
    let n = values.len();
    if n < lb_lags + 1 {
        return Err(DataError::TooFewObservations { need: lb_lags + 1, got: n });
    }
    let t = n as f64;
    let mean = values.iter().sum::<f64>() / t;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= t;
    m3 /= t;
    m4 /= t;
    if m2 <= 0.0 {
        return Err(DataError::DegenerateMoments);
    }
    let skewness = m3 / m2.powf(1.5);
    let excess_kurtosis = m4 / (m2 * m2) - 3.0;
    let jb = t * (skewness * skewness / 6.0 + excess_kurtosis * excess_kurtosis / 24.0);

    let q = ljung_box_statistic(values, lb_lags);

    Ok(DiagnosticsReport {
        n,
        skewness,
        excess_kurtosis,
        jarque_bera: TestStat {
            statistic: jb,
            p_value: chi2_sf(jb, 2),
        },
        ljung_box: LjungBox {
            lags: lb_lags,
            statistic: q,
            p_value: chi2_sf(q, lb_lags),
        },
    })
}

fn ljung_box_statistic(x: &[f64], lags: usize) -> f64 {
    let n = x.len();
    let t = n as f64;
    let mean = x.iter().sum::<f64>() / t;
    let denom: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    if denom == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for k in 1..=lags {
        let num: f64 = (k..n).map(|i| (x[i] - mean) * (x[i - k] - mean)).sum();
        let rho = num / denom;
        q += rho * rho / (t - k as f64);
    }
    t * (t + 2.0) * q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Month;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn series(vals: Vec<f64>) -> MonthlySeries {
        MonthlySeries::new("1988-01".parse::<Month>().unwrap(), vals).unwrap()
    }

    #[test]
    fn symmetric_sample_moments() {
        let report = descriptive_stats(&series(vec![1.0, 2.0, 3.0, 4.0, 5.0]), 2).unwrap();
        assert_relative_eq!(report.skewness, 0.0, epsilon = 1e-14);
        assert_relative_eq!(report.excess_kurtosis, -1.3, epsilon = 1e-12);
        assert!(report.jarque_bera.statistic >= 0.0);
    }

    #[test]
    fn constant_series_is_degenerate() {
        let err = descriptive_stats(&series(vec![2.0; 20]), 4).unwrap_err();
        assert!(matches!(err, DataError::DegenerateMoments));
    }

    #[test]
    fn gaussian_sample_looks_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let vals: Vec<f64> = (0..10_000).map(|_| rng.sample(StandardNormal)).collect();
        let report = descriptive_stats(&series(vals), 12).unwrap();
        assert!(report.skewness.abs() < 0.1);
        assert!(report.excess_kurtosis.abs() < 0.2);
        assert!(report.jarque_bera.p_value > 0.01);
    }

    #[test]
    fn ljung_box_matches_brute_force_on_impulse() {
        // A single impulse in a zero series has analytically simple
        // autocorrelations; compare against a direct evaluation.
        let mut vals = vec![0.0; 50];
        vals[10] = 1.0;
        let lags = 5;
        let report = descriptive_stats(&series(vals.clone()), lags).unwrap();

        let n = vals.len() as f64;
        let mean = 1.0 / n;
        let denom: f64 = vals.iter().map(|v| (v - mean).powi(2)).sum();
        let mut expected = 0.0;
        for k in 1..=lags {
            let num: f64 = (k..vals.len())
                .map(|i| (vals[i] - mean) * (vals[i - k] - mean))
                .sum();
            let rho = num / denom;
            expected += rho * rho / (n - k as f64);
        }
        expected *= n * (n + 2.0);
        assert_relative_eq!(report.ljung_box.statistic, expected, epsilon = 1e-12);
    }

    #[test]
    fn moments_are_affine_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vals: Vec<f64> = (0..200).map(|_| rng.sample(StandardNormal)).collect();
        let shifted: Vec<f64> = vals.iter().map(|v| 3.5 * v - 10.0).collect();
        let a = descriptive_stats(&series(vals), 4).unwrap();
        let b = descriptive_stats(&series(shifted), 4).unwrap();
        assert_relative_eq!(a.skewness, b.skewness, epsilon = 1e-10);
        assert_relative_eq!(a.excess_kurtosis, b.excess_kurtosis, epsilon = 1e-10);
    }
}
