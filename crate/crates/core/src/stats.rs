//! Shared statistical helpers: distribution tails and long-run variance.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Upper-tail probability of a chi-squared distribution.
pub fn chi2_sf(statistic: f64, df: usize) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(df as f64).expect("df > 0");
    dist.sf(statistic).clamp(0.0, 1.0)
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    let dist = Normal::new(0.0, 1.0).unwrap();
    dist.cdf(x)
}

/// Significance marker following the usual 1% / 5% / 10% convention:
/// `*` at 1%, `**` at 5%, `***` at 10%, empty otherwise.
pub fn significance_stars(p_value: f64) -> &'static str {
    if p_value <= 0.01 {
        "*"
    } else if p_value <= 0.05 {
        "**"
    } else if p_value <= 0.10 {
        "***"
    } else {
        ""
    }
}

/// Automatic Bartlett-kernel bandwidth, floor(4 (n/100)^{2/9}).
pub fn bartlett_bandwidth(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// Bartlett-kernel (Newey–West) long-run variance of a series around its
/// sample mean: gamma_0 + 2 sum_{j<=bw} (1 - j/(bw+1)) gamma_j.
pub fn long_run_variance(x: &[f64], bandwidth: usize) -> f64 {
    let n = x.len();
    assert!(n >= 2, "long-run variance needs at least 2 observations");
    let mean = x.iter().sum::<f64>() / n as f64;
    let gamma = |j: usize| -> f64 {
        (j..n)
            .map(|t| (x[t] - mean) * (x[t - j] - mean))
            .sum::<f64>()
            / n as f64
    };
    let mut lrv = gamma(0);
    let bw = bandwidth.min(n - 1);
    for j in 1..=bw {
        let weight = 1.0 - j as f64 / (bw as f64 + 1.0);
        lrv += 2.0 * weight * gamma(j);
    }
    lrv.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn chi2_tail_known_values() {
        // P(chi2(1) > 4) = 2 * Phi(-2)
        assert_relative_eq!(chi2_sf(4.0, 1), 2.0 * normal_cdf(-2.0), epsilon = 1e-10);
        assert_eq!(chi2_sf(0.0, 2), 1.0);
        // chi2(2) tail is exp(-x/2)
        assert_relative_eq!(chi2_sf(5.99, 2), (-5.99_f64 / 2.0).exp(), epsilon = 1e-10);
    }

    #[test]
    fn stars_follow_thresholds() {
        assert_eq!(significance_stars(0.005), "*");
        assert_eq!(significance_stars(0.03), "**");
        assert_eq!(significance_stars(0.08), "***");
        assert_eq!(significance_stars(0.2), "");
    }

    #[test]
    fn bandwidth_formula() {
        assert_eq!(bartlett_bandwidth(100), 4);
        assert_eq!(bartlett_bandwidth(24), 2);
        assert_eq!(bartlett_bandwidth(500), 5);
    }

    #[test]
    fn lrv_of_iid_matches_variance_at_zero_bandwidth() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let var = x.iter().map(|v| (v - 3.0_f64).powi(2)).sum::<f64>() / 5.0;
        assert_relative_eq!(long_run_variance(&x, 0), var, epsilon = 1e-12);
    }
}
