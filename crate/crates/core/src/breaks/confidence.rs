//! Break-date confidence intervals from the argmax distribution of
//! two-sided Brownian motion with triangular drift.
//!
//! For a mean shift of size D at an estimated date, (D/s)^2 (T_hat - T0)
//! converges to V = argmax_s { W(s) - |s|/2 }, whose distribution
//! function has the closed form (x >= 0)
//!
//!   G(x) = 1 + sqrt(x / 2pi) e^{-x/8}
//!            - (x + 5)/2 * Phi(-sqrt(x)/2)
//!            + 3/2 * e^x * Phi(-3 sqrt(x)/2)
//!
//! with G(-x) = 1 - G(x). Quantiles are obtained by bisection, never
//! hard-coded.

use std::sync::OnceLock;

use serde::Serialize;

use crate::data::Month;
use crate::stats::{bartlett_bandwidth, long_run_variance, normal_cdf};

use super::segmentation::Partition;
use super::BreakError;

/// Distribution function of the argmax of W(s) - |s|/2.
pub fn argmax_cdf(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - argmax_cdf(-x);
    }
    let sqrt_x = x.sqrt();
    let g = 1.0 + (x / (2.0 * std::f64::consts::PI)).sqrt() * (-x / 8.0).exp()
        - 0.5 * (x + 5.0) * normal_cdf(-0.5 * sqrt_x)
        + 1.5 * exp_times_cdf(x, -1.5 * sqrt_x);
    g.clamp(0.0, 1.0)
}

/// e^x * Phi(t) without overflow for large x (t very negative there).
fn exp_times_cdf(x: f64, t: f64) -> f64 {
    let phi = normal_cdf(t);
    if phi == 0.0 {
        // asymptotic Phi(t) ~ phi(t)/|t|: e^x * phi(t) / |t|
        let log_term = x - 0.5 * t * t - 0.5 * (2.0 * std::f64::consts::PI).ln() - t.abs().ln();
        return log_term.exp();
    }
    x.exp() * phi
}

/// Upper quantile of the argmax distribution: the c with G(c) = p.
pub fn argmax_quantile(p: f64) -> f64 {
    assert!((0.5..1.0).contains(&p), "quantile must be in [0.5, 1)");
    if p == 0.975 {
        static C975: OnceLock<f64> = OnceLock::new();
        return *C975.get_or_init(|| bisect_quantile(0.975));
    }
    bisect_quantile(p)
}

fn bisect_quantile(p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 500.0);
    debug_assert!(argmax_cdf(hi) > p);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if argmax_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A confidence interval around one break date.
#[derive(Debug, Clone, Serialize)]
pub struct BreakInterval {
    /// The break date (1-based observation count ending the regime).
    pub date: usize,
    pub lower: usize,
    pub upper: usize,
    pub half_width: usize,
    pub month: Option<Month>,
    pub lower_month: Option<Month>,
    pub upper_month: Option<Month>,
}

/// Confidence interval for the k-th break (1-based) of a fitted
/// partition: half-width ceil(c * s^2 / D^2), floored at one period,
/// where D is the mean shift and s^2 the HAC long-run variance of the
/// residuals of the two adjacent regimes.
pub fn break_confidence_interval(
    partition: &Partition,
    y: &[f64],
    k: usize,
    level: f64,
    start: Option<Month>,
) -> Result<BreakInterval, BreakError> {
    let m = partition.dates.len();
    if k == 0 || k > m {
        return Err(BreakError::NoSuchBreak { k, m });
    }
    let date = partition.dates[k - 1];
    let delta = partition.means[k] - partition.means[k - 1];
    if delta == 0.0 {
        return Err(BreakError::ZeroShift);
    }

    // residuals local to the break: the two adjacent regimes
    let seg_start = if k >= 2 { partition.dates[k - 2] } else { 0 };
    let seg_end = if k < m { partition.dates[k] } else { y.len() };
    let residuals: Vec<f64> = (seg_start..seg_end)
        .map(|t| {
            let mu = if t < date {
                partition.means[k - 1]
            } else {
                partition.means[k]
            };
            y[t] - mu
        })
        .collect();
    let sigma2 = long_run_variance(&residuals, bartlett_bandwidth(residuals.len()));

    let c = argmax_quantile(0.5 + level / 2.0);
    let half_width = ((c * sigma2 / (delta * delta)).ceil() as usize).max(1);

    let lower = date.saturating_sub(half_width);
    let upper = date + half_width;
    let month_of = |d: usize| start.map(|s| s.add_months(d as i64 - 1));
    Ok(BreakInterval {
        date,
        lower,
        upper,
        half_width,
        month: month_of(date),
        lower_month: month_of(lower),
        upper_month: month_of(upper),
    })
}
