//! Multiple-structural-change analysis of a scalar series.
//!
//! Mean-shift model y_t = mu_j + u_t on segments delimited by unknown
//! break dates, estimated by globally SSR-minimal least-squares
//! segmentation (dynamic programming) under the trimming constraint
//! T_i - T_{i-1} >= h = floor(eps T). On top of the segmentation sit
//! the supF(k), UDmax/WDmax and sequential supF(l+1|l) tests, a
//! test-based break-count selection, break-date confidence intervals
//! from the argmax distribution of drifted Brownian motion, and
//! HAC-robust regime means.

mod confidence;
mod critical_values;
mod segmentation;
mod testing;

pub use confidence::{argmax_cdf, argmax_quantile, break_confidence_interval, BreakInterval};
pub use critical_values::CriticalValues;
pub use segmentation::{dp_partition, segment_ssr, Partition, PrefixSums, SegmentationProblem};
pub use testing::{
    regime_means_hac, select_num_breaks, seq_test, sup_f, ud_wd_max, BreakFit, BreakTests,
    RegimeMean, SeqTestOutcome, TestDecision,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BreakError {
    #[error("trimming fraction {0} must lie in (0, 0.5)")]
    BadTrim(f64),
    #[error("infeasible segmentation: {breaks} breaks with minimum segment {h} exceed T = {t}")]
    Infeasible { breaks: usize, h: usize, t: usize },
    #[error("segment index range [{i}, {j}] out of bounds for T = {t}")]
    IndexRange { i: usize, j: usize, t: usize },
    #[error("series too short: {0} observations")]
    TooShort(usize),
    #[error("break index {k} out of range for a fit with {m} breaks")]
    NoSuchBreak { k: usize, m: usize },
    #[error("adjacent regime means are equal; confidence interval undefined")]
    ZeroShift,
    #[error("segment of length {0} too short for a standard error")]
    SegmentTooShort(usize),
}
