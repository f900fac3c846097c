//! Least-squares segmentation by dynamic programming.
//!
//! Segment costs are within-segment sums of squared deviations from the
//! segment mean, computed in O(1) from prefix sums; the DP minimizes the
//! total SSR over all admissible break placements in O(M T^2).

use crate::data::Month;

use super::BreakError;

/// A series to segment, with its trimming constraint.
#[derive(Debug, Clone)]
pub struct SegmentationProblem {
    y: Vec<f64>,
    max_breaks: usize,
    trim: f64,
    h: usize,
    /// Month of y[0]; used to report break dates as calendar months.
    start: Option<Month>,
}

impl SegmentationProblem {
    pub fn new(
        y: Vec<f64>,
        max_breaks: usize,
        trim: f64,
        start: Option<Month>,
    ) -> Result<Self, BreakError> {
        if !(trim > 0.0 && trim < 0.5) {
            return Err(BreakError::BadTrim(trim));
        }
        let t = y.len();
        if t < 2 {
            return Err(BreakError::TooShort(t));
        }
        let h = ((trim * t as f64).floor() as usize).max(1);
        if (max_breaks + 1) * h > t {
            return Err(BreakError::Infeasible { breaks: max_breaks, h, t });
        }
        Ok(Self { y, max_breaks, trim, h, start })
    }

    pub fn series(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn max_breaks(&self) -> usize {
        self.max_breaks
    }

    pub fn trim(&self) -> f64 {
        self.trim
    }

    /// Minimum admissible segment length h = floor(trim * T).
    pub fn min_segment(&self) -> usize {
        self.h
    }

    pub fn start(&self) -> Option<Month> {
        self.start
    }

    pub fn month_at(&self, index: usize) -> Option<Month> {
        self.start.map(|s| s.add_months(index as i64))
    }

    pub fn prefix_sums(&self) -> PrefixSums {
        PrefixSums::new(&self.y)
    }
}

/// Prefix sums of y and y^2 for O(1) segment costs.
#[derive(Debug, Clone)]
pub struct PrefixSums {
    s1: Vec<f64>,
    s2: Vec<f64>,
}

impl PrefixSums {
    pub fn new(y: &[f64]) -> Self {
        let mut s1 = Vec::with_capacity(y.len() + 1);
        let mut s2 = Vec::with_capacity(y.len() + 1);
        s1.push(0.0);
        s2.push(0.0);
        for &v in y {
            s1.push(s1.last().unwrap() + v);
            s2.push(s2.last().unwrap() + v * v);
        }
        Self { s1, s2 }
    }

    pub fn len(&self) -> usize {
        self.s1.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// SSR of the segment y[i..=j] around its own mean (0-based, inclusive).
pub fn segment_ssr(prefix: &PrefixSums, i: usize, j: usize) -> Result<f64, BreakError> {
    let t = prefix.len();
    if i > j || j >= t {
        return Err(BreakError::IndexRange { i, j, t });
    }
    let n = (j - i + 1) as f64;
    let sum = prefix.s1[j + 1] - prefix.s1[i];
    let sumsq = prefix.s2[j + 1] - prefix.s2[i];
    Ok((sumsq - sum * sum / n).max(0.0))
}

fn segment_mean(prefix: &PrefixSums, i: usize, j: usize) -> f64 {
    (prefix.s1[j + 1] - prefix.s1[i]) / (j - i + 1) as f64
}

/// A segmentation of the series into m+1 regimes.
#[derive(Debug, Clone)]
pub struct Partition {
    /// Break positions T_1 < ... < T_m: y[..=T_k - 1] ends regime k
    /// (1-based last index of each regime except the final one).
    pub dates: Vec<usize>,
    /// Sample mean of each regime.
    pub means: Vec<f64>,
    /// Total sum of squared residuals.
    pub ssr: f64,
}

/// Globally SSR-minimal placement of exactly `m` breaks.
///
/// Ties are broken toward the lexicographically smallest date vector.
pub fn dp_partition(problem: &SegmentationProblem, m: usize) -> Result<Partition, BreakError> {
    let t = problem.len();
    let h = problem.min_segment();
    if (m + 1) * h > t {
        return Err(BreakError::Infeasible { breaks: m, h, t });
    }
    let prefix = problem.prefix_sums();
    if m == 0 {
        return Ok(Partition {
            dates: vec![],
            means: vec![segment_mean(&prefix, 0, t - 1)],
            ssr: segment_ssr(&prefix, 0, t - 1)?,
        });
    }

    // suffix[k][i]: minimal SSR of splitting y[i..] into k+1 admissible
    // segments; choice[k][i]: smallest last index of the first segment
    // achieving it. Reconstructing from the front with the smallest
    // admissible choice at every level yields the lexicographically
    // smallest optimal date vector.
    let mut suffix = vec![vec![f64::INFINITY; t + 1]; m + 1];
    let mut choice = vec![vec![usize::MAX; t + 1]; m + 1];
    for i in 0..t {
        if t - i >= h {
            suffix[0][i] = segment_ssr(&prefix, i, t - 1)?;
        }
    }
    for k in 1..=m {
        for i in 0..t {
            let remaining = t - i;
            if remaining < (k + 1) * h {
                continue;
            }
            // first segment is y[i..=j]; the rest start at j+1
            let mut best = f64::INFINITY;
            let mut best_j = usize::MAX;
            for j in (i + h - 1)..=(t - 1 - k * h) {
                let tail = suffix[k - 1][j + 1];
                if tail.is_finite() {
                    let cost = segment_ssr(&prefix, i, j)? + tail;
                    if cost < best {
                        best = cost;
                        best_j = j;
                    }
                }
            }
            suffix[k][i] = best;
            choice[k][i] = best_j;
        }
    }

    let ssr = suffix[m][0];
    if !ssr.is_finite() {
        return Err(BreakError::Infeasible { breaks: m, h, t });
    }
    let mut dates = Vec::with_capacity(m);
    let mut means = Vec::with_capacity(m + 1);
    let mut i = 0;
    for k in (1..=m).rev() {
        let j = choice[k][i];
        means.push(segment_mean(&prefix, i, j));
        dates.push(j + 1); // 1-based count of observations in regimes so far
        i = j + 1;
    }
    means.push(segment_mean(&prefix, i, t - 1));
    Ok(Partition { dates, means, ssr })
}
