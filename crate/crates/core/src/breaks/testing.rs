//! supF-type tests, break-count selection and HAC regime means.

use serde::Serialize;

use crate::data::Month;
use crate::stats::{bartlett_bandwidth, long_run_variance};

use super::confidence::{break_confidence_interval, BreakInterval};
use super::critical_values::CriticalValues;
use super::segmentation::{dp_partition, segment_ssr, Partition, SegmentationProblem};
use super::BreakError;

/// supF(k): 0 breaks against k, at the globally SSR-minimal break dates.
///
/// F = ((T - (k+1)) / k) * (SSR_0 - SSR_k) / SSR_k, the homoskedastic
/// variant with a single mean regressor. A constant series (both SSRs
/// zero) yields 0 by convention; a perfect fit under k breaks with a
/// non-constant series yields +inf.
pub fn sup_f(problem: &SegmentationProblem, k: usize) -> Result<f64, BreakError> {
    let t = problem.len();
    let prefix = problem.prefix_sums();
    let ssr0 = segment_ssr(&prefix, 0, t - 1)?;
    let ssr_k = dp_partition(problem, k)?.ssr;
    if ssr_k == 0.0 {
        return Ok(if ssr0 == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(((t - (k + 1)) as f64 / k as f64) * (ssr0 - ssr_k) / ssr_k)
}

/// Double-maximum statistics over k = 1..=M.
pub fn ud_wd_max(problem: &SegmentationProblem) -> Result<(f64, f64), BreakError> {
    let cv = CriticalValues::at_5_percent();
    let mut ud = f64::NEG_INFINITY;
    let mut wd = f64::NEG_INFINITY;
    for k in 1..=problem.max_breaks() {
        let f = sup_f(problem, k)?;
        ud = ud.max(f);
        wd = wd.max(cv.wd_weight(k) * f);
    }
    Ok((ud, wd))
}

/// Outcome of the sequential test supF(l+1 | l).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeqTestOutcome {
    Statistic(f64),
    /// No segment is long enough to admit an extra break.
    NotApplicable,
}

/// Sequential test of l breaks against l+1: the maximal single-break F
/// over the l+1 segments implied by the l global break dates.
pub fn seq_test(problem: &SegmentationProblem, l: usize) -> Result<SeqTestOutcome, BreakError> {
    let t = problem.len();
    let h = problem.min_segment();
    let base = dp_partition(problem, l)?;
    let prefix = problem.prefix_sums();

    let mut bounds = vec![0usize];
    bounds.extend(&base.dates);
    bounds.push(t);

    let mut best: Option<f64> = None;
    for w in bounds.windows(2) {
        let (s, e) = (w[0], w[1]); // segment y[s..e)
        let n = e - s;
        if n < 2 * h {
            continue;
        }
        let ssr0 = segment_ssr(&prefix, s, e - 1)?;
        let mut min_ssr1 = f64::INFINITY;
        for d in (s + h)..=(e - h) {
            let ssr1 = segment_ssr(&prefix, s, d - 1)? + segment_ssr(&prefix, d, e - 1)?;
            if ssr1 < min_ssr1 {
                min_ssr1 = ssr1;
            }
        }
        let f = if min_ssr1 == 0.0 {
            if ssr0 == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (n as f64 - 2.0) * (ssr0 - min_ssr1) / min_ssr1
        };
        best = Some(best.map_or(f, |b: f64| b.max(f)));
    }
    Ok(best.map_or(SeqTestOutcome::NotApplicable, SeqTestOutcome::Statistic))
}

/// One test statistic against its 5% critical value.
#[derive(Debug, Clone, Serialize)]
pub struct TestDecision {
    pub statistic: f64,
    pub critical_value: f64,
    pub significant: bool,
}

impl TestDecision {
    fn new(statistic: f64, critical_value: f64) -> Self {
        Self {
            statistic,
            critical_value,
            significant: statistic > critical_value,
        }
    }
}

/// The full test battery and the selected break count.
#[derive(Debug, Clone, Serialize)]
pub struct BreakTests {
    /// supF(k) for k = 1..=M.
    pub sup_f: Vec<TestDecision>,
    pub ud_max: TestDecision,
    pub wd_max: TestDecision,
    /// supF(l+1 | l) for l = 1..; `None` where not applicable.
    pub seq: Vec<Option<TestDecision>>,
    /// Selected number of breaks.
    pub selected: usize,
    /// True when the cap M was reached with the last test significant.
    pub capped: bool,
}

/// Test-based break-count selection.
///
/// If neither UDmax nor WDmax is significant at 5%, no break is
/// retained. Otherwise l grows from 1 while supF(l+1 | l) stays
/// significant; the selected m is the first l at which it is not,
/// capped at M (with a warning when the cap binds).
pub fn select_num_breaks(problem: &SegmentationProblem) -> Result<BreakTests, BreakError> {
    let cv = CriticalValues::at_5_percent();
    let m_max = problem.max_breaks();

    let mut sup = Vec::with_capacity(m_max);
    let mut ud = f64::NEG_INFINITY;
    let mut wd = f64::NEG_INFINITY;
    for k in 1..=m_max {
        let f = sup_f(problem, k)?;
        ud = ud.max(f);
        wd = wd.max(cv.wd_weight(k) * f);
        sup.push(TestDecision::new(f, cv.sup_f(k)));
    }
    let ud_max = TestDecision::new(ud, cv.ud_max);
    let wd_max = TestDecision::new(wd, cv.wd_max);

    // Full battery is always reported, selection or not.
    let mut seq = Vec::new();
    for l in 1..m_max {
        match seq_test(problem, l)? {
            SeqTestOutcome::Statistic(f) => seq.push(Some(TestDecision::new(f, cv.seq(l)))),
            SeqTestOutcome::NotApplicable => seq.push(None),
        }
    }

    let mut selected = 0;
    let mut capped = false;
    if ud_max.significant || wd_max.significant {
        selected = 1;
        for l in 1..m_max {
            match &seq[l - 1] {
                Some(d) if d.significant => selected = l + 1,
                _ => break,
            }
        }
        if selected == m_max {
            // cap may be binding if the last applicable test rejected
            capped = seq
                .last()
                .and_then(|d| d.as_ref())
                .is_some_and(|d| d.significant);
            if capped {
                log::warn!("break count capped at M = {m_max} with the last sequential test still significant");
            }
        }
    }

    Ok(BreakTests {
        sup_f: sup,
        ud_max,
        wd_max,
        seq,
        selected,
        capped,
    })
}

/// A regime mean with its serial-correlation-robust standard error.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeMean {
    pub mean: f64,
    pub se: f64,
    pub len: usize,
}

/// Segment means with Bartlett-kernel HAC standard errors,
/// SE_j = sqrt(lrv_j / n_j) at the automatic bandwidth.
pub fn regime_means_hac(partition: &Partition, y: &[f64]) -> Result<Vec<RegimeMean>, BreakError> {
    let mut bounds = vec![0usize];
    bounds.extend(&partition.dates);
    bounds.push(y.len());
    let mut out = Vec::with_capacity(bounds.len() - 1);
    for w in bounds.windows(2) {
        let seg = &y[w[0]..w[1]];
        let n = seg.len();
        if n < 2 {
            return Err(BreakError::SegmentTooShort(n));
        }
        let mean = seg.iter().sum::<f64>() / n as f64;
        let lrv = long_run_variance(seg, bartlett_bandwidth(n));
        out.push(RegimeMean {
            mean,
            se: (lrv / n as f64).sqrt(),
            len: n,
        });
    }
    Ok(out)
}

/// A complete break analysis: dates, confidence intervals, regime means.
#[derive(Debug, Clone)]
pub struct BreakFit {
    /// Number of breaks.
    pub m: usize,
    /// Break positions: regime j ends after observation `dates[j]`
    /// (1-based observation counts).
    pub dates: Vec<usize>,
    /// Calendar month of each break, when the series carries a start.
    pub months: Vec<Option<Month>>,
    /// 95% confidence interval per break date.
    pub intervals: Vec<BreakInterval>,
    /// Regime means with HAC standard errors.
    pub regimes: Vec<RegimeMean>,
    /// Total sum of squared residuals of the segmentation.
    pub ssr: f64,
}

impl BreakFit {
    /// Segment the series with exactly `m` breaks and attach intervals
    /// and HAC regime means.
    pub fn compute(
        problem: &SegmentationProblem,
        m: usize,
        level: f64,
    ) -> Result<Self, BreakError> {
        let partition = dp_partition(problem, m)?;
        let regimes = regime_means_hac(&partition, problem.series())?;
        let mut intervals = Vec::with_capacity(m);
        for k in 1..=m {
            intervals.push(break_confidence_interval(
                &partition,
                problem.series(),
                k,
                level,
                problem.start(),
            )?);
        }
        // break "date" = last month of the regime, i.e. observation dates[k]
        let months = partition
            .dates
            .iter()
            .map(|&d| problem.month_at(d - 1))
            .collect();
        Ok(Self {
            m,
            dates: partition.dates,
            months,
            intervals,
            regimes,
            ssr: partition.ssr,
        })
    }
}
