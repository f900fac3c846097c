//! Report assembly: the estimation report (four coefficient/diagnostic
//! panels plus constancy tests), the break report (dates, confidence
//! intervals, regime means, test battery) and the CSV exports behind
//! the plots.

use std::io::Write;

use serde::Serialize;

use crate::breaks::{BreakFit, BreakTests, SegmentationProblem};
use crate::data::format_number;
use crate::data::{DataError, DiagnosticsReport, Month};
use crate::estimate::{CoefficientEstimate, FitResult, StandardizedResiduals, WaldResult};
use crate::icapm::FilterOutput;

/// Summary line for a report header.
#[derive(Debug, Clone, Serialize)]
pub struct SampleInfo {
    pub start: String,
    pub end: String,
    pub t: usize,
}

impl SampleInfo {
    pub fn new(start: Month, t: usize) -> Self {
        Self {
            start: start.colon_format(),
            end: start.add_months(t as i64 - 1).colon_format(),
            t,
        }
    }
}

/// Panel A: the three conditional-mean coefficient blocks.
#[derive(Debug, Clone, Serialize)]
pub struct MeanPanel {
    pub world_price: Vec<CoefficientEstimate>,
    pub local_price: Vec<CoefficientEstimate>,
    pub integration: Vec<CoefficientEstimate>,
}

/// Panel B: covariance-recursion parameters.
#[derive(Debug, Clone, Serialize)]
pub struct VariancePanel {
    pub c_lower: Vec<CoefficientEstimate>,
    pub a: Vec<CoefficientEstimate>,
    pub b: Vec<CoefficientEstimate>,
    /// Persistence a_i a_j + b_i b_j for (m,m), (m,w), (w,w).
    pub persistence: [f64; 3],
    pub stationary: bool,
}

/// Panel C: fitted-path summaries and residual diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryPanel {
    pub mean_integration: f64,
    pub mean_price_world: f64,
    pub mean_price_local: f64,
    pub residual_diagnostics: [DiagnosticsReport; 2],
}

/// The full estimation report.
#[derive(Debug, Clone, Serialize)]
pub struct EstimationReport {
    pub sample: SampleInfo,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    pub panel_a: MeanPanel,
    pub panel_b: VariancePanel,
    pub panel_c: SummaryPanel,
    /// Panel D: Wald constancy tests.
    pub panel_d: Vec<WaldResult>,
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Assemble the estimation report from a fit, its residual diagnostics
/// and the constancy tests.
pub fn estimation_report(
    fit: &FitResult,
    residuals: &StandardizedResiduals,
    wald: &[WaldResult],
) -> EstimationReport {
    let c = &fit.coefficients;
    let block = |range: std::ops::Range<usize>| c[range].to_vec();
    let (p_mm, p_mw, p_ww) = fit.params.persistence();
    EstimationReport {
        sample: SampleInfo::new(fit.filter_start, fit.filter.len()),
        loglik: fit.loglik,
        converged: fit.converged,
        iterations: fit.iterations,
        panel_a: MeanPanel {
            world_price: block(0..5),
            local_price: block(5..9),
            integration: block(9..13),
        },
        panel_b: VariancePanel {
            c_lower: block(13..16),
            a: block(16..18),
            b: block(18..20),
            persistence: [p_mm, p_mw, p_ww],
            stationary: fit.params.is_stationary(),
        },
        panel_c: SummaryPanel {
            mean_integration: mean(&fit.filter.phi),
            mean_price_world: mean(&fit.filter.price_world),
            mean_price_local: mean(&fit.filter.price_local),
            residual_diagnostics: residuals.diagnostics.clone(),
        },
        panel_d: wald.to_vec(),
    }
}

/// Write the fitted-path CSV (the data behind the integration plot).
pub fn write_filter_csv<W: Write>(
    out: &FilterOutput,
    start: Month,
    writer: W,
) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "month", "phi", "price_world", "price_local", "h_m", "h_w", "h_mw", "eps_m", "eps_w",
        "ll",
    ])?;
    for t in 0..out.len() {
        let h = &out.h[t];
        w.write_record([
            start.add_months(t as i64).to_string(),
            format_number(out.phi[t]),
            format_number(out.price_world[t]),
            format_number(out.price_local[t]),
            format_number(h.h_m),
            format_number(h.h_w),
            format_number(h.h_mw),
            format_number(out.eps[t][0]),
            format_number(out.eps[t][1]),
            format_number(out.ll[t]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One estimated break with its confidence interval.
#[derive(Debug, Clone, Serialize)]
pub struct BreakRow {
    /// 1-based observation count at which the regime ends.
    pub index: usize,
    pub date: Option<String>,
    pub ci_lower: Option<String>,
    pub ci_upper: Option<String>,
    pub ci_lower_index: usize,
    pub ci_upper_index: usize,
}

/// One regime with its HAC-robust mean.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeRow {
    pub mean: f64,
    pub se: f64,
    pub len: usize,
    /// "0.471 (0.006)"-style display value.
    pub label: String,
}

/// The full break report.
#[derive(Debug, Clone, Serialize)]
pub struct BreakReport {
    pub sample: SampleInfo,
    pub trim: f64,
    pub max_breaks: usize,
    pub level: f64,
    pub tests: BreakTests,
    pub m: usize,
    pub breaks: Vec<BreakRow>,
    pub regimes: Vec<RegimeRow>,
    pub ssr: f64,
}

/// Assemble the break report from the test battery and the fit at the
/// selected number of breaks.
pub fn break_report(
    problem: &SegmentationProblem,
    tests: &BreakTests,
    fit: &BreakFit,
    level: f64,
) -> BreakReport {
    let start = problem
        .start()
        .unwrap_or_else(|| "0001-01".parse().expect("valid month"));
    let breaks = fit
        .intervals
        .iter()
        .map(|iv| BreakRow {
            index: iv.date,
            date: iv.month.map(|m| m.colon_format()),
            ci_lower: iv.lower_month.map(|m| m.colon_format()),
            ci_upper: iv.upper_month.map(|m| m.colon_format()),
            ci_lower_index: iv.lower,
            ci_upper_index: iv.upper,
        })
        .collect();
    let regimes = fit
        .regimes
        .iter()
        .map(|r| RegimeRow {
            mean: r.mean,
            se: r.se,
            len: r.len,
            label: format!("{:.3} ({:.3})", r.mean, r.se),
        })
        .collect();
    BreakReport {
        sample: SampleInfo::new(start, problem.len()),
        trim: problem.trim(),
        max_breaks: problem.max_breaks(),
        level,
        tests: tests.clone(),
        m: fit.m,
        breaks,
        regimes,
        ssr: fit.ssr,
    }
}

/// Write the series with its fitted step function as a CSV.
pub fn write_step_csv<W: Write>(
    fit: &BreakFit,
    y: &[f64],
    start: Month,
    writer: W,
) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["month", "y", "fitted"])?;
    for (t, &value) in y.iter().enumerate() {
        let regime = fit.dates.iter().filter(|&&d| t >= d).count();
        w.write_record([
            start.add_months(t as i64).to_string(),
            format_number(value),
            format_number(fit.regimes[regime].mean),
        ])?;
    }
    w.flush()?;
    Ok(())
}
