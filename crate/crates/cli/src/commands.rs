//! The subcommands: ingest, estimate, breaks, simulate and the bundled
//! report pipeline.

use std::path::Path;

use mktint::breaks::{select_num_breaks, BreakError, BreakFit, SegmentationProblem};
use mktint::data::{
    build_info_sets, descriptive_stats, excess_returns, ingest_csv, CsvSchema,
    DiagnosticsReport, InfoSets, MonthlySeries,
};
use mktint::estimate::{
    fit, standardized_residuals, wald_test, FitResult, Restriction, WaldResult,
};
use mktint::report::{break_report, estimation_report, write_filter_csv, write_step_csv};
use mktint::simulate::{simulate_icapm, simulate_mean_shift, DgpSpec, SimulateError, StepSpec};
use serde::{Deserialize, Serialize};

use crate::config::{require_file, InputSpec, RunConfig};
use crate::io::{
    read_info_csv, read_returns_csv, read_series_csv, write_atomic, write_info_csv, write_json,
    write_returns_csv,
};
use crate::plot::step_overlay_svg;
use crate::AppError;

fn map_break_error(e: BreakError) -> AppError {
    match e {
        BreakError::BadTrim(_) | BreakError::Infeasible { .. } | BreakError::TooShort(_) => {
            AppError::Config(e.to_string())
        }
        other => AppError::Data(mktint::data::DataError::Misaligned(other.to_string())),
    }
}

fn load_raw(config: &RunConfig, path: &Path) -> Result<(Vec<[f64; 2]>, InfoSets), AppError> {
    require_file(path)?;
    let schema = CsvSchema { month_column: "month".into(), rename: Default::default() };
    let panel = ingest_csv(path, &schema).map_err(AppError::Data)?;
    let info = build_info_sets(&panel, &config.info).map_err(AppError::Data)?;

    let series = |name: &str| -> Result<MonthlySeries, AppError> {
        let values = panel.column_values(name).map_err(AppError::Data)?.to_vec();
        MonthlySeries::new(panel.start(), values).map_err(AppError::Data)
    };
    let rf = series(&config.returns.riskfree)?;
    let r_m = excess_returns(
        &series(&config.returns.market_price)?,
        &series(&config.info.local_dividend_yield)?,
        &rf,
    )
    .map_err(AppError::Data)?;
    let r_w = excess_returns(
        &series(&config.returns.world_price)?,
        &series(&config.info.world_dividend_yield)?,
        &rf,
    )
    .map_err(AppError::Data)?;

    // returns start one month after the panel; the instruments consume a
    // further `ver_window` months, so drop that prefix to align.
    let skip = info.start.months_since(&r_m.start());
    if skip < 0 || (r_m.len() as i64 - skip) != info.len() as i64 {
        return Err(AppError::Data(mktint::data::DataError::Misaligned(
            "returns and instruments do not align".into(),
        )));
    }
    let skip = skip as usize;
    let returns: Vec<[f64; 2]> = r_m.values()[skip..]
        .iter()
        .zip(&r_w.values()[skip..])
        .map(|(&m, &w)| [m, w])
        .collect();
    Ok((returns, info))
}

/// Load the dataset named by the config, building it if raw.
pub fn load_dataset(config: &RunConfig) -> Result<(Vec<[f64; 2]>, InfoSets), AppError> {
    match config.input_required()? {
        InputSpec::Raw { path } => load_raw(config, path),
        InputSpec::Prepared { returns, info } => {
            require_file(returns)?;
            require_file(info)?;
            let (r, start) = read_returns_csv(returns)?;
            let info = read_info_csv(info)?;
            if start != info.start || r.len() != info.len() {
                return Err(AppError::Data(mktint::data::DataError::Misaligned(
                    "returns.csv and info.csv do not align".into(),
                )));
            }
            Ok((r, info))
        }
    }
}

#[derive(Debug, Serialize)]
struct IngestReport {
    t: usize,
    start: String,
    end: String,
    market: DiagnosticsReport,
    world: DiagnosticsReport,
}

/// Build (or pass through) the dataset and write it with descriptive
/// statistics of both return series.
pub fn cmd_ingest(config: &RunConfig) -> Result<(), AppError> {
    let (returns, info) = load_dataset(config)?;
    let column = |i: usize| -> Result<DiagnosticsReport, AppError> {
        let s = MonthlySeries::new(info.start, returns.iter().map(|r| r[i]).collect())
            .map_err(AppError::Data)?;
        descriptive_stats(&s, config.lb_lags).map_err(AppError::Data)
    };
    let report = IngestReport {
        t: returns.len(),
        start: info.start.colon_format(),
        end: info.start.add_months(returns.len() as i64 - 1).colon_format(),
        market: column(0)?,
        world: column(1)?,
    };
    write_returns_csv(&config.out.join("returns.csv"), &returns, info.start)?;
    write_info_csv(&config.out.join("info.csv"), &info)?;
    write_json(&config.out.join("diagnostics.json"), &report)?;
    println!("ingested T = {} ({} to {})", report.t, report.start, report.end);
    Ok(())
}

fn run_fit(config: &RunConfig) -> Result<(Vec<[f64; 2]>, InfoSets, FitResult), AppError> {
    let (returns, info) = load_dataset(config)?;
    let result = fit(&returns, &info, &config.optimizer)
        .map_err(|e| AppError::Estimation(e.to_string()))?;
    Ok((returns, info, result))
}

/// Fit the model; write the panel report and the fitted-path CSV.
pub fn cmd_estimate(config: &RunConfig) -> Result<(), AppError> {
    let (_, _, result) = run_fit(config)?;
    let residuals = standardized_residuals(&result.filter, result.filter_start, config.lb_lags)
        .map_err(|e| AppError::Estimation(e.to_string()))?;
    let wald: Vec<WaldResult> = [
        Restriction::WorldPriceConstant,
        Restriction::LocalPriceConstant,
        Restriction::IntegrationConstant,
    ]
    .iter()
    .map(|r| wald_test(&result.theta_hat, &result.robust_cov, &r.selector(), r.label()))
    .collect::<Result<_, _>>()
    .map_err(|e| AppError::Estimation(e.to_string()))?;
    let report = estimation_report(&result, &residuals, &wald);

    write_json(&config.out.join("estimate.json"), &report)?;
    let mut buf = Vec::new();
    write_filter_csv(&result.filter, result.filter_start, &mut buf).map_err(AppError::Data)?;
    write_atomic(&config.out.join("phi.csv"), &buf)?;
    println!(
        "estimated T = {}, loglik = {:.4}, mean integration = {:.3}",
        report.sample.t, report.loglik, report.panel_c.mean_integration
    );
    Ok(())
}

/// Run the break battery on a series (default: the fitted integration
/// path); write the report, the step CSV and the overlay plot.
pub fn cmd_breaks(config: &RunConfig, series: Option<&Path>) -> Result<(), AppError> {
    let default_path = config.out.join("phi.csv");
    let path = series.unwrap_or(&default_path);
    require_file(path)?;
    let y = read_series_csv(path)?;
    let problem = SegmentationProblem::new(
        y.values().to_vec(),
        config.breaks.max_breaks,
        config.breaks.trim,
        Some(y.start()),
    )
    .map_err(map_break_error)?;
    let tests = select_num_breaks(&problem).map_err(map_break_error)?;
    let fit = BreakFit::compute(&problem, tests.selected, config.breaks.level)
        .map_err(map_break_error)?;
    let report = break_report(&problem, &tests, &fit, config.breaks.level);

    write_json(&config.out.join("breaks.json"), &report)?;
    let mut buf = Vec::new();
    write_step_csv(&fit, problem.series(), y.start(), &mut buf).map_err(AppError::Data)?;
    write_atomic(&config.out.join("step.csv"), &buf)?;
    let svg = step_overlay_svg(problem.series(), &fit, problem.start());
    write_atomic(&config.out.join("plot.svg"), svg.as_bytes())?;
    let dates: Vec<String> = report.breaks.iter().filter_map(|b| b.date.clone()).collect();
    println!("breaks: m = {} [{}]", report.m, dates.join(", "));
    Ok(())
}

/// A simulation request: either the full model or a mean-shift series.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimSpec {
    Model(DgpSpec),
    MeanShift(StepSpec),
}

fn map_sim_error(e: SimulateError) -> AppError {
    match e {
        SimulateError::Data(d) => AppError::Data(d),
        other => AppError::Config(other.to_string()),
    }
}

/// Generate a dataset from a JSON spec file.
pub fn cmd_simulate(
    config: &RunConfig,
    spec_path: &Path,
    seed: Option<u64>,
) -> Result<(), AppError> {
    require_file(spec_path)?;
    let text = std::fs::read_to_string(spec_path)?;
    let mut spec: SimSpec = serde_json::from_str(&text)
        .map_err(|e| AppError::Config(format!("{}: {e}", spec_path.display())))?;
    match &mut spec {
        SimSpec::Model(s) => {
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let (returns, info, truth) = simulate_icapm(s).map_err(map_sim_error)?;
            write_returns_csv(&config.out.join("returns.csv"), &returns, info.start)?;
            write_info_csv(&config.out.join("info.csv"), &info)?;
            let mut buf = Vec::new();
            write_filter_csv(&truth, info.start, &mut buf).map_err(AppError::Data)?;
            write_atomic(&config.out.join("truth.csv"), &buf)?;
            println!("simulated model dataset: T = {}", returns.len());
        }
        SimSpec::MeanShift(s) => {
            if let Some(seed) = seed {
                s.seed = seed;
            }
            let y = simulate_mean_shift(s).map_err(map_sim_error)?;
            let mut buf = Vec::new();
            mktint::data::write_series_csv(&y, "phi", &mut buf).map_err(AppError::Data)?;
            write_atomic(&config.out.join("phi.csv"), &buf)?;
            println!("simulated mean-shift series: T = {}", y.len());
        }
    }
    Ok(())
}

/// Run ingest, estimate and breaks in sequence into one directory.
pub fn cmd_report(config: &RunConfig) -> Result<(), AppError> {
    cmd_ingest(config)?;
    let prepared = RunConfig {
        input: Some(InputSpec::Prepared {
            returns: config.out.join("returns.csv"),
            info: config.out.join("info.csv"),
        }),
        ..config.clone()
    };
    cmd_estimate(&prepared)?;
    cmd_breaks(&prepared, None)?;
    Ok(())
}
