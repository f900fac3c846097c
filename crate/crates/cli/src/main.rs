//! Command-line front-end: ingest, estimate, breaks, simulate, and a
//! bundled report pipeline. Exit codes: 0 success, 2 configuration
//! error, 3 data error, 4 estimation failure.

mod commands;
mod config;
mod io;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::RunConfig;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(#[from] mktint::data::DataError),
    #[error("estimation failed: {0}")]
    Estimation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) => 2,
            AppError::Data(_) | AppError::Io(_) => 3,
            AppError::Estimation(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(name = "mktint", about = "Time-varying market-integration estimation and break analysis", version)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true, default_value = "config.json")]
    config: PathBuf,
    /// Override the optimizer / simulation seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the aligned dataset and write descriptive statistics.
    Ingest,
    /// Fit the model; write the panel report and fitted paths.
    Estimate,
    /// Detect structural breaks in a series (default: the fitted
    /// integration path).
    Breaks {
        /// CSV with a month column and the series (column `phi` if present).
        #[arg(long)]
        series: Option<PathBuf>,
    },
    /// Generate a synthetic dataset from a JSON spec.
    Simulate {
        /// Simulation spec file.
        #[arg(long)]
        spec: PathBuf,
    },
    /// Run ingest, estimate and breaks into one directory.
    Report,
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let config = RunConfig::load(&cli.config, cli.seed, cli.out.clone())?;
    match &cli.command {
        Command::Ingest => commands::cmd_ingest(&config),
        Command::Estimate => commands::cmd_estimate(&config),
        Command::Breaks { series } => commands::cmd_breaks(&config, series.as_deref()),
        Command::Simulate { spec } => commands::cmd_simulate(&config, spec, cli.seed),
        Command::Report => commands::cmd_report(&config),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
