//! Run configuration loaded from a single JSON file.

use std::path::{Path, PathBuf};

use mktint::data::InfoConfig;
use mktint::estimate::FitConfig;
use serde::{Deserialize, Serialize};

use crate::AppError;

/// Where the dataset comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    /// One raw monthly CSV; instruments and excess returns are
    /// constructed from its columns.
    Raw { path: PathBuf },
    /// Pre-built `returns.csv` + `info.csv` (as written by `ingest` or
    /// `simulate`).
    Prepared { returns: PathBuf, info: PathBuf },
}

/// Columns used to build the two excess-return series from a raw panel.
/// Dividend yields and the risk-free rate are annualized decimal
/// fractions; the yield columns are shared with the instrument set.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ReturnColumns {
    pub market_price: String,
    pub world_price: String,
    pub riskfree: String,
}

impl Default for ReturnColumns {
    fn default() -> Self {
        Self {
            market_price: "market_price".into(),
            world_price: "world_price".into(),
            riskfree: "eurodollar".into(),
        }
    }
}

/// Break-detection settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct BreaksConfig {
    pub max_breaks: usize,
    /// Minimum segment length as a fraction of the sample.
    pub trim: f64,
    /// Confidence level for break-date intervals.
    pub level: f64,
}

impl Default for BreaksConfig {
    fn default() -> Self {
        Self { max_breaks: 5, trim: 0.10, level: 0.95 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// Dataset location; optional so `simulate` can run from a config
    /// that only names an output directory.
    #[serde(default)]
    pub input: Option<InputSpec>,
    #[serde(default)]
    pub info: InfoConfig,
    #[serde(default)]
    pub returns: ReturnColumns,
    #[serde(default)]
    pub optimizer: FitConfig,
    #[serde(default)]
    pub breaks: BreaksConfig,
    /// Ljung-Box lags for residual diagnostics.
    #[serde(default = "default_lb_lags")]
    pub lb_lags: usize,
    pub out: PathBuf,
}

fn default_lb_lags() -> usize {
    12
}

impl RunConfig {
    pub fn load(path: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| AppError::Config(format!("{}: {e}", path.display())))?;
        if let Some(seed) = seed {
            config.optimizer.seed = seed;
        }
        if let Some(out) = out {
            config.out = out;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), AppError> {
        let b = &self.breaks;
        if !(b.trim > 0.0 && b.trim <= 0.25) {
            return Err(AppError::Config(format!(
                "breaks.trim must lie in (0, 0.25], got {}",
                b.trim
            )));
        }
        if b.max_breaks < 1 {
            return Err(AppError::Config("breaks.max_breaks must be >= 1".into()));
        }
        if !(b.level > 0.0 && b.level < 1.0) {
            return Err(AppError::Config(format!(
                "breaks.level must lie in (0, 1), got {}",
                b.level
            )));
        }
        if self.lb_lags == 0 {
            return Err(AppError::Config("lb_lags must be >= 1".into()));
        }
        Ok(())
    }

    /// The input spec, required by data-consuming commands.
    pub fn input_required(&self) -> Result<&InputSpec, AppError> {
        self.input
            .as_ref()
            .ok_or_else(|| AppError::Config("config has no \"input\" section".into()))
    }
}

/// Check that a configured input file exists (a config error otherwise).
pub fn require_file(p: &Path) -> Result<(), AppError> {
    if p.is_file() {
        Ok(())
    } else {
        Err(AppError::Config(format!("input file not found: {}", p.display())))
    }
}
