//! Monthly time-series data model, CSV ingestion, information-variable
//! construction and descriptive diagnostics.

mod csv_io;
mod diagnostics;
mod info;
mod month;
mod series;

pub use csv_io::{ingest_csv, write_panel_csv, write_series_csv, CsvSchema};
pub(crate) use csv_io::format_number;
pub use diagnostics::{descriptive_stats, DiagnosticsReport};
pub use info::{build_info_sets, excess_returns, InfoConfig, InfoSets};
pub use month::Month;
pub use series::{MonthlySeries, Panel};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("unparseable month `{0}` (expected YYYY-MM)")]
    BadMonth(String),
    #[error("missing month {0} (series must have no gaps)")]
    Gap(Month),
    #[error("duplicate month {0}")]
    DuplicateMonth(Month),
    #[error("row {row}: non-numeric value `{value}` in column `{column}`")]
    NonNumeric {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: non-finite value in column `{column}`")]
    NonFinite { row: usize, column: String },
    #[error("column `{0}` not found")]
    UnknownColumn(String),
    #[error("empty series")]
    Empty,
    #[error("series are not aligned: {0}")]
    Misaligned(String),
    #[error("non-positive price at {0}")]
    NonPositivePrice(Month),
    #[error("sample of length {len} too short for window {window}")]
    SampleTooShort { len: usize, window: usize },
    #[error("constant series: higher moments are degenerate")]
    DegenerateMoments,
    #[error("need at least {need} observations, got {got}")]
    TooFewObservations { need: usize, got: usize },
    #[error("csv error: {0}")]
    Csv(#[from] ::csv::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
