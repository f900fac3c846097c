//! File plumbing: atomic writes and the prepared-dataset format
//! (`returns.csv` with the two excess-return columns, `info.csv` with
//! the ten constructed instruments; constants are implicit).

use std::path::Path;

use mktint::data::{ingest_csv, CsvSchema, DataError, InfoSets, Month, MonthlySeries, Panel};
use serde::Serialize;

use crate::AppError;

/// Instrument column names in `info.csv`, in matrix order
/// (global, local, integration), constants omitted.
pub const INFO_COLUMNS: [&str; 10] = [
    "wdy", "dustp", "usdp", "dwir", "ldy", "dlir", "dip", "ddy", "dir", "ver",
];

/// Write `bytes` to `path` via a temporary file in the same directory,
/// so a re-run replaces the output atomically.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, bytes)?;
    tmp.persist(path).map_err(|e| AppError::Io(e.error))?;
    Ok(())
}

/// Serialize as pretty JSON (trailing newline) and write atomically.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), AppError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| AppError::Estimation(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn month_schema() -> CsvSchema {
    CsvSchema { month_column: "month".into(), rename: Default::default() }
}

/// Write the aligned excess-return pair.
pub fn write_returns_csv(path: &Path, returns: &[[f64; 2]], start: Month) -> Result<(), AppError> {
    let col = |i: usize| MonthlySeries::new(start, returns.iter().map(|r| r[i]).collect());
    let panel = Panel::new(vec![
        ("r_m".into(), col(0).map_err(AppError::Data)?),
        ("r_w".into(), col(1).map_err(AppError::Data)?),
    ])
    .map_err(AppError::Data)?;
    let mut buf = Vec::new();
    mktint::data::write_panel_csv(&panel, &mut buf).map_err(AppError::Data)?;
    write_atomic(path, &buf)
}

/// Read the aligned excess-return pair.
pub fn read_returns_csv(path: &Path) -> Result<(Vec<[f64; 2]>, Month), AppError> {
    let panel = ingest_csv(path, &month_schema()).map_err(AppError::Data)?;
    let r_m = panel.column_values("r_m").map_err(AppError::Data)?;
    let r_w = panel.column_values("r_w").map_err(AppError::Data)?;
    let returns = r_m.iter().zip(r_w).map(|(&m, &w)| [m, w]).collect();
    Ok((returns, panel.start()))
}

/// Write the instrument matrices (constants dropped).
pub fn write_info_csv(path: &Path, info: &InfoSets) -> Result<(), AppError> {
    let t = info.len();
    let column = |pick: &dyn Fn(usize) -> f64| -> Result<MonthlySeries, DataError> {
        MonthlySeries::new(info.start, (0..t).map(pick).collect())
    };
    let g = &info.z_global;
    let l = &info.z_local;
    let s = &info.z_integration;
    let pickers: Vec<(&str, Box<dyn Fn(usize) -> f64>)> = vec![
        ("wdy", Box::new(|k| g[k][1])),
        ("dustp", Box::new(|k| g[k][2])),
        ("usdp", Box::new(|k| g[k][3])),
        ("dwir", Box::new(|k| g[k][4])),
        ("ldy", Box::new(|k| l[k][1])),
        ("dlir", Box::new(|k| l[k][2])),
        ("dip", Box::new(|k| l[k][3])),
        ("ddy", Box::new(|k| s[k][1])),
        ("dir", Box::new(|k| s[k][2])),
        ("ver", Box::new(|k| s[k][3])),
    ];
    let mut columns = Vec::with_capacity(pickers.len());
    for (name, pick) in &pickers {
        columns.push((name.to_string(), column(pick).map_err(AppError::Data)?));
    }
    let panel = Panel::new(columns).map_err(AppError::Data)?;
    let mut buf = Vec::new();
    mktint::data::write_panel_csv(&panel, &mut buf).map_err(AppError::Data)?;
    write_atomic(path, &buf)
}

/// Read the instrument matrices, re-attaching the constant columns.
pub fn read_info_csv(path: &Path) -> Result<InfoSets, AppError> {
    let panel = ingest_csv(path, &month_schema()).map_err(AppError::Data)?;
    let col = |name: &str| panel.column_values(name).map_err(AppError::Data);
    let cols: Vec<&[f64]> = INFO_COLUMNS
        .iter()
        .map(|name| col(name))
        .collect::<Result<_, _>>()?;
    let t = panel.len();
    let info = InfoSets {
        z_global: (0..t)
            .map(|k| [1.0, cols[0][k], cols[1][k], cols[2][k], cols[3][k]])
            .collect(),
        z_local: (0..t).map(|k| [1.0, cols[4][k], cols[5][k], cols[6][k]]).collect(),
        z_integration: (0..t).map(|k| [1.0, cols[7][k], cols[8][k], cols[9][k]]).collect(),
        start: panel.start(),
    };
    info.validate().map_err(AppError::Data)?;
    Ok(info)
}

/// Read a single series from a CSV with a leading month column,
/// preferring a column named `phi` and otherwise taking the first
/// value column.
pub fn read_series_csv(path: &Path) -> Result<MonthlySeries, AppError> {
    let panel = ingest_csv(path, &month_schema()).map_err(AppError::Data)?;
    let name = panel
        .column_names()
        .find(|&n| n == "phi")
        .or_else(|| panel.column_names().next())
        .map(str::to_owned)
        .ok_or_else(|| AppError::Data(DataError::Empty))?;
    let values = panel.column_values(&name).map_err(AppError::Data)?.to_vec();
    MonthlySeries::new(panel.start(), values).map_err(AppError::Data)
}
