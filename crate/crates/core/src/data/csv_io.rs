//! CSV ingestion and serialization for monthly panels.
//!
//! Dialect: UTF-8, header row, one month column formatted `YYYY-MM`,
//! remaining columns numeric with a decimal point and no thousands
//! separators. Rows may arrive unsorted; they are sorted by month and
//! then checked for gaps and duplicates.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use indexmap::IndexMap;

use super::{DataError, Month, MonthlySeries, Panel};

/// Column-name mapping for ingestion.
#[derive(Debug, Clone)]
pub struct CsvSchema {
    /// Header of the month column.
    pub month_column: String,
    /// Optional `csv header -> panel column` renames. Headers not listed
    /// are ingested under their own name; listed headers must exist.
    pub rename: IndexMap<String, String>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            month_column: "month".to_string(),
            rename: IndexMap::new(),
        }
    }
}

/// Read a monthly panel from a CSV file.
pub fn ingest_csv(path: &Path, schema: &CsvSchema) -> Result<Panel, DataError> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_string()).collect();

    let month_idx = headers
        .iter()
        .position(|h| *h == schema.month_column)
        .ok_or_else(|| DataError::UnknownColumn(schema.month_column.clone()))?;
    for mapped in schema.rename.keys() {
        if !headers.contains(mapped) {
            return Err(DataError::UnknownColumn(mapped.clone()));
        }
    }

    let data_columns: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != month_idx)
        .map(|(i, h)| {
            let name = schema.rename.get(h).cloned().unwrap_or_else(|| h.clone());
            (i, name)
        })
        .collect();

    // month -> row values, sorted by month as we go
    let mut rows: BTreeMap<Month, Vec<f64>> = BTreeMap::new();
    for (row_no, record) in reader.records().enumerate() {
        let record = record?;
        let row = row_no + 2; // 1-based, after the header
        let month: Month = record
            .get(month_idx)
            .ok_or_else(|| DataError::UnknownColumn(schema.month_column.clone()))?
            .parse()?;
        let mut values = Vec::with_capacity(data_columns.len());
        for (idx, name) in &data_columns {
            let cell = record.get(*idx).unwrap_or("");
            let v: f64 = cell.trim().parse().map_err(|_| DataError::NonNumeric {
                row,
                column: name.clone(),
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(DataError::NonFinite {
                    row,
                    column: name.clone(),
                });
            }
            values.push(v);
        }
        if rows.insert(month, values).is_some() {
            return Err(DataError::DuplicateMonth(month));
        }
    }

    let start = *rows.keys().next().ok_or(DataError::Empty)?;
    let mut expected = start;
    for month in rows.keys() {
        if *month != expected {
            return Err(DataError::Gap(expected));
        }
        expected = expected.next();
    }

    let mut columns: Vec<(String, Vec<f64>)> = data_columns
        .iter()
        .map(|(_, name)| (name.clone(), Vec::with_capacity(rows.len())))
        .collect();
    for values in rows.values() {
        for (col, v) in columns.iter_mut().zip(values) {
            col.1.push(*v);
        }
    }

    Panel::new(
        columns
            .into_iter()
            .map(|(name, values)| Ok((name, MonthlySeries::new(start, values)?)))
            .collect::<Result<Vec<_>, DataError>>()?,
    )
}

/// Write a panel back out in the ingestion dialect.
pub fn write_panel_csv<W: Write>(panel: &Panel, writer: W) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(writer);
    let names: Vec<&str> = panel.column_names().collect();
    let mut header = vec!["month"];
    header.extend(&names);
    w.write_record(&header)?;
    let columns: Vec<&[f64]> = names
        .iter()
        .map(|n| panel.column_values(n))
        .collect::<Result<_, _>>()?;
    for t in 0..panel.len() {
        let mut record = vec![panel.month_at(t).to_string()];
        for col in &columns {
            record.push(format_number(col[t]));
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Write a single series as a two-column CSV.
pub fn write_series_csv<W: Write>(
    series: &MonthlySeries,
    name: &str,
    writer: W,
) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["month", name])?;
    for (month, value) in series.iter_months() {
        w.write_record([month.to_string(), format_number(value)])?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest decimal that round-trips the value exactly.
pub(crate) fn format_number(v: f64) -> String {
    let mut buf = ryu_like(v);
    if !buf.contains('.') && !buf.contains('e') && !buf.contains("inf") && !buf.contains("NaN") {
        buf.push_str(".0");
    }
    buf
}

fn ryu_like(v: f64) -> String {
    // Rust's Display for f64 already prints the shortest round-trip form.
    format!("{v}")
}
