//! Gap-free monthly series and aligned named panels.

use indexmap::IndexMap;

use super::{DataError, Month};

/// An ordered sequence of monthly observations with no missing months.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlySeries {
    start: Month,
    values: Vec<f64>,
}

impl MonthlySeries {
    pub fn new(start: Month, values: Vec<f64>) -> Result<Self, DataError> {
        if values.is_empty() {
            return Err(DataError::Empty);
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(DataError::NonFinite {
                    row: i,
                    column: String::new(),
                });
            }
        }
        Ok(Self { start, values })
    }

    pub fn start(&self) -> Month {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn month_at(&self, index: usize) -> Month {
        self.start.add_months(index as i64)
    }

    pub fn iter_months(&self) -> impl Iterator<Item = (Month, f64)> + '_ {
        let start = self.start;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (start.add_months(i as i64), v))
    }

    pub(crate) fn same_shape(&self, other: &MonthlySeries) -> Result<(), DataError> {
        if self.start != other.start || self.len() != other.len() {
            return Err(DataError::Misaligned(format!(
                "{} x {} vs {} x {}",
                self.start,
                self.len(),
                other.start,
                other.len()
            )));
        }
        Ok(())
    }
}

/// Named monthly series sharing one start month and one length.
#[derive(Debug, Clone)]
pub struct Panel {
    start: Month,
    len: usize,
    columns: IndexMap<String, Vec<f64>>,
}

impl Panel {
    pub fn new(columns: Vec<(String, MonthlySeries)>) -> Result<Self, DataError> {
        let first = columns.first().ok_or(DataError::Empty)?;
        let start = first.1.start();
        let len = first.1.len();
        let mut map = IndexMap::with_capacity(columns.len());
        for (name, series) in columns {
            series.same_shape(&MonthlySeries {
                start,
                values: vec![0.0; len],
            })?;
            if map.insert(name.clone(), series.values).is_some() {
                return Err(DataError::Misaligned(format!("duplicate column `{name}`")));
            }
        }
        Ok(Self { start, len, columns: map })
    }

    pub fn start(&self) -> Month {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.keys().map(|s| s.as_str())
    }

    pub fn column(&self, name: &str) -> Result<MonthlySeries, DataError> {
        let values = self
            .columns
            .get(name)
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))?;
        Ok(MonthlySeries {
            start: self.start,
            values: values.clone(),
        })
    }

    pub fn column_values(&self, name: &str) -> Result<&[f64], DataError> {
        self.columns
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))
    }

    pub fn month_at(&self, index: usize) -> Month {
        self.start.add_months(index as i64)
    }
}
