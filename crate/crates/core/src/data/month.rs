//! Calendar months as a totally ordered integer-like type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DataError;

/// A calendar month, e.g. `1992-12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Month {
    year: i32,
    month: u8, // 1..=12
}

impl Month {
    pub fn new(year: i32, month: u8) -> Result<Self, DataError> {
        if !(1..=12).contains(&month) {
            return Err(DataError::BadMonth(format!("{year}-{month:02}")));
        }
        Ok(Self { year, month })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u8 {
        self.month
    }

    /// Months since year 0, for ordering and gap arithmetic.
    fn ordinal(&self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    pub fn add_months(&self, n: i64) -> Self {
        let ord = self.ordinal() + n;
        Self {
            year: ord.div_euclid(12) as i32,
            month: (ord.rem_euclid(12) + 1) as u8,
        }
    }

    pub fn next(&self) -> Self {
        self.add_months(1)
    }

    /// Signed number of months from `other` to `self`.
    pub fn months_since(&self, other: &Month) -> i64 {
        self.ordinal() - other.ordinal()
    }

    /// Compact `1992:12` style used in break reports.
    pub fn colon_format(&self) -> String {
        format!("{}:{}", self.year, self.month)
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for Month {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (y, m) = s
            .split_once('-')
            .ok_or_else(|| DataError::BadMonth(s.to_string()))?;
        let year: i32 = y.parse().map_err(|_| DataError::BadMonth(s.to_string()))?;
        let month: u8 = m.parse().map_err(|_| DataError::BadMonth(s.to_string()))?;
        Month::new(year, month)
    }
}

impl TryFrom<String> for Month {
    type Error = DataError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Month> for String {
    fn from(m: Month) -> String {
        m.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let m: Month = "1988-01".parse().unwrap();
        assert_eq!(m.to_string(), "1988-01");
        assert_eq!(m.colon_format(), "1988:1");
    }

    #[test]
    fn month_arithmetic_wraps_years() {
        let m: Month = "1992-12".parse().unwrap();
        assert_eq!(m.next().to_string(), "1993-01");
        assert_eq!(m.add_months(-12).to_string(), "1991-12");
        let start: Month = "1988-01".parse().unwrap();
        let end: Month = "2008-02".parse().unwrap();
        // Jan 1988 .. Feb 2008 inclusive is 242 months.
        assert_eq!(end.months_since(&start) + 1, 242);
    }

    #[test]
    fn rejects_bad_month_number() {
        assert!("1988-13".parse::<Month>().is_err());
        assert!("1988".parse::<Month>().is_err());
    }
}
