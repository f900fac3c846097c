//! Excess-return computation and information-set construction.
//!
//! Three design matrices are built from the raw panel, each with a
//! leading constant column:
//!
//!   global Z   (T x 5): const, WDY, DUSTP, USDP, DWIR
//!   local  Zi  (T x 4): const, LDY, DLIR, DIP
//!   integ. Z*  (T x 4): const, DDY, DIR, VER
//!
//! Row `t` of every matrix holds information dated one month before the
//! return it conditions, and rows consumed by differencing or the
//! rolling exchange-rate volatility window are trimmed from the front of
//! all matrices together so they stay aligned with the returns sample.

use serde::{Deserialize, Serialize};

use super::{DataError, Month, MonthlySeries, Panel};

/// Raw-column names and construction settings for [`build_info_sets`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct InfoConfig {
    pub world_dividend_yield: String,
    pub eurodollar_rate: String,
    pub us_term_spread: String,
    pub us_default_premium: String,
    pub local_dividend_yield: String,
    pub local_short_rate: String,
    pub industrial_production: String,
    pub g7_real_rate: String,
    pub local_real_rate: String,
    pub exchange_rate: String,
    /// Rolling window, in months, for the exchange-rate volatility (VER).
    pub ver_window: usize,
}

impl Default for InfoConfig {
    fn default() -> Self {
        Self {
            world_dividend_yield: "world_dy".into(),
            eurodollar_rate: "eurodollar".into(),
            us_term_spread: "us_term_spread".into(),
            us_default_premium: "us_default_premium".into(),
            local_dividend_yield: "local_dy".into(),
            local_short_rate: "local_short_rate".into(),
            industrial_production: "industrial_production".into(),
            g7_real_rate: "g7_real_rate".into(),
            local_real_rate: "local_real_rate".into(),
            exchange_rate: "exchange_rate".into(),
            ver_window: 12,
        }
    }
}

/// The three lagged design matrices, aligned with a returns sample.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoSets {
    /// Global instruments, row t = (1, WDY, DUSTP, USDP, DWIR) at t-1.
    pub z_global: Vec<[f64; 5]>,
    /// Local instruments, row t = (1, LDY, DLIR, DIP) at t-1.
    pub z_local: Vec<[f64; 4]>,
    /// Integration instruments, row t = (1, DDY, DIR, VER) at t-1.
    pub z_integration: Vec<[f64; 4]>,
    /// Month of the first return these rows condition.
    pub start: Month,
}

impl InfoSets {
    pub fn len(&self) -> usize {
        self.z_global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_global.is_empty()
    }

    pub fn validate(&self) -> Result<(), DataError> {
        let t = self.z_global.len();
        if self.z_local.len() != t || self.z_integration.len() != t {
            return Err(DataError::Misaligned("info-set row counts differ".into()));
        }
        let const_ok = self.z_global.iter().all(|r| r[0] == 1.0)
            && self.z_local.iter().all(|r| r[0] == 1.0)
            && self.z_integration.iter().all(|r| r[0] == 1.0);
        if !const_ok {
            return Err(DataError::Misaligned(
                "first column of each info matrix must be 1".into(),
            ));
        }
        let finite = self.z_global.iter().flatten().all(|v| v.is_finite())
            && self.z_local.iter().flatten().all(|v| v.is_finite())
            && self.z_integration.iter().flatten().all(|v| v.is_finite());
        if !finite {
            return Err(DataError::Misaligned("non-finite info entry".into()));
        }
        Ok(())
    }
}

/// Monthly excess total return from a price index, an annualized dividend
/// yield and an annualized risk-free rate (both decimal fractions).
///
/// r_t = ln(P_t / P_{t-1}) + dy_{t-1}/12 - rf_{t-1}/12, so the output
/// starts one month after the inputs.
pub fn excess_returns(
    price_index: &MonthlySeries,
    dividend_yield: &MonthlySeries,
    riskfree_annualized: &MonthlySeries,
) -> Result<MonthlySeries, DataError> {
    price_index.same_shape(dividend_yield)?;
    price_index.same_shape(riskfree_annualized)?;
    let p = price_index.values();
    if p.len() < 2 {
        return Err(DataError::TooFewObservations { need: 2, got: p.len() });
    }
    for (t, &v) in p.iter().enumerate() {
        if v <= 0.0 {
            return Err(DataError::NonPositivePrice(price_index.month_at(t)));
        }
    }
    let dy = dividend_yield.values();
    let rf = riskfree_annualized.values();
    let returns: Vec<f64> = (1..p.len())
        .map(|t| (p[t] / p[t - 1]).ln() + dy[t - 1] / 12.0 - rf[t - 1] / 12.0)
        .collect();
    MonthlySeries::new(price_index.start().next(), returns)
}

/// Build the three lagged information matrices from raw panel columns.
///
/// With window W, the first usable return month is W+1 months after the
/// panel start and the matrices have `panel.len() - W - 1` rows.
pub fn build_info_sets(panel: &Panel, config: &InfoConfig) -> Result<InfoSets, DataError> {
    let wdy_raw = panel.column_values(&config.world_dividend_yield)?;
    let euro = panel.column_values(&config.eurodollar_rate)?;
    let term = panel.column_values(&config.us_term_spread)?;
    let usdp = panel.column_values(&config.us_default_premium)?;
    let ldy_raw = panel.column_values(&config.local_dividend_yield)?;
    let lrate = panel.column_values(&config.local_short_rate)?;
    let ip = panel.column_values(&config.industrial_production)?;
    let g7r = panel.column_values(&config.g7_real_rate)?;
    let lr = panel.column_values(&config.local_real_rate)?;
    let fx = panel.column_values(&config.exchange_rate)?;

    let n = panel.len();
    let w = config.ver_window.max(1);
    if n < w + 2 {
        return Err(DataError::SampleTooShort { len: n, window: w });
    }

    // Log changes of the exchange rate, defined from raw index 1 on.
    let fx_change: Vec<f64> = (1..n).map(|t| (fx[t] / fx[t - 1]).ln()).collect();
    if fx_change.iter().any(|v| !v.is_finite()) {
        return Err(DataError::Misaligned("non-finite exchange-rate change".into()));
    }

    // Info row k conditions the return at raw index w + 1 + k and is
    // dated raw index j = w + k.
    let t_eff = n - w - 1;
    let mut z_global = Vec::with_capacity(t_eff);
    let mut z_local = Vec::with_capacity(t_eff);
    let mut z_integration = Vec::with_capacity(t_eff);
    for k in 0..t_eff {
        let j = w + k;
        let wdy = wdy_raw[j] - euro[j];
        let dustp = term[j] - term[j - 1];
        let dwir = euro[j] - euro[j - 1];
        let ldy = ldy_raw[j] - lrate[j];
        let dlir = lrate[j] - lrate[j - 1];
        let dip = (ip[j] / ip[j - 1]).ln();
        let ddy = wdy_raw[j] - ldy_raw[j];
        let dir = g7r[j] - lr[j];
        // VER at raw index j: std dev of the last W monthly log changes.
        let window = &fx_change[j - w..j];
        let ver = std_dev(window);
        z_global.push([1.0, wdy, dustp, usdp[j], dwir]);
        z_local.push([1.0, ldy, dlir, dip]);
        z_integration.push([1.0, ddy, dir, ver]);
    }

    let info = InfoSets {
        z_global,
        z_local,
        z_integration,
        start: panel.start().add_months(w as i64 + 1),
    };
    info.validate()?;
    Ok(info)
}

fn std_dev(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    var.sqrt()
}
