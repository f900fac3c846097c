//! Standardized residuals z_t = L_t^{-1} e_t and their diagnostics.

use crate::data::{descriptive_stats, DiagnosticsReport, Month, MonthlySeries};
use crate::icapm::FilterOutput;

use super::EstimateError;

#[derive(Debug)]
pub struct StandardizedResiduals {
    /// z_t pairs, one per period.
    pub z: Vec<[f64; 2]>,
    /// Diagnostics per column (market, world), with Q at the given lags.
    pub diagnostics: [DiagnosticsReport; 2],
}

/// Whiten residuals with the per-period Cholesky factor of H_t and run
/// the usual diagnostics on each column.
pub fn standardized_residuals(
    output: &FilterOutput,
    start: Month,
    lb_lags: usize,
) -> Result<StandardizedResiduals, EstimateError> {
    let mut z = Vec::with_capacity(output.len());
    for t in 0..output.len() {
        let (l11, l21, l22) = output.h[t].cholesky()?;
        let e = output.eps[t];
        let z1 = e[0] / l11;
        let z2 = (e[1] - l21 * z1) / l22;
        z.push([z1, z2]);
    }
    let col = |i: usize| -> Result<DiagnosticsReport, EstimateError> {
        let series = MonthlySeries::new(start, z.iter().map(|r| r[i]).collect())?;
        Ok(descriptive_stats(&series, lb_lags)?)
    };
    let diagnostics = [col(0)?, col(1)?];
    Ok(StandardizedResiduals { z, diagnostics })
}
