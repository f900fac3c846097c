//! Wald tests of zero restrictions on coefficient subsets.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::stats::chi2_sf;

use super::EstimateError;

/// The three predefined constancy restrictions of the model: each tests
/// that the non-constant coefficients of one block are jointly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    /// kappa_w[1..5] = 0: is the price of world risk constant?
    WorldPriceConstant,
    /// kappa_i[1..4] = 0: is the price of local risk constant?
    LocalPriceConstant,
    /// delta_int[1..4] = 0: is the degree of integration constant?
    IntegrationConstant,
}

impl Restriction {
    /// Indices into the flat parameter vector.
    pub fn selector(&self) -> Vec<usize> {
        match self {
            Restriction::WorldPriceConstant => vec![1, 2, 3, 4],
            Restriction::LocalPriceConstant => vec![6, 7, 8],
            Restriction::IntegrationConstant => vec![10, 11, 12],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Restriction::WorldPriceConstant => "Is the price of world risk constant?",
            Restriction::LocalPriceConstant => "Is the price of local risk constant?",
            Restriction::IntegrationConstant => "Is the degree of integration constant?",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WaldResult {
    pub label: String,
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// W = theta_S' (V_SS)^{-1} theta_S, chi-squared with |S| degrees of
/// freedom under the null that the selected coefficients are zero.
pub fn wald_test(
    theta_hat: &[f64],
    robust_cov: &DMatrix<f64>,
    selector: &[usize],
    label: &str,
) -> Result<WaldResult, EstimateError> {
    let n = theta_hat.len();
    if selector.is_empty() || selector.iter().any(|&i| i >= n) {
        return Err(EstimateError::BadSelector(n));
    }
    let k = selector.len();
    let theta_s = DVector::from_iterator(k, selector.iter().map(|&i| theta_hat[i]));
    let mut v_ss = DMatrix::zeros(k, k);
    for (a, &i) in selector.iter().enumerate() {
        for (b, &j) in selector.iter().enumerate() {
            v_ss[(a, b)] = robust_cov[(i, j)];
        }
    }
    let inv = v_ss
        .clone()
        .try_inverse()
        .ok_or(EstimateError::SingularBlock)?;
    let statistic = (theta_s.transpose() * inv * theta_s)[(0, 0)].max(0.0);
    Ok(WaldResult {
        label: label.to_string(),
        statistic,
        df: k,
        p_value: chi2_sf(statistic, k),
    })
}
