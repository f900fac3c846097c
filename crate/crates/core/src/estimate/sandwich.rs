//! QML sandwich covariance A^{-1} B A^{-1} / T.
//!
//! A is the numeric Hessian of the average negative log-likelihood and
//! B the average outer product of per-period score contributions, both
//! by central differences at the optimum.

use nalgebra::{DMatrix, DVector};

use crate::data::InfoSets;
use crate::icapm::{filter, InitPolicy, ModelParams, N_PARAMS};

use super::EstimateError;

/// Relative step for the numeric Hessian and scores.
pub const HESSIAN_STEP: f64 = 1e-4;

/// Robust covariance of the QML estimator at `theta_hat`.
///
/// Falls back to a pseudo-inverse (with a warning) when the Hessian is
/// numerically singular. The result is symmetrized.
pub fn robust_cov(
    theta_hat: &[f64],
    returns: &[[f64; 2]],
    info: &InfoSets,
    init: InitPolicy,
) -> Result<DMatrix<f64>, EstimateError> {
    let t_len = returns.len() as f64;
    let n = N_PARAMS;

    // per-period log-likelihood vector at a parameter point
    let ll_at = |theta: &[f64]| -> Result<Vec<f64>, EstimateError> {
        let params = ModelParams::from_slice(theta)?;
        Ok(filter(&params, returns, info, init)?.ll)
    };

    // scores s_t[i] = d ll_t / d theta_i, central differences
    let mut scores = vec![vec![0.0; n]; returns.len()];
    let mut grad_avg_nll = vec![0.0; n]; // gradient of average negative ll
    let mut theta = theta_hat.to_vec();
    for i in 0..n {
        let h = HESSIAN_STEP * theta_hat[i].abs().max(1.0);
        theta[i] = theta_hat[i] + h;
        let ll_plus = ll_at(&theta)?;
        theta[i] = theta_hat[i] - h;
        let ll_minus = ll_at(&theta)?;
        theta[i] = theta_hat[i];
        for t in 0..returns.len() {
            scores[t][i] = (ll_plus[t] - ll_minus[t]) / (2.0 * h);
        }
        let sum_p: f64 = ll_plus.iter().sum();
        let sum_m: f64 = ll_minus.iter().sum();
        grad_avg_nll[i] = -(sum_p - sum_m) / (2.0 * h) / t_len;
    }
    let grad_norm = grad_avg_nll.iter().fold(0.0_f64, |m, g| m.max(g.abs()));
    if grad_norm > 1e-2 {
        log::warn!("robust_cov called away from an optimum (|grad| = {grad_norm:.3e})");
    }

    // B: average outer product of scores
    let mut b = DMatrix::<f64>::zeros(n, n);
    for s in &scores {
        let sv = DVector::from_column_slice(s);
        b += &sv * sv.transpose();
    }
    b /= t_len;

    // A: Hessian of the average negative log-likelihood, via central
    // differences of its gradient
    let nll_grad = |theta: &[f64]| -> Result<Vec<f64>, EstimateError> {
        let mut g = vec![0.0; n];
        let mut th = theta.to_vec();
        for i in 0..n {
            let h = HESSIAN_STEP * theta_hat[i].abs().max(1.0);
            th[i] = theta[i] + h;
            let fp: f64 = ll_at(&th)?.iter().sum();
            th[i] = theta[i] - h;
            let fm: f64 = ll_at(&th)?.iter().sum();
            th[i] = theta[i];
            g[i] = -(fp - fm) / (2.0 * h) / t_len;
        }
        Ok(g)
    };
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut th = theta_hat.to_vec();
    for i in 0..n {
        let h = HESSIAN_STEP * theta_hat[i].abs().max(1.0);
        th[i] = theta_hat[i] + h;
        let gp = nll_grad(&th)?;
        th[i] = theta_hat[i] - h;
        let gm = nll_grad(&th)?;
        th[i] = theta_hat[i];
        for j in 0..n {
            a[(i, j)] = (gp[j] - gm[j]) / (2.0 * h);
        }
    }
    // symmetrize the numeric Hessian
    let a = (&a + a.transpose()) * 0.5;

    let a_inv = match a.clone().try_inverse() {
        Some(inv) => inv,
        None => {
            log::warn!("numeric Hessian singular; using pseudo-inverse");
            a.clone().pseudo_inverse(1e-12).map_err(|_| EstimateError::SingularBlock)?
        }
    };

    let v = (&a_inv * b * &a_inv) / t_len;
    Ok((&v + v.transpose()) * 0.5)
}
