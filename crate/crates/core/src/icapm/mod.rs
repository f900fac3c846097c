//! The partially segmented conditional international CAPM.
//!
//! Mean equations (market m, world w):
//!
//!   R_m,t = phi_{t-1} d_w,{t-1} h_mw,t + (1 - phi_{t-1}) d_i,{t-1} h_m,t + e_m,t
//!   R_w,t = d_w,{t-1} h_w,t + e_w,t
//!
//! with e_t | I_{t-1} ~ N(0, H_t) and a diagonal-BEKK (Hadamard)
//! covariance recursion
//!
//!   H_t = C'C + aa' . e_{t-1} e_{t-1}' + bb' . H_{t-1}
//!
//! (. is elementwise). Prices of risk are exponential-affine in the
//! instruments, d = exp(kappa' z), and the degree of integration is
//! phi = 1 - exp(-(delta' z*)^2), which lies in [0, 1] by construction.

mod filter;
mod params;

pub use filter::{
    conditional_means, filter, garch_step, integration_degree, neg_loglik, price_of_risk,
    Cov2, FilterOutput, InitPolicy, NegLoglik, EXP_CLAMP, PENALTY,
};
pub use params::{ModelParams, N_PARAMS};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("returns ({returns}) and info rows ({info}) differ")]
    LengthMismatch { returns: usize, info: usize },
    #[error("need at least 2 observations, got {0}")]
    TooShort(usize),
    #[error("conditional covariance numerically singular at t = {t} (det = {det:e})")]
    Singular { t: usize, det: f64 },
    #[error("covariance matrix not symmetric")]
    NotSymmetric,
    #[error("covariance matrix not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("parameter vector has length {0}, expected {expected}", expected = N_PARAMS)]
    BadParamLength(usize),
    #[error("non-finite parameter at index {0}")]
    NonFiniteParam(usize),
}
