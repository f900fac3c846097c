//! QML estimation of the model and the inference behind its reports:
//! multi-start quasi-Newton optimization with numeric gradients, the
//! sandwich covariance A^{-1} B A^{-1} / T, Wald constancy tests and
//! standardized-residual diagnostics.

mod fit;
mod optimizer;
mod residuals;
mod sandwich;
mod wald;

pub use fit::{fit, default_start, CoefficientEstimate, FitConfig, FitResult};
pub use optimizer::{minimize_bfgs, numeric_gradient, OptimOptions, OptimResult};
pub use residuals::{standardized_residuals, StandardizedResiduals};
pub use sandwich::robust_cov;
pub use wald::{wald_test, Restriction, WaldResult};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error("every start ended in the penalty region; estimation failed")]
    AllStartsPenalized,
    #[error("objective non-finite at every start")]
    NonFiniteObjective,
    #[error("selector is empty or out of range (n = {0})")]
    BadSelector(usize),
    #[error("restricted covariance block is singular")]
    SingularBlock,
    #[error("model error: {0}")]
    Model(#[from] crate::icapm::ModelError),
    #[error("data error: {0}")]
    Data(#[from] crate::data::DataError),
}
