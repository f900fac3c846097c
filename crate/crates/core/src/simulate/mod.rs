//! Synthetic data-generating processes for oracle testing: the full
//! model run forward as a generator, and mean-shift series with known
//! breaks.

mod icapm_dgp;
mod mean_shift;

pub use icapm_dgp::{simulate_icapm, DgpSpec};
pub use mean_shift::{simulate_mean_shift, StepSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error("sample length {0} too short (need >= 10)")]
    TooShort(usize),
    #[error("break positions must be strictly increasing inside (0, T)")]
    BadBreaks,
    #[error("need exactly one more regime mean than break positions")]
    MeanCountMismatch,
    #[error("noise sigma must be finite and >= 0, got {0}")]
    BadSigma(f64),
    #[error("AR(1) coefficient must lie in (-1, 1), got {0}")]
    BadAr(f64),
    #[error("covariance recursion left the PSD cone during simulation")]
    NotPsd,
    #[error("data error: {0}")]
    Data(#[from] crate::data::DataError),
}
