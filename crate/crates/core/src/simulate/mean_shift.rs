//! Mean-shift series with known breaks: y_t = mu_j + u_t.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{Month, MonthlySeries};

use super::SimulateError;

/// Specification of a piecewise-constant-mean series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepSpec {
    /// Regime means mu_1 .. mu_{m+1}.
    pub means: Vec<f64>,
    /// Break positions: regime j ends after observation `breaks[j]`
    /// (1-based counts, strictly increasing, inside (0, T)).
    pub breaks: Vec<usize>,
    pub t: usize,
    /// Noise standard deviation.
    pub sigma: f64,
    /// Optional AR(1) coefficient of the noise.
    #[serde(default)]
    pub ar: Option<f64>,
    /// Clamp the output into [0, 1] (for integration-like series).
    #[serde(default)]
    pub clamp_unit: bool,
    pub seed: u64,
    pub start: Month,
}

impl StepSpec {
    fn validate(&self) -> Result<(), SimulateError> {
        if self.means.len() != self.breaks.len() + 1 {
            return Err(SimulateError::MeanCountMismatch);
        }
        let increasing = self
            .breaks
            .windows(2)
            .all(|w| w[0] < w[1]);
        let in_range = self.breaks.iter().all(|&b| b > 0 && b < self.t);
        if !increasing || !in_range {
            return Err(SimulateError::BadBreaks);
        }
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(SimulateError::BadSigma(self.sigma));
        }
        if let Some(rho) = self.ar {
            if rho.abs() >= 1.0 {
                return Err(SimulateError::BadAr(rho));
            }
        }
        Ok(())
    }
}

/// Generate the step series with iid normal or AR(1) noise.
pub fn simulate_mean_shift(spec: &StepSpec) -> Result<MonthlySeries, SimulateError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut u = 0.0f64;
    let mut clamped = 0usize;
    let mut values = Vec::with_capacity(spec.t);
    for t in 0..spec.t {
        let regime = spec.breaks.iter().filter(|&&b| t >= b).count();
        let noise: f64 = rng.sample(StandardNormal);
        u = match spec.ar {
            Some(rho) => rho * u + spec.sigma * noise,
            None => spec.sigma * noise,
        };
        let mut y = spec.means[regime] + u;
        if spec.clamp_unit {
            let original = y;
            y = y.clamp(0.0, 1.0);
            if y != original {
                clamped += 1;
            }
        }
        values.push(y);
    }
    if clamped > 0 {
        log::info!("clamped {clamped} of {} observations into [0, 1]", spec.t);
    }
    Ok(MonthlySeries::new(spec.start, values)?)
}
