//! Model parameters and their flat-vector representation.

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Number of free parameters.
pub const N_PARAMS: usize = 20;

/// Free parameters of the model.
///
/// Flattening order (see [`ModelParams::to_vec`]):
/// `kappa_w[0..5]`, `kappa_i[5..9]`, `delta_int[9..13]`,
/// `c_lower[13..16]` as (c11, c21, c22), `a[16..18]`, `b[18..20]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// World price-of-risk coefficients on the global instruments.
    pub kappa_w: [f64; 5],
    /// Local price-of-risk coefficients on the local instruments.
    pub kappa_i: [f64; 4],
    /// Integration-function coefficients on the integration instruments.
    pub delta_int: [f64; 4],
    /// Free entries (c11, c21, c22) of the lower-triangular intercept C.
    pub c_lower: [f64; 3],
    /// ARCH loadings, one per market.
    pub a: [f64; 2],
    /// GARCH loadings, one per market.
    pub b: [f64; 2],
}

impl ModelParams {
    pub fn to_vec(&self) -> [f64; N_PARAMS] {
        let mut v = [0.0; N_PARAMS];
        v[0..5].copy_from_slice(&self.kappa_w);
        v[5..9].copy_from_slice(&self.kappa_i);
        v[9..13].copy_from_slice(&self.delta_int);
        v[13..16].copy_from_slice(&self.c_lower);
        v[16..18].copy_from_slice(&self.a);
        v[18..20].copy_from_slice(&self.b);
        v
    }

    pub fn from_slice(theta: &[f64]) -> Result<Self, ModelError> {
        if theta.len() != N_PARAMS {
            return Err(ModelError::BadParamLength(theta.len()));
        }
        if let Some(i) = theta.iter().position(|v| !v.is_finite()) {
            return Err(ModelError::NonFiniteParam(i));
        }
        let mut p = ModelParams {
            kappa_w: [0.0; 5],
            kappa_i: [0.0; 4],
            delta_int: [0.0; 4],
            c_lower: [0.0; 3],
            a: [0.0; 2],
            b: [0.0; 2],
        };
        p.kappa_w.copy_from_slice(&theta[0..5]);
        p.kappa_i.copy_from_slice(&theta[5..9]);
        p.delta_int.copy_from_slice(&theta[9..13]);
        p.c_lower.copy_from_slice(&theta[13..16]);
        p.a.copy_from_slice(&theta[16..18]);
        p.b.copy_from_slice(&theta[18..20]);
        Ok(p)
    }

    /// The intercept C'C of the covariance recursion.
    pub fn intercept(&self) -> (f64, f64, f64) {
        let [c11, c21, c22] = self.c_lower;
        (c11 * c11 + c21 * c21, c21 * c22, c22 * c22)
    }

    /// Persistence a_i a_j + b_i b_j per covariance entry (mm, mw, ww).
    /// Entries >= 1 mean the recursion has no finite unconditional level.
    pub fn persistence(&self) -> (f64, f64, f64) {
        let p = |i: usize, j: usize| self.a[i] * self.a[j] + self.b[i] * self.b[j];
        (p(0, 0), p(0, 1), p(1, 1))
    }

    pub fn is_stationary(&self) -> bool {
        let (mm, mw, ww) = self.persistence();
        mm < 1.0 && mw < 1.0 && ww < 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ModelParams {
        ModelParams {
            kappa_w: [0.354, 1.012, -0.655, 0.679, -0.867],
            kappa_i: [0.405, -1.156, -0.044, -0.542],
            delta_int: [0.201, 0.312, 1.944, -0.493],
            c_lower: [0.05, 0.01, 0.04],
            a: [0.103, 0.133],
            b: [0.597, 0.821],
        }
    }

    #[test]
    fn flatten_round_trips() {
        let p = sample();
        let v = p.to_vec();
        assert_eq!(ModelParams::from_slice(&v).unwrap(), p);
        // ordering is fixed: c11 sits at index 13, b at 18..20
        assert_eq!(v[13], 0.05);
        assert_eq!(v[18], 0.597);
    }

    #[test]
    fn bad_lengths_and_nan_rejected() {
        assert!(ModelParams::from_slice(&[0.0; 19]).is_err());
        let mut v = sample().to_vec();
        v[3] = f64::NAN;
        assert!(matches!(
            ModelParams::from_slice(&v),
            Err(ModelError::NonFiniteParam(3))
        ));
    }

    #[test]
    fn persistence_matches_table_arithmetic() {
        let p = sample();
        let (_, _, ww) = p.persistence();
        assert!((ww - (0.133_f64 * 0.133 + 0.821 * 0.821)).abs() < 1e-12);
        assert!((ww - 0.691_730).abs() < 1e-9);
        assert!(p.is_stationary());
    }
}
