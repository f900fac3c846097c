//! The likelihood filter: covariance recursion, mean equations and the
//! Gaussian QML objective.

use serde::{Deserialize, Serialize};

use crate::data::InfoSets;

use super::{ModelError, ModelParams};

/// Exponent clamp for the exponential prices of risk. Dot products
/// outside this range are saturated with a logged warning so the QML
/// search stays finite far from the optimum.
pub const EXP_CLAMP: f64 = 50.0;

/// Objective value returned when the filter fails, so optimizers see a
/// finite landscape instead of NaN.
pub const PENALTY: f64 = 1e12;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Symmetric 2x2 conditional covariance, stored by its three entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cov2 {
    /// Own variance of the local market, h_m.
    pub h_m: f64,
    /// Own variance of the world market, h_w.
    pub h_w: f64,
    /// Covariance between the two, h_mw.
    pub h_mw: f64,
}

impl Cov2 {
    pub fn zero() -> Self {
        Self { h_m: 0.0, h_w: 0.0, h_mw: 0.0 }
    }

    pub fn det(&self) -> f64 {
        self.h_m * self.h_w - self.h_mw * self.h_mw
    }

    pub fn trace(&self) -> f64 {
        self.h_m + self.h_w
    }

    /// Smaller eigenvalue of the symmetric matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let half_trace = 0.5 * self.trace();
        let half_diff = 0.5 * (self.h_m - self.h_w);
        half_trace - (half_diff * half_diff + self.h_mw * self.h_mw).sqrt()
    }

    /// e' H^{-1} e via the closed-form 2x2 inverse.
    pub fn inv_quadratic_form(&self, e: [f64; 2]) -> f64 {
        let det = self.det();
        (self.h_w * e[0] * e[0] - 2.0 * self.h_mw * e[0] * e[1] + self.h_m * e[1] * e[1]) / det
    }

    /// Lower Cholesky factor (l11, l21, l22). Fails off the PSD cone.
    pub fn cholesky(&self) -> Result<(f64, f64, f64), ModelError> {
        if self.h_m <= 0.0 {
            return Err(ModelError::NotPsd(self.min_eigenvalue()));
        }
        let l11 = self.h_m.sqrt();
        let l21 = self.h_mw / l11;
        let rest = self.h_w - l21 * l21;
        if rest <= 0.0 {
            return Err(ModelError::NotPsd(self.min_eigenvalue()));
        }
        Ok((l11, l21, rest.sqrt()))
    }

    /// Sample covariance of a bivariate sample.
    pub fn sample_covariance(data: &[[f64; 2]]) -> Self {
        let n = data.len().max(1) as f64;
        let mean = data.iter().fold([0.0; 2], |acc, r| [acc[0] + r[0], acc[1] + r[1]]);
        let mean = [mean[0] / n, mean[1] / n];
        let mut c = Cov2::zero();
        for r in data {
            let d = [r[0] - mean[0], r[1] - mean[1]];
            c.h_m += d[0] * d[0];
            c.h_w += d[1] * d[1];
            c.h_mw += d[0] * d[1];
        }
        c.h_m /= n;
        c.h_w /= n;
        c.h_mw /= n;
        c
    }
}

/// Exponential price of risk exp(kappa . z), saturated at exp(+-EXP_CLAMP).
pub fn price_of_risk(kappa: &[f64], z_row: &[f64]) -> f64 {
    assert_eq!(kappa.len(), z_row.len(), "kappa and z must have equal length");
    let dot: f64 = kappa.iter().zip(z_row).map(|(k, z)| k * z).sum();
    if dot.abs() > EXP_CLAMP {
        log::warn!("price-of-risk exponent {dot:.2} saturated at +-{EXP_CLAMP}");
    }
    dot.clamp(-EXP_CLAMP, EXP_CLAMP).exp()
}

/// Degree of integration 1 - exp(-(delta . z*)^2), in [0, 1].
pub fn integration_degree(delta_int: &[f64], zstar_row: &[f64]) -> f64 {
    assert_eq!(delta_int.len(), zstar_row.len(), "delta and z* must have equal length");
    let dot: f64 = delta_int.iter().zip(zstar_row).map(|(d, z)| d * z).sum();
    1.0 - (-(dot * dot)).exp()
}

/// One step of the Hadamard covariance recursion
/// H_t = C'C + aa' . (e e') + bb' . H_{t-1}.
pub fn garch_step(params: &ModelParams, eps_prev: [f64; 2], h_prev: &Cov2) -> Cov2 {
    let (cc_m, cc_mw, cc_w) = params.intercept();
    let [a_m, a_w] = params.a;
    let [b_m, b_w] = params.b;
    Cov2 {
        h_m: cc_m + a_m * a_m * eps_prev[0] * eps_prev[0] + b_m * b_m * h_prev.h_m,
        h_w: cc_w + a_w * a_w * eps_prev[1] * eps_prev[1] + b_w * b_w * h_prev.h_w,
        h_mw: cc_mw + a_m * a_w * eps_prev[0] * eps_prev[1] + b_m * b_w * h_prev.h_mw,
    }
}

/// Conditional means (mu_m, mu_w) of the two return equations.
pub fn conditional_means(delta_w: f64, delta_i: f64, phi: f64, h: &Cov2) -> [f64; 2] {
    [
        phi * delta_w * h.h_mw + (1.0 - phi) * delta_i * h.h_m,
        delta_w * h.h_w,
    ]
}

/// How to start the covariance recursion. The model itself is silent on
/// H_1, so both a data-driven and a model-implied start are offered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitPolicy {
    /// H_1 = sample covariance of the returns.
    #[default]
    SampleCovariance,
    /// H_1 = C'C / (1 - a_i a_j - b_i b_j) entrywise; falls back to the
    /// sample covariance when the recursion is non-stationary.
    Unconditional,
}

/// Per-period output of the forward recursion.
#[derive(Debug, Clone)]
pub struct FilterOutput {
    /// Price of world risk, one per period.
    pub price_world: Vec<f64>,
    /// Price of local risk, one per period.
    pub price_local: Vec<f64>,
    /// Degree of integration, one per period, each in [0, 1].
    pub phi: Vec<f64>,
    /// Conditional covariance H_t.
    pub h: Vec<Cov2>,
    /// Residuals (e_m, e_w).
    pub eps: Vec<[f64; 2]>,
    /// Log-likelihood contributions.
    pub ll: Vec<f64>,
    /// Number of saturated price-of-risk exponents.
    pub clamped: usize,
}

impl FilterOutput {
    pub fn len(&self) -> usize {
        self.ll.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ll.is_empty()
    }

    pub fn loglik(&self) -> f64 {
        self.ll.iter().sum()
    }
}

/// Run the recursion forward over the sample.
///
/// Given H_t, the instruments dated t-1 fix the prices of risk and phi;
/// residuals are returns minus the conditional means; the Gaussian
/// contribution is ll_t = -ln 2pi - ln det H_t / 2 - e' H^{-1} e / 2;
/// then H_{t+1} follows from the covariance recursion.
pub fn filter(
    params: &ModelParams,
    returns: &[[f64; 2]],
    info: &InfoSets,
    init: InitPolicy,
) -> Result<FilterOutput, ModelError> {
    let t_len = returns.len();
    if t_len != info.len() {
        return Err(ModelError::LengthMismatch { returns: t_len, info: info.len() });
    }
    if t_len < 2 {
        return Err(ModelError::TooShort(t_len));
    }

    let mut h = initial_covariance(params, returns, init);
    let mut out = FilterOutput {
        price_world: Vec::with_capacity(t_len),
        price_local: Vec::with_capacity(t_len),
        phi: Vec::with_capacity(t_len),
        h: Vec::with_capacity(t_len),
        eps: Vec::with_capacity(t_len),
        ll: Vec::with_capacity(t_len),
        clamped: 0,
    };

    for t in 0..t_len {
        let det = h.det();
        if !(det > 1e-300) || !det.is_finite() {
            return Err(ModelError::Singular { t, det });
        }
        let zg = &info.z_global[t];
        let zl = &info.z_local[t];
        let zs = &info.z_integration[t];
        let dot_w: f64 = params.kappa_w.iter().zip(zg).map(|(k, z)| k * z).sum();
        let dot_i: f64 = params.kappa_i.iter().zip(zl).map(|(k, z)| k * z).sum();
        if dot_w.abs() > EXP_CLAMP || dot_i.abs() > EXP_CLAMP {
            out.clamped += 1;
        }
        let delta_w = dot_w.clamp(-EXP_CLAMP, EXP_CLAMP).exp();
        let delta_i = dot_i.clamp(-EXP_CLAMP, EXP_CLAMP).exp();
        let phi = integration_degree(&params.delta_int, zs);

        let mu = conditional_means(delta_w, delta_i, phi, &h);
        let eps = [returns[t][0] - mu[0], returns[t][1] - mu[1]];
        let ll = -LN_2PI - 0.5 * det.ln() - 0.5 * h.inv_quadratic_form(eps);

        out.price_world.push(delta_w);
        out.price_local.push(delta_i);
        out.phi.push(phi);
        out.h.push(h);
        out.eps.push(eps);
        out.ll.push(ll);

        h = garch_step(params, eps, &h);
    }
    Ok(out)
}

fn initial_covariance(params: &ModelParams, returns: &[[f64; 2]], init: InitPolicy) -> Cov2 {
    match init {
        InitPolicy::SampleCovariance => Cov2::sample_covariance(returns),
        InitPolicy::Unconditional => {
            let (p_mm, p_mw, p_ww) = params.persistence();
            let (cc_m, cc_mw, cc_w) = params.intercept();
            if p_mm < 1.0 && p_mw < 1.0 && p_ww < 1.0 {
                let h = Cov2 {
                    h_m: cc_m / (1.0 - p_mm),
                    h_w: cc_w / (1.0 - p_ww),
                    h_mw: cc_mw / (1.0 - p_mw),
                };
                if h.min_eigenvalue() >= 0.0 {
                    return h;
                }
            }
            log::warn!("non-stationary parameters; H_1 falls back to the sample covariance");
            Cov2::sample_covariance(returns)
        }
    }
}

/// Negative log-likelihood with penalty encoding for filter failures.
#[derive(Debug, Clone, Copy)]
pub struct NegLoglik {
    pub value: f64,
    /// True when the filter failed and the penalty value was returned.
    pub penalized: bool,
}

/// Evaluate the QML objective at a flat parameter vector.
pub fn neg_loglik(
    theta: &[f64],
    returns: &[[f64; 2]],
    info: &InfoSets,
    init: InitPolicy,
) -> NegLoglik {
    let params = match ModelParams::from_slice(theta) {
        Ok(p) => p,
        Err(_) => return NegLoglik { value: PENALTY, penalized: true },
    };
    match filter(&params, returns, info, init) {
        Ok(out) => {
            let value = -out.loglik();
            if value.is_finite() {
                NegLoglik { value, penalized: false }
            } else {
                NegLoglik { value: PENALTY, penalized: true }
            }
        }
        Err(_) => NegLoglik { value: PENALTY, penalized: true },
    }
}
