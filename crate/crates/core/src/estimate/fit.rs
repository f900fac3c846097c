//! Multi-start QML fitting.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::InfoSets;
use crate::icapm::{filter, neg_loglik, Cov2, FilterOutput, InitPolicy, ModelParams, N_PARAMS, PENALTY};
use crate::stats::significance_stars;

use super::optimizer::{minimize_bfgs, OptimOptions};
use super::sandwich::robust_cov;
use super::EstimateError;

/// Optimizer settings for [`fit`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    /// Number of seeded starting points.
    pub n_starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Relative gradient-norm tolerance at the solution.
    pub grad_tol: f64,
    pub init: InitPolicy,
    /// Skip the (expensive) sandwich covariance; SEs become NaN.
    pub skip_covariance: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            n_starts: 8,
            seed: 0,
            max_iter: 400,
            grad_tol: 1e-5,
            init: InitPolicy::SampleCovariance,
            skip_covariance: false,
        }
    }
}

/// One estimated coefficient with robust inference.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientEstimate {
    pub name: String,
    pub estimate: f64,
    pub se: f64,
    pub p_value: f64,
    pub stars: String,
}

/// Result of a QML fit.
#[derive(Debug)]
pub struct FitResult {
    pub theta_hat: [f64; N_PARAMS],
    pub params: ModelParams,
    pub robust_cov: DMatrix<f64>,
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    pub grad_norm: f64,
    /// Filter output at the optimum.
    pub filter: FilterOutput,
    /// Calendar month of the first filtered observation.
    pub filter_start: crate::data::Month,
    /// Per-coefficient estimates with robust SEs, in flat order.
    pub coefficients: Vec<CoefficientEstimate>,
    /// Starts whose optimization ended in the penalty region.
    pub penalized_starts: usize,
    /// True when T < 60 (results still returned).
    pub short_sample: bool,
}

/// Coefficient names in flat-vector order.
pub fn coefficient_names() -> [&'static str; N_PARAMS] {
    [
        "kappa_w.const", "kappa_w.1", "kappa_w.2", "kappa_w.3", "kappa_w.4",
        "kappa_i.const", "kappa_i.1", "kappa_i.2", "kappa_i.3",
        "delta.const", "delta.1", "delta.2", "delta.3",
        "c.11", "c.21", "c.22",
        "a.m", "a.w",
        "b.m", "b.w",
    ]
}

/// Default starting point: zero slopes, ln 2 for the world-price
/// constant, 0.5 for the integration constant, C from the Cholesky
/// factor of half the sample covariance, a = 0.2, b = 0.7.
pub fn default_start(returns: &[[f64; 2]]) -> ModelParams {
    let sample = Cov2::sample_covariance(returns);
    let half = Cov2 {
        h_m: 0.5 * sample.h_m,
        h_w: 0.5 * sample.h_w,
        h_mw: 0.5 * sample.h_mw,
    };
    let c_lower = half
        .cholesky()
        .map(|(l11, l21, l22)| [l11, l21, l22])
        .unwrap_or([0.05, 0.0, 0.05]);
    ModelParams {
        kappa_w: [std::f64::consts::LN_2, 0.0, 0.0, 0.0, 0.0],
        kappa_i: [0.0; 4],
        delta_int: [0.5, 0.0, 0.0, 0.0],
        c_lower,
        a: [0.2, 0.2],
        b: [0.7, 0.7],
    }
}

fn perturbed_starts(base: &ModelParams, n: usize, seed: u64) -> Vec<[f64; N_PARAMS]> {
    let base_vec = base.to_vec();
    let mut starts = vec![base_vec];
    for i in 1..n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let mut theta = base_vec;
        for (idx, v) in theta.iter_mut().enumerate() {
            let scale = match idx {
                0..=12 => 0.25,                  // kappa / delta coefficients
                13..=15 => 0.3 * v.abs().max(0.01), // covariance intercept
                _ => 0.1,                        // a, b
            };
            *v += scale * rng.sample::<f64, _>(StandardNormal);
        }
        starts.push(theta);
    }
    starts
}

/// Minimize the QML objective from several seeded starts and keep the
/// best interior optimum.
pub fn fit(
    returns: &[[f64; 2]],
    info: &InfoSets,
    config: &FitConfig,
) -> Result<FitResult, EstimateError> {
    let t_len = returns.len();
    let short_sample = t_len < 60;
    if short_sample {
        log::warn!("sample length {t_len} < 60; estimates will be fragile");
    }

    let objective = |theta: &[f64]| neg_loglik(theta, returns, info, config.init).value;
    let opts = OptimOptions {
        max_iter: config.max_iter,
        grad_tol: config.grad_tol,
        ..Default::default()
    };
    let starts = perturbed_starts(&default_start(returns), config.n_starts.max(1), config.seed);

    let results: Vec<_> = starts
        .par_iter()
        .map(|start| minimize_bfgs(&objective, start, &opts))
        .collect();

    let penalized_starts = results.iter().filter(|r| r.value >= PENALTY).count();
    let best = results
        .iter()
        .filter(|r| r.value.is_finite() && r.value < PENALTY)
        .min_by(|a, b| a.value.total_cmp(&b.value));
    let Some(best) = best else {
        if results.iter().all(|r| !r.value.is_finite()) {
            return Err(EstimateError::NonFiniteObjective);
        }
        return Err(EstimateError::AllStartsPenalized);
    };

    let mut theta_hat = [0.0; N_PARAMS];
    theta_hat.copy_from_slice(&best.x);
    let params = ModelParams::from_slice(&theta_hat)?;
    let filter_out = filter(&params, returns, info, config.init)?;
    if !params.is_stationary() {
        log::warn!("fitted covariance recursion is non-stationary (persistence >= 1)");
    }

    let cov = if config.skip_covariance {
        DMatrix::from_element(N_PARAMS, N_PARAMS, f64::NAN)
    } else {
        robust_cov(&theta_hat, returns, info, config.init)?
    };

    let names = coefficient_names();
    let coefficients = (0..N_PARAMS)
        .map(|i| {
            let se = cov[(i, i)].max(0.0).sqrt();
            let z = theta_hat[i] / se;
            let p_value = 2.0 * (1.0 - crate::stats::normal_cdf(z.abs()));
            CoefficientEstimate {
                name: names[i].to_string(),
                estimate: theta_hat[i],
                se,
                p_value,
                stars: significance_stars(p_value).to_string(),
            }
        })
        .collect();

    Ok(FitResult {
        theta_hat,
        params,
        robust_cov: cov,
        loglik: -best.value,
        converged: best.converged,
        iterations: best.iterations,
        grad_norm: best.grad_norm,
        filter: filter_out,
        filter_start: info.start,
        coefficients,
        penalized_starts,
        short_sample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{simulate_icapm, DgpSpec};

    fn dgp(t: usize, seed: u64) -> DgpSpec {
        DgpSpec {
            params: ModelParams {
                kappa_w: [0.8, 0.4, 0.0, 0.0, 0.0],
                kappa_i: [0.6, 0.0, 0.0, 0.0],
                delta_int: [0.6, 0.8, 0.0, 0.0],
                c_lower: [0.04, 0.005, 0.025],
                a: [0.103, 0.133],
                b: [0.597, 0.821],
            },
            t,
            seed,
            info_persistence: 0.9,
            info_scale: 0.3,
            start: "1988-01".parse().unwrap(),
        }
    }

    fn quick_config() -> FitConfig {
        FitConfig {
            n_starts: 2,
            seed: 1,
            max_iter: 150,
            skip_covariance: true,
            ..Default::default()
        }
    }

    #[test]
    fn identical_seed_gives_identical_theta() {
        let (returns, info, _) = simulate_icapm(&dgp(200, 5)).unwrap();
        let a = fit(&returns, &info, &quick_config()).unwrap();
        let b = fit(&returns, &info, &quick_config()).unwrap();
        for i in 0..N_PARAMS {
            assert_eq!(a.theta_hat[i].to_bits(), b.theta_hat[i].to_bits());
        }
        assert!(a.loglik.is_finite());
    }

    #[test]
    fn short_sample_warns_but_returns() {
        let (returns, info, _) = simulate_icapm(&dgp(30, 2)).unwrap();
        let mut cfg = quick_config();
        cfg.max_iter = 40;
        let r = fit(&returns, &info, &cfg).unwrap();
        assert!(r.short_sample);
        assert!(r.loglik.is_finite());
    }

    #[test]
    fn fitted_phi_tracks_the_truth_on_a_large_sample() {
        // scale the covariance up so risk premia are identifiable in-mean
        let mut s = dgp(1500, 3);
        s.params.c_lower = [0.4, 0.05, 0.25];
        let (returns, info, truth) = simulate_icapm(&s).unwrap();
        let cfg = FitConfig {
            n_starts: 3,
            seed: 7,
            skip_covariance: true,
            ..Default::default()
        };
        let r = fit(&returns, &info, &cfg).unwrap();
        let true_ll: f64 = truth.ll.iter().sum();
        // the QML optimum must beat the truth in-sample
        assert!(
            r.loglik >= true_ll - 1e-6,
            "fitted ll {} below true ll {true_ll}",
            r.loglik
        );
        let corr = correlation(&r.filter.phi, &truth.phi);
        assert!(corr > 0.8, "phi correlation {corr}");
    }

    fn correlation(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let ma = a.iter().sum::<f64>() / n;
        let mb = b.iter().sum::<f64>() / n;
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|x| (x - mb).powi(2)).sum();
        cov / (va.sqrt() * vb.sqrt())
    }
}
