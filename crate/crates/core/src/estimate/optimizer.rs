//! Quasi-Newton minimization with central-difference gradients.
//!
//! BFGS with an Armijo backtracking line search. The inverse-Hessian
//! approximation starts from a scaled identity (the usual s'y / y'y
//! rescaling after the first update) and updates are skipped when the
//! curvature condition fails, which keeps the approximation positive
//! definite on the penalty-encoded QML landscape.

use nalgebra::{DMatrix, DVector};

/// Central-difference gradient with per-coordinate relative steps
/// h_i = step * max(|x_i|, 1).
pub fn numeric_gradient<F>(f: &F, x: &[f64], step: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut xp = x.to_vec();
    for i in 0..n {
        let h = step * x[i].abs().max(1.0);
        xp[i] = x[i] + h;
        let fp = f(&xp);
        xp[i] = x[i] - h;
        let fm = f(&xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    g
}

#[derive(Debug, Clone)]
pub struct OptimOptions {
    pub max_iter: usize,
    /// Convergence when ||g||_inf < grad_tol * max(1, |f|).
    pub grad_tol: f64,
    /// Convergence when the step shrinks below this relative size.
    pub step_tol: f64,
    /// Relative step of the central-difference gradient.
    pub grad_step: f64,
}

impl Default for OptimOptions {
    fn default() -> Self {
        Self {
            max_iter: 400,
            grad_tol: 1e-5,
            step_tol: 1e-10,
            grad_step: 1e-5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub evaluations: usize,
}

/// Minimize `f` from `x0` by BFGS with numeric gradients.
pub fn minimize_bfgs<F>(f: &F, x0: &[f64], opts: &OptimOptions) -> OptimResult
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x0.len();
    let mut evals = 0usize;

    let mut x = DVector::from_column_slice(x0);
    let mut fx = f(x.as_slice());
    evals += 1;
    let mut g = DVector::from_vec(numeric_gradient(f, x.as_slice(), opts.grad_step));
    evals += 2 * n;
    let mut h_inv = DMatrix::<f64>::identity(n, n);
    let mut first_update_pending = true;

    let mut iterations = 0;
    let mut converged = false;
    for iter in 0..opts.max_iter {
        iterations = iter + 1;
        let g_norm = g.amax();
        if !fx.is_finite() {
            break;
        }
        if g_norm < opts.grad_tol * fx.abs().max(1.0) {
            converged = true;
            break;
        }

        let mut direction = -(&h_inv * &g);
        let descent = direction.dot(&g);
        if !(descent < 0.0) || !direction.iter().all(|v| v.is_finite()) {
            // reset a broken approximation
            h_inv = DMatrix::identity(n, n);
            direction = -g.clone();
            first_update_pending = true;
        }
        let descent = direction.dot(&g);

        // Armijo backtracking, conservative first trial before the
        // inverse Hessian has any scale information.
        let mut alpha = if first_update_pending {
            (1.0 / direction.norm().max(1.0)).min(1.0)
        } else {
            1.0
        };
        let c1 = 1e-4;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = &x + alpha * &direction;
            let ft = f(trial.as_slice());
            evals += 1;
            if ft.is_finite() && ft <= fx + c1 * alpha * descent {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            break; // no progress possible along this direction
        };
        let step = &x_new - &x;
        if step.norm() < opts.step_tol * x.norm().max(1.0) {
            x = x_new;
            fx = f_new;
            converged = true;
            break;
        }

        let g_new = DVector::from_vec(numeric_gradient(f, x_new.as_slice(), opts.grad_step));
        evals += 2 * n;
        let y = &g_new - &g;
        let sy = step.dot(&y);
        if sy > 1e-12 * step.norm() * y.norm() {
            if first_update_pending {
                let scale = sy / y.dot(&y);
                if scale.is_finite() && scale > 0.0 {
                    h_inv = DMatrix::identity(n, n) * scale;
                }
                first_update_pending = false;
            }
            // BFGS inverse update
            let rho = 1.0 / sy;
            let hy = &h_inv * &y;
            let yhy = y.dot(&hy);
            let term1 = (&step * step.transpose()) * (rho * (1.0 + rho * yhy));
            let term2 = (&hy * step.transpose() + &step * hy.transpose()) * rho;
            h_inv = h_inv + term1 - term2;
        }
        x = x_new;
        fx = f_new;
        g = g_new;
    }

    OptimResult {
        grad_norm: g.amax(),
        x: x.as_slice().to_vec(),
        value: fx,
        iterations,
        converged,
        evaluations: evals,
    }
}
