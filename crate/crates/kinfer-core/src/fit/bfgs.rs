//! Dense BFGS with backtracking Armijo line search.
//!
//! Small-dimension (≤ 11 here) unconstrained minimizer: inverse-Hessian
//! BFGS updates, identity initialization with a gradient-scale cap on the
//! first step and the usual `sᵀy/yᵀy` rescale at the first update.
//! Accepted objective values are monotone non-increasing by construction.

use nalgebra::{DMatrix, DVector};

const ARMIJO_C: f64 = 1e-4;
const BACKTRACK: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;
/// Line-search stalls with a gradient below this are still reported as
/// converged: the iterate is at the limit of float progress.
const STALL_GRADIENT: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct BfgsOptions {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
}

#[derive(Debug, Clone)]
pub struct BfgsOutcome {
    pub x: DVector<f64>,
    pub value: f64,
    pub gradient_inf_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f`. The callback fills the gradient when a buffer is passed
/// (value-only probes during the line search leave it `None`).
pub fn minimize<F>(mut f: F, x0: DVector<f64>, opts: &BfgsOptions) -> BfgsOutcome
where
    F: FnMut(&DVector<f64>, Option<&mut DVector<f64>>) -> f64,
{
    let n = x0.len();
    let mut x = x0;
    let mut g = DVector::zeros(n);
    let mut fx = f(&x, Some(&mut g));
    if !fx.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return BfgsOutcome {
            x,
            value: fx,
            gradient_inf_norm: f64::INFINITY,
            iterations: 0,
            converged: false,
        };
    }

    let g0_norm = g.norm();
    let mut h = DMatrix::identity(n, n) / g0_norm.max(1.0);
    let mut first_update_pending = true;
    let mut iterations = 0;

    for _ in 0..opts.max_iterations {
        let g_inf = g.amax();
        if g_inf <= opts.gradient_tolerance {
            return BfgsOutcome {
                x,
                value: fx,
                gradient_inf_norm: g_inf,
                iterations,
                converged: true,
            };
        }

        let mut d = -(&h * &g);
        let mut slope = d.dot(&g);
        if !(slope < 0.0) {
            // Curvature information went bad; restart from steepest descent.
            h = DMatrix::identity(n, n) / g.norm().max(1.0);
            first_update_pending = true;
            d = -(&h * &g);
            slope = d.dot(&g);
        }

        // Backtracking Armijo search, value-only probes.
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let candidate = &x + &d * step;
            let fc = f(&candidate, None);
            if fc.is_finite() && fc <= fx + ARMIJO_C * step * slope {
                accepted = Some((candidate, fc));
                break;
            }
            step *= BACKTRACK;
            if step < 1e-20 {
                break;
            }
        }
        let Some((x_new, f_new)) = accepted else {
            // No downhill progress possible at float precision.
            let converged = g_inf <= STALL_GRADIENT;
            return BfgsOutcome {
                x,
                value: fx,
                gradient_inf_norm: g_inf,
                iterations,
                converged,
            };
        };

        let mut g_new = DVector::zeros(n);
        let f_checked = f(&x_new, Some(&mut g_new));
        debug_assert!((f_checked - f_new).abs() <= 1e-9 * (1.0 + f_new.abs()));
        if g_new.iter().any(|v| !v.is_finite()) {
            return BfgsOutcome {
                x,
                value: fx,
                gradient_inf_norm: g_inf,
                iterations,
                converged: false,
            };
        }

        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-10 * s.norm() * y.norm() {
            if first_update_pending {
                let yy = y.dot(&y);
                if yy > 0.0 {
                    h = DMatrix::identity(n, n) * (sy / yy);
                }
                first_update_pending = false;
            }
            // H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            let ss = &s * s.transpose();
            let hys = &hy * s.transpose();
            h = h - (&hys + hys.transpose()) * rho + &ss * (rho * rho * yhy + rho);
        }

        x = x_new;
        fx = f_new;
        g = g_new;
        iterations += 1;
    }

    let g_inf = g.amax();
    BfgsOutcome {
        x,
        value: fx,
        gradient_inf_norm: g_inf,
        iterations,
        converged: g_inf <= opts.gradient_tolerance,
    }
}
