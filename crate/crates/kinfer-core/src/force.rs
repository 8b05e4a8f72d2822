//! Reaction-wrench estimation and the force/moment error criteria.
//!
//! A constraint can only react with wrenches in the row space of its
//! kinematic Jacobian `[Φ_r | Φ_π]`; the Lagrange multipliers locate the
//! measured wrench inside that row space, the remainder is attributed to
//! friction along the motion direction, and whatever is left after both is
//! the per-sample force/moment error:
//!
//! ```text
//! λ        = argmin ‖Φ_rᵀλ + f‖² + ‖Φ_πᵀλ + n‖²
//! f_react  = −Φ_rᵀλ          n_react = −Φ_πᵀλ
//! f_μ      = (f_resᵀ v̂)·v̂    n_μ     = (n_resᵀ ω̂)·ω̂
//! f_error  = ‖f − f_react − f_μ‖     n_error = ‖n − n_react − n_μ‖
//! ```
//!
//! The reaction is the row-space projection of the measured wrench (the
//! permissible-reaction form `Φ_rᵀλ + f = 0` solved in the least-squares
//! sense), so a wrench that is exactly reaction-plus-friction nulls out.
//! Ordering matters: friction is removed only after the reaction, because
//! force/moment coupling lets legitimate reactions point along the motion.
//! Gravity and inertia are not compensated.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Vector3};

use crate::models::{self, ConstraintParams};
use crate::geom::{Pose, Twist, Wrench};
use crate::segment::Segment;
use crate::synth::{SPEED_FLOOR_ANGULAR, SPEED_FLOOR_LINEAR};

/// Per-sample wrench decomposition and error criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct WrenchErrors {
    /// `‖f − f_react − f_μ‖₂` (N).
    pub f_error: f64,
    /// `‖n − n_react − n_μ‖₂` (N·m).
    pub n_error: f64,
    /// Lagrange multipliers, one per kinematic row. Gauge-dependent when the
    /// Jacobian is rank-deficient (the reaction wrench is not).
    pub lambda: DVector<f64>,
    pub f_react: Vector3<f64>,
    pub n_react: Vector3<f64>,
    pub f_mu: Vector3<f64>,
    pub n_mu: Vector3<f64>,
    /// The stacked Jacobian was rank-deficient and λ is the minimum-norm
    /// representative.
    pub rank_deficient: bool,
}

/// Solves the per-sample least-squares problem for λ.
///
/// The stacked 6×k' system `[Φ_rᵀ; Φ_πᵀ]·λ = −(f, n)` is solved by SVD;
/// rank deficiency yields the minimum-norm λ.
pub fn solve_lagrange(params: &ConstraintParams, pose: &Pose, wrench: &Wrench) -> DVector<f64> {
    let (lambda, _) = solve_lagrange_flagged(params, pose, wrench);
    lambda
}

fn solve_lagrange_flagged(
    params: &ConstraintParams,
    pose: &Pose,
    wrench: &Wrench,
) -> (DVector<f64>, bool) {
    let (phi_r, phi_pi) = models::jacobians(params, pose);
    let k = phi_r.nrows();
    let mut stacked = DMatrix::zeros(6, k);
    stacked
        .view_mut((0, 0), (3, k))
        .copy_from(&phi_r.transpose());
    stacked
        .view_mut((3, 0), (3, k))
        .copy_from(&phi_pi.transpose());
    let mut rhs = DVector::zeros(6);
    for i in 0..3 {
        rhs[i] = -wrench.force[i];
        rhs[3 + i] = -wrench.moment[i];
    }
    let svd = stacked.svd(true, true);
    let tol = 1e-10 * svd.singular_values.max().max(1.0);
    let rank = svd.singular_values.iter().filter(|s| **s > tol).count();
    let lambda = svd.solve(&rhs, tol).expect("svd computed with u and v");
    (lambda, rank < k)
}

/// Reaction wrench spanned by the constraint for the given multipliers:
/// the permissible-reaction pair `(−Φ_rᵀλ, −Φ_πᵀλ)`, which does no work on
/// any admissible twist.
pub fn reaction_wrench(
    params: &ConstraintParams,
    pose: &Pose,
    lambda: &DVector<f64>,
) -> (Vector3<f64>, Vector3<f64>) {
    let (phi_r, phi_pi) = models::jacobians(params, pose);
    let f = phi_r.transpose() * lambda;
    let n = phi_pi.transpose() * lambda;
    (
        -Vector3::new(f[0], f[1], f[2]),
        -Vector3::new(n[0], n[1], n[2]),
    )
}

/// Friction force/moment: projection of the residual onto the unit motion
/// direction, zero below the speed floors where the direction is undefined.
pub fn friction_wrench(
    f_residual: &Vector3<f64>,
    n_residual: &Vector3<f64>,
    twist: &Twist,
) -> (Vector3<f64>, Vector3<f64>) {
    let f_mu = {
        let speed = twist.linear.norm();
        if speed >= SPEED_FLOOR_LINEAR {
            let v_hat = twist.linear / speed;
            f_residual.dot(&v_hat) * v_hat
        } else {
            Vector3::zeros()
        }
    };
    let n_mu = {
        let rate = twist.angular.norm();
        if rate >= SPEED_FLOOR_ANGULAR {
            let w_hat = twist.angular / rate;
            n_residual.dot(&w_hat) * w_hat
        } else {
            Vector3::zeros()
        }
    };
    (f_mu, n_mu)
}

/// Full per-sample pipeline: reaction first, then friction, then the error
/// norms.
pub fn wrench_errors(
    params: &ConstraintParams,
    pose: &Pose,
    twist: &Twist,
    wrench: &Wrench,
) -> WrenchErrors {
    let (lambda, rank_deficient) = solve_lagrange_flagged(params, pose, wrench);
    let (f_react, n_react) = reaction_wrench(params, pose, &lambda);
    let f_residual = wrench.force - f_react;
    let n_residual = wrench.moment - n_react;
    let (f_mu, n_mu) = friction_wrench(&f_residual, &n_residual, twist);
    WrenchErrors {
        f_error: (f_residual - f_mu).norm(),
        n_error: (n_residual - n_mu).norm(),
        lambda,
        f_react,
        n_react,
        f_mu,
        n_mu,
        rank_deficient,
    }
}

/// [`wrench_errors`] across a whole segment.
pub fn segment_wrench_errors(params: &ConstraintParams, segment: &Segment) -> Vec<WrenchErrors> {
    segment
        .samples
        .iter()
        .map(|s| wrench_errors(params, &s.pose, &s.twist, &s.wrench))
        .collect()
}
