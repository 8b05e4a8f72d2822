//! Fixed point constraint: a point on the body is pinned to a point in the
//! environment (ball-and-socket joint).
//!
//! Residual rows: `Φ = r + A·s̄ − P` (three rows, meters). Parameters are the
//! environment anchor `P` and the body-frame point `s̄`.

use nalgebra::{DMatrix, Matrix3, Vector3};

use super::frame::{EvalMode, RowEval};
use super::{CanonicalGeometry, FixedPointParams};
use crate::geom::{rotated_point_quat_jacobian, skew, Pose, Twist};

pub(super) const ROWS: usize = 3;
pub(super) const KINEMATIC: usize = 3;
pub(super) const PARAMS: usize = 6;

// α layout: [P, s̄]

pub(super) fn eval(
    p: &FixedPointParams,
    pose: &Pose,
    twist: &Twist,
    mode: EvalMode,
) -> RowEval {
    let mut out = RowEval::new(ROWS, KINEMATIC, PARAMS);
    let a = pose.rotation();
    let a_s = a * p.body_point;
    let s_star = pose.position + a_s;

    let phi = s_star - p.anchor;
    let dphi = twist.linear + twist.angular.cross(&a_s);
    for i in 0..3 {
        out.phi[i] = phi[i];
        out.dphi[i] = dphi[i];
    }

    if mode == EvalMode::WithGradient {
        let w_a = skew(&twist.angular) * a;
        for i in 0..3 {
            out.phi_alpha[i][i] = -1.0; // ∂/∂P
            for j in 0..3 {
                out.phi_alpha[i][3 + j] = a[(i, j)]; // ∂/∂s̄
                out.dphi_alpha[i][3 + j] = w_a[(i, j)];
            }
        }
    }
    out
}

pub(super) fn phi_r(_p: &FixedPointParams, _pose: &Pose) -> DMatrix<f64> {
    DMatrix::identity(3, 3)
}

pub(super) fn phi_q(p: &FixedPointParams, pose: &Pose) -> DMatrix<f64> {
    let j = rotated_point_quat_jacobian(&pose.orientation.normalized(), &p.body_point);
    let mut out = DMatrix::zeros(3, 4);
    out.copy_from(&j);
    out
}

pub(super) fn kinematic_error(p: &FixedPointParams, pose: &Pose) -> f64 {
    (pose.position + pose.rotation() * p.body_point - p.anchor).norm()
}

pub(super) fn canonicalize(p: &FixedPointParams) -> CanonicalGeometry {
    CanonicalGeometry::FixedPoint {
        anchor: p.anchor,
        body_point: p.body_point,
    }
}

/// Analytic `Φ_π = −skew(A·s̄)`, used as a cross-check oracle in tests.
#[cfg(test)]
pub(super) fn phi_pi_reference(p: &FixedPointParams, pose: &Pose) -> Matrix3<f64> {
    -skew(&(pose.rotation() * p.body_point))
}
