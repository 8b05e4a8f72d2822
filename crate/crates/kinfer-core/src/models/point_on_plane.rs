//! Point on plane constraint: a point on the body slides on an environment
//! plane (pen tip on paper).
//!
//! The plane is the x-y coordinate plane displaced by `d` along z and
//! rotated by `e^w̃`; its normal is `u3 = e^w̃·ẑ`. The single residual row is
//! the signed distance of the body point from the plane:
//! `Φ₁ = d − u3ᵀ(r + A·s̄)`.

use nalgebra::{DMatrix, Vector3};

use super::frame::{EvalMode, Frame, RowEval};
use super::{CanonicalGeometry, PointOnPlaneParams};
use crate::geom::{rotated_point_quat_jacobian, Pose, Twist};

pub(super) const ROWS: usize = 1;
pub(super) const KINEMATIC: usize = 1;
pub(super) const PARAMS: usize = 6;

// α layout: [s̄, d, wx, wy]

pub(super) fn eval(
    p: &PointOnPlaneParams,
    pose: &Pose,
    twist: &Twist,
    mode: EvalMode,
) -> RowEval {
    let mut out = RowEval::new(ROWS, KINEMATIC, PARAMS);
    let frame = Frame::new(&p.orientation);
    let u3 = frame.u(2);
    let a = pose.rotation();
    let a_s = a * p.body_point;
    let s_star = pose.position + a_s;

    out.phi[0] = p.offset - u3.dot(&s_star);
    out.dphi[0] = -u3.dot(&twist.linear) - twist.angular.dot(&a_s.cross(&u3));

    if mode == EvalMode::WithGradient {
        let (v, w) = (&twist.linear, &twist.angular);
        let d_s = -(a.transpose() * u3);
        let dv_s = a.transpose() * w.cross(&u3);
        for j in 0..3 {
            out.phi_alpha[0][j] = d_s[j];
            out.dphi_alpha[0][j] = dv_s[j];
        }
        out.phi_alpha[0][3] = 1.0;
        for j in 0..2 {
            let du3 = frame.d_axis(j, 2);
            out.phi_alpha[0][4 + j] = -s_star.dot(&du3);
            out.dphi_alpha[0][4 + j] = -v.dot(&du3) - w.dot(&a_s.cross(&du3));
        }
    }
    out
}

pub(super) fn phi_r(p: &PointOnPlaneParams, _pose: &Pose) -> DMatrix<f64> {
    let u3 = Frame::new(&p.orientation).u(2);
    DMatrix::from_row_slice(1, 3, &[-u3.x, -u3.y, -u3.z])
}

pub(super) fn phi_q(p: &PointOnPlaneParams, pose: &Pose) -> DMatrix<f64> {
    let u3 = Frame::new(&p.orientation).u(2);
    let j = rotated_point_quat_jacobian(&pose.orientation.normalized(), &p.body_point);
    let row = -u3.transpose() * j;
    DMatrix::from_row_slice(1, 4, row.as_slice())
}

pub(super) fn kinematic_error(p: &PointOnPlaneParams, pose: &Pose) -> f64 {
    let u3 = Frame::new(&p.orientation).u(2);
    let s_star = pose.position + pose.rotation() * p.body_point;
    (p.offset - u3.dot(&s_star)).abs()
}

pub(super) fn canonicalize(p: &PointOnPlaneParams) -> CanonicalGeometry {
    let u3 = Frame::new(&p.orientation).u(2);
    CanonicalGeometry::PointOnPlane {
        plane: super::PlaneGeometry::new(u3, p.offset),
        body_point: p.body_point,
    }
}

/// Analytic `Φ_π = −(A·s̄ × u3)ᵀ`, cross-check oracle.
#[cfg(test)]
pub(super) fn phi_pi_reference(p: &PointOnPlaneParams, pose: &Pose) -> Vector3<f64> {
    let u3 = Frame::new(&p.orientation).u(2);
    -(pose.rotation() * p.body_point).cross(&u3)
}
