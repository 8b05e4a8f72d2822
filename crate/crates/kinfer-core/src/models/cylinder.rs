//! Concentric cylinder constraint: the body translates along and rotates
//! about a fixed axis (collar on a shaft).
//!
//! The axis is the z coordinate axis displaced by `(dx, dy)` in the x-y
//! plane and rotated by `e^w̃`; its tangent is `u3` and `(u1, u2)` span the
//! perpendicular plane. The body point `s̄` rides on the axis with `A·s̄`
//! kept perpendicular to it; the unit reference vector `t̄` pins the
//! remaining spin about `s̄`.
//!
//! Rows: `Φ₁ = dx − u1ᵀs*`, `Φ₂ = dy − u2ᵀs*`, `Φ₃ = (A·t̄)ᵀu3`,
//! `Φ₄ = (A·s̄)ᵀu3`, then the parameter equations `s̄ᵀt̄` and `t̄ᵀt̄ − 1`.

use nalgebra::{DMatrix, Vector3};

use super::frame::{EvalMode, Frame, RowEval};
use super::{AxisGeometry, CanonicalGeometry, ConcentricCylinderParams};
use crate::geom::{rotated_point_quat_jacobian, Pose, Twist};

pub(super) const ROWS: usize = 6;
pub(super) const KINEMATIC: usize = 4;
pub(super) const PARAMS: usize = 10;

// α layout: [t̄, s̄, dx, dy, wx, wy]

pub(super) fn eval(
    p: &ConcentricCylinderParams,
    pose: &Pose,
    twist: &Twist,
    mode: EvalMode,
) -> RowEval {
    let mut out = RowEval::new(ROWS, KINEMATIC, PARAMS);
    let frame = Frame::new(&p.orientation);
    let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));
    let a = pose.rotation();
    let a_s = a * p.body_point;
    let a_t = a * p.body_ref;
    let s_star = pose.position + a_s;
    let (v, w) = (&twist.linear, &twist.angular);

    out.phi[0] = p.axis_offset.x - u1.dot(&s_star);
    out.phi[1] = p.axis_offset.y - u2.dot(&s_star);
    out.phi[2] = a_t.dot(&u3);
    out.phi[3] = a_s.dot(&u3);
    out.phi[4] = p.body_point.dot(&p.body_ref);
    out.phi[5] = p.body_ref.norm_squared() - 1.0;

    out.dphi[0] = -u1.dot(v) - w.dot(&a_s.cross(&u1));
    out.dphi[1] = -u2.dot(v) - w.dot(&a_s.cross(&u2));
    out.dphi[2] = w.dot(&a_t.cross(&u3));
    out.dphi[3] = w.dot(&a_s.cross(&u3));

    if mode == EvalMode::WithGradient {
        let at = a.transpose();
        // Rows 0, 1: in-plane position of s*.
        for (row, u) in [(0usize, &u1), (1usize, &u2)] {
            let d_s = -(at * u);
            let dv_s = at * w.cross(u);
            for j in 0..3 {
                out.phi_alpha[row][3 + j] = d_s[j];
                out.dphi_alpha[row][3 + j] = dv_s[j];
            }
            out.phi_alpha[row][6 + row] = 1.0;
            for j in 0..2 {
                let du = frame.d_axis(j, row);
                out.phi_alpha[row][8 + j] = -s_star.dot(&du);
                out.dphi_alpha[row][8 + j] = -v.dot(&du) - w.dot(&a_s.cross(&du));
            }
        }
        // Rows 2, 3: body vectors perpendicular to the axis.
        let d_u3t = at * u3;
        let dv_u3 = at * u3.cross(w);
        for (row, rotated, slot) in [(2usize, &a_t, 0usize), (3usize, &a_s, 3usize)] {
            for j in 0..3 {
                out.phi_alpha[row][slot + j] = d_u3t[j];
                out.dphi_alpha[row][slot + j] = dv_u3[j];
            }
            for j in 0..2 {
                let du3 = frame.d_axis(j, 2);
                out.phi_alpha[row][8 + j] = rotated.dot(&du3);
                out.dphi_alpha[row][8 + j] = w.dot(&rotated.cross(&du3));
            }
        }
        // Parameter rows.
        for j in 0..3 {
            out.phi_alpha[4][j] = p.body_point[j];
            out.phi_alpha[4][3 + j] = p.body_ref[j];
            out.phi_alpha[5][j] = 2.0 * p.body_ref[j];
        }
    }
    out
}

pub(super) fn phi_r(p: &ConcentricCylinderParams, _pose: &Pose) -> DMatrix<f64> {
    let frame = Frame::new(&p.orientation);
    let mut m = DMatrix::zeros(KINEMATIC, 3);
    for row in 0..2 {
        let u = frame.u(row);
        for j in 0..3 {
            m[(row, j)] = -u[j];
        }
    }
    m
}

pub(super) fn phi_q(p: &ConcentricCylinderParams, pose: &Pose) -> DMatrix<f64> {
    let frame = Frame::new(&p.orientation);
    let q = pose.orientation.normalized();
    let j_s = rotated_point_quat_jacobian(&q, &p.body_point);
    let j_t = rotated_point_quat_jacobian(&q, &p.body_ref);
    let mut m = DMatrix::zeros(KINEMATIC, 4);
    let rows = [
        -(frame.u(0).transpose() * j_s),
        -(frame.u(1).transpose() * j_s),
        frame.u(2).transpose() * j_t,
        frame.u(2).transpose() * j_s,
    ];
    for (i, r) in rows.iter().enumerate() {
        for c in 0..4 {
            m[(i, c)] = r[c];
        }
    }
    m
}

pub(super) fn kinematic_error(p: &ConcentricCylinderParams, pose: &Pose) -> f64 {
    let frame = Frame::new(&p.orientation);
    let s_star = pose.position + pose.rotation() * p.body_point;
    let e1 = p.axis_offset.x - frame.u(0).dot(&s_star);
    let e2 = p.axis_offset.y - frame.u(1).dot(&s_star);
    libm::hypot(e1, e2)
}

pub(super) fn axis(p: &ConcentricCylinderParams) -> AxisGeometry {
    let frame = Frame::new(&p.orientation);
    let point: Vector3<f64> = p.axis_offset.x * frame.u(0) + p.axis_offset.y * frame.u(1);
    AxisGeometry::new(frame.u(2), point)
}

pub(super) fn canonicalize(p: &ConcentricCylinderParams) -> CanonicalGeometry {
    CanonicalGeometry::ConcentricCylinder { axis: axis(p) }
}
