//! Planar constraint: the body slides and spins against a plane (eraser on
//! a whiteboard). The body-frame origin stays on the plane and the body
//! vector `t̄` stays aligned with the plane normal.
//!
//! Rows: `Φ₁ = d − u3ᵀr`, `Φ₂ = (A·t̄)ᵀu1`, `Φ₃ = (A·t̄)ᵀu2`, plus the
//! parameter equation `t̄ᵀt̄ − 1`.

use nalgebra::DMatrix;

use super::frame::{EvalMode, Frame, RowEval};
use super::{CanonicalGeometry, PlanarParams};
use crate::geom::{rotated_point_quat_jacobian, Pose, Twist};

pub(super) const ROWS: usize = 4;
pub(super) const KINEMATIC: usize = 3;
pub(super) const PARAMS: usize = 6;

// α layout: [t̄, d, wx, wy]

pub(super) fn eval(p: &PlanarParams, pose: &Pose, twist: &Twist, mode: EvalMode) -> RowEval {
    let mut out = RowEval::new(ROWS, KINEMATIC, PARAMS);
    let frame = Frame::new(&p.orientation);
    let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));
    let a = pose.rotation();
    let a_t = a * p.body_normal;
    let r = &pose.position;
    let (v, w) = (&twist.linear, &twist.angular);

    out.phi[0] = p.offset - u3.dot(r);
    out.phi[1] = a_t.dot(&u1);
    out.phi[2] = a_t.dot(&u2);
    out.phi[3] = p.body_normal.norm_squared() - 1.0;

    out.dphi[0] = -u3.dot(v);
    out.dphi[1] = w.dot(&a_t.cross(&u1));
    out.dphi[2] = w.dot(&a_t.cross(&u2));

    if mode == EvalMode::WithGradient {
        let at = a.transpose();
        out.phi_alpha[0][3] = 1.0;
        for j in 0..2 {
            let du3 = frame.d_axis(j, 2);
            out.phi_alpha[0][4 + j] = -r.dot(&du3);
            out.dphi_alpha[0][4 + j] = -v.dot(&du3);
        }
        for (row, axis) in [(1usize, 0usize), (2usize, 1usize)] {
            let u = frame.u(axis);
            let d_t = at * u;
            let dv_t = at * u.cross(w);
            for j in 0..3 {
                out.phi_alpha[row][j] = d_t[j];
                out.dphi_alpha[row][j] = dv_t[j];
            }
            for j in 0..2 {
                let du = frame.d_axis(j, axis);
                out.phi_alpha[row][4 + j] = a_t.dot(&du);
                out.dphi_alpha[row][4 + j] = w.dot(&a_t.cross(&du));
            }
        }
        for j in 0..3 {
            out.phi_alpha[3][j] = 2.0 * p.body_normal[j];
        }
    }
    out
}

pub(super) fn phi_r(p: &PlanarParams, _pose: &Pose) -> DMatrix<f64> {
    let u3 = Frame::new(&p.orientation).u(2);
    let mut m = DMatrix::zeros(KINEMATIC, 3);
    for j in 0..3 {
        m[(0, j)] = -u3[j];
    }
    m
}

pub(super) fn phi_q(p: &PlanarParams, pose: &Pose) -> DMatrix<f64> {
    let frame = Frame::new(&p.orientation);
    let j_t = rotated_point_quat_jacobian(&pose.orientation.normalized(), &p.body_normal);
    let mut m = DMatrix::zeros(KINEMATIC, 4);
    for (i, axis) in [(1usize, 0usize), (2usize, 1usize)] {
        let row = frame.u(axis).transpose() * j_t;
        for c in 0..4 {
            m[(i, c)] = row[c];
        }
    }
    m
}

pub(super) fn kinematic_error(p: &PlanarParams, pose: &Pose) -> f64 {
    let u3 = Frame::new(&p.orientation).u(2);
    (p.offset - u3.dot(&pose.position)).abs()
}

pub(super) fn canonicalize(p: &PlanarParams) -> CanonicalGeometry {
    let u3 = Frame::new(&p.orientation).u(2);
    CanonicalGeometry::Planar {
        plane: super::PlaneGeometry::new(u3, p.offset),
    }
}
