//! Prismatic constraint: pure translation along a fixed line (drawer
//! slide). The body-frame origin rides on the line and the orientation is
//! fully pinned by two body vectors.
//!
//! The line is the z coordinate axis displaced by `(dx, dy)` and rotated by
//! `e^w̃`; motion is along `u3`. `s̄` is a body unit vector held parallel to
//! the axis (rows 3–4), `t̄` a body unit vector held perpendicular to `u1`
//! (row 5); together with the parameter equations these pin all three
//! rotational degrees of freedom.
//!
//! Rows: `Φ₁ = dx − u1ᵀr`, `Φ₂ = dy − u2ᵀr`, `Φ₃ = (A·s̄)ᵀu1`,
//! `Φ₄ = (A·s̄)ᵀu2`, `Φ₅ = (A·t̄)ᵀu1`, then `s̄ᵀt̄`, `t̄ᵀt̄ − 1`, `s̄ᵀs̄ − 1`.

use nalgebra::DMatrix;

use super::frame::{EvalMode, Frame, RowEval};
use super::{AxisGeometry, CanonicalGeometry, PrismaticParams};
use crate::geom::{rotated_point_quat_jacobian, Pose, Twist};

pub(super) const ROWS: usize = 8;
pub(super) const KINEMATIC: usize = 5;
pub(super) const PARAMS: usize = 10;

// α layout: [t̄, s̄, dx, dy, wx, wy]

pub(super) fn eval(p: &PrismaticParams, pose: &Pose, twist: &Twist, mode: EvalMode) -> RowEval {
    let mut out = RowEval::new(ROWS, KINEMATIC, PARAMS);
    let frame = Frame::new(&p.orientation);
    let (u1, u2) = (frame.u(0), frame.u(1));
    let a = pose.rotation();
    let a_s = a * p.body_axis;
    let a_t = a * p.body_ref;
    let r = &pose.position;
    let (v, w) = (&twist.linear, &twist.angular);

    out.phi[0] = p.axis_offset.x - u1.dot(r);
    out.phi[1] = p.axis_offset.y - u2.dot(r);
    out.phi[2] = a_s.dot(&u1);
    out.phi[3] = a_s.dot(&u2);
    out.phi[4] = a_t.dot(&u1);
    out.phi[5] = p.body_axis.dot(&p.body_ref);
    out.phi[6] = p.body_ref.norm_squared() - 1.0;
    out.phi[7] = p.body_axis.norm_squared() - 1.0;

    out.dphi[0] = -u1.dot(v);
    out.dphi[1] = -u2.dot(v);
    out.dphi[2] = w.dot(&a_s.cross(&u1));
    out.dphi[3] = w.dot(&a_s.cross(&u2));
    out.dphi[4] = w.dot(&a_t.cross(&u1));

    if mode == EvalMode::WithGradient {
        let at = a.transpose();
        for row in 0..2 {
            out.phi_alpha[row][6 + row] = 1.0;
            for j in 0..2 {
                let du = frame.d_axis(j, row);
                out.phi_alpha[row][8 + j] = -r.dot(&du);
                out.dphi_alpha[row][8 + j] = -v.dot(&du);
            }
        }
        // Rows 2–4: body vectors against frame axes.
        // (row, frame axis index, rotated body vector, α slot of that body vector)
        let specs = [
            (2usize, 0usize, &a_s, 3usize),
            (3, 1, &a_s, 3),
            (4, 0, &a_t, 0),
        ];
        for (row, axis, rotated, slot) in specs {
            let u = frame.u(axis);
            let d_b = at * u;
            let dv_b = at * u.cross(w);
            for j in 0..3 {
                out.phi_alpha[row][slot + j] = d_b[j];
                out.dphi_alpha[row][slot + j] = dv_b[j];
            }
            for j in 0..2 {
                let du = frame.d_axis(j, axis);
                out.phi_alpha[row][8 + j] = rotated.dot(&du);
                out.dphi_alpha[row][8 + j] = w.dot(&rotated.cross(&du));
            }
        }
        for j in 0..3 {
            out.phi_alpha[5][j] = p.body_axis[j];
            out.phi_alpha[5][3 + j] = p.body_ref[j];
            out.phi_alpha[6][j] = 2.0 * p.body_ref[j];
            out.phi_alpha[7][3 + j] = 2.0 * p.body_axis[j];
        }
    }
    out
}

pub(super) fn phi_r(p: &PrismaticParams, _pose: &Pose) -> DMatrix<f64> {
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

pub(super) fn phi_q(p: &PrismaticParams, pose: &Pose) -> DMatrix<f64> {
    let frame = Frame::new(&p.orientation);
    let q = pose.orientation.normalized();
    let j_s = rotated_point_quat_jacobian(&q, &p.body_axis);
    let j_t = rotated_point_quat_jacobian(&q, &p.body_ref);
    let mut m = DMatrix::zeros(KINEMATIC, 4);
    let rows = [
        frame.u(0).transpose() * j_s,
        frame.u(1).transpose() * j_s,
        frame.u(0).transpose() * j_t,
    ];
    for (i, r) in rows.iter().enumerate() {
        for c in 0..4 {
            m[(i + 2, c)] = r[c];
        }
    }
    m
}

pub(super) fn kinematic_error(p: &PrismaticParams, pose: &Pose) -> f64 {
    let frame = Frame::new(&p.orientation);
    let e1 = p.axis_offset.x - frame.u(0).dot(&pose.position);
    let e2 = p.axis_offset.y - frame.u(1).dot(&pose.position);
    libm::hypot(e1, e2)
}

pub(super) fn axis(p: &PrismaticParams) -> AxisGeometry {
    let frame = Frame::new(&p.orientation);
    let point = p.axis_offset.x * frame.u(0) + p.axis_offset.y * frame.u(1);
    AxisGeometry::new(frame.u(2), point)
}

pub(super) fn canonicalize(p: &PrismaticParams) -> CanonicalGeometry {
    CanonicalGeometry::Prismatic { axis: axis(p) }
}
