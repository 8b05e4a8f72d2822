//! Axial rotation constraint: the body rotates about a fixed axis with no
//! translation (hinged door, knob).
//!
//! The axis is placed like the cylinder's (direction `u3 = e^w̃·ẑ`), but the
//! body point `s*` is pinned to the specific anchor `e^w̃·[dx, dy, dz]ᵀ` on
//! it, which removes the translation along the axis. `s̄` is the
//! perpendicular offset of the body origin from the axis, `t̄` the unit
//! reference that pins spin about `s̄`.
//!
//! Rows: `Φ₁ = r + A·s̄ − e^w̃·dᵀ` (3 rows), `Φ₂ = (A·t̄)ᵀu3`,
//! `Φ₃ = (A·s̄)ᵀu3`, then `s̄ᵀt̄`, `t̄ᵀt̄ − 1`.

use nalgebra::{DMatrix, Vector3};

use super::frame::{EvalMode, Frame, RowEval};
use super::{AxisGeometry, AxialRotationParams, CanonicalGeometry};
use crate::geom::{rotated_point_quat_jacobian, skew, Pose, Twist};

pub(super) const ROWS: usize = 7;
pub(super) const KINEMATIC: usize = 5;
pub(super) const PARAMS: usize = 11;

// α layout: [t̄, s̄, dx, dy, dz, wx, wy]

pub(super) fn eval(
    p: &AxialRotationParams,
    pose: &Pose,
    twist: &Twist,
    mode: EvalMode,
) -> RowEval {
    let mut out = RowEval::new(ROWS, KINEMATIC, PARAMS);
    let frame = Frame::new(&p.orientation);
    let u3 = frame.u(2);
    let a = pose.rotation();
    let a_s = a * p.body_point;
    let a_t = a * p.body_ref;
    let anchor = frame.rot * p.anchor_offset;
    let (v, w) = (&twist.linear, &twist.angular);

    let pin = pose.position + a_s - anchor;
    let dpin = v + w.cross(&a_s);
    for i in 0..3 {
        out.phi[i] = pin[i];
        out.dphi[i] = dpin[i];
    }
    out.phi[3] = a_t.dot(&u3);
    out.phi[4] = a_s.dot(&u3);
    out.phi[5] = p.body_point.dot(&p.body_ref);
    out.phi[6] = p.body_ref.norm_squared() - 1.0;

    out.dphi[3] = w.dot(&a_t.cross(&u3));
    out.dphi[4] = w.dot(&a_s.cross(&u3));

    if mode == EvalMode::WithGradient {
        let at = a.transpose();
        let w_a = skew(w) * a;
        // Anchor derivative w.r.t. w: ∂(R·d)/∂w_j.
        let d_anchor = [frame.d_ru(0, &p.anchor_offset), frame.d_ru(1, &p.anchor_offset)];
        for i in 0..3 {
            for j in 0..3 {
                out.phi_alpha[i][3 + j] = a[(i, j)];
                out.dphi_alpha[i][3 + j] = w_a[(i, j)];
            }
            for j in 0..3 {
                out.phi_alpha[i][6 + j] = -frame.u(j)[i];
            }
            for j in 0..2 {
                out.phi_alpha[i][9 + j] = -d_anchor[j][i];
            }
        }
        let d_u3t = at * u3;
        let dv_u3 = at * u3.cross(w);
        for (row, rotated, slot) in [(3usize, &a_t, 0usize), (4usize, &a_s, 3usize)] {
            for j in 0..3 {
                out.phi_alpha[row][slot + j] = d_u3t[j];
                out.dphi_alpha[row][slot + j] = dv_u3[j];
            }
            for j in 0..2 {
                let du3 = frame.d_axis(j, 2);
                out.phi_alpha[row][9 + j] = rotated.dot(&du3);
                out.dphi_alpha[row][9 + j] = w.dot(&rotated.cross(&du3));
            }
        }
        for j in 0..3 {
            out.phi_alpha[5][j] = p.body_point[j];
            out.phi_alpha[5][3 + j] = p.body_ref[j];
            out.phi_alpha[6][j] = 2.0 * p.body_ref[j];
        }
    }
    out
}

pub(super) fn phi_r(_p: &AxialRotationParams, _pose: &Pose) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(KINEMATIC, 3);
    for i in 0..3 {
        m[(i, i)] = 1.0;
    }
    m
}

pub(super) fn phi_q(p: &AxialRotationParams, pose: &Pose) -> DMatrix<f64> {
    let frame = Frame::new(&p.orientation);
    let q = pose.orientation.normalized();
    let j_s = rotated_point_quat_jacobian(&q, &p.body_point);
    let j_t = rotated_point_quat_jacobian(&q, &p.body_ref);
    let mut m = DMatrix::zeros(KINEMATIC, 4);
    for i in 0..3 {
        for c in 0..4 {
            m[(i, c)] = j_s[(i, c)];
        }
    }
    let row3 = frame.u(2).transpose() * j_t;
    let row4 = frame.u(2).transpose() * j_s;
    for c in 0..4 {
        m[(3, c)] = row3[c];
        m[(4, c)] = row4[c];
    }
    m
}

pub(super) fn kinematic_error(p: &AxialRotationParams, pose: &Pose) -> f64 {
    let frame = Frame::new(&p.orientation);
    let u3 = frame.u(2);
    let s_star = pose.position + pose.rotation() * p.body_point;
    let rel = s_star - frame.rot * p.anchor_offset;
    (rel - u3.dot(&rel) * u3).norm()
}

pub(super) fn anchor(p: &AxialRotationParams) -> Vector3<f64> {
    Frame::new(&p.orientation).rot * p.anchor_offset
}

pub(super) fn axis(p: &AxialRotationParams) -> AxisGeometry {
    let frame = Frame::new(&p.orientation);
    AxisGeometry::new(frame.u(2), frame.rot * p.anchor_offset)
}

pub(super) fn canonicalize(p: &AxialRotationParams) -> CanonicalGeometry {
    CanonicalGeometry::AxialRotation {
        axis: axis(p),
        anchor: anchor(p),
    }
}
