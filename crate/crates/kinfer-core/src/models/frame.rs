//! Shared per-pose evaluation helpers for the constraint models.
//!
//! Several models place their geometry (a plane or an axis) by a general
//! displacement of a coordinate plane/axis: a rotation `R = e^w̃` encoded in
//! two-component exponential coordinates plus in-frame offsets. This module
//! precomputes `R`, its columns, and the quantities needed for derivatives
//! with respect to `w`.

use nalgebra::{Matrix3, Vector3};

use crate::geom::{so3_right_jacobian, ExpCoords};

/// Frame placed by exponential coordinates: rotation and its `w`-derivative.
#[derive(Debug, Clone)]
pub(crate) struct Frame {
    pub rot: Matrix3<f64>,
    /// Right-Jacobian columns `J_r(w)·e_x`, `J_r(w)·e_y`; the derivative of
    /// a rotated vector is `∂(R u)/∂w_j = R·(jr[j] × u)`.
    jr: [Vector3<f64>; 2],
}

impl Frame {
    pub fn new(w: &ExpCoords) -> Self {
        let wv = w.vector();
        let jac = so3_right_jacobian(&wv);
        Frame {
            rot: crate::geom::rotation_from_scaled_axis(&wv),
            jr: [jac.column(0).into_owned(), jac.column(1).into_owned()],
        }
    }

    /// Column `i` of `R`: the image of the i-th coordinate axis.
    pub fn u(&self, i: usize) -> Vector3<f64> {
        self.rot.column(i).into_owned()
    }

    /// `∂(R u)/∂w_j` for `j ∈ {0, 1}`.
    pub fn d_ru(&self, j: usize, u: &Vector3<f64>) -> Vector3<f64> {
        self.rot * self.jr[j].cross(u)
    }

    /// `∂(R e_i)/∂w_j` — derivative of a frame axis.
    pub fn d_axis(&self, j: usize, i: usize) -> Vector3<f64> {
        let mut e = Vector3::zeros();
        e[i] = 1.0;
        self.d_ru(j, &e)
    }
}

/// Maximum residual row count over all models.
pub(crate) const MAX_ROWS: usize = 8;
/// Maximum parameter count over all models.
pub(crate) const MAX_PARAMS: usize = 11;

/// What an evaluation should produce. Value-only line-search probes skip the
/// parameter Jacobians, which dominate the cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EvalMode {
    /// Residual rows and velocity rows.
    Values,
    /// Also the parameter Jacobians of both.
    WithGradient,
}

/// Fixed-capacity result of evaluating one model at one sample.
///
/// Rows `0..kinematic` are the kinematic constraint rows (they have pose and
/// velocity Jacobians); rows `kinematic..rows` are parameter equations.
pub(crate) struct RowEval {
    pub rows: usize,
    pub kinematic: usize,
    pub params: usize,
    /// Residual Φ, stacked kinematic rows then parameter rows.
    pub phi: [f64; MAX_ROWS],
    /// Velocity residual δΦ = Φ_r·v + Φ_π·ω (kinematic rows; rest zero).
    pub dphi: [f64; MAX_ROWS],
    /// ∂Φ/∂α.
    pub phi_alpha: [[f64; MAX_PARAMS]; MAX_ROWS],
    /// ∂(δΦ)/∂α.
    pub dphi_alpha: [[f64; MAX_PARAMS]; MAX_ROWS],
}

impl RowEval {
    pub fn new(rows: usize, kinematic: usize, params: usize) -> Self {
        RowEval {
            rows,
            kinematic,
            params,
            phi: [0.0; MAX_ROWS],
            dphi: [0.0; MAX_ROWS],
            phi_alpha: [[0.0; MAX_PARAMS]; MAX_ROWS],
            dphi_alpha: [[0.0; MAX_PARAMS]; MAX_ROWS],
        }
    }
}
