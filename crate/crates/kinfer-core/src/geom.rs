//! Rigid-body math: quaternions, rotation matrices, exponential coordinates
//! and the virtual-rotation Jacobian transformation.
//!
//! Conventions used throughout the crate:
//!
//! * quaternions are scalar-first, `q = [w, v]`, unit norm;
//! * the rotation matrix is `A = (w² − vᵀv)·I + 2vvᵀ + 2w·ṽ`;
//! * angular velocity and virtual rotations are expressed in the **global**
//!   frame; the body-frame rate maps through `Aᵀ`;
//! * wrenches are taken about the body-frame origin in global axes.

use nalgebra::{DMatrix, Matrix3, Matrix3x4, Vector3};

use crate::{Error, Result};

/// Tolerance on `‖q‖ − 1` beyond which a quaternion is rejected as input.
pub const UNIT_NORM_TOL: f64 = 1e-6;

/// Below this rotation angle the Rodrigues coefficients switch to their
/// Taylor series to avoid 0/0.
const SMALL_ANGLE: f64 = 1e-8;

/// Unit quaternion, scalar part first.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Quat {
    /// Scalar part.
    pub w: f64,
    /// Vector part.
    pub v: Vector3<f64>,
}

impl Quat {
    pub const IDENTITY: Quat = Quat {
        w: 1.0,
        v: Vector3::new(0.0, 0.0, 0.0),
    };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat {
            w,
            v: Vector3::new(x, y, z),
        }
    }

    /// Rotation of `angle` radians about `axis` (normalized internally).
    pub fn from_axis_angle(axis: &Vector3<f64>, angle: f64) -> Self {
        let n = axis.norm();
        if n < SMALL_ANGLE {
            return Quat::IDENTITY;
        }
        let half = 0.5 * angle;
        Quat {
            w: libm::cos(half),
            v: axis * (libm::sin(half) / n),
        }
    }

    /// Rotation encoded as a scaled axis (angle = `‖w‖`).
    pub fn from_scaled_axis(scaled: Vector3<f64>) -> Self {
        let angle = scaled.norm();
        if angle < SMALL_ANGLE {
            // First-order series keeps the map smooth through zero.
            let q = Quat {
                w: 1.0,
                v: scaled * 0.5,
            };
            return q.normalized();
        }
        Quat::from_axis_angle(&scaled, angle)
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.w * self.w + self.v.norm_squared())
    }

    /// Normalized copy. The zero quaternion maps to identity.
    pub fn normalized(&self) -> Quat {
        let n = self.norm();
        if n == 0.0 {
            return Quat::IDENTITY;
        }
        Quat {
            w: self.w / n,
            v: self.v / n,
        }
    }

    /// Hamilton product `self ⊗ rhs`.
    pub fn mul(&self, rhs: &Quat) -> Quat {
        Quat {
            w: self.w * rhs.w - self.v.dot(&rhs.v),
            v: self.v * rhs.w + rhs.v * self.w + self.v.cross(&rhs.v),
        }
    }

    pub fn conjugate(&self) -> Quat {
        Quat {
            w: self.w,
            v: -self.v,
        }
    }

    /// Coefficients as `[w, x, y, z]`.
    pub fn coords(&self) -> [f64; 4] {
        [self.w, self.v.x, self.v.y, self.v.z]
    }

    /// Rotation matrix `A(q) = (w² − vᵀv)·I + 2vvᵀ + 2w·ṽ`.
    ///
    /// Rejects quaternions whose norm deviates from 1 by more than
    /// [`UNIT_NORM_TOL`]; within tolerance the quaternion is re-normalized
    /// first so the result is orthogonal to machine precision.
    pub fn rotation_matrix(&self) -> Result<Matrix3<f64>> {
        let n = self.norm();
        if (n - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NonUnitQuaternion { norm: n });
        }
        Ok(self.normalized().rotation_matrix_unchecked())
    }

    /// Rotation matrix without the unit-norm check. Callers must pass a unit
    /// quaternion.
    pub fn rotation_matrix_unchecked(&self) -> Matrix3<f64> {
        let w = self.w;
        let v = self.v;
        let mut a = Matrix3::identity() * (w * w - v.norm_squared());
        a += 2.0 * v * v.transpose();
        a += 2.0 * w * skew(&v);
        a
    }

    /// Returns `self` or `-self`, whichever is in the same hemisphere as
    /// `reference`. Both represent the same rotation.
    pub fn aligned_with(&self, reference: &Quat) -> Quat {
        let dot =
            self.w * reference.w + self.v.dot(&reference.v);
        if dot < 0.0 {
            Quat {
                w: -self.w,
                v: -self.v,
            }
        } else {
            *self
        }
    }
}

/// Rigid-body pose: position of the body-frame origin plus orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pose {
    /// Position of the body-frame origin in the global frame (m).
    pub position: Vector3<f64>,
    /// Orientation of the body frame.
    pub orientation: Quat,
}

impl Pose {
    pub fn new(position: Vector3<f64>, orientation: Quat) -> Self {
        Pose {
            position,
            orientation,
        }
    }

    pub fn identity() -> Self {
        Pose {
            position: Vector3::zeros(),
            orientation: Quat::IDENTITY,
        }
    }

    /// Rotation matrix of the orientation (caller guarantees unit norm).
    pub fn rotation(&self) -> Matrix3<f64> {
        self.orientation.normalized().rotation_matrix_unchecked()
    }
}

/// Spatial velocity in the global frame.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Twist {
    /// Linear velocity of the body-frame origin (m/s).
    pub linear: Vector3<f64>,
    /// Angular velocity (rad/s).
    pub angular: Vector3<f64>,
}

impl Twist {
    pub fn new(linear: Vector3<f64>, angular: Vector3<f64>) -> Self {
        Twist { linear, angular }
    }

    pub fn zero() -> Self {
        Twist {
            linear: Vector3::zeros(),
            angular: Vector3::zeros(),
        }
    }
}

/// Force/moment pair about the body-frame origin, global axes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Wrench {
    /// Force (N).
    pub force: Vector3<f64>,
    /// Moment about the body-frame origin (N·m).
    pub moment: Vector3<f64>,
}

impl Wrench {
    pub fn new(force: Vector3<f64>, moment: Vector3<f64>) -> Self {
        Wrench { force, moment }
    }

    pub fn zero() -> Self {
        Wrench {
            force: Vector3::zeros(),
            moment: Vector3::zeros(),
        }
    }
}

/// Two-component exponential coordinates of a rotation whose axis lies in
/// the x-y plane. The third component is identically zero, so the encoded
/// rotation never spins about z.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExpCoords {
    pub x: f64,
    pub y: f64,
}

impl ExpCoords {
    pub fn new(x: f64, y: f64) -> Self {
        ExpCoords { x, y }
    }

    /// The full rotation vector `[x, y, 0]`.
    pub fn vector(&self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, 0.0)
    }

    /// Rodrigues rotation matrix `e^w̃`.
    pub fn rotation(&self) -> Matrix3<f64> {
        rotation_from_scaled_axis(&self.vector())
    }

    /// Exponential coordinates of the rotation taking `ẑ` to `dir`
    /// (normalized internally). The axis of such a rotation automatically
    /// lies in the x-y plane. `dir ≈ −ẑ` is the antipode; the rotation about
    /// x is returned there.
    pub fn from_z_image(dir: &Vector3<f64>) -> Self {
        let d = dir / dir.norm();
        let z = Vector3::z();
        let axis = z.cross(&d);
        let s = axis.norm();
        let c = d.z;
        if s < 1e-12 {
            if c > 0.0 {
                return ExpCoords::new(0.0, 0.0);
            }
            return ExpCoords::new(core::f64::consts::PI, 0.0);
        }
        let angle = libm::atan2(s, c);
        let unit = axis / s;
        ExpCoords::new(unit.x * angle, unit.y * angle)
    }
}

/// Skew-symmetric matrix `ṽ` with `ṽ·u = v × u`.
pub fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(
        0.0, -v.z, v.y, //
        v.z, 0.0, -v.x, //
        -v.y, v.x, 0.0,
    )
}

/// Rodrigues formula for an arbitrary rotation vector.
///
/// Switches to the Taylor series of the coefficients below the small-angle
/// threshold so the map is exact through zero.
pub fn rotation_from_scaled_axis(w: &Vector3<f64>) -> Matrix3<f64> {
    let theta = w.norm();
    let k = skew(w);
    let (a, b) = if theta < SMALL_ANGLE {
        let t2 = theta * theta;
        (1.0 - t2 / 6.0, 0.5 - t2 / 24.0)
    } else {
        (
            libm::sin(theta) / theta,
            (1.0 - libm::cos(theta)) / (theta * theta),
        )
    };
    Matrix3::identity() + a * k + b * (k * k)
}

/// Exponential map of two-component coordinates, `e^w̃ ∈ SO(3)`.
pub fn exp_map(w: &ExpCoords) -> Matrix3<f64> {
    w.rotation()
}

/// Right Jacobian of the SO(3) exponential map.
///
/// Satisfies `exp(w + δ) ≈ exp(w)·exp((J_r(w)·δ)~)` to first order, so the
/// directional derivative of a rotated vector is
/// `∂(e^w̃ u)/∂w · δ = e^w̃ ((J_r δ) × u)`.
pub fn so3_right_jacobian(w: &Vector3<f64>) -> Matrix3<f64> {
    let theta = w.norm();
    let k = skew(w);
    let (c1, c2) = if theta < SMALL_ANGLE {
        let t2 = theta * theta;
        (0.5 - t2 / 24.0, 1.0 / 6.0 - t2 / 120.0)
    } else {
        let t2 = theta * theta;
        (
            (1.0 - libm::cos(theta)) / t2,
            (theta - libm::sin(theta)) / (t2 * theta),
        )
    };
    Matrix3::identity() - c1 * k + c2 * (k * k)
}

/// The 3×4 matrix `G(q) = [−v | −ṽ + w·I]`.
///
/// `G` annihilates its own quaternion (`G·q = 0`) and relates quaternion
/// rates to angular velocity: `q̇ = ½ Gᵀ Aᵀ ω` for global-frame `ω`,
/// equivalently `ω = 2 A G q̇`.
pub fn g_matrix(q: &Quat) -> Matrix3x4<f64> {
    let mut g = Matrix3x4::zeros();
    g.set_column(0, &(-q.v));
    let right = -skew(&q.v) + Matrix3::identity() * q.w;
    g.fixed_view_mut::<3, 3>(0, 1).copy_from(&right);
    g
}

/// Converts an orientation Jacobian taken with respect to quaternion
/// coordinates into one with respect to the global virtual rotation:
/// `Φ_π = Φ_q · ½ Gᵀ Aᵀ`.
///
/// `phi_q` must have four columns; any number of rows is accepted.
pub fn phi_pi_from_phi_q(phi_q: &DMatrix<f64>, q: &Quat) -> Result<DMatrix<f64>> {
    if phi_q.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: phi_q.ncols(),
        });
    }
    let qn = q.normalized();
    let a = qn.rotation_matrix_unchecked();
    let half_gt_at = 0.5 * g_matrix(&qn).transpose() * a.transpose();
    let half_dyn = DMatrix::from_fn(4, 3, |i, j| half_gt_at[(i, j)]);
    Ok(phi_q * half_dyn)
}

/// Jacobian of the rotated point `A(q)·u` with respect to the quaternion
/// coordinates `[w, x, y, z]`.
pub fn rotated_point_quat_jacobian(q: &Quat, u: &Vector3<f64>) -> Matrix3x4<f64> {
    let w = q.w;
    let v = q.v;
    let mut j = Matrix3x4::zeros();
    j.set_column(0, &(2.0 * (w * u + v.cross(u))));
    for i in 0..3 {
        let mut e_i = Vector3::zeros();
        e_i[i] = 1.0;
        let col = 2.0 * (-v[i] * u + v.dot(u) * e_i + u[i] * v + w * e_i.cross(u));
        j.set_column(i + 1, &col);
    }
    j
}
