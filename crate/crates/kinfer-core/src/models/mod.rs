//! The constraint model library.
//!
//! Each model is a residual system `Φ(p, α)`: a stack of kinematic rows
//! (functions of the body pose) and parameter rows (unit-length and
//! orthogonality conditions on the parameters themselves). A pose satisfies
//! the constraint exactly when every row vanishes. The velocity residual
//! `δΦ = Φ_r·v + Φ_π·ω` vanishes for any twist in the model's motion
//! subspace at a satisfying pose.
//!
//! Row stacking order per model (kinematic rows first, then parameter rows):
//!
//! | model               | kinematic rows | parameter rows        | motion DOF |
//! |---------------------|----------------|-----------------------|------------|
//! | fixed point         | 3              | —                     | 3          |
//! | point on plane      | 1              | —                     | 5          |
//! | concentric cylinder | 4              | s̄ᵀt̄, t̄ᵀt̄−1         | 2          |
//! | planar              | 3              | t̄ᵀt̄−1                | 3          |
//! | prismatic           | 5              | s̄ᵀt̄, t̄ᵀt̄−1, s̄ᵀs̄−1 | 1          |
//! | axial rotation      | 5              | s̄ᵀt̄, t̄ᵀt̄−1         | 1          |

mod axial;
mod cylinder;
mod fixed_point;
pub(crate) mod frame;
mod planar;
mod point_on_plane;
mod prismatic;

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Vector2, Vector3};

use crate::geom::{phi_pi_from_phi_q, ExpCoords, Pose, Twist};
pub(crate) use frame::{EvalMode, RowEval, MAX_PARAMS};

/// Unit-parameter vectors shorter than this after fitting mark the fit as
/// degenerate (the trivial solution the parameter equations exist to avoid).
pub const DEGENERATE_UNIT_NORM: f64 = 1e-6;

/// The six constraint kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ConstraintKind {
    FixedPoint,
    PointOnPlane,
    ConcentricCylinder,
    Planar,
    Prismatic,
    AxialRotation,
}

impl ConstraintKind {
    pub const ALL: [ConstraintKind; 6] = [
        ConstraintKind::FixedPoint,
        ConstraintKind::PointOnPlane,
        ConstraintKind::ConcentricCylinder,
        ConstraintKind::Planar,
        ConstraintKind::Prismatic,
        ConstraintKind::AxialRotation,
    ];

    /// Degrees of freedom of motion the constraint leaves to the body.
    pub fn motion_dof(self) -> usize {
        match self {
            ConstraintKind::FixedPoint => 3,
            ConstraintKind::PointOnPlane => 5,
            ConstraintKind::ConcentricCylinder => 2,
            ConstraintKind::Planar => 3,
            ConstraintKind::Prismatic => 1,
            ConstraintKind::AxialRotation => 1,
        }
    }

    /// Length of the parameter vector α.
    pub fn param_count(self) -> usize {
        match self {
            ConstraintKind::FixedPoint => fixed_point::PARAMS,
            ConstraintKind::PointOnPlane => point_on_plane::PARAMS,
            ConstraintKind::ConcentricCylinder => cylinder::PARAMS,
            ConstraintKind::Planar => planar::PARAMS,
            ConstraintKind::Prismatic => prismatic::PARAMS,
            ConstraintKind::AxialRotation => axial::PARAMS,
        }
    }

    /// Total residual rows, parameter equations included.
    pub fn residual_rows(self) -> usize {
        match self {
            ConstraintKind::FixedPoint => fixed_point::ROWS,
            ConstraintKind::PointOnPlane => point_on_plane::ROWS,
            ConstraintKind::ConcentricCylinder => cylinder::ROWS,
            ConstraintKind::Planar => planar::ROWS,
            ConstraintKind::Prismatic => prismatic::ROWS,
            ConstraintKind::AxialRotation => axial::ROWS,
        }
    }

    /// Kinematic rows only (the rows that carry pose/velocity Jacobians).
    pub fn kinematic_rows(self) -> usize {
        match self {
            ConstraintKind::FixedPoint => fixed_point::KINEMATIC,
            ConstraintKind::PointOnPlane => point_on_plane::KINEMATIC,
            ConstraintKind::ConcentricCylinder => cylinder::KINEMATIC,
            ConstraintKind::Planar => planar::KINEMATIC,
            ConstraintKind::Prismatic => prismatic::KINEMATIC,
            ConstraintKind::AxialRotation => axial::KINEMATIC,
        }
    }

    /// Fewest samples a fit of this model accepts (twice the parameter
    /// count); below this the fit is flagged degenerate.
    pub fn min_samples(self) -> usize {
        2 * self.param_count()
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstraintKind::FixedPoint => "fixed-point",
            ConstraintKind::PointOnPlane => "point-on-plane",
            ConstraintKind::ConcentricCylinder => "concentric-cylinder",
            ConstraintKind::Planar => "planar",
            ConstraintKind::Prismatic => "prismatic",
            ConstraintKind::AxialRotation => "axial-rotation",
        }
    }

    /// Parses a kind name; accepts `-` or `_` separators, case-insensitive.
    pub fn from_name(name: &str) -> Option<Self> {
        let mut buf = [0u8; 32];
        let bytes = name.as_bytes();
        if bytes.len() > buf.len() {
            return None;
        }
        for (i, b) in bytes.iter().enumerate() {
            buf[i] = match b {
                b'_' => b'-',
                b'A'..=b'Z' => b + 32,
                other => *other,
            };
        }
        let normalized = core::str::from_utf8(&buf[..bytes.len()]).ok()?;
        ConstraintKind::ALL
            .into_iter()
            .find(|k| k.name() == normalized)
    }
}

impl core::fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Fixed point: body point `s̄` pinned to environment point `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FixedPointParams {
    /// Environment anchor `P` (m, global frame).
    pub anchor: Vector3<f64>,
    /// Constrained point `s̄` (m, body frame).
    pub body_point: Vector3<f64>,
}

/// Point on plane: body point `s̄` on the plane `u3ᵀx = d`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointOnPlaneParams {
    /// Contact point `s̄` (m, body frame).
    pub body_point: Vector3<f64>,
    /// Plane offset `d` along its normal (m).
    pub offset: f64,
    /// Orientation of the plane frame (normal is `e^w̃·ẑ`).
    pub orientation: ExpCoords,
}

/// Concentric cylinder: translate along / rotate about a fixed axis.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConcentricCylinderParams {
    /// Unit reference vector `t̄` (body frame) pinning spin about `s̄`.
    pub body_ref: Vector3<f64>,
    /// Body point `s̄` riding on the axis (m, body frame).
    pub body_point: Vector3<f64>,
    /// Axis crossing `(dx, dy)` of the frame's x-y plane (m).
    pub axis_offset: Vector2<f64>,
    /// Orientation of the axis frame (axis direction is `e^w̃·ẑ`).
    pub orientation: ExpCoords,
}

/// Planar: the body origin slides on a plane, spinning about its normal.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanarParams {
    /// Unit body vector `t̄` held parallel to the plane normal.
    pub body_normal: Vector3<f64>,
    /// Plane offset `d` along its normal (m).
    pub offset: f64,
    /// Orientation of the plane frame.
    pub orientation: ExpCoords,
}

/// Prismatic: pure translation along a fixed line.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrismaticParams {
    /// Unit body vector `t̄` completing the orientation lock.
    pub body_ref: Vector3<f64>,
    /// Unit body vector `s̄` held parallel to the motion axis.
    pub body_axis: Vector3<f64>,
    /// Line crossing `(dx, dy)` of the frame's x-y plane (m).
    pub axis_offset: Vector2<f64>,
    /// Orientation of the line frame (motion direction is `e^w̃·ẑ`).
    pub orientation: ExpCoords,
}

/// Axial rotation: rotation about a fixed axis, no translation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AxialRotationParams {
    /// Unit reference vector `t̄` (body frame).
    pub body_ref: Vector3<f64>,
    /// Perpendicular offset `s̄` of the body origin from the axis (m, body
    /// frame); `r + A·s̄` is pinned to the anchor.
    pub body_point: Vector3<f64>,
    /// Anchor coordinates `(dx, dy, dz)` in the axis frame (m).
    pub anchor_offset: Vector3<f64>,
    /// Orientation of the axis frame.
    pub orientation: ExpCoords,
}

/// A constraint model kind together with its parameter vector.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum ConstraintParams {
    FixedPoint(FixedPointParams),
    PointOnPlane(PointOnPlaneParams),
    ConcentricCylinder(ConcentricCylinderParams),
    Planar(PlanarParams),
    Prismatic(PrismaticParams),
    AxialRotation(AxialRotationParams),
}

impl ConstraintParams {
    pub fn kind(&self) -> ConstraintKind {
        match self {
            ConstraintParams::FixedPoint(_) => ConstraintKind::FixedPoint,
            ConstraintParams::PointOnPlane(_) => ConstraintKind::PointOnPlane,
            ConstraintParams::ConcentricCylinder(_) => ConstraintKind::ConcentricCylinder,
            ConstraintParams::Planar(_) => ConstraintKind::Planar,
            ConstraintParams::Prismatic(_) => ConstraintKind::Prismatic,
            ConstraintParams::AxialRotation(_) => ConstraintKind::AxialRotation,
        }
    }

    /// Packs the parameters into the optimization vector α.
    pub fn to_vector(&self) -> DVector<f64> {
        let mut buf = [0.0; MAX_PARAMS];
        let n = self.kind().param_count();
        self.write_slice(&mut buf[..n]);
        DVector::from_row_slice(&buf[..n])
    }

    fn write_slice(&self, out: &mut [f64]) {
        fn put3(out: &mut [f64], at: usize, v: &Vector3<f64>) {
            out[at] = v.x;
            out[at + 1] = v.y;
            out[at + 2] = v.z;
        }
        match self {
            ConstraintParams::FixedPoint(p) => {
                put3(out, 0, &p.anchor);
                put3(out, 3, &p.body_point);
            }
            ConstraintParams::PointOnPlane(p) => {
                put3(out, 0, &p.body_point);
                out[3] = p.offset;
                out[4] = p.orientation.x;
                out[5] = p.orientation.y;
            }
            ConstraintParams::ConcentricCylinder(p) => {
                put3(out, 0, &p.body_ref);
                put3(out, 3, &p.body_point);
                out[6] = p.axis_offset.x;
                out[7] = p.axis_offset.y;
                out[8] = p.orientation.x;
                out[9] = p.orientation.y;
            }
            ConstraintParams::Planar(p) => {
                put3(out, 0, &p.body_normal);
                out[3] = p.offset;
                out[4] = p.orientation.x;
                out[5] = p.orientation.y;
            }
            ConstraintParams::Prismatic(p) => {
                put3(out, 0, &p.body_ref);
                put3(out, 3, &p.body_axis);
                out[6] = p.axis_offset.x;
                out[7] = p.axis_offset.y;
                out[8] = p.orientation.x;
                out[9] = p.orientation.y;
            }
            ConstraintParams::AxialRotation(p) => {
                put3(out, 0, &p.body_ref);
                put3(out, 3, &p.body_point);
                put3(out, 6, &p.anchor_offset);
                out[9] = p.orientation.x;
                out[10] = p.orientation.y;
            }
        }
    }

    /// Rebuilds parameters from the optimization vector α.
    ///
    /// # Panics
    /// Panics when `alpha` is shorter than the kind's parameter count.
    pub fn from_slice(kind: ConstraintKind, alpha: &[f64]) -> Self {
        assert!(alpha.len() >= kind.param_count(), "parameter vector too short");
        let v3 = |at: usize| Vector3::new(alpha[at], alpha[at + 1], alpha[at + 2]);
        match kind {
            ConstraintKind::FixedPoint => ConstraintParams::FixedPoint(FixedPointParams {
                anchor: v3(0),
                body_point: v3(3),
            }),
            ConstraintKind::PointOnPlane => ConstraintParams::PointOnPlane(PointOnPlaneParams {
                body_point: v3(0),
                offset: alpha[3],
                orientation: ExpCoords::new(alpha[4], alpha[5]),
            }),
            ConstraintKind::ConcentricCylinder => {
                ConstraintParams::ConcentricCylinder(ConcentricCylinderParams {
                    body_ref: v3(0),
                    body_point: v3(3),
                    axis_offset: Vector2::new(alpha[6], alpha[7]),
                    orientation: ExpCoords::new(alpha[8], alpha[9]),
                })
            }
            ConstraintKind::Planar => ConstraintParams::Planar(PlanarParams {
                body_normal: v3(0),
                offset: alpha[3],
                orientation: ExpCoords::new(alpha[4], alpha[5]),
            }),
            ConstraintKind::Prismatic => ConstraintParams::Prismatic(PrismaticParams {
                body_ref: v3(0),
                body_axis: v3(3),
                axis_offset: Vector2::new(alpha[6], alpha[7]),
                orientation: ExpCoords::new(alpha[8], alpha[9]),
            }),
            ConstraintKind::AxialRotation => ConstraintParams::AxialRotation(AxialRotationParams {
                body_ref: v3(0),
                body_point: v3(3),
                anchor_offset: v3(6),
                orientation: ExpCoords::new(alpha[9], alpha[10]),
            }),
        }
    }

    /// True when a unit-constrained parameter vector has collapsed, i.e. the
    /// fit found the trivial solution the parameter equations penalize.
    pub fn unit_vectors_degenerate(&self) -> bool {
        let short = |v: &Vector3<f64>| v.norm() < DEGENERATE_UNIT_NORM;
        match self {
            ConstraintParams::FixedPoint(_) | ConstraintParams::PointOnPlane(_) => false,
            ConstraintParams::ConcentricCylinder(p) => short(&p.body_ref),
            ConstraintParams::Planar(p) => short(&p.body_normal),
            ConstraintParams::Prismatic(p) => short(&p.body_ref) || short(&p.body_axis),
            ConstraintParams::AxialRotation(p) => short(&p.body_ref),
        }
    }

    /// Re-normalizes unit-constrained vectors and re-orthogonalizes `t̄`
    /// against `s̄` (Gram–Schmidt), as done once after optimization. No-op
    /// where the model has no unit parameters.
    pub fn normalized_units(&self) -> Self {
        fn unit(v: &Vector3<f64>) -> Vector3<f64> {
            let n = v.norm();
            if n < DEGENERATE_UNIT_NORM {
                *v
            } else {
                v / n
            }
        }
        fn reject(v: &Vector3<f64>, against: &Vector3<f64>) -> Vector3<f64> {
            let n2 = against.norm_squared();
            if n2 < DEGENERATE_UNIT_NORM * DEGENERATE_UNIT_NORM {
                *v
            } else {
                v - against * (v.dot(against) / n2)
            }
        }
        match *self {
            ConstraintParams::ConcentricCylinder(p) => {
                ConstraintParams::ConcentricCylinder(ConcentricCylinderParams {
                    body_ref: unit(&reject(&p.body_ref, &p.body_point)),
                    ..p
                })
            }
            ConstraintParams::Planar(p) => ConstraintParams::Planar(PlanarParams {
                body_normal: unit(&p.body_normal),
                ..p
            }),
            ConstraintParams::Prismatic(p) => {
                let body_axis = unit(&p.body_axis);
                ConstraintParams::Prismatic(PrismaticParams {
                    body_axis,
                    body_ref: unit(&reject(&p.body_ref, &body_axis)),
                    ..p
                })
            }
            ConstraintParams::AxialRotation(p) => {
                ConstraintParams::AxialRotation(AxialRotationParams {
                    body_ref: unit(&reject(&p.body_ref, &p.body_point)),
                    ..p
                })
            }
            other => other,
        }
    }
}

/// A plane `n̂ᵀx = offset` with the sign gauge removed: the normal component
/// of largest magnitude is made positive (the offset flips with it).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlaneGeometry {
    pub normal: Vector3<f64>,
    pub offset: f64,
}

impl PlaneGeometry {
    pub fn new(normal: Vector3<f64>, offset: f64) -> Self {
        let n = normal / normal.norm();
        if dominant_component_negative(&n) {
            PlaneGeometry {
                normal: -n,
                offset: -offset,
            }
        } else {
            PlaneGeometry { normal: n, offset }
        }
    }

    /// Distance from a point to the plane.
    pub fn distance(&self, point: &Vector3<f64>) -> f64 {
        (self.normal.dot(point) - self.offset).abs()
    }
}

/// A line in space with the direction-sign gauge removed; `point` is the
/// foot of the perpendicular from the origin (the gauge-free representative
/// of the line's position).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AxisGeometry {
    pub direction: Vector3<f64>,
    pub point: Vector3<f64>,
}

impl AxisGeometry {
    pub fn new(direction: Vector3<f64>, point_on_line: Vector3<f64>) -> Self {
        let mut d = direction / direction.norm();
        if dominant_component_negative(&d) {
            d = -d;
        }
        let foot = point_on_line - d.dot(&point_on_line) * d;
        AxisGeometry {
            direction: d,
            point: foot,
        }
    }

    /// Distance from a point to the line.
    pub fn distance(&self, point: &Vector3<f64>) -> f64 {
        (point - self.point).cross(&self.direction).norm()
    }
}

fn dominant_component_negative(v: &Vector3<f64>) -> bool {
    let mut idx = 0;
    for i in 1..3 {
        if v[i].abs() > v[idx].abs() {
            idx = i;
        }
    }
    v[idx] < 0.0
}

/// Gauge-free geometry of a fitted constraint, suitable for comparing fits
/// that may differ by a parameter gauge (axis sign flips and the like).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum CanonicalGeometry {
    FixedPoint {
        anchor: Vector3<f64>,
        body_point: Vector3<f64>,
    },
    PointOnPlane {
        plane: PlaneGeometry,
        body_point: Vector3<f64>,
    },
    Planar {
        plane: PlaneGeometry,
    },
    ConcentricCylinder {
        axis: AxisGeometry,
    },
    Prismatic {
        axis: AxisGeometry,
    },
    AxialRotation {
        axis: AxisGeometry,
        anchor: Vector3<f64>,
    },
}

/// Worst-case linear (m) and angular (rad) deviation between two canonical
/// geometries of the same kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryDeviation {
    pub linear: f64,
    pub angular: f64,
}

fn direction_angle(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    // Sign-insensitive: canonicalization can break ties either way when a
    // direction has two near-equal dominant components.
    let c = a.cross(b).norm();
    let d = a.dot(b).abs();
    libm::atan2(c, d)
}

impl CanonicalGeometry {
    /// `None` when the kinds differ.
    pub fn deviation(&self, other: &CanonicalGeometry) -> Option<GeometryDeviation> {
        use CanonicalGeometry as G;
        let max = f64::max;
        Some(match (self, other) {
            (
                G::FixedPoint { anchor, body_point },
                G::FixedPoint {
                    anchor: a2,
                    body_point: b2,
                },
            ) => GeometryDeviation {
                linear: max((anchor - a2).norm(), (body_point - b2).norm()),
                angular: 0.0,
            },
            (
                G::PointOnPlane { plane, body_point },
                G::PointOnPlane {
                    plane: p2,
                    body_point: b2,
                },
            ) => GeometryDeviation {
                linear: max(plane_offset_gap(plane, p2), (body_point - b2).norm()),
                angular: direction_angle(&plane.normal, &p2.normal),
            },
            (G::Planar { plane }, G::Planar { plane: p2 }) => GeometryDeviation {
                linear: plane_offset_gap(plane, p2),
                angular: direction_angle(&plane.normal, &p2.normal),
            },
            (G::ConcentricCylinder { axis }, G::ConcentricCylinder { axis: a2 })
            | (G::Prismatic { axis }, G::Prismatic { axis: a2 }) => GeometryDeviation {
                linear: (axis.point - a2.point).norm(),
                angular: direction_angle(&axis.direction, &a2.direction),
            },
            (
                G::AxialRotation { axis, anchor },
                G::AxialRotation {
                    axis: a2,
                    anchor: anchor2,
                },
            ) => GeometryDeviation {
                linear: max((axis.point - a2.point).norm(), (anchor - anchor2).norm()),
                angular: direction_angle(&axis.direction, &a2.direction),
            },
            _ => return None,
        })
    }
}

fn plane_offset_gap(a: &PlaneGeometry, b: &PlaneGeometry) -> f64 {
    // Compare in whichever sign pairing matches the normals best.
    if a.normal.dot(&b.normal) >= 0.0 {
        (a.offset - b.offset).abs()
    } else {
        (a.offset + b.offset).abs()
    }
}

pub(crate) fn eval(
    params: &ConstraintParams,
    pose: &Pose,
    twist: &Twist,
    mode: EvalMode,
) -> RowEval {
    match params {
        ConstraintParams::FixedPoint(p) => fixed_point::eval(p, pose, twist, mode),
        ConstraintParams::PointOnPlane(p) => point_on_plane::eval(p, pose, twist, mode),
        ConstraintParams::ConcentricCylinder(p) => cylinder::eval(p, pose, twist, mode),
        ConstraintParams::Planar(p) => planar::eval(p, pose, twist, mode),
        ConstraintParams::Prismatic(p) => prismatic::eval(p, pose, twist, mode),
        ConstraintParams::AxialRotation(p) => axial::eval(p, pose, twist, mode),
    }
}

/// The residual `Φ(p, α)`: kinematic rows stacked with the model's
/// parameter equations. Zero exactly when the pose satisfies the constraint
/// and the parameter equations hold.
pub fn residual(params: &ConstraintParams, pose: &Pose) -> DVector<f64> {
    let ev = eval(params, pose, &Twist::zero(), EvalMode::Values);
    DVector::from_row_slice(&ev.phi[..ev.rows])
}

/// The velocity residual `δΦ = Φ_r·v + Φ_π·ω` over the kinematic rows.
/// Parameter rows are excluded: they do not involve the pose.
pub fn velocity_residual(params: &ConstraintParams, pose: &Pose, twist: &Twist) -> DVector<f64> {
    let (phi_r, phi_pi) = jacobians(params, pose);
    phi_r * twist.linear + phi_pi * twist.angular
}

/// Analytic Jacobians `(Φ_r, Φ_π)` of the kinematic rows with respect to
/// position and global virtual rotation.
///
/// `Φ_π` is produced from the quaternion Jacobian through the identity
/// `Φ_π = Φ_q·½GᵀAᵀ` (see [`crate::geom::phi_pi_from_phi_q`]).
pub fn jacobians(params: &ConstraintParams, pose: &Pose) -> (DMatrix<f64>, DMatrix<f64>) {
    let phi_pi = phi_pi_from_phi_q(&phi_q(params, pose), &pose.orientation)
        .expect("phi_q always has four columns");
    (phi_r(params, pose), phi_pi)
}

/// Jacobian of the kinematic rows with respect to position.
pub fn phi_r(params: &ConstraintParams, pose: &Pose) -> DMatrix<f64> {
    match params {
        ConstraintParams::FixedPoint(p) => fixed_point::phi_r(p, pose),
        ConstraintParams::PointOnPlane(p) => point_on_plane::phi_r(p, pose),
        ConstraintParams::ConcentricCylinder(p) => cylinder::phi_r(p, pose),
        ConstraintParams::Planar(p) => planar::phi_r(p, pose),
        ConstraintParams::Prismatic(p) => prismatic::phi_r(p, pose),
        ConstraintParams::AxialRotation(p) => axial::phi_r(p, pose),
    }
}

/// Jacobian of the kinematic rows with respect to the raw quaternion
/// coordinates `[w, x, y, z]`.
pub fn phi_q(params: &ConstraintParams, pose: &Pose) -> DMatrix<f64> {
    match params {
        ConstraintParams::FixedPoint(p) => fixed_point::phi_q(p, pose),
        ConstraintParams::PointOnPlane(p) => point_on_plane::phi_q(p, pose),
        ConstraintParams::ConcentricCylinder(p) => cylinder::phi_q(p, pose),
        ConstraintParams::Planar(p) => planar::phi_q(p, pose),
        ConstraintParams::Prismatic(p) => prismatic::phi_q(p, pose),
        ConstraintParams::AxialRotation(p) => axial::phi_q(p, pose),
    }
}

/// The per-sample kinematic error criterion: a point-to-geometry distance in
/// meters (orientation rows do not participate).
pub fn kinematic_error(params: &ConstraintParams, pose: &Pose) -> f64 {
    match params {
        ConstraintParams::FixedPoint(p) => fixed_point::kinematic_error(p, pose),
        ConstraintParams::PointOnPlane(p) => point_on_plane::kinematic_error(p, pose),
        ConstraintParams::ConcentricCylinder(p) => cylinder::kinematic_error(p, pose),
        ConstraintParams::Planar(p) => planar::kinematic_error(p, pose),
        ConstraintParams::Prismatic(p) => prismatic::kinematic_error(p, pose),
        ConstraintParams::AxialRotation(p) => axial::kinematic_error(p, pose),
    }
}

/// Gauge-free geometry of the parameters.
pub fn canonicalize(params: &ConstraintParams) -> CanonicalGeometry {
    match params {
        ConstraintParams::FixedPoint(p) => fixed_point::canonicalize(p),
        ConstraintParams::PointOnPlane(p) => point_on_plane::canonicalize(p),
        ConstraintParams::ConcentricCylinder(p) => cylinder::canonicalize(p),
        ConstraintParams::Planar(p) => planar::canonicalize(p),
        ConstraintParams::Prismatic(p) => prismatic::canonicalize(p),
        ConstraintParams::AxialRotation(p) => axial::canonicalize(p),
    }
}

/// ∂Φ/∂α for every residual row, assembled as a dense matrix. The fitting
/// objective accumulates these per sample without materializing the matrix;
/// this entry point exists for diagnostics and finite-difference tests.
pub fn alpha_jacobian(params: &ConstraintParams, pose: &Pose) -> DMatrix<f64> {
    let ev = eval(params, pose, &Twist::zero(), EvalMode::WithGradient);
    let na = params.kind().param_count();
    let mut m = DMatrix::zeros(ev.rows, na);
    for i in 0..ev.rows {
        for j in 0..na {
            m[(i, j)] = ev.phi_alpha[i][j];
        }
    }
    m
}

#[cfg(test)]
mod tests;
