//! Forward model: constraint-consistent trajectories with physically
//! consistent reaction and friction wrenches, plus configurable noise.
//!
//! Poses are constructed so that every kinematic row of the generating model
//! vanishes to machine precision; twists are the exact time derivatives of
//! the constructed motion (so they lie in the constraint's motion subspace);
//! wrenches are built from scheduled Lagrange multipliers through the
//! model's own Jacobians, with friction directed along the motion and
//! optional free components for negative tests. Noise, when configured, is
//! added last and is deterministic per seed.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Matrix3, Vector3};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Pose, Quat, Twist, Wrench};
use crate::models::{
    self, AxialRotationParams, ConcentricCylinderParams, ConstraintKind, ConstraintParams,
    FixedPointParams, PlanarParams, PointOnPlaneParams, PrismaticParams,
};
use crate::models::frame::Frame;
use crate::geom::ExpCoords;
use crate::segment::{Sample, Segment};

const TAU: f64 = core::f64::consts::TAU;

/// Sinusoidal excitation of one motion degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DofExcitation {
    /// Amplitude (m for translational DOFs, rad for rotational ones).
    pub amplitude: f64,
    /// Frequency (Hz).
    pub frequency: f64,
    /// Phase (rad).
    pub phase: f64,
}

impl DofExcitation {
    pub fn new(amplitude: f64, frequency: f64, phase: f64) -> Self {
        DofExcitation {
            amplitude,
            frequency,
            phase,
        }
    }

    fn value(&self, t: f64) -> f64 {
        self.amplitude * libm::sin(TAU * self.frequency * t + self.phase)
    }

    fn rate(&self, t: f64) -> f64 {
        self.amplitude * TAU * self.frequency * libm::cos(TAU * self.frequency * t + self.phase)
    }
}

/// Standard deviations of the measurement noise.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseLevels {
    /// Isotropic position noise (m).
    pub sigma_pos: f64,
    /// Small-angle orientation noise (rad, per axis).
    pub sigma_rot: f64,
    /// Force noise (N, per axis).
    pub sigma_force: f64,
    /// Moment noise (N·m, per axis).
    pub sigma_moment: f64,
}

/// Everything needed to synthesize one segment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MotionProfile {
    /// Length of the recording (s).
    pub duration: f64,
    /// Sampling rate (Hz).
    pub sample_rate: f64,
    /// Per-DOF excitation, in the model's DOF order (see [`generate`]).
    /// Cycled if shorter than the model's DOF count.
    pub excitation: Vec<DofExcitation>,
    /// Amplitudes of the scheduled Lagrange multipliers, one per kinematic
    /// row (cycled when shorter). Zero disables the reaction wrench.
    pub lambda_amplitudes: Vec<f64>,
    /// Magnitude scale of the friction force along the motion (N).
    pub friction_force: f64,
    /// Magnitude scale of the friction moment along the angular motion (N·m).
    pub friction_moment: f64,
    /// Scheduled constraint-inconsistent force (N), for negative tests.
    pub free_force: f64,
    /// Scheduled constraint-inconsistent moment (N·m), for negative tests.
    pub free_moment: f64,
    pub noise: NoiseLevels,
    pub seed: u64,
}

impl MotionProfile {
    fn excitation_for(&self, dof: usize) -> DofExcitation {
        if self.excitation.is_empty() {
            DofExcitation::new(0.0, 0.0, 0.0)
        } else {
            self.excitation[dof % self.excitation.len()]
        }
    }

    fn lambda_for(&self, row: usize) -> f64 {
        if self.lambda_amplitudes.is_empty() {
            0.0
        } else {
            self.lambda_amplitudes[row % self.lambda_amplitudes.len()]
        }
    }
}

/// Speed below which the motion direction (and hence friction) is undefined.
pub const SPEED_FLOOR_LINEAR: f64 = 1e-4;
/// Angular-speed analogue of [`SPEED_FLOOR_LINEAR`].
pub const SPEED_FLOOR_ANGULAR: f64 = 1e-3;

/// Generates a constraint-consistent segment.
///
/// DOF ordering per kind (matching the model's motion subspace):
///
/// * fixed point — rotations about global x, y, z through the pivot;
/// * point on plane — in-plane x, y of the contact point, then rotations
///   about global x, y, z;
/// * concentric cylinder — rotation about the axis, translation along it;
/// * planar — in-plane x, y, spin about the normal;
/// * prismatic — translation along the line;
/// * axial rotation — rotation about the axis.
pub fn generate(params: &ConstraintParams, profile: &MotionProfile) -> Segment {
    let params = params.normalized_units();
    let n = libm::round(profile.duration * profile.sample_rate).max(1.0) as usize;
    let dt = 1.0 / profile.sample_rate;

    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 * dt;
        let (pose, twist) = pose_and_twist(&params, profile, t);
        let wrench = scheduled_wrench(&params, profile, t, &pose, &twist);
        samples.push(Sample {
            t,
            pose,
            twist,
            wrench,
        });
    }

    let mut segment = Segment::new(samples);
    segment.degenerate_excitation = {
        let dofs = params.kind().motion_dof();
        (0..dofs).all(|d| profile.excitation_for(d).amplitude.abs() < 1e-12)
    };
    add_noise(&segment, profile)
}

/// The exact pose and twist of the constrained body at time `t`.
pub fn pose_and_twist(
    params: &ConstraintParams,
    profile: &MotionProfile,
    t: f64,
) -> (Pose, Twist) {
    match params {
        ConstraintParams::FixedPoint(p) => fixed_point_motion(p, profile, t),
        ConstraintParams::PointOnPlane(p) => point_on_plane_motion(p, profile, t),
        ConstraintParams::ConcentricCylinder(p) => cylinder_motion(p, profile, t),
        ConstraintParams::Planar(p) => planar_motion(p, profile, t),
        ConstraintParams::Prismatic(p) => prismatic_motion(p, profile, t),
        ConstraintParams::AxialRotation(p) => axial_motion(p, profile, t),
    }
}

/// Composition of rotations about fixed global axes with exact angular
/// velocity: `A = R(e₀,θ₀)·R(e₁,θ₁)·R(e₂,θ₂)`,
/// `ω = θ̇₀e₀ + R₀(θ̇₁e₁) + R₀R₁(θ̇₂e₂)`.
fn euler_chain(angles: [f64; 3], rates: [f64; 3]) -> (Quat, Vector3<f64>) {
    let axes = [Vector3::x(), Vector3::y(), Vector3::z()];
    let mut q = Quat::IDENTITY;
    let mut omega = Vector3::zeros();
    let mut prefix = Matrix3::identity();
    for i in 0..3 {
        omega += prefix * (rates[i] * axes[i]);
        let qi = Quat::from_axis_angle(&axes[i], angles[i]);
        q = q.mul(&qi);
        prefix *= qi.rotation_matrix_unchecked();
    }
    (q.normalized(), omega)
}

fn fixed_point_motion(
    p: &FixedPointParams,
    profile: &MotionProfile,
    t: f64,
) -> (Pose, Twist) {
    let ex: Vec<_> = (0..3).map(|d| profile.excitation_for(d)).collect();
    let (q, omega) = euler_chain(
        [ex[0].value(t), ex[1].value(t), ex[2].value(t)],
        [ex[0].rate(t), ex[1].rate(t), ex[2].rate(t)],
    );
    let a_s = q.rotation_matrix_unchecked() * p.body_point;
    let r = p.anchor - a_s;
    let v = -omega.cross(&a_s);
    (Pose::new(r, q), Twist::new(v, omega))
}

fn point_on_plane_motion(
    p: &PointOnPlaneParams,
    profile: &MotionProfile,
    t: f64,
) -> (Pose, Twist) {
    let frame = Frame::new(&p.orientation);
    let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));
    let ex: Vec<_> = (0..5).map(|d| profile.excitation_for(d)).collect();
    let (q, omega) = euler_chain(
        [ex[2].value(t), ex[3].value(t), ex[4].value(t)],
        [ex[2].rate(t), ex[3].rate(t), ex[4].rate(t)],
    );
    let contact = p.offset * u3 + ex[0].value(t) * u1 + ex[1].value(t) * u2;
    let contact_rate = ex[0].rate(t) * u1 + ex[1].rate(t) * u2;
    let a_s = q.rotation_matrix_unchecked() * p.body_point;
    let r = contact - a_s;
    let v = contact_rate - omega.cross(&a_s);
    (Pose::new(r, q), Twist::new(v, omega))
}

/// Orthonormal right-handed body base mapping `(ŝ, t̄, ŝ×t̄)` onto the given
/// frame columns; `s̄ ≈ 0` falls back to any perpendicular completion.
fn aligned_base(
    body_point: &Vector3<f64>,
    body_ref: &Vector3<f64>,
    to: [Vector3<f64>; 3],
) -> Matrix3<f64> {
    let t = body_ref / body_ref.norm();
    let s = if body_point.norm() > 1e-9 {
        body_point / body_point.norm()
    } else {
        // Any unit vector perpendicular to t̄.
        let probe = if t.x.abs() < 0.9 {
            Vector3::x()
        } else {
            Vector3::y()
        };
        let c = t.cross(&probe);
        c / c.norm()
    };
    let from = Matrix3::from_columns(&[s, t, s.cross(&t)]);
    let target = Matrix3::from_columns(&to);
    target * from.transpose()
}

fn quat_from_matrix(m: &Matrix3<f64>) -> Quat {
    // Shepperd's method, branch on the largest diagonal combination.
    let tr = m.trace();
    let q = if tr > 0.0 {
        let s = libm::sqrt(tr + 1.0) * 2.0;
        Quat::new(
            0.25 * s,
            (m[(2, 1)] - m[(1, 2)]) / s,
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(1, 0)] - m[(0, 1)]) / s,
        )
    } else if m[(0, 0)] > m[(1, 1)] && m[(0, 0)] > m[(2, 2)] {
        let s = libm::sqrt(1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]) * 2.0;
        Quat::new(
            (m[(2, 1)] - m[(1, 2)]) / s,
            0.25 * s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
        )
    } else if m[(1, 1)] > m[(2, 2)] {
        let s = libm::sqrt(1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]) * 2.0;
        Quat::new(
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            0.25 * s,
            (m[(1, 2)] + m[(2, 1)]) / s,
        )
    } else {
        let s = libm::sqrt(1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]) * 2.0;
        Quat::new(
            (m[(1, 0)] - m[(0, 1)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
            (m[(1, 2)] + m[(2, 1)]) / s,
            0.25 * s,
        )
    };
    q.normalized()
}

fn cylinder_motion(
    p: &ConcentricCylinderParams,
    profile: &MotionProfile,
    t: f64,
) -> (Pose, Twist) {
    let frame = Frame::new(&p.orientation);
    let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));
    let spin = profile.excitation_for(0);
    let slide = profile.excitation_for(1);

    let base = aligned_base(&p.body_point, &p.body_ref, [u1, u2, u3]);
    let q_spin = Quat::from_axis_angle(&u3, spin.value(t));
    let a = q_spin.rotation_matrix_unchecked() * base;
    let q = quat_from_matrix(&a);

    let s_star = p.axis_offset.x * u1 + p.axis_offset.y * u2 + slide.value(t) * u3;
    let a_s = a * p.body_point;
    let r = s_star - a_s;
    let omega = spin.rate(t) * u3;
    let v = slide.rate(t) * u3 - omega.cross(&a_s);
    (Pose::new(r, q), Twist::new(v, omega))
}

fn planar_motion(p: &PlanarParams, profile: &MotionProfile, t: f64) -> (Pose, Twist) {
    let frame = Frame::new(&p.orientation);
    let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));
    let ex_x = profile.excitation_for(0);
    let ex_y = profile.excitation_for(1);
    let spin = profile.excitation_for(2);

    // Any base mapping t̄ onto the normal; reuse the triple helper with t̄ in
    // the normal slot.
    let base = aligned_base(&p.body_normal, &fallback_perp(&p.body_normal), [u3, u1, u2]);
    let q_spin = Quat::from_axis_angle(&u3, spin.value(t));
    let a = q_spin.rotation_matrix_unchecked() * base;
    let q = quat_from_matrix(&a);

    let r = p.offset * u3 + ex_x.value(t) * u1 + ex_y.value(t) * u2;
    let v = ex_x.rate(t) * u1 + ex_y.rate(t) * u2;
    let omega = spin.rate(t) * u3;
    (Pose::new(r, q), Twist::new(v, omega))
}

fn fallback_perp(v: &Vector3<f64>) -> Vector3<f64> {
    let probe = if v.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let c = v.cross(&probe);
    c / c.norm()
}

fn prismatic_motion(p: &PrismaticParams, profile: &MotionProfile, t: f64) -> (Pose, Twist) {
    let frame = Frame::new(&p.orientation);
    let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));
    let slide = profile.excitation_for(0);

    // Constant orientation: s̄ ↦ u3 (motion axis), t̄ ↦ u2.
    let a = {
        let s = p.body_axis / p.body_axis.norm();
        let tv = p.body_ref / p.body_ref.norm();
        let from = Matrix3::from_columns(&[s, tv, s.cross(&tv)]);
        let target = Matrix3::from_columns(&[u3, u2, u3.cross(&u2)]);
        target * from.transpose()
    };
    let q = quat_from_matrix(&a);

    let r = p.axis_offset.x * u1 + p.axis_offset.y * u2 + slide.value(t) * u3;
    let v = slide.rate(t) * u3;
    (Pose::new(r, q), Twist::new(v, Vector3::zeros()))
}

fn axial_motion(p: &AxialRotationParams, profile: &MotionProfile, t: f64) -> (Pose, Twist) {
    let frame = Frame::new(&p.orientation);
    let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));
    let spin = profile.excitation_for(0);

    let base = aligned_base(&p.body_point, &p.body_ref, [u1, u2, u3]);
    let q_spin = Quat::from_axis_angle(&u3, spin.value(t));
    let a = q_spin.rotation_matrix_unchecked() * base;
    let q = quat_from_matrix(&a);

    let anchor = frame.rot * p.anchor_offset;
    let a_s = a * p.body_point;
    let r = anchor - a_s;
    let omega = spin.rate(t) * u3;
    let v = -omega.cross(&a_s);
    (Pose::new(r, q), Twist::new(v, omega))
}

/// Scheduled wrench: reaction from per-row Lagrange multipliers (built as
/// `(f, n) = −Jᵀλ(t)`, the permissible-reaction form), plus friction along
/// the motion direction, plus optional free components.
fn scheduled_wrench(
    params: &ConstraintParams,
    profile: &MotionProfile,
    t: f64,
    pose: &Pose,
    twist: &Twist,
) -> Wrench {
    let (phi_r, phi_pi) = models::jacobians(params, pose);
    let rows = phi_r.nrows();
    let mut force = Vector3::zeros();
    let mut moment = Vector3::zeros();
    for row in 0..rows {
        let amp = profile.lambda_for(row);
        if amp == 0.0 {
            continue;
        }
        let lambda = amp * libm::sin(TAU * (0.6 + 0.17 * row as f64) * t + 0.8 * row as f64);
        for j in 0..3 {
            force[j] -= phi_r[(row, j)] * lambda;
            moment[j] -= phi_pi[(row, j)] * lambda;
        }
    }

    let speed = twist.linear.norm();
    if profile.friction_force != 0.0 && speed >= SPEED_FLOOR_LINEAR {
        let scale = 0.6 + 0.4 * libm::sin(TAU * 0.9 * t + 0.3);
        force += profile.friction_force * scale * (twist.linear / speed);
    }
    let rate = twist.angular.norm();
    if profile.friction_moment != 0.0 && rate >= SPEED_FLOOR_ANGULAR {
        let scale = 0.6 + 0.4 * libm::sin(TAU * 0.7 * t + 1.1);
        moment += profile.friction_moment * scale * (twist.angular / rate);
    }

    if profile.free_force != 0.0 {
        let dir = Vector3::new(
            libm::cos(TAU * 0.31 * t),
            libm::sin(TAU * 0.47 * t),
            libm::cos(TAU * 0.59 * t + 0.5),
        );
        force += profile.free_force * dir / dir.norm();
    }
    if profile.free_moment != 0.0 {
        let dir = Vector3::new(
            libm::sin(TAU * 0.29 * t + 0.2),
            libm::cos(TAU * 0.41 * t),
            libm::sin(TAU * 0.53 * t),
        );
        moment += profile.free_moment * dir / dir.norm();
    }

    Wrench::new(force, moment)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal via Box–Muller.
fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = uniform(rng).max(1e-300);
    let u2 = uniform(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(TAU * u2)
}

fn gauss_vector(rng: &mut ChaCha8Rng, sigma: f64) -> Vector3<f64> {
    Vector3::new(
        sigma * gauss(rng),
        sigma * gauss(rng),
        sigma * gauss(rng),
    )
}

/// Adds measurement noise per the profile's [`NoiseLevels`], deterministic
/// in the profile seed. Quaternions are re-normalized after the small-angle
/// rotation perturbation; all-zero sigmas return the segment unchanged.
pub fn add_noise(segment: &Segment, profile: &MotionProfile) -> Segment {
    let levels = profile.noise;
    if levels.sigma_pos == 0.0
        && levels.sigma_rot == 0.0
        && levels.sigma_force == 0.0
        && levels.sigma_moment == 0.0
    {
        return segment.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let mut out = segment.clone();
    for s in &mut out.samples {
        if levels.sigma_pos > 0.0 {
            s.pose.position += gauss_vector(&mut rng, levels.sigma_pos);
        }
        if levels.sigma_rot > 0.0 {
            let dq = Quat::from_scaled_axis(gauss_vector(&mut rng, levels.sigma_rot));
            s.pose.orientation = dq.mul(&s.pose.orientation).normalized();
        }
        if levels.sigma_force > 0.0 {
            s.wrench.force += gauss_vector(&mut rng, levels.sigma_force);
        }
        if levels.sigma_moment > 0.0 {
            s.wrench.moment += gauss_vector(&mut rng, levels.sigma_moment);
        }
    }
    out
}

/// Stock geometry for each kind, used by the CLI presets and tests.
pub fn default_params(kind: ConstraintKind) -> ConstraintParams {
    match kind {
        ConstraintKind::FixedPoint => ConstraintParams::FixedPoint(FixedPointParams {
            anchor: Vector3::new(0.4, -0.2, 0.3),
            body_point: Vector3::new(0.12, 0.05, -0.2),
        }),
        ConstraintKind::PointOnPlane => ConstraintParams::PointOnPlane(PointOnPlaneParams {
            body_point: Vector3::new(0.1, -0.04, 0.18),
            offset: 0.25,
            orientation: ExpCoords::new(0.5, -0.3),
        }),
        ConstraintKind::ConcentricCylinder => {
            ConstraintParams::ConcentricCylinder(ConcentricCylinderParams {
                body_ref: Vector3::new(0.1, 0.2, 1.0),
                body_point: Vector3::new(0.14, -0.06, 0.02),
                axis_offset: nalgebra::Vector2::new(0.2, -0.1),
                orientation: ExpCoords::new(0.4, 0.25),
            })
            .normalized_units()
        }
        ConstraintKind::Planar => ConstraintParams::Planar(PlanarParams {
            body_normal: Vector3::new(0.0, 0.0, 1.0),
            offset: 0.2,
            orientation: ExpCoords::new(-0.35, 0.5),
        }),
        ConstraintKind::Prismatic => ConstraintParams::Prismatic(PrismaticParams {
            body_ref: Vector3::new(0.9, -0.1, 0.2),
            body_axis: Vector3::new(0.3, 0.2, 0.93),
            axis_offset: nalgebra::Vector2::new(0.15, 0.1),
            orientation: ExpCoords::new(0.3, -0.4),
        })
        .normalized_units(),
        ConstraintKind::AxialRotation => ConstraintParams::AxialRotation(AxialRotationParams {
            body_ref: Vector3::new(0.05, -0.1, 1.0),
            body_point: Vector3::new(0.16, 0.04, 0.0),
            anchor_offset: Vector3::new(0.2, -0.15, 0.1),
            orientation: ExpCoords::new(0.45, 0.3),
        })
        .normalized_units(),
    }
}

fn centered(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    (uniform(rng) * 2.0 - 1.0) * scale
}

fn rand_vec(rng: &mut ChaCha8Rng, scale: f64) -> Vector3<f64> {
    Vector3::new(
        centered(rng, scale),
        centered(rng, scale),
        centered(rng, scale),
    )
}

fn rand_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = rand_vec(rng, 1.0);
        let n = v.norm();
        if n > 1e-2 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Body offsets kept away from zero so orientation changes couple into the
/// translation rows.
fn rand_offset_point(rng: &mut ChaCha8Rng, scale: f64) -> Vector3<f64> {
    loop {
        let v = rand_vec(rng, scale);
        if v.norm() > 0.3 * scale {
            return v;
        }
    }
}

/// Randomized valid geometry for a kind, deterministic in the seed.
pub fn random_params(kind: ConstraintKind, seed: u64) -> ConstraintParams {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let w = ExpCoords::new(centered(rng, 0.8), centered(rng, 0.8));
    match kind {
        ConstraintKind::FixedPoint => ConstraintParams::FixedPoint(FixedPointParams {
            anchor: rand_vec(rng, 0.5),
            body_point: rand_offset_point(rng, 0.25),
        }),
        ConstraintKind::PointOnPlane => ConstraintParams::PointOnPlane(PointOnPlaneParams {
            body_point: rand_offset_point(rng, 0.2),
            offset: centered(rng, 0.4),
            orientation: w,
        }),
        ConstraintKind::ConcentricCylinder => {
            ConstraintParams::ConcentricCylinder(ConcentricCylinderParams {
                body_ref: rand_unit(rng),
                body_point: rand_offset_point(rng, 0.2),
                axis_offset: nalgebra::Vector2::new(centered(rng, 0.4), centered(rng, 0.4)),
                orientation: w,
            })
            .normalized_units()
        }
        ConstraintKind::Planar => ConstraintParams::Planar(PlanarParams {
            body_normal: rand_unit(rng),
            offset: centered(rng, 0.4),
            orientation: w,
        }),
        ConstraintKind::Prismatic => ConstraintParams::Prismatic(PrismaticParams {
            body_ref: rand_unit(rng),
            body_axis: rand_unit(rng),
            axis_offset: nalgebra::Vector2::new(centered(rng, 0.4), centered(rng, 0.4)),
            orientation: w,
        })
        .normalized_units(),
        ConstraintKind::AxialRotation => ConstraintParams::AxialRotation(AxialRotationParams {
            body_ref: rand_unit(rng),
            body_point: rand_offset_point(rng, 0.2),
            anchor_offset: rand_vec(rng, 0.4),
            orientation: w,
        })
        .normalized_units(),
    }
}

/// Stock motion profile for each kind: every motion DOF excited, reaction
/// wrenches on every row, light friction, no noise.
pub fn default_profile(kind: ConstraintKind) -> MotionProfile {
    let excitation = match kind {
        ConstraintKind::FixedPoint => vec![
            DofExcitation::new(0.7, 0.43, 0.0),
            DofExcitation::new(0.55, 0.61, 1.0),
            DofExcitation::new(0.8, 0.89, 2.1),
        ],
        ConstraintKind::PointOnPlane => vec![
            DofExcitation::new(0.18, 0.37, 0.0),
            DofExcitation::new(0.14, 0.53, 1.3),
            DofExcitation::new(0.55, 0.71, 0.4),
            DofExcitation::new(0.45, 0.97, 1.9),
            DofExcitation::new(0.6, 1.21, 0.9),
        ],
        ConstraintKind::ConcentricCylinder => vec![
            DofExcitation::new(1.1, 0.41, 0.0),
            DofExcitation::new(0.16, 0.67, 0.8),
        ],
        ConstraintKind::Planar => vec![
            DofExcitation::new(0.17, 0.39, 0.0),
            DofExcitation::new(0.13, 0.57, 1.1),
            DofExcitation::new(1.0, 0.83, 0.5),
        ],
        ConstraintKind::Prismatic => vec![DofExcitation::new(0.22, 0.45, 0.0)],
        ConstraintKind::AxialRotation => vec![DofExcitation::new(1.0, 0.5, 0.0)],
    };
    let lambda_amplitudes = match kind {
        ConstraintKind::FixedPoint => vec![2.5, 2.0, 1.6],
        ConstraintKind::PointOnPlane => vec![2.5],
        ConstraintKind::ConcentricCylinder => vec![2.0, 1.6, 0.45, 0.35],
        ConstraintKind::Planar => vec![2.5, 0.5, 0.4],
        ConstraintKind::Prismatic => vec![2.0, 1.6, 0.4, 0.35, 0.5],
        ConstraintKind::AxialRotation => vec![2.5, 2.0, 1.6, 0.5, 0.4],
    };
    MotionProfile {
        duration: 3.0,
        sample_rate: 40.0,
        excitation,
        lambda_amplitudes,
        friction_force: 0.8,
        friction_moment: 0.05,
        free_force: 0.0,
        free_moment: 0.0,
        noise: NoiseLevels::default(),
        seed: 0,
    }
}
