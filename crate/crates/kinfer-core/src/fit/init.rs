//! Start points for the model fits.
//!
//! Start 0 is data-driven (closed-form least squares on whatever structure
//! the model exposes: plane fits, principal directions, angular-velocity
//! axes, linear pin solves); later starts perturb it with seeded noise.
//! Degenerate data falls back to a randomized start instead of failing.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Matrix3, Vector2, Vector3};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{ExpCoords, Quat};
use crate::models::frame::Frame;
use crate::models::{
    AxialRotationParams, ConcentricCylinderParams, ConstraintKind, ConstraintParams,
    FixedPointParams, PlanarParams, PointOnPlaneParams, PrismaticParams,
};
use crate::segment::Segment;

/// First start for a fit: data-driven for `start_index == 0`, a seeded
/// perturbation of the data-driven point otherwise.
pub fn initialize(
    kind: ConstraintKind,
    segment: &Segment,
    start_index: usize,
    seed: u64,
) -> DVector<f64> {
    let base = data_driven(kind, segment)
        .filter(|v| v.iter().all(|x| x.is_finite()))
        .unwrap_or_else(|| fallback(kind, segment));
    if start_index == 0 {
        return base;
    }
    let mut rng = start_rng(kind, seed, start_index);
    perturb(kind, &base, segment, &mut rng)
}

fn start_rng(kind: ConstraintKind, seed: u64, start_index: usize) -> ChaCha8Rng {
    let kind_index = ConstraintKind::ALL.iter().position(|k| *k == kind).unwrap() as u64;
    let mixed = seed
        ^ (kind_index.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        ^ ((start_index as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f));
    ChaCha8Rng::seed_from_u64(mixed)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
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

/// Spread of the recorded positions, used to scale random perturbations.
fn position_scale(segment: &Segment) -> f64 {
    let n = segment.len().max(1) as f64;
    let mean: Vector3<f64> =
        segment.samples.iter().map(|s| s.pose.position).sum::<Vector3<f64>>() / n;
    let var = segment
        .samples
        .iter()
        .map(|s| (s.pose.position - mean).norm_squared())
        .sum::<f64>()
        / n;
    libm::sqrt(var) + 0.1
}

fn perturb(
    kind: ConstraintKind,
    base: &DVector<f64>,
    segment: &Segment,
    rng: &mut ChaCha8Rng,
) -> DVector<f64> {
    let scale = position_scale(segment);
    let params = ConstraintParams::from_slice(kind, base.as_slice());
    let jitter_dir = |v: &Vector3<f64>, rng: &mut ChaCha8Rng| {
        let rot = Quat::from_scaled_axis(rand_vec(rng, 0.5)).rotation_matrix_unchecked();
        rot * v
    };
    let out = match params {
        ConstraintParams::FixedPoint(p) => ConstraintParams::FixedPoint(FixedPointParams {
            anchor: p.anchor + rand_vec(rng, 0.5 * scale),
            body_point: p.body_point + rand_vec(rng, 0.5 * scale),
        }),
        ConstraintParams::PointOnPlane(p) => ConstraintParams::PointOnPlane(PointOnPlaneParams {
            body_point: p.body_point + rand_vec(rng, 0.5 * scale),
            offset: p.offset + centered(rng, 0.5 * scale),
            orientation: jitter_exp(&p.orientation, rng),
        }),
        ConstraintParams::ConcentricCylinder(p) => {
            ConstraintParams::ConcentricCylinder(ConcentricCylinderParams {
                body_ref: jitter_dir(&p.body_ref, rng),
                body_point: p.body_point + rand_vec(rng, 0.5 * scale),
                axis_offset: p.axis_offset
                    + Vector2::new(centered(rng, 0.5 * scale), centered(rng, 0.5 * scale)),
                orientation: jitter_exp(&p.orientation, rng),
            })
            .normalized_units()
        }
        ConstraintParams::Planar(p) => ConstraintParams::Planar(PlanarParams {
            body_normal: jitter_dir(&p.body_normal, rng),
            offset: p.offset + centered(rng, 0.5 * scale),
            orientation: jitter_exp(&p.orientation, rng),
        }),
        ConstraintParams::Prismatic(p) => ConstraintParams::Prismatic(PrismaticParams {
            body_ref: jitter_dir(&p.body_ref, rng),
            body_axis: jitter_dir(&p.body_axis, rng),
            axis_offset: p.axis_offset
                + Vector2::new(centered(rng, 0.5 * scale), centered(rng, 0.5 * scale)),
            orientation: jitter_exp(&p.orientation, rng),
        })
        .normalized_units(),
        ConstraintParams::AxialRotation(p) => {
            ConstraintParams::AxialRotation(AxialRotationParams {
                body_ref: jitter_dir(&p.body_ref, rng),
                body_point: p.body_point + rand_vec(rng, 0.5 * scale),
                anchor_offset: p.anchor_offset + rand_vec(rng, 0.5 * scale),
                orientation: jitter_exp(&p.orientation, rng),
            })
            .normalized_units()
        }
    };
    out.to_vector()
}

fn jitter_exp(w: &ExpCoords, rng: &mut ChaCha8Rng) -> ExpCoords {
    ExpCoords::new(w.x + centered(rng, 0.5), w.y + centered(rng, 0.5))
}

/// Randomized start used when the data-driven estimate is unavailable.
fn fallback(kind: ConstraintKind, segment: &Segment) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fa11);
    let scale = position_scale(segment);
    let centroid = segment
        .samples
        .iter()
        .map(|s| s.pose.position)
        .sum::<Vector3<f64>>()
        / segment.len().max(1) as f64;
    let seeded = match kind {
        ConstraintKind::FixedPoint => ConstraintParams::FixedPoint(FixedPointParams {
            anchor: centroid,
            body_point: Vector3::zeros(),
        }),
        ConstraintKind::PointOnPlane => ConstraintParams::PointOnPlane(PointOnPlaneParams {
            body_point: Vector3::zeros(),
            offset: centroid.z,
            orientation: ExpCoords::new(0.0, 0.0),
        }),
        ConstraintKind::ConcentricCylinder => {
            ConstraintParams::ConcentricCylinder(ConcentricCylinderParams {
                body_ref: Vector3::x(),
                body_point: Vector3::zeros(),
                axis_offset: Vector2::new(centroid.x, centroid.y),
                orientation: ExpCoords::new(0.0, 0.0),
            })
        }
        ConstraintKind::Planar => ConstraintParams::Planar(PlanarParams {
            body_normal: Vector3::z(),
            offset: centroid.z,
            orientation: ExpCoords::new(0.0, 0.0),
        }),
        ConstraintKind::Prismatic => ConstraintParams::Prismatic(PrismaticParams {
            body_ref: Vector3::x(),
            body_axis: Vector3::z(),
            axis_offset: Vector2::new(centroid.x, centroid.y),
            orientation: ExpCoords::new(0.0, 0.0),
        }),
        ConstraintKind::AxialRotation => ConstraintParams::AxialRotation(AxialRotationParams {
            body_ref: Vector3::x(),
            body_point: Vector3::new(0.1, 0.0, 0.0),
            anchor_offset: centroid,
            orientation: ExpCoords::new(0.0, 0.0),
        }),
    };
    // A deterministic shake keeps the fallback off exact symmetry axes.
    let mut v = seeded.to_vector();
    for x in v.iter_mut() {
        *x += centered(&mut rng, 0.05 * scale);
    }
    v
}

fn data_driven(kind: ConstraintKind, segment: &Segment) -> Option<DVector<f64>> {
    if segment.len() < 3 {
        return None;
    }
    let params = match kind {
        ConstraintKind::FixedPoint => fixed_point_start(segment)?,
        ConstraintKind::PointOnPlane => point_on_plane_start(segment)?,
        ConstraintKind::ConcentricCylinder => cylinder_start(segment)?,
        ConstraintKind::Planar => planar_start(segment)?,
        ConstraintKind::Prismatic => prismatic_start(segment)?,
        ConstraintKind::AxialRotation => axial_start(segment)?,
    };
    Some(params.to_vector())
}

/// Least-squares plane through a point cloud: `(unit normal, offset)` with
/// `n̂ᵀx = offset`. `None` when the cloud does not span a plane.
fn plane_fit(points: &[Vector3<f64>]) -> Option<(Vector3<f64>, f64)> {
    let n = points.len() as f64;
    let centroid = points.iter().sum::<Vector3<f64>>() / n;
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    let eig = cov.symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|a, b| eig.eigenvalues[*a].total_cmp(&eig.eigenvalues[*b]));
    // Needs two well-excited in-plane directions.
    if eig.eigenvalues[order[1]] < 1e-10 * (1.0 + eig.eigenvalues[order[2]]) {
        return None;
    }
    let normal = eig.eigenvectors.column(order[0]).into_owned();
    Some((normal, normal.dot(&centroid)))
}

fn principal_direction(points: &[Vector3<f64>]) -> Option<Vector3<f64>> {
    let n = points.len() as f64;
    let centroid = points.iter().sum::<Vector3<f64>>() / n;
    let mut cov = Matrix3::zeros();
    for p in points {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    let eig = cov.symmetric_eigen();
    let mut best = 0;
    for i in 1..3 {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    if eig.eigenvalues[best] < 1e-12 {
        return None;
    }
    Some(eig.eigenvectors.column(best).into_owned())
}

/// Closed-form fixed-point start: solve `A_i·s̄ − P = −r_i` for `(s̄, P)`.
fn fixed_point_start(segment: &Segment) -> Option<ConstraintParams> {
    let n = segment.len();
    let mut m = DMatrix::zeros(3 * n, 6);
    let mut b = DVector::zeros(3 * n);
    for (i, s) in segment.samples.iter().enumerate() {
        let a = s.pose.rotation();
        for r in 0..3 {
            for c in 0..3 {
                m[(3 * i + r, c)] = a[(r, c)];
            }
            m[(3 * i + r, 3 + r)] = -1.0;
            b[3 * i + r] = -s.pose.position[r];
        }
    }
    let sol = lstsq(&m, &b)?;
    Some(ConstraintParams::FixedPoint(FixedPointParams {
        body_point: Vector3::new(sol[0], sol[1], sol[2]),
        anchor: Vector3::new(sol[3], sol[4], sol[5]),
    }))
}

/// Alternating plane/contact estimate: plane through `r + A·s̄`, then a
/// linear solve for `(s̄, d)` given the normal, iterated a few times from
/// `s̄ = 0`.
fn point_on_plane_start(segment: &Segment) -> Option<ConstraintParams> {
    let n = segment.len();
    let mut s_bar = Vector3::zeros();
    let mut normal = Vector3::z();
    let mut offset = 0.0;
    for _ in 0..4 {
        let points: Vec<Vector3<f64>> = segment
            .samples
            .iter()
            .map(|s| s.pose.position + s.pose.rotation() * s_bar)
            .collect();
        let (nrm, off) = plane_fit(&points)?;
        normal = nrm;
        offset = off;

        let mut m = DMatrix::zeros(n, 4);
        let mut b = DVector::zeros(n);
        for (i, s) in segment.samples.iter().enumerate() {
            let na = normal.transpose() * s.pose.rotation();
            for c in 0..3 {
                m[(i, c)] = na[c];
            }
            m[(i, 3)] = -1.0;
            b[i] = -normal.dot(&s.pose.position);
        }
        let sol = lstsq(&m, &b)?;
        s_bar = Vector3::new(sol[0], sol[1], sol[2]);
        offset = sol[3];
    }
    Some(ConstraintParams::PointOnPlane(PointOnPlaneParams {
        body_point: s_bar,
        offset,
        orientation: ExpCoords::from_z_image(&normal),
    }))
}

fn planar_start(segment: &Segment) -> Option<ConstraintParams> {
    let points: Vec<Vector3<f64>> =
        segment.samples.iter().map(|s| s.pose.position).collect();
    let (normal, offset) = plane_fit(&points)?;
    let a0 = segment.samples[0].pose.rotation();
    Some(ConstraintParams::Planar(PlanarParams {
        body_normal: a0.transpose() * normal,
        offset,
        orientation: ExpCoords::from_z_image(&normal),
    }))
}

fn prismatic_start(segment: &Segment) -> Option<ConstraintParams> {
    let points: Vec<Vector3<f64>> =
        segment.samples.iter().map(|s| s.pose.position).collect();
    let dir = principal_direction(&points)?;
    let w = ExpCoords::from_z_image(&dir);
    let frame = Frame::new(&w);
    let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));
    let n = segment.len() as f64;
    let dx = points.iter().map(|p| u1.dot(p)).sum::<f64>() / n;
    let dy = points.iter().map(|p| u2.dot(p)).sum::<f64>() / n;
    let a0 = segment.samples[0].pose.rotation();
    Some(
        ConstraintParams::Prismatic(PrismaticParams {
            body_axis: a0.transpose() * u3,
            body_ref: a0.transpose() * u2,
            axis_offset: Vector2::new(dx, dy),
            orientation: w,
        })
        .normalized_units(),
    )
}

/// Axis direction from the dominant angular-velocity direction.
fn rotation_axis(segment: &Segment) -> Option<Vector3<f64>> {
    let mut m = Matrix3::zeros();
    let mut used = 0usize;
    for s in &segment.samples {
        let w = s.twist.angular;
        let n = w.norm();
        if n > 1e-3 {
            let u = w / n;
            m += u * u.transpose();
            used += 1;
        }
    }
    if used < 3 {
        return None;
    }
    let eig = m.symmetric_eigen();
    let mut best = 0;
    for i in 1..3 {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    Some(eig.eigenvectors.column(best).into_owned())
}

fn cylinder_start(segment: &Segment) -> Option<ConstraintParams> {
    let dir = rotation_axis(segment)?;
    let w = ExpCoords::from_z_image(&dir);
    let frame = Frame::new(&w);
    let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));

    // Positions projected on the perpendicular plane lie on a circle around
    // the axis crossing; Kåsa linear circle fit.
    let n = segment.len();
    let mut m = DMatrix::zeros(n, 3);
    let mut b = DVector::zeros(n);
    for (i, s) in segment.samples.iter().enumerate() {
        let x = u1.dot(&s.pose.position);
        let y = u2.dot(&s.pose.position);
        m[(i, 0)] = 2.0 * x;
        m[(i, 1)] = 2.0 * y;
        m[(i, 2)] = 1.0;
        b[i] = x * x + y * y;
    }
    let sol = lstsq(&m, &b)?;
    let (dx, dy) = (sol[0], sol[1]);

    // Given the axis, s̄ follows from the linear rows of the constraint.
    let mut ms = DMatrix::zeros(3 * n, 3);
    let mut bs = DVector::zeros(3 * n);
    for (i, s) in segment.samples.iter().enumerate() {
        let a = s.pose.rotation();
        let rows = [
            (u1.transpose() * a, dx - u1.dot(&s.pose.position)),
            (u2.transpose() * a, dy - u2.dot(&s.pose.position)),
            (u3.transpose() * a, 0.0),
        ];
        for (r, (row, rhs)) in rows.iter().enumerate() {
            for c in 0..3 {
                ms[(3 * i + r, c)] = row[c];
            }
            bs[3 * i + r] = *rhs;
        }
    }
    let sol_s = lstsq(&ms, &bs)?;
    let s_bar = Vector3::new(sol_s[0], sol_s[1], sol_s[2]);

    let body_axis = segment.samples[0].pose.rotation().transpose() * u3;
    let t_bar = perpendicular_ref(&body_axis, &s_bar);
    Some(
        ConstraintParams::ConcentricCylinder(ConcentricCylinderParams {
            body_ref: t_bar,
            body_point: s_bar,
            axis_offset: Vector2::new(dx, dy),
            orientation: w,
        })
        .normalized_units(),
    )
}

fn axial_start(segment: &Segment) -> Option<ConstraintParams> {
    let dir = rotation_axis(segment)?;
    let w = ExpCoords::from_z_image(&dir);
    let frame = Frame::new(&w);

    // r + A·s̄ − R·d = 0 is linear in (s̄, d) once the axis frame is known.
    let n = segment.len();
    let mut m = DMatrix::zeros(3 * n, 6);
    let mut b = DVector::zeros(3 * n);
    for (i, s) in segment.samples.iter().enumerate() {
        let a = s.pose.rotation();
        for r in 0..3 {
            for c in 0..3 {
                m[(3 * i + r, c)] = a[(r, c)];
                m[(3 * i + r, 3 + c)] = -frame.rot[(r, c)];
            }
            b[3 * i + r] = -s.pose.position[r];
        }
    }
    let sol = lstsq(&m, &b)?;
    let s_bar = Vector3::new(sol[0], sol[1], sol[2]);
    let anchor_offset = Vector3::new(sol[3], sol[4], sol[5]);

    let body_axis = segment.samples[0].pose.rotation().transpose() * frame.u(2);
    let t_bar = perpendicular_ref(&body_axis, &s_bar);
    Some(
        ConstraintParams::AxialRotation(AxialRotationParams {
            body_ref: t_bar,
            body_point: s_bar,
            anchor_offset,
            orientation: w,
        })
        .normalized_units(),
    )
}

/// Unit vector perpendicular to both arguments (or just the first when the
/// second is negligible).
fn perpendicular_ref(axis: &Vector3<f64>, other: &Vector3<f64>) -> Vector3<f64> {
    let c = axis.cross(other);
    if c.norm() > 1e-9 {
        return c / c.norm();
    }
    let probe = if axis.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let c = axis.cross(&probe);
    c / c.norm()
}

/// Minimum-norm least squares via SVD.
fn lstsq(m: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = m.clone().svd(true, true);
    svd.solve(b, 1e-10).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    #[test]
    fn prismatic_direction_from_spread_positions() {
        let params = synth::default_params(ConstraintKind::Prismatic);
        let seg = synth::generate(&params, &synth::default_profile(ConstraintKind::Prismatic));
        let alpha = initialize(ConstraintKind::Prismatic, &seg, 0, 0);
        let got = ConstraintParams::from_slice(ConstraintKind::Prismatic, alpha.as_slice());
        let truth = crate::models::canonicalize(&params.normalized_units());
        let est = crate::models::canonicalize(&got);
        let dev = truth.deviation(&est).unwrap();
        assert!(dev.angular < 1e-6, "direction error {}", dev.angular);
    }

    #[test]
    fn fixed_point_closed_form_is_exact_on_clean_data() {
        let params = synth::default_params(ConstraintKind::FixedPoint);
        let seg = synth::generate(&params, &synth::default_profile(ConstraintKind::FixedPoint));
        let alpha = initialize(ConstraintKind::FixedPoint, &seg, 0, 0);
        let got = ConstraintParams::from_slice(ConstraintKind::FixedPoint, alpha.as_slice());
        let dev = crate::models::canonicalize(&params)
            .deviation(&crate::models::canonicalize(&got))
            .unwrap();
        assert!(dev.linear < 1e-10, "residual {}", dev.linear);
    }

    #[test]
    fn later_starts_differ_from_start_zero() {
        let params = synth::default_params(ConstraintKind::Planar);
        let seg = synth::generate(&params, &synth::default_profile(ConstraintKind::Planar));
        let a0 = initialize(ConstraintKind::Planar, &seg, 0, 7);
        let a1 = initialize(ConstraintKind::Planar, &seg, 1, 7);
        let a1_again = initialize(ConstraintKind::Planar, &seg, 1, 7);
        assert_ne!(a0, a1);
        assert_eq!(a1, a1_again);
    }
}
