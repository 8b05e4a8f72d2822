use super::*;
use crate::geom::Quat;
use approx::assert_relative_eq;
use nalgebra::{Matrix3, Vector2, Vector3};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn centered(rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    (uniform(rng) * 2.0 - 1.0) * scale
}

fn random_vector(rng: &mut ChaCha8Rng, scale: f64) -> Vector3<f64> {
    Vector3::new(
        centered(rng, scale),
        centered(rng, scale),
        centered(rng, scale),
    )
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    loop {
        let v = random_vector(rng, 1.0);
        let n = v.norm();
        if n > 1e-2 {
            return v / n;
        }
    }
}

fn random_pose(rng: &mut ChaCha8Rng) -> Pose {
    let q = Quat::from_scaled_axis(random_vector(rng, 1.2));
    Pose::new(random_vector(rng, 0.5), q)
}

fn random_twist(rng: &mut ChaCha8Rng) -> Twist {
    Twist::new(random_vector(rng, 0.8), random_vector(rng, 0.9))
}

/// Valid-ish parameters for every kind (unit vectors normalized, pairs
/// orthogonal) with geometry randomized from the rng.
pub(super) fn random_params(kind: ConstraintKind, rng: &mut ChaCha8Rng) -> ConstraintParams {
    let w = ExpCoords::new(centered(rng, 0.9), centered(rng, 0.9));
    match kind {
        ConstraintKind::FixedPoint => ConstraintParams::FixedPoint(FixedPointParams {
            anchor: random_vector(rng, 0.5),
            body_point: random_vector(rng, 0.25),
        }),
        ConstraintKind::PointOnPlane => ConstraintParams::PointOnPlane(PointOnPlaneParams {
            body_point: random_vector(rng, 0.2),
            offset: centered(rng, 0.4),
            orientation: w,
        }),
        ConstraintKind::ConcentricCylinder => {
            let s = random_vector(rng, 0.25);
            let t = random_unit(rng);
            ConstraintParams::ConcentricCylinder(ConcentricCylinderParams {
                body_ref: t,
                body_point: s,
                axis_offset: Vector2::new(centered(rng, 0.4), centered(rng, 0.4)),
                orientation: w,
            })
            .normalized_units()
        }
        ConstraintKind::Planar => ConstraintParams::Planar(PlanarParams {
            body_normal: random_unit(rng),
            offset: centered(rng, 0.4),
            orientation: w,
        }),
        ConstraintKind::Prismatic => {
            let s = random_unit(rng);
            ConstraintParams::Prismatic(PrismaticParams {
                body_ref: random_unit(rng),
                body_axis: s,
                axis_offset: Vector2::new(centered(rng, 0.4), centered(rng, 0.4)),
                orientation: w,
            })
            .normalized_units()
        }
        ConstraintKind::AxialRotation => ConstraintParams::AxialRotation(AxialRotationParams {
            body_ref: random_unit(rng),
            body_point: random_vector(rng, 0.25),
            anchor_offset: random_vector(rng, 0.4),
            orientation: w,
        })
        .normalized_units(),
    }
}

// ---------------------------------------------------------------------------
// Residual shape and trivial examples
// ---------------------------------------------------------------------------

#[test]
fn row_counts_match_declared_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for kind in ConstraintKind::ALL {
        let p = random_params(kind, &mut rng);
        let pose = random_pose(&mut rng);
        assert_eq!(residual(&p, &pose).len(), kind.residual_rows());
        let (phi_r, phi_pi) = jacobians(&p, &pose);
        assert_eq!(phi_r.nrows(), kind.kinematic_rows());
        assert_eq!(phi_pi.nrows(), kind.kinematic_rows());
        assert_eq!(phi_q(&p, &pose).nrows(), kind.kinematic_rows());
    }
}

#[test]
fn fixed_point_coincident_pose_has_zero_residual() {
    let p = ConstraintParams::FixedPoint(FixedPointParams {
        anchor: Vector3::zeros(),
        body_point: Vector3::zeros(),
    });
    let phi = residual(&p, &Pose::identity());
    assert_eq!(phi.as_slice(), &[0.0, 0.0, 0.0]);
}

#[test]
fn point_on_plane_axis_aligned_example() {
    // Plane z = 0, contact point at the body origin.
    let p = ConstraintParams::PointOnPlane(PointOnPlaneParams {
        body_point: Vector3::zeros(),
        offset: 0.0,
        orientation: ExpCoords::new(0.0, 0.0),
    });
    let on = Pose::new(Vector3::new(0.3, -0.1, 0.0), Quat::IDENTITY);
    assert_relative_eq!(residual(&p, &on)[0], 0.0, epsilon = 1e-15);

    let off = Pose::new(Vector3::new(0.3, -0.1, 0.02), Quat::IDENTITY);
    assert_relative_eq!(residual(&p, &off)[0], -0.02, epsilon = 1e-15);
    assert_relative_eq!(kinematic_error(&p, &off), 0.02, epsilon = 1e-15);
}

#[test]
fn planar_constructed_pose_satisfies_constraint() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (w, d) = (
            ExpCoords::new(centered(&mut rng, 1.0), centered(&mut rng, 1.0)),
            centered(&mut rng, 0.5),
        );
        let frame = frame::Frame::new(&w);
        let (u1, u2, u3) = (frame.u(0), frame.u(1), frame.u(2));
        // Place the origin on the plane, then pick an orientation that maps
        // a chosen body vector onto the normal.
        let r = d * u3 + centered(&mut rng, 0.5) * u1 + centered(&mut rng, 0.5) * u2;
        let t_bar = random_unit(&mut rng);
        let spin = Quat::from_axis_angle(&u3, centered(&mut rng, 3.0));
        let align = rotation_between(&t_bar, &u3);
        let q = spin.mul(&align);
        let p = ConstraintParams::Planar(PlanarParams {
            body_normal: t_bar,
            offset: d,
            orientation: w,
        });
        let phi = residual(&p, &Pose::new(r, q));
        assert!(phi.norm() < 1e-12, "residual {phi}");
    }
}

/// Quaternion rotating `from` onto `to` (both unit).
fn rotation_between(from: &Vector3<f64>, to: &Vector3<f64>) -> Quat {
    let axis = from.cross(to);
    let s = axis.norm();
    let c = from.dot(to);
    if s < 1e-12 {
        if c > 0.0 {
            return Quat::IDENTITY;
        }
        // Antipodal: rotate π about any perpendicular axis.
        let perp = if from.x.abs() < 0.9 {
            from.cross(&Vector3::x())
        } else {
            from.cross(&Vector3::y())
        };
        return Quat::from_axis_angle(&perp, core::f64::consts::PI);
    }
    Quat::from_axis_angle(&axis, libm::atan2(s, c))
}

// ---------------------------------------------------------------------------
// Jacobians vs finite differences
// ---------------------------------------------------------------------------

fn residual_kinematic(p: &ConstraintParams, pose: &Pose) -> DVector<f64> {
    residual(p, pose).rows(0, p.kind().kinematic_rows()).into_owned()
}

fn fd_phi_r(p: &ConstraintParams, pose: &Pose, eps: f64) -> DMatrix<f64> {
    let k = p.kind().kinematic_rows();
    let mut m = DMatrix::zeros(k, 3);
    for j in 0..3 {
        let mut dp = Vector3::zeros();
        dp[j] = eps;
        let plus = Pose::new(pose.position + dp, pose.orientation);
        let minus = Pose::new(pose.position - dp, pose.orientation);
        let col = (residual_kinematic(p, &plus) - residual_kinematic(p, &minus)) / (2.0 * eps);
        m.set_column(j, &col);
    }
    m
}

fn fd_phi_pi(p: &ConstraintParams, pose: &Pose, eps: f64) -> DMatrix<f64> {
    let k = p.kind().kinematic_rows();
    let mut m = DMatrix::zeros(k, 3);
    for j in 0..3 {
        let mut axis = Vector3::zeros();
        axis[j] = 1.0;
        let rotate = |sign: f64| {
            let dq = Quat::from_scaled_axis(axis * (sign * eps));
            Pose::new(pose.position, dq.mul(&pose.orientation).normalized())
        };
        let col =
            (residual_kinematic(p, &rotate(1.0)) - residual_kinematic(p, &rotate(-1.0)))
                / (2.0 * eps);
        m.set_column(j, &col);
    }
    m
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

#[test]
fn jacobians_match_finite_differences_all_kinds() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for kind in ConstraintKind::ALL {
        for _ in 0..25 {
            let p = random_params(kind, &mut rng);
            let pose = random_pose(&mut rng);
            let (phi_r, phi_pi) = jacobians(&p, &pose);
            let scale = max_abs(&phi_r).max(max_abs(&phi_pi)).max(1.0);
            let dr = max_abs(&(fd_phi_r(&p, &pose, 1e-6) - &phi_r)) / scale;
            let dpi = max_abs(&(fd_phi_pi(&p, &pose, 1e-6) - &phi_pi)) / scale;
            assert!(dr < 1e-5, "{kind} phi_r rel err {dr}");
            assert!(dpi < 1e-5, "{kind} phi_pi rel err {dpi}");
        }
    }
}

#[test]
fn fixed_point_jacobians_analytic_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let p = FixedPointParams {
        anchor: random_vector(&mut rng, 0.5),
        body_point: random_vector(&mut rng, 0.3),
    };
    let pose = random_pose(&mut rng);
    let wrapped = ConstraintParams::FixedPoint(p);
    let (phi_r, phi_pi) = jacobians(&wrapped, &pose);
    assert_relative_eq!(
        Matrix3::from_iterator(phi_r.iter().copied()),
        Matrix3::identity(),
        epsilon = 1e-14
    );
    let reference = fixed_point::phi_pi_reference(&p, &pose);
    for i in 0..3 {
        for j in 0..3 {
            assert_relative_eq!(phi_pi[(i, j)], reference[(i, j)], epsilon = 1e-12);
        }
    }
}

#[test]
fn point_on_plane_jacobians_analytic_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let p = PointOnPlaneParams {
        body_point: random_vector(&mut rng, 0.3),
        offset: 0.2,
        orientation: ExpCoords::new(0.4, -0.7),
    };
    let pose = random_pose(&mut rng);
    let wrapped = ConstraintParams::PointOnPlane(p);
    let (phi_r, phi_pi) = jacobians(&wrapped, &pose);
    let u3 = frame::Frame::new(&p.orientation).u(2);
    for j in 0..3 {
        assert_relative_eq!(phi_r[(0, j)], -u3[j], epsilon = 1e-14);
    }
    let reference = point_on_plane::phi_pi_reference(&p, &pose);
    for j in 0..3 {
        assert_relative_eq!(phi_pi[(0, j)], reference[j], epsilon = 1e-12);
    }
}

#[test]
fn velocity_residual_matches_fused_rows_and_vanishes_at_rest() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for kind in ConstraintKind::ALL {
        let p = random_params(kind, &mut rng);
        let pose = random_pose(&mut rng);
        let twist = random_twist(&mut rng);
        let via_jacobians = velocity_residual(&p, &pose, &twist);
        let fused = eval(&p, &pose, &twist, EvalMode::Values);
        for i in 0..kind.kinematic_rows() {
            assert_relative_eq!(via_jacobians[i], fused.dphi[i], epsilon = 1e-12);
        }
        let at_rest = velocity_residual(&p, &pose, &Twist::zero());
        assert_eq!(at_rest.norm(), 0.0);
    }
}

#[test]
fn alpha_jacobian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for kind in ConstraintKind::ALL {
        for _ in 0..10 {
            let p = random_params(kind, &mut rng);
            let pose = random_pose(&mut rng);
            let twist = random_twist(&mut rng);
            let na = kind.param_count();
            let alpha = p.to_vector();
            let ev = eval(&p, &pose, &twist, EvalMode::WithGradient);

            let eps = 1e-6;
            for j in 0..na {
                let mut plus = alpha.clone();
                let mut minus = alpha.clone();
                plus[j] += eps;
                minus[j] -= eps;
                let pp = ConstraintParams::from_slice(kind, plus.as_slice());
                let pm = ConstraintParams::from_slice(kind, minus.as_slice());
                let ep = eval(&pp, &pose, &twist, EvalMode::Values);
                let em = eval(&pm, &pose, &twist, EvalMode::Values);
                for i in 0..ev.rows {
                    let fd = (ep.phi[i] - em.phi[i]) / (2.0 * eps);
                    assert!(
                        (fd - ev.phi_alpha[i][j]).abs() < 1e-5 * (1.0 + fd.abs()),
                        "{kind} phi row {i} wrt alpha[{j}]: fd {fd} vs {}",
                        ev.phi_alpha[i][j]
                    );
                }
                for i in 0..ev.kinematic {
                    let fd = (ep.dphi[i] - em.dphi[i]) / (2.0 * eps);
                    assert!(
                        (fd - ev.dphi_alpha[i][j]).abs() < 1e-5 * (1.0 + fd.abs()),
                        "{kind} dphi row {i} wrt alpha[{j}]: fd {fd} vs {}",
                        ev.dphi_alpha[i][j]
                    );
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Kinematic error oracle
// ---------------------------------------------------------------------------

#[test]
fn kinematic_error_matches_projection_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for kind in ConstraintKind::ALL {
        for _ in 0..20 {
            let p = random_params(kind, &mut rng);
            let pose = random_pose(&mut rng);
            let got = kinematic_error(&p, &pose);
            let expect = match &p {
                ConstraintParams::FixedPoint(fp) => {
                    (pose.position + pose.rotation() * fp.body_point - fp.anchor).norm()
                }
                ConstraintParams::PointOnPlane(pp) => {
                    let g = match canonicalize(&p) {
                        CanonicalGeometry::PointOnPlane { plane, .. } => plane,
                        _ => unreachable!(),
                    };
                    g.distance(&(pose.position + pose.rotation() * pp.body_point))
                }
                ConstraintParams::Planar(_) => {
                    let g = match canonicalize(&p) {
                        CanonicalGeometry::Planar { plane } => plane,
                        _ => unreachable!(),
                    };
                    g.distance(&pose.position)
                }
                ConstraintParams::ConcentricCylinder(cc) => {
                    let g = match canonicalize(&p) {
                        CanonicalGeometry::ConcentricCylinder { axis } => axis,
                        _ => unreachable!(),
                    };
                    g.distance(&(pose.position + pose.rotation() * cc.body_point))
                }
                ConstraintParams::Prismatic(_) => {
                    let g = match canonicalize(&p) {
                        CanonicalGeometry::Prismatic { axis } => axis,
                        _ => unreachable!(),
                    };
                    g.distance(&pose.position)
                }
                ConstraintParams::AxialRotation(ar) => {
                    let g = match canonicalize(&p) {
                        CanonicalGeometry::AxialRotation { axis, .. } => axis,
                        _ => unreachable!(),
                    };
                    g.distance(&(pose.position + pose.rotation() * ar.body_point))
                }
            };
            assert_relative_eq!(got, expect, epsilon = 1e-12);
        }
    }
}

// ---------------------------------------------------------------------------
// Canonical geometry and gauges
// ---------------------------------------------------------------------------

#[test]
fn planar_sign_gauge_maps_to_same_plane() {
    let p = PlanarParams {
        body_normal: Vector3::new(0.0, 0.0, 1.0),
        offset: 0.3,
        orientation: ExpCoords::new(0.4, -0.2),
    };
    let n = frame::Frame::new(&p.orientation).u(2);
    let flipped = PlanarParams {
        body_normal: p.body_normal,
        offset: -0.3,
        orientation: ExpCoords::from_z_image(&(-n)),
    };
    let g1 = canonicalize(&ConstraintParams::Planar(p));
    let g2 = canonicalize(&ConstraintParams::Planar(flipped));
    let dev = g1.deviation(&g2).unwrap();
    assert!(dev.linear < 1e-9 && dev.angular < 1e-9, "{dev:?}");
}

#[test]
fn cylinder_axis_direction_sign_gauge() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..20 {
        let p = match random_params(ConstraintKind::ConcentricCylinder, &mut rng) {
            ConstraintParams::ConcentricCylinder(p) => p,
            _ => unreachable!(),
        };
        // Negating t̄ leaves the axis untouched.
        let negated = ConcentricCylinderParams {
            body_ref: -p.body_ref,
            ..p
        };
        let g1 = canonicalize(&ConstraintParams::ConcentricCylinder(p));
        let g2 = canonicalize(&ConstraintParams::ConcentricCylinder(negated));
        let dev = g1.deviation(&g2).unwrap();
        assert!(dev.linear < 1e-9 && dev.angular < 1e-9);

        // Re-gauge the frame: flip the axis direction (rotate the frame by π
        // about u1), expressing the same crossing point in the new frame.
        let f = frame::Frame::new(&p.orientation);
        let c = p.axis_offset.x * f.u(0) + p.axis_offset.y * f.u(1);
        let w2 = ExpCoords::from_z_image(&(-f.u(2)));
        let f2 = frame::Frame::new(&w2);
        let regauged = ConcentricCylinderParams {
            axis_offset: Vector2::new(f2.u(0).dot(&c), f2.u(1).dot(&c)),
            orientation: w2,
            ..p
        };
        let g3 = canonicalize(&ConstraintParams::ConcentricCylinder(regauged));
        let dev = g1.deviation(&g3).unwrap();
        assert!(dev.linear < 1e-9 && dev.angular < 1e-9, "{dev:?}");
    }
}

#[test]
fn axial_rotation_frame_regauge_preserves_geometry() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..20 {
        let p = match random_params(ConstraintKind::AxialRotation, &mut rng) {
            ConstraintParams::AxialRotation(p) => p,
            _ => unreachable!(),
        };
        let f = frame::Frame::new(&p.orientation);
        let anchor = f.rot * p.anchor_offset;
        let w2 = ExpCoords::from_z_image(&(-f.u(2)));
        let f2 = frame::Frame::new(&w2);
        let regauged = AxialRotationParams {
            anchor_offset: f2.rot.transpose() * anchor,
            orientation: w2,
            ..p
        };
        let g1 = canonicalize(&ConstraintParams::AxialRotation(p));
        let g2 = canonicalize(&ConstraintParams::AxialRotation(regauged));
        let dev = g1.deviation(&g2).unwrap();
        assert!(dev.linear < 1e-9 && dev.angular < 1e-9, "{dev:?}");
    }
}

#[test]
fn params_pack_unpack_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    for kind in ConstraintKind::ALL {
        let p = random_params(kind, &mut rng);
        let v = p.to_vector();
        assert_eq!(v.len(), kind.param_count());
        let back = ConstraintParams::from_slice(kind, v.as_slice());
        assert_eq!(p, back);
    }
}

#[test]
fn normalized_units_restores_parameter_equations() {
    let messy = ConstraintParams::Prismatic(PrismaticParams {
        body_ref: Vector3::new(0.7, 0.7, 0.3),
        body_axis: Vector3::new(0.1, 2.0, 0.4),
        axis_offset: Vector2::new(0.1, -0.2),
        orientation: ExpCoords::new(0.3, 0.1),
    });
    if let ConstraintParams::Prismatic(p) = messy.normalized_units() {
        assert_relative_eq!(p.body_axis.norm(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(p.body_ref.norm(), 1.0, epsilon = 1e-12);
        assert!(p.body_axis.dot(&p.body_ref).abs() < 1e-12);
    } else {
        unreachable!();
    }
}

#[test]
fn kind_names_round_trip() {
    for kind in ConstraintKind::ALL {
        assert_eq!(ConstraintKind::from_name(kind.name()), Some(kind));
    }
    assert_eq!(
        ConstraintKind::from_name("Point_On_Plane"),
        Some(ConstraintKind::PointOnPlane)
    );
    assert_eq!(ConstraintKind::from_name("nonsense"), None);
}
