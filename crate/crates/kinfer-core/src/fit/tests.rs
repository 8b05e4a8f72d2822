use super::*;
use crate::models::{canonicalize, CanonicalGeometry};
use crate::synth;

fn quick_cfg() -> FitConfig {
    FitConfig {
        n_starts: 4,
        early_stop_objective: 1e-16,
        ..FitConfig::default()
    }
}

#[test]
fn objective_is_tiny_at_ground_truth() {
    for kind in ConstraintKind::ALL {
        let params = synth::default_params(kind);
        let seg = synth::generate(&params, &synth::default_profile(kind));
        let alpha = params.normalized_units().to_vector();
        let (value, _) = objective_and_gradient(kind, &alpha, &seg).unwrap();
        assert!(value < 1e-12, "{kind}: {value}");
    }
}

#[test]
fn point_on_plane_offset_perturbation_raises_objective_quadratically() {
    let kind = ConstraintKind::PointOnPlane;
    let params = synth::default_params(kind);
    let seg = synth::generate(&params, &synth::default_profile(kind));
    let mut alpha = params.to_vector();
    alpha[3] += 0.01;
    let (value, _) = objective_and_gradient(kind, &alpha, &seg).unwrap();
    // Φ₁ depends linearly on d with unit coefficient, so the objective is
    // exactly n·δ².
    let expect = seg.len() as f64 * 0.01 * 0.01;
    assert!(
        (value - expect).abs() < 1e-6 * expect,
        "value {value} vs {expect}"
    );
}

#[test]
fn gradient_matches_finite_differences_on_random_problems() {
    let mut worst: f64 = 0.0;
    for (i, kind) in ConstraintKind::ALL.into_iter().enumerate() {
        for rep in 0..3 {
            let seed = (i * 31 + rep) as u64;
            let truth = synth::random_params(kind, seed);
            let mut profile = synth::default_profile(kind);
            profile.duration = 0.5;
            profile.noise.sigma_pos = 0.002;
            profile.noise.sigma_rot = 0.01;
            profile.seed = seed;
            let seg = synth::generate(&truth, &profile);
            // Evaluate away from the optimum.
            let mut alpha = synth::random_params(kind, seed ^ 0xabcd).to_vector();
            for x in alpha.iter_mut() {
                *x *= 0.9;
            }
            let (_, grad) = objective_and_gradient(kind, &alpha, &seg).unwrap();
            let eps = 1e-6;
            for j in 0..alpha.len() {
                let mut plus = alpha.clone();
                let mut minus = alpha.clone();
                plus[j] += eps;
                minus[j] -= eps;
                let (fp, _) = objective_and_gradient(kind, &plus, &seg).unwrap();
                let (fm, _) = objective_and_gradient(kind, &minus, &seg).unwrap();
                let fd = (fp - fm) / (2.0 * eps);
                let rel = (fd - grad[j]).abs() / (1.0 + fd.abs().max(grad[j].abs()));
                worst = worst.max(rel);
                assert!(rel < 1e-4, "{kind} alpha[{j}]: fd {fd} vs {}", grad[j]);
            }
        }
    }
    assert!(worst < 1e-4, "worst relative error {worst}");
}

#[test]
fn empty_segment_is_rejected() {
    let seg = Segment::default();
    assert!(matches!(
        objective_and_gradient(
            ConstraintKind::Planar,
            &DVector::zeros(6),
            &seg
        ),
        Err(Error::EmptySegment)
    ));
    assert!(matches!(
        fit_model(ConstraintKind::Planar, &seg, &FitConfig::default()),
        Err(Error::EmptySegment)
    ));
}

#[test]
fn noiseless_round_trip_recovers_geometry_for_every_kind() {
    for kind in ConstraintKind::ALL {
        let truth = synth::default_params(kind).normalized_units();
        let seg = synth::generate(&truth, &synth::default_profile(kind));
        let fit = fit_model(kind, &seg, &quick_cfg()).unwrap();
        assert!(fit.converged, "{kind} did not converge");
        assert!(!fit.degenerate);
        let dev = canonicalize(&truth)
            .deviation(&canonicalize(&fit.params))
            .unwrap();
        assert!(
            dev.linear < 1e-6 && dev.angular < 1e-6,
            "{kind}: deviation {dev:?} objective {}",
            fit.objective
        );
        let worst = fit
            .per_sample_kinematic_error
            .iter()
            .fold(0.0f64, |a, b| a.max(*b));
        assert!(worst < 1e-7, "{kind}: worst kinematic error {worst}");
    }
}

#[test]
fn perturbed_start_falls_back_into_truth_basin() {
    let kind = ConstraintKind::FixedPoint;
    let truth = synth::default_params(kind);
    let seg = synth::generate(&truth, &synth::default_profile(kind));
    // Single start, no early exit: exercises plain BFGS convergence.
    let cfg = FitConfig {
        n_starts: 1,
        ..FitConfig::default()
    };
    let fit = fit_model(kind, &seg, &cfg).unwrap();
    assert!(fit.objective < 1e-10, "objective {}", fit.objective);
}

#[test]
fn noisy_point_on_plane_error_matches_instrument_scale() {
    // 0.5 mm position noise: mean kinematic error lands in [1e-4, 1e-3] m.
    let kind = ConstraintKind::PointOnPlane;
    let truth = synth::default_params(kind);
    let mut profile = synth::default_profile(kind);
    profile.noise.sigma_pos = 0.0005;
    profile.seed = 3;
    let seg = synth::generate(&truth, &profile);
    let fit = fit_model(kind, &seg, &quick_cfg()).unwrap();
    let mean = fit.per_sample_kinematic_error.iter().sum::<f64>() / seg.len() as f64;
    assert!(
        (1e-4..1e-3).contains(&mean),
        "mean kinematic error {mean}"
    );
}

#[test]
fn single_sample_segment_is_flagged_degenerate() {
    let kind = ConstraintKind::FixedPoint;
    let truth = synth::default_params(kind);
    let mut seg = synth::generate(&truth, &synth::default_profile(kind));
    seg.samples.truncate(1);
    let cfg = FitConfig {
        n_starts: 1,
        max_iterations: 50,
        ..FitConfig::default()
    };
    let fit = fit_model(kind, &seg, &cfg).unwrap();
    assert!(fit.degenerate);
    assert_eq!(fit.per_sample_kinematic_error.len(), 1);
}

#[test]
fn fit_all_models_returns_all_six_and_orders_planar_data_sensibly() {
    let truth = synth::default_params(ConstraintKind::Planar);
    let seg = synth::generate(&truth, &synth::default_profile(ConstraintKind::Planar));
    let fits = fit_all_models(&seg, &quick_cfg()).unwrap();
    assert_eq!(fits.len(), 6);
    let planar = fits[&ConstraintKind::Planar].objective;
    let prismatic = fits[&ConstraintKind::Prismatic].objective;
    assert!(
        planar <= prismatic,
        "planar {planar} should beat prismatic {prismatic} on planar data"
    );
}

#[test]
fn excitation_guarantee_no_foreign_model_fits_perfectly() {
    // At least one competing kind must fail to reach zero residual on every
    // default segment; in fact every strictly-less-general kind should.
    for kind in ConstraintKind::ALL {
        let truth = synth::default_params(kind);
        let seg = synth::generate(&truth, &synth::default_profile(kind));
        let fits = fit_all_models(&seg, &quick_cfg()).unwrap();
        let foreign_worst = ConstraintKind::ALL
            .into_iter()
            .filter(|k| *k != kind)
            .map(|k| fits[&k].objective)
            .fold(0.0f64, f64::max);
        assert!(
            foreign_worst > 1e-4,
            "{kind}: every other kind fit with max objective {foreign_worst}"
        );
    }
}

#[test]
fn fixed_seed_reproduces_results_bitwise() {
    let truth = synth::default_params(ConstraintKind::ConcentricCylinder);
    let mut profile = synth::default_profile(ConstraintKind::ConcentricCylinder);
    profile.noise.sigma_pos = 0.0003;
    profile.seed = 11;
    let seg = synth::generate(&truth, &profile);
    let cfg = FitConfig {
        seed: 5,
        n_starts: 3,
        ..FitConfig::default()
    };
    let a = fit_model(ConstraintKind::ConcentricCylinder, &seg, &cfg).unwrap();
    let b = fit_model(ConstraintKind::ConcentricCylinder, &seg, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn doubling_noise_does_not_reduce_mean_error() {
    let kind = ConstraintKind::Planar;
    let truth = synth::default_params(kind);
    let mut lo_sum = 0.0;
    let mut hi_sum = 0.0;
    for seed in 0..20u64 {
        let mut profile = synth::default_profile(kind);
        profile.duration = 1.5;
        profile.noise.sigma_pos = 0.0004;
        profile.seed = seed;
        let lo = synth::generate(&truth, &profile);
        profile.noise.sigma_pos = 0.0008;
        let hi = synth::generate(&truth, &profile);
        let cfg = FitConfig {
            n_starts: 2,
            seed,
            ..FitConfig::default()
        };
        let f_lo = fit_model(kind, &lo, &cfg).unwrap();
        let f_hi = fit_model(kind, &hi, &cfg).unwrap();
        lo_sum += f_lo.per_sample_kinematic_error.iter().sum::<f64>() / lo.len() as f64;
        hi_sum += f_hi.per_sample_kinematic_error.iter().sum::<f64>() / hi.len() as f64;
    }
    assert!(
        hi_sum >= lo_sum,
        "doubled noise decreased mean error: {hi_sum} < {lo_sum}"
    );
}
