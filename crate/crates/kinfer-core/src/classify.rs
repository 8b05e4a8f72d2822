//! Eligibility thresholding and constraint selection by voting.
//!
//! Per model, every sample is tested against three thresholds — kinematic
//! error (position), force error, moment error — yielding Boolean lists
//! `L_k`, `L_f`, `L_n`. A sample is *eligible* for a model when it passes
//! all applied lists; the model with the most eligible samples over a valid
//! (converged, non-degenerate) fit wins. Ties break toward the model with
//! the fewest motion degrees of freedom, and a winner whose eligible
//! fraction falls below `min_fraction` is rejected as unclassified.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::fit::{fit_all_models, FitConfig, FitResult};
use crate::force::{segment_wrench_errors, WrenchErrors};
use crate::models::{canonicalize, CanonicalGeometry, ConstraintKind, ConstraintParams};
use crate::segment::Segment;
use crate::{Error, Result};

/// Position (m), force (N) and moment (N·m) thresholds for one model.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdTriple {
    pub position: f64,
    pub force: f64,
    pub moment: f64,
}

impl ThresholdTriple {
    pub const fn new(position: f64, force: f64, moment: f64) -> Self {
        ThresholdTriple {
            position,
            force,
            moment,
        }
    }
}

/// Per-model thresholds. The defaults are the published tuning for
/// sub-millimeter motion capture with wrist-scale constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, rename_all = "kebab-case"))]
pub struct Thresholds {
    pub point_on_plane: ThresholdTriple,
    pub fixed_point: ThresholdTriple,
    pub concentric_cylinder: ThresholdTriple,
    pub planar: ThresholdTriple,
    pub prismatic: ThresholdTriple,
    pub axial_rotation: ThresholdTriple,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            point_on_plane: ThresholdTriple::new(0.0005, 0.05, 0.5),
            fixed_point: ThresholdTriple::new(0.0001, 1.0, 0.2),
            concentric_cylinder: ThresholdTriple::new(0.002, 0.02, 0.01),
            planar: ThresholdTriple::new(0.001, 1.0, 0.02),
            prismatic: ThresholdTriple::new(0.001, 0.1, 0.001),
            axial_rotation: ThresholdTriple::new(0.01, 0.02, 0.2),
        }
    }
}

impl Thresholds {
    pub fn get(&self, kind: ConstraintKind) -> ThresholdTriple {
        match kind {
            ConstraintKind::PointOnPlane => self.point_on_plane,
            ConstraintKind::FixedPoint => self.fixed_point,
            ConstraintKind::ConcentricCylinder => self.concentric_cylinder,
            ConstraintKind::Planar => self.planar,
            ConstraintKind::Prismatic => self.prismatic,
            ConstraintKind::AxialRotation => self.axial_rotation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for kind in ConstraintKind::ALL {
            let t = self.get(kind);
            if !(t.position > 0.0 && t.force > 0.0 && t.moment > 0.0) {
                return Err(Error::InvalidConfig("thresholds must be positive"));
            }
        }
        Ok(())
    }
}

/// Selection behavior knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, rename_all = "kebab-case"))]
pub struct SelectOptions {
    /// Below this eligible fraction the best model is still rejected.
    pub min_fraction: f64,
    /// Apply the force list `L_f` (disable for kinematics-only studies).
    pub use_force: bool,
    /// Apply the moment list `L_n`.
    pub use_moment: bool,
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions {
            min_fraction: 0.5,
            use_force: true,
            use_moment: true,
        }
    }
}

/// Boolean eligibility lists `(L_k, L_f, L_n)` for one model: inclusive
/// comparison against the three thresholds.
pub fn eligibility(
    fit: &FitResult,
    errors: &[WrenchErrors],
    thresholds: &ThresholdTriple,
) -> Result<(Vec<bool>, Vec<bool>, Vec<bool>)> {
    if fit.per_sample_kinematic_error.len() != errors.len() {
        return Err(Error::LengthMismatch {
            expected: fit.per_sample_kinematic_error.len(),
            got: errors.len(),
        });
    }
    let l_k = fit
        .per_sample_kinematic_error
        .iter()
        .map(|e| *e <= thresholds.position)
        .collect();
    let l_f = errors.iter().map(|e| e.f_error <= thresholds.force).collect();
    let l_n = errors.iter().map(|e| e.n_error <= thresholds.moment).collect();
    Ok((l_k, l_f, l_n))
}

/// One model's evidence: the fit, the per-sample wrench decomposition, the
/// three lists, and the eligible-sample count under the select options.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelAssessment {
    pub fit: FitResult,
    pub wrench_errors: Vec<WrenchErrors>,
    pub l_k: Vec<bool>,
    pub l_f: Vec<bool>,
    pub l_n: Vec<bool>,
    pub eligible_count: usize,
    pub eligible_fraction: f64,
}

/// The classification outcome over a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    /// `None` means unclassified: no valid model held a sufficient share of
    /// eligible samples.
    pub winner: Option<ConstraintKind>,
    pub winner_params: Option<ConstraintParams>,
    pub winner_geometry: Option<CanonicalGeometry>,
    /// Eligible fraction of the winner (0 when unclassified).
    pub eligible_fraction: f64,
    pub assessments: BTreeMap<ConstraintKind, ModelAssessment>,
    pub n_samples: usize,
}

/// Fits every model and decomposes every sample's wrench under each fit.
pub fn evaluate_models(
    segment: &Segment,
    cfg: &FitConfig,
) -> Result<BTreeMap<ConstraintKind, (FitResult, Vec<WrenchErrors>)>> {
    let fits = fit_all_models(segment, cfg)?;
    Ok(fits
        .into_iter()
        .map(|(kind, fit)| {
            let errors = segment_wrench_errors(&fit.params, segment);
            (kind, (fit, errors))
        })
        .collect())
}

/// Applies thresholds and voting to already-computed model evidence.
pub fn select(
    evaluations: &BTreeMap<ConstraintKind, (FitResult, Vec<WrenchErrors>)>,
    thresholds: &Thresholds,
    options: &SelectOptions,
    n_samples: usize,
) -> Result<ClassificationReport> {
    thresholds.validate()?;
    let mut assessments = BTreeMap::new();
    for (kind, (fit, errors)) in evaluations {
        let (l_k, l_f, l_n) = eligibility(fit, errors, &thresholds.get(*kind))?;
        let eligible_count = (0..l_k.len())
            .filter(|i| {
                l_k[*i]
                    && (!options.use_force || l_f[*i])
                    && (!options.use_moment || l_n[*i])
            })
            .count();
        let eligible_fraction = if l_k.is_empty() {
            0.0
        } else {
            eligible_count as f64 / l_k.len() as f64
        };
        assessments.insert(
            *kind,
            ModelAssessment {
                fit: fit.clone(),
                wrench_errors: errors.clone(),
                l_k,
                l_f,
                l_n,
                eligible_count,
                eligible_fraction,
            },
        );
    }

    let candidates: Vec<(ConstraintKind, usize)> = ConstraintKind::ALL
        .into_iter()
        .filter_map(|kind| {
            let a = assessments.get(&kind)?;
            (a.fit.converged && !a.fit.degenerate).then_some((kind, a.eligible_count))
        })
        .collect();
    let winner = pick_winner(&candidates, n_samples, options.min_fraction);

    let (winner_params, winner_geometry, eligible_fraction) = match winner {
        Some(kind) => {
            let a = &assessments[&kind];
            (
                Some(a.fit.params),
                Some(canonicalize(&a.fit.params)),
                a.eligible_fraction,
            )
        }
        None => (None, None, 0.0),
    };
    Ok(ClassificationReport {
        winner,
        winner_params,
        winner_geometry,
        eligible_fraction,
        assessments,
        n_samples,
    })
}

/// Most eligible samples wins; ties break toward fewer motion DOFs, then
/// declaration order. Fractions below `min_fraction` are rejected.
fn pick_winner(
    candidates: &[(ConstraintKind, usize)],
    n_samples: usize,
    min_fraction: f64,
) -> Option<ConstraintKind> {
    let mut best: Option<(ConstraintKind, usize)> = None;
    for (kind, count) in candidates {
        best = Some(match best {
            None => (*kind, *count),
            Some((bk, bc)) => {
                if *count > bc
                    || (*count == bc && kind.motion_dof() < bk.motion_dof())
                {
                    (*kind, *count)
                } else {
                    (bk, bc)
                }
            }
        });
    }
    let (kind, count) = best?;
    if n_samples == 0 || (count as f64 / n_samples as f64) < min_fraction {
        return None;
    }
    Some(kind)
}

/// The full pipeline: fit all models, decompose wrenches, threshold, vote.
pub fn classify_segment(
    segment: &Segment,
    cfg: &FitConfig,
    thresholds: &Thresholds,
    options: &SelectOptions,
) -> Result<ClassificationReport> {
    let evaluations = evaluate_models(segment, cfg)?;
    select(&evaluations, thresholds, options, segment.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use proptest::prelude::*;

    #[test]
    fn default_thresholds_match_published_table() {
        let t = Thresholds::default();
        assert_eq!(t.point_on_plane, ThresholdTriple::new(0.0005, 0.05, 0.5));
        assert_eq!(t.fixed_point, ThresholdTriple::new(0.0001, 1.0, 0.2));
        assert_eq!(
            t.concentric_cylinder,
            ThresholdTriple::new(0.002, 0.02, 0.01)
        );
        assert_eq!(t.planar, ThresholdTriple::new(0.001, 1.0, 0.02));
        assert_eq!(t.prismatic, ThresholdTriple::new(0.001, 0.1, 0.001));
        assert_eq!(t.axial_rotation, ThresholdTriple::new(0.01, 0.02, 0.2));
    }

    fn fake_fit(errors_k: &[f64]) -> FitResult {
        FitResult {
            params: synth::default_params(ConstraintKind::PointOnPlane),
            objective: 0.0,
            per_sample_kinematic_error: errors_k.to_vec(),
            converged: true,
            degenerate: false,
            iterations: 1,
            starts_tried: 1,
        }
    }

    fn fake_errors(f: &[f64], n: &[f64]) -> Vec<WrenchErrors> {
        f.iter()
            .zip(n)
            .map(|(f_error, n_error)| WrenchErrors {
                f_error: *f_error,
                n_error: *n_error,
                lambda: nalgebra::DVector::zeros(1),
                f_react: nalgebra::Vector3::zeros(),
                n_react: nalgebra::Vector3::zeros(),
                f_mu: nalgebra::Vector3::zeros(),
                n_mu: nalgebra::Vector3::zeros(),
                rank_deficient: false,
            })
            .collect()
    }

    #[test]
    fn eligibility_lists_threshold_per_sample() {
        let fit = fake_fit(&[0.0004, 0.0006]);
        let errors = fake_errors(&[0.0, 0.1], &[0.0, 1.0]);
        let th = ThresholdTriple::new(0.0005, 0.05, 0.5);
        let (l_k, l_f, l_n) = eligibility(&fit, &errors, &th).unwrap();
        assert_eq!(l_k, vec![true, false]);
        assert_eq!(l_f, vec![true, false]);
        assert_eq!(l_n, vec![true, false]);
    }

    #[test]
    fn boundary_errors_are_eligible() {
        let fit = fake_fit(&[0.0005]);
        let errors = fake_errors(&[0.05], &[0.5]);
        let th = ThresholdTriple::new(0.0005, 0.05, 0.5);
        let (l_k, l_f, l_n) = eligibility(&fit, &errors, &th).unwrap();
        assert!(l_k[0] && l_f[0] && l_n[0]);
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let fit = fake_fit(&[0.0, 0.0]);
        let errors = fake_errors(&[0.0], &[0.0]);
        assert!(matches!(
            eligibility(&fit, &errors, &ThresholdTriple::new(1.0, 1.0, 1.0)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn winner_picking_counts_ties_and_rejection() {
        use ConstraintKind::*;
        let counts = [(AxialRotation, 95), (Planar, 40), (PointOnPlane, 10)];
        assert_eq!(pick_winner(&counts, 100, 0.5), Some(AxialRotation));

        // 1-DOF prismatic beats 3-DOF planar on a tie.
        let tie = [(Prismatic, 80), (Planar, 80)];
        assert_eq!(pick_winner(&tie, 100, 0.5), Some(Prismatic));

        let none = [(Prismatic, 0), (Planar, 0)];
        assert_eq!(pick_winner(&none, 100, 0.5), None);

        // Below the minimum fraction the best model is still rejected.
        let weak = [(Planar, 40)];
        assert_eq!(pick_winner(&weak, 100, 0.5), None);
    }

    #[test]
    fn all_zero_errors_give_full_eligibility() {
        let fit = fake_fit(&[0.0, 0.0, 0.0]);
        let errors = fake_errors(&[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]);
        let th = ThresholdTriple::new(0.0005, 0.05, 0.5);
        let (l_k, l_f, l_n) = eligibility(&fit, &errors, &th).unwrap();
        assert!(l_k.iter().all(|b| *b));
        assert!(l_f.iter().all(|b| *b));
        assert!(l_n.iter().all(|b| *b));
    }

    proptest! {
        /// Raising a threshold never shrinks the eligible count.
        #[test]
        fn eligibility_is_monotone_in_thresholds(
            errs in proptest::collection::vec(0.0f64..0.01, 1..40),
            th1 in 1e-5f64..0.01,
            th2 in 1e-5f64..0.01,
        ) {
            let (lo, hi) = if th1 <= th2 { (th1, th2) } else { (th2, th1) };
            let fit = fake_fit(&errs);
            let errors = fake_errors(&vec![0.0; errs.len()], &vec![0.0; errs.len()]);
            let count = |t: f64| {
                let (l_k, _, _) =
                    eligibility(&fit, &errors, &ThresholdTriple::new(t, 1.0, 1.0)).unwrap();
                l_k.iter().filter(|b| **b).count()
            };
            prop_assert!(count(hi) >= count(lo));
        }
    }
}
