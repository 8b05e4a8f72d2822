//! Least-squares estimation of constraint parameters from a segment.
//!
//! For a candidate kind the objective is the summed squared residual over
//! all samples,
//!
//! ```text
//! F(α) = Σₙ Φₙ(p, α)ᵀΦₙ(p, α) + w²·δΦₙ(p, v, ω, α)ᵀδΦₙ(p, v, ω, α)
//! ```
//!
//! with parameter-equation rows included in the `Φ` term once per sample and
//! `w` a configurable weight on the velocity rows (default 1, i.e. the plain
//! unweighted sum). Minimization is BFGS with a backtracking line search,
//! restarted from several seeds because the residuals are nonconvex in the
//! frame parameters.

pub mod bfgs;
mod init;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use nalgebra::DVector;

use crate::models::{self, ConstraintKind, ConstraintParams, EvalMode};
use crate::segment::Segment;
use crate::{Error, Result};

pub use init::initialize;

/// Fit settings; `Default` matches the documented defaults.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FitConfig {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    /// Number of starts (one data-driven, the rest randomized).
    pub n_starts: usize,
    pub seed: u64,
    /// Weight applied to the velocity residual rows inside the objective.
    pub velocity_weight: f64,
    /// Stop trying further starts once a start reaches this objective value
    /// (0 disables the shortcut).
    pub early_stop_objective: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_iterations: 500,
            gradient_tolerance: 1e-8,
            n_starts: 8,
            seed: 0,
            velocity_weight: 1.0,
            early_stop_objective: 0.0,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive"));
        }
        if self.n_starts == 0 {
            return Err(Error::InvalidConfig("n_starts must be positive"));
        }
        if !(self.gradient_tolerance > 0.0) {
            return Err(Error::InvalidConfig("gradient_tolerance must be positive"));
        }
        if !(self.velocity_weight >= 0.0) {
            return Err(Error::InvalidConfig("velocity_weight must be nonnegative"));
        }
        Ok(())
    }
}

/// Outcome of fitting one model to one segment.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: ConstraintParams,
    /// Objective value at the returned parameters (after unit cleanup).
    pub objective: f64,
    /// Kinematic error criterion per sample (m).
    pub per_sample_kinematic_error: Vec<f64>,
    /// Gradient tolerance reached (or the iterate stalled at float
    /// precision with a small gradient).
    pub converged: bool,
    /// Too few samples for the parameter count, or a unit parameter vector
    /// collapsed during optimization; the values are reported but unreliable.
    pub degenerate: bool,
    /// Iterations spent in the winning start.
    pub iterations: usize,
    pub starts_tried: usize,
}

/// Objective and gradient of the fit criterion at `alpha`, velocity rows
/// unweighted (weight 1).
pub fn objective_and_gradient(
    kind: ConstraintKind,
    alpha: &DVector<f64>,
    segment: &Segment,
) -> Result<(f64, DVector<f64>)> {
    weighted_objective_and_gradient(kind, alpha, segment, 1.0)
}

/// As [`objective_and_gradient`] with an explicit velocity-row weight.
pub fn weighted_objective_and_gradient(
    kind: ConstraintKind,
    alpha: &DVector<f64>,
    segment: &Segment,
    velocity_weight: f64,
) -> Result<(f64, DVector<f64>)> {
    if segment.is_empty() {
        return Err(Error::EmptySegment);
    }
    let na = kind.param_count();
    let mut grad = DVector::zeros(na);
    let params = ConstraintParams::from_slice(kind, alpha.as_slice());
    let w2 = velocity_weight * velocity_weight;
    let mut value = 0.0;
    for s in &segment.samples {
        let ev = models::eval(&params, &s.pose, &s.twist, EvalMode::WithGradient);
        for i in 0..ev.rows {
            value += ev.phi[i] * ev.phi[i];
            let phi2 = 2.0 * ev.phi[i];
            for j in 0..na {
                grad[j] += phi2 * ev.phi_alpha[i][j];
            }
        }
        for i in 0..ev.kinematic {
            value += w2 * ev.dphi[i] * ev.dphi[i];
            let dphi2 = 2.0 * w2 * ev.dphi[i];
            for j in 0..na {
                grad[j] += dphi2 * ev.dphi_alpha[i][j];
            }
        }
    }
    Ok((value, grad))
}

fn objective_value(
    kind: ConstraintKind,
    alpha: &DVector<f64>,
    segment: &Segment,
    velocity_weight: f64,
) -> f64 {
    let params = ConstraintParams::from_slice(kind, alpha.as_slice());
    let w2 = velocity_weight * velocity_weight;
    let mut value = 0.0;
    for s in &segment.samples {
        let ev = models::eval(&params, &s.pose, &s.twist, EvalMode::Values);
        for i in 0..ev.rows {
            value += ev.phi[i] * ev.phi[i];
        }
        for i in 0..ev.kinematic {
            value += w2 * ev.dphi[i] * ev.dphi[i];
        }
    }
    value
}

/// Fits one model kind to the segment: multi-start BFGS, best objective
/// wins, unit parameters re-normalized afterwards.
pub fn fit_model(kind: ConstraintKind, segment: &Segment, cfg: &FitConfig) -> Result<FitResult> {
    if segment.is_empty() {
        return Err(Error::EmptySegment);
    }
    cfg.validate()?;

    let opts = bfgs::BfgsOptions {
        max_iterations: cfg.max_iterations,
        gradient_tolerance: cfg.gradient_tolerance,
    };
    let mut best: Option<bfgs::BfgsOutcome> = None;
    let mut starts_tried = 0;
    for start in 0..cfg.n_starts {
        let x0 = init::initialize(kind, segment, start, cfg.seed);
        let outcome = bfgs::minimize(
            |alpha, grad_out| match grad_out {
                Some(g) => {
                    let (value, grad) =
                        weighted_objective_and_gradient(kind, alpha, segment, cfg.velocity_weight)
                            .expect("segment checked non-empty");
                    g.copy_from(&grad);
                    value
                }
                None => objective_value(kind, alpha, segment, cfg.velocity_weight),
            },
            x0,
            &opts,
        );
        starts_tried += 1;
        let better = match &best {
            Some(b) => {
                outcome.value.is_finite() && (outcome.value < b.value || !b.value.is_finite())
            }
            None => true,
        };
        if better {
            best = Some(outcome);
        }
        if let Some(b) = &best {
            if cfg.early_stop_objective > 0.0
                && b.converged
                && b.value <= cfg.early_stop_objective
            {
                break;
            }
        }
    }
    let best = best.expect("at least one start");

    let raw = ConstraintParams::from_slice(kind, best.x.as_slice());
    let degenerate_units = raw.unit_vectors_degenerate();
    let params = raw.normalized_units();
    let alpha_clean = params.to_vector();
    let objective = objective_value(kind, &alpha_clean, segment, cfg.velocity_weight);
    let per_sample_kinematic_error = segment
        .samples
        .iter()
        .map(|s| models::kinematic_error(&params, &s.pose))
        .collect();

    Ok(FitResult {
        params,
        objective,
        per_sample_kinematic_error,
        converged: best.converged && !degenerate_units,
        degenerate: degenerate_units || segment.len() < kind.min_samples(),
        iterations: best.iterations,
        starts_tried,
    })
}

/// Fits all six kinds; per-model problems never abort the batch.
pub fn fit_all_models(
    segment: &Segment,
    cfg: &FitConfig,
) -> Result<BTreeMap<ConstraintKind, FitResult>> {
    if segment.is_empty() {
        return Err(Error::EmptySegment);
    }
    let mut out = BTreeMap::new();
    for kind in ConstraintKind::ALL {
        out.insert(kind, fit_model(kind, segment, cfg)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
