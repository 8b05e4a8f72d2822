//! Sample-quality study: how fit quality depends on how many samples are
//! used and whether they are contiguous in time or drawn from the whole
//! segment.
//!
//! Nearby samples are nearly redundant, so a prefix of a demonstration can
//! badly under-determine a many-DOF constraint while the same number of
//! samples spread over the recording pins it down. The study fits the model
//! on each subset and scores the fitted geometry by its mean kinematic
//! error over the *entire* segment.

use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fit::{fit_model, FitConfig};
use crate::models::{kinematic_error, ConstraintKind};
use crate::segment::Segment;
use crate::{Error, Result};

/// One row of the study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingPoint {
    /// Samples used for the fit.
    pub n: usize,
    /// Mean whole-segment kinematic error of the fit on the first `n`
    /// contiguous samples (m).
    pub contiguous_error: f64,
    /// Same for `n` samples drawn without replacement from the segment (m).
    pub random_error: f64,
}

/// Runs the contiguous-vs-random comparison for each count in `counts`.
///
/// Counts are clamped to the segment length; the random draws and the fits
/// are deterministic in `seed`.
pub fn sampling_study(
    segment: &Segment,
    kind: ConstraintKind,
    cfg: &FitConfig,
    counts: &[usize],
    seed: u64,
) -> Result<Vec<SamplingPoint>> {
    if segment.is_empty() {
        return Err(Error::EmptySegment);
    }
    let total = segment.len();
    let mut out = Vec::with_capacity(counts.len());
    for (i, raw) in counts.iter().enumerate() {
        let n = (*raw).clamp(1, total);
        let contiguous = Segment::new(segment.samples[..n].to_vec());
        let random = Segment::new(
            sample_indices(total, n, seed ^ ((i as u64) << 32))
                .into_iter()
                .map(|idx| segment.samples[idx])
                .collect(),
        );
        out.push(SamplingPoint {
            n,
            contiguous_error: whole_segment_error(kind, &contiguous, segment, cfg)?,
            random_error: whole_segment_error(kind, &random, segment, cfg)?,
        });
    }
    Ok(out)
}

fn whole_segment_error(
    kind: ConstraintKind,
    subset: &Segment,
    full: &Segment,
    cfg: &FitConfig,
) -> Result<f64> {
    let fit = fit_model(kind, subset, cfg)?;
    let sum: f64 = full
        .samples
        .iter()
        .map(|s| kinematic_error(&fit.params, &s.pose))
        .sum();
    Ok(sum / full.len() as f64)
}

/// `n` distinct indices in `0..total`, sorted, deterministic in the seed
/// (partial Fisher–Yates).
fn sample_indices(total: usize, n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..total).collect();
    for i in 0..n.min(total) {
        let j = i + (rng.next_u64() as usize) % (total - i);
        pool.swap(i, j);
    }
    let mut picked = pool[..n.min(total)].to_vec();
    picked.sort_unstable();
    picked
}
