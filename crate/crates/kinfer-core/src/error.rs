//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by validation and numeric front ends.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quaternion's norm is too far from one to be interpreted as a rotation.
    #[error("quaternion norm {norm} deviates from 1 beyond tolerance")]
    NonUnitQuaternion { norm: f64 },

    /// A matrix or vector argument has the wrong shape.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation that needs samples received an empty segment.
    #[error("segment contains no samples")]
    EmptySegment,

    /// Fewer samples than the operation can work with.
    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    /// Timestamps must increase strictly along a segment.
    #[error("timestamps not strictly increasing at sample {index}")]
    NonMonotonicTime { index: usize },

    /// Eligibility lists must all cover the same samples.
    #[error("per-sample list length {got} does not match segment length {expected}")]
    LengthMismatch { expected: usize, got: usize },

    /// Configuration value outside its valid range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}
