//! Inference of geometric constraints from rigid-body motion and force data.
//!
//! Given a recorded segment of rigid-body motion — poses, twists and the
//! applied wrench at every sample — this crate fits a library of kinematic
//! constraint models (fixed point, point on plane, concentric cylinder,
//! planar, prismatic, axial rotation), estimates the geometric parameters of
//! each by nonlinear least squares, and selects the model that best explains
//! both the kinematics and the measured forces and moments.
//!
//! The pipeline is split into independent stages, each usable on its own:
//!
//! * [`geom`] — quaternion/rotation-matrix math and the virtual-rotation
//!   Jacobian identity used by everything else;
//! * [`models`] — the six constraint models as residual systems with
//!   analytic Jacobians and per-sample kinematic error metrics;
//! * [`fit`] — BFGS least-squares estimation of model parameters from a
//!   segment, with data-driven multi-start initialization;
//! * [`force`] — Lagrange-multiplier reaction-wrench estimation, friction
//!   removal and the force/moment error criteria;
//! * [`classify`] — per-sample eligibility thresholding and vote-based
//!   selection of the winning constraint;
//! * [`synth`] — a forward model that generates constraint-consistent
//!   trajectories and wrenches for testing and benchmarks.
//!
//! The crate is `no_std` (it requires `alloc`); file formats and the command
//! line front end live in the companion `kinfer-cli` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod classify;
pub mod error;
pub mod fit;
pub mod force;
pub mod geom;
pub mod models;
pub mod sampling;
pub mod segment;
pub mod synth;

pub use classify::{ClassificationReport, Thresholds};
pub use error::Error;
pub use fit::{FitConfig, FitResult};
pub use geom::{ExpCoords, Pose, Quat, Twist, Wrench};
pub use models::{CanonicalGeometry, ConstraintKind, ConstraintParams};
pub use segment::{Sample, Segment};
pub use synth::MotionProfile;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
