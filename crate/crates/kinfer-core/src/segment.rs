//! Recorded motion segments.
//!
//! A [`Segment`] is an ordered run of [`Sample`]s assumed to share a single
//! active constraint; segmentation of longer demonstrations into such runs
//! happens upstream of this crate.

use alloc::vec::Vec;

use nalgebra::Vector3;

use crate::geom::{g_matrix, Pose, Twist, Wrench};
use crate::{Error, Result};

/// One timestamped measurement of the constrained body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    /// Time (s), strictly increasing along a segment.
    pub t: f64,
    pub pose: Pose,
    pub twist: Twist,
    pub wrench: Wrench,
}

/// Ordered sequence of samples under one constraint.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Segment {
    pub samples: Vec<Sample>,
    /// Set by the synthetic generator when the motion profile excites no
    /// degree of freedom; such segments under-determine any fit.
    pub degenerate_excitation: bool,
}

impl Segment {
    pub fn new(samples: Vec<Sample>) -> Self {
        Segment {
            samples,
            degenerate_excitation: false,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Validates that timestamps increase strictly.
    pub fn validate_times(&self) -> Result<()> {
        for i in 1..self.samples.len() {
            if self.samples[i].t <= self.samples[i - 1].t {
                return Err(Error::NonMonotonicTime { index: i });
            }
        }
        Ok(())
    }
}

/// Fills in twists by finite differences of the recorded poses.
///
/// Central differences for interior samples, one-sided at the endpoints.
/// Angular velocity comes from the quaternion rate: `ω = 2·A·G·q̇`, with
/// neighboring quaternions sign-aligned first so that the difference is not
/// polluted by the `q ↔ −q` double cover.
pub fn finite_difference_twist(segment: &Segment) -> Result<Segment> {
    if segment.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: segment.len(),
        });
    }
    segment.validate_times()?;

    let n = segment.len();
    let mut out = segment.clone();
    for i in 0..n {
        let (lo, hi) = if i == 0 {
            (0, 1)
        } else if i == n - 1 {
            (n - 2, n - 1)
        } else {
            (i - 1, i + 1)
        };
        let a = &segment.samples[lo];
        let b = &segment.samples[hi];
        let dt = b.t - a.t;

        let v = (b.pose.position - a.pose.position) / dt;

        let here = segment.samples[i].pose.orientation.normalized();
        let qa = a.pose.orientation.normalized().aligned_with(&here);
        let qb = b.pose.orientation.normalized().aligned_with(&here);
        let qdot = nalgebra::Vector4::new(
            (qb.w - qa.w) / dt,
            (qb.v.x - qa.v.x) / dt,
            (qb.v.y - qa.v.y) / dt,
            (qb.v.z - qa.v.z) / dt,
        );
        let rot = here.rotation_matrix_unchecked();
        let omega: Vector3<f64> = 2.0 * rot * (g_matrix(&here) * qdot);

        out.samples[i].twist = Twist::new(v, omega);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Quat;
    use approx::assert_relative_eq;

    fn segment_from_poses(poses: Vec<(f64, Pose)>) -> Segment {
        Segment::new(
            poses
                .into_iter()
                .map(|(t, pose)| Sample {
                    t,
                    pose,
                    twist: Twist::zero(),
                    wrench: Wrench::zero(),
                })
                .collect(),
        )
    }

    #[test]
    fn constant_pose_gives_zero_twist() {
        let pose = Pose::new(Vector3::new(0.3, -0.2, 0.8), Quat::IDENTITY);
        let seg = segment_from_poses((0..5).map(|i| (i as f64 * 0.01, pose)).collect());
        let out = finite_difference_twist(&seg).unwrap();
        for s in &out.samples {
            assert!(s.twist.linear.norm() < 1e-12);
            assert!(s.twist.angular.norm() < 1e-12);
        }
    }

    #[test]
    fn uniform_translation() {
        let seg = segment_from_poses(
            (0..10)
                .map(|i| {
                    let t = i as f64 * 0.01;
                    (t, Pose::new(Vector3::new(t, 0.0, 0.0), Quat::IDENTITY))
                })
                .collect(),
        );
        let out = finite_difference_twist(&seg).unwrap();
        for s in &out.samples {
            assert_relative_eq!(s.twist.linear, Vector3::x(), epsilon = 1e-9);
        }
    }

    #[test]
    fn constant_rate_rotation_about_z() {
        // 1 rad/s about z, sampled at 100 Hz.
        let seg = segment_from_poses(
            (0..50)
                .map(|i| {
                    let t = i as f64 * 0.01;
                    let q = Quat::from_axis_angle(&Vector3::z(), t);
                    (t, Pose::new(Vector3::zeros(), q))
                })
                .collect(),
        );
        let out = finite_difference_twist(&seg).unwrap();
        for s in &out.samples {
            assert_relative_eq!(s.twist.angular, Vector3::z(), epsilon = 1e-3);
        }
    }

    #[test]
    fn duplicate_timestamps_are_rejected() {
        let pose = Pose::identity();
        let seg = segment_from_poses(vec![(0.0, pose), (0.0, pose), (0.1, pose)]);
        assert!(matches!(
            finite_difference_twist(&seg),
            Err(Error::NonMonotonicTime { index: 1 })
        ));
    }

    #[test]
    fn too_short_segments_are_rejected() {
        let pose = Pose::identity();
        let seg = segment_from_poses(vec![(0.0, pose), (0.1, pose)]);
        assert!(matches!(
            finite_difference_twist(&seg),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
