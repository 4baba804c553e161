//! Full positive-P integration in the doubled phase space.
//!
//! `α_j` and `α_j⁺` are independent complex variables; ensemble averages of
//! products of them are normally ordered operator moments. The ensemble
//! doubles as a brute-force check on the linearized theory.

pub mod equations;
mod increments;
mod integrate;
mod rng;
mod stats;

pub use equations::{drift, noise_increment, noise_roots, noise_with_roots, tracked_noise_roots};
pub use integrate::{
    integrate_ensemble, integrate_trajectory, trajectory, PhaseSpacePoint, Scheme, TrajectoryConfig,
    TrajectoryOutcome, MIDPOINT_ITERATIONS,
};
pub use rng::{complex_wiener, trajectory_rng, TrajectoryRng};
pub use increments::increment_moments;
pub use stats::{compare_means, compare_moments, EnsembleStats, Estimate, Moment, Part, TrajectorySummary, ZScore};
