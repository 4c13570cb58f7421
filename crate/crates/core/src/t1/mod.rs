//! A continuous, zero-mean function of unbounded variation built from
//! sine bumps `h_n` on shrinking intervals, with the Fejer approximants
//! `p_n` that drive the interval schedule.

mod bump;
mod decomp;
pub mod floorsum;
mod orbit_sums;
mod schedule;

pub use decomp::{DecompositionBounds, DecompositionReport};
pub use orbit_sums::{certified_convergent, window_count};
pub use schedule::{fejer_degree, fejer_moment_bound, partial_variation, BumpSchedule, Level};

/// Default build depth.
pub const DEFAULT_N_MAX: usize = 6;
/// Default cap on explicitly materialized trigonometric degrees.
pub const DEGREE_CAP: u64 = 1 << 16;
