//! The Kronecker orbit `{k theta + phi}`: streaming, certified ordering,
//! the three-distance profile, discrepancy and best approximations.

mod best_approx;
mod csv;
mod discrepancy;
mod gaps;
mod point;
mod sorted;

pub use best_approx::{best_approx_check, BestApprox};
pub use csv::{gaps_csv, orbit_csv};
pub use discrepancy::{discrepancy, discrepancy_of, orbit_discrepancy, sorted_orbit_discrepancy};
pub use gaps::{three_gap_profile, GapProfile};
pub use point::{orbit_stream, OrbitPoint, SymPoint};
pub use sorted::{sorted_orbit, walk_steps, OrderedOrbit, WalkSteps};

/// Default in-memory materialization budget (points).
pub const MATERIALIZE_BUDGET: u64 = 10_000_000;
/// Default streaming budget (points).
pub const STREAM_BUDGET: u64 = 1_000_000_000;
/// Default enumeration budget for best-approximation checks.
pub const BEST_APPROX_BUDGET: u64 = 1_000_000;
