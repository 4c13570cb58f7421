//! The monotone-on-each-side function `f_theta` (1 at 0 and 1, 0 at
//! theta, variation 2) built level by level on the orbit points, its mean,
//! and the certified bound on `sum_{k<Q_nu} g_theta({k theta})` around 1/6.

mod implicit;
mod tree;
mod verify;

pub use implicit::{eval_f_theta, refine, segment_integral, BigPoint, EvalPoint, FValue, JumpSegment, Refined};
pub use tree::{Kind, Segment, SegmentTree, Side};
pub use verify::{g_sum, mean_enclosure, refined_mean, sum_bound_verify, trend, MeanEnclosure, T2Report};

/// Default cap on materialized tree size.
pub const TREE_BUDGET: u64 = 10_000_000;
/// Levels below `nu` used for `g~_k` integrals.
pub const DEFAULT_EXTRA_LEVELS: usize = 2;
/// Default level cap for `eval_f_theta`.
pub const EVAL_LEVEL_CAP: usize = 64;
