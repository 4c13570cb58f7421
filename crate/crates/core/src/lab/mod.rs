//! Birkhoff sums of registered periodic functions and the checks built on
//! them: Koksma's inequality, the window-count and trigonometric-sum
//! lemmas, and the subsequence experiments.

mod experiments;
mod function;
mod modulus;
mod sums;

pub use experiments::{
    densest_window, prop1_experiment, prop2_experiment, scan_csv, theorem_a_scan, LevelSum, Outcome, Prop1Pair,
    Prop1Report, Prop2Checks, Prop2Report, ScanRow, ScanTable,
};
pub use function::{lookup, lookup_fourier, Cosine, Fourier, PeriodicFunction, Sawtooth, ZeroFn, T1F, T2G, T2G_DEFAULT_LEVEL};
pub use modulus::ModulusBound;
pub use sums::{
    birkhoff_prefix_sums, birkhoff_sum, birkhoff_sum_range, koksma_check, koksma_check_points, trig_bound, trig_poly_sum_bound,
    window_count_bound, KoksmaReport, SumReport, TrigBoundReport, WindowReport,
};
