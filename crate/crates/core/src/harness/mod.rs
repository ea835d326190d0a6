//! Trial classification and parameter sweeps.

pub mod sweep;
pub mod verdict;

pub use sweep::{
    run_sweep, run_sweep_to_file, trial_seed, Cell, PExpr, SweepConfig, SweepOutcome, SweepSummary,
};
pub use verdict::{classify_trial, FreeVerdict, TVerdict, Thresholds, TrialVerdict};
