//! Experimental procedures built on the metrics: rotation sweeps, the
//! semi-matching counterexample fixture, and ridge linear predictivity.

mod fig3a;
mod predictivity;
mod sweep;

pub use fig3a::{build_fig3a_networks, FIG3A_STIMULI};
pub use predictivity::{
    fit_ridge, linear_predictivity, pearson, ridge_grid, split_rows, PredictivityConfig,
    PredictivityReport, RidgeModel, Splits, MIN_RCOND,
};
pub use sweep::{rotation_sweep, RotationSweepConfig, SweepResult};
