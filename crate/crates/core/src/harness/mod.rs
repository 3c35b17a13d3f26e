//! Experiment orchestration: initial data, configuration, reference
//! caching, error sweeps and plot data.

pub mod cache;
pub mod config;
pub mod initial;
pub mod plotdata;
pub mod run;
pub mod selftest;
pub mod studies;
pub mod sweep;

pub use cache::{ReferenceCache, ReferenceKey};
pub use config::{Equation, ExperimentConfig, NonlinearitySpec, PotentialSpec};
pub use initial::InitialData;
pub use run::{run_and_write, RunSummary};
pub use plotdata::{convergence_order, emit_plotdata, fit_slope, PlotMode, Series};
pub use sweep::{run_sweep, CellStatus, ErrorRecord, SweepTable};
