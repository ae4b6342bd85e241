//! Deterministic simulator of data-parallel multi-GPU training time, paired
//! with a power-law scaling toolkit.
//!
//! The simulator models an epoch as `steps * (compute + ring all-reduce +
//! overhead)` on a two-level cluster (GPUs within nodes, nodes over a slower
//! fabric) and sweeps it across a grid of GPU counts. The scaling toolkit
//! fits `t = alpha * n^(-beta)` to measured or simulated curves, quantifies
//! speedups and diminishing-returns knees, and recommends GPU allocations
//! for a target epoch time.
//!
//! Start with the calibrated presets:
//!
//! ```
//! use scalesim::{fit_power_law, find_min_time, presets};
//!
//! let curve = presets::nnconv().sweep()?;
//! let fit = fit_power_law(&curve)?;
//! assert!(fit.beta > 0.0 && fit.r_squared > 0.9);
//!
//! let (n_best, t_best) = find_min_time(&curve);
//! assert_eq!(n_best, 416);
//! assert!(t_best < 1.2);
//! # Ok::<(), scalesim::Error>(())
//! ```
//!
//! The `scalesim` binary exposes the same operations as subcommands
//! (`sweep`, `fit`, `speedup`, `knee`, `allocate`, `report`, `plot`, `run`)
//! driven by a JSON config, and the crate's `examples/` directory has one
//! runnable walkthrough per capability.

pub mod cluster;
pub mod config;
pub mod curve_io;
pub mod error;
pub mod plot;
pub mod presets;
pub mod runner;
pub mod scaling;
pub mod simulator;
pub mod workload;

pub use cluster::{ring_allreduce_time, ClusterSpec};
pub use config::{load_config, AnalysisConfig, CurveFormat, OutputConfig, ReportFormat, RunConfig};
pub use curve_io::{curve_to_csv, curve_to_json, emit_curve, load_curve_csv, CURVE_CSV_HEADER};
pub use error::{Error, ErrorKind, Result};
pub use plot::{emit_plot, render_plot_svg};
pub use runner::{run, RunArtifacts, RunSummary};
pub use scaling::{
    allocate_for_target, detect_knee, fit_power_law, make_report, predicted_speedup,
    r_squared_log, speedup, truncate_at_min, AllocationPlan, PowerLawFit, Report, ReportEntry,
};
pub use simulator::{find_min_time, simulate_epoch_time, CurvePoint, ExperimentSpec, ScalingCurve};
pub use workload::{EpochSteps, WorkloadSpec};
