//! Batch experiments for the idea-evolution simulator: parameter sweeps run
//! on a worker pool, CSV results with a JSON sidecar, and the topology
//! comparison statistics.

pub mod error;
pub mod experiment;
pub mod report;
pub mod seed;

pub use error::{HarnessError, Result};
pub use experiment::{execute, Axis, Cell, ExperimentId, ExperimentSpec, ResultRow};
pub use report::{run_experiment, CellSummary, ExperimentOutput, TopologyComparison, CSV_HEADER};
pub use seed::seed_for_run;
