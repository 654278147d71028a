//! Experiment orchestration: configs, replicated runs, regret accounting and
//! output files.

mod config;
mod persist;
mod regret;
mod run;
mod sweep;

pub use config::{AlgorithmKind, ExperimentConfig};
pub use persist::{csv_reader, read_trace, write_summary, write_trace, Metadata, TIMESTAMP_ENV};
pub use regret::{compute_regret, resolve_optimum, RegretTrace, TraceRecord};
pub use run::{
    quantile, replication_streams, run_experiment, run_replication, Aggregates, ReplicationResult, RunOptions,
    RunSummary,
};
pub use sweep::{sweep, SweepGrid, SweepRow, SweepTable};
