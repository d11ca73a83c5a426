//! Experiment configuration, seeded multi-run execution (parallel across
//! runs, deterministic regardless of thread count) and CSV emission.

pub mod accept;
pub mod config;
pub mod csv;
pub mod runner;

pub use config::{ConfigError, ExperimentConfig};
pub use csv::{aggregate_csv, raw_csv, write_csv, CsvError};
pub use runner::{
    run_experiment, simulate_run, slope_from, sorted_channels, ExperimentResult, PolicyAggregate,
    RunError, RunSpec, RunTrace,
};
