//! Seeded experiment runner, aggregation and result files.

mod config;
mod output;
mod runner;

pub use config::{
    default_stride, flatten_toml, AlgorithmSpec, Dimensions, EnvironmentSpec, OracleSpec,
    ProfileSpec, RegionSpec, RunConfig, SCHEMA_VERSION,
};
pub use output::{
    aggregate_csv, grid_search_csv, summary_text, sweep_csv, write_grid_search, write_run,
    write_sweep, CSV_HEADER,
};
pub use runner::{
    grid_search, horizon_sweep, play_tape, record_episode, recorded_rounds, run_episode,
    run_experiment, run_experiment_with, run_jobs, run_jobs_with_seeds, AggregateResult,
    Execution, GridEntry, GridSearchReport, Job, RoundTape, SweepPoint, Trajectory,
};
