//! Batch front end: configuration files, verification runs and sweeps.

pub mod config;
pub mod run;

pub use config::{
    parse_config, parse_config_str, parse_config_with, parse_state, parse_state_str, ModelSpec,
    Overrides, PovmSpec, PriorSpec, ScenarioConfig, SweepKey,
};
pub use run::{
    run, sweep, write_csv, write_csv_file, ResultRow, RunOptions, RunOutcome, CSV_HEADER, EXIT_OK,
    EXIT_USAGE, EXIT_VERIFICATION,
};
