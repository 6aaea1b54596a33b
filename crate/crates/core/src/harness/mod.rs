//! Configuration, scenario dispatch and on-disk artifacts.
//!
//! A run directory holds the exact `config.toml` that produced it, one CSV per trace
//! and `summary.json`. Nothing here reads the clock or unseeded entropy, so the same
//! config always yields the same bytes.

mod config;
mod output;
mod scenarios;

pub use config::{driver, load_config, occupant, RunConfig, CONFIG_KEYS};
pub use output::{run, run_dir, run_oracle_only, write_artifacts, CsvTable};
pub use scenarios::{check_scenario, run_oracles, run_scenario, scenario_names, ScenarioOutput, ALL, SCENARIOS};
