//! Configuration parsing, CSV output and the self-check behind the
//! `objectivity` command.

pub mod check;
pub mod config;
pub mod csv;
pub mod run;

pub use config::{parse_config, parse_config_for, ConfigError, Mode, RunSpec, Simulation, SweepAxis};
pub use run::{render, run, RunError};
