//! Orchestration for the `ssnbhd` binary: argument handling, the
//! verification sweeps, Table 1 style scans, modular polynomial oracles and
//! graph export.

pub mod args;
pub mod commands;
pub mod config;
pub mod modpoly;
pub mod output;

pub use args::{run, Cli};
pub use config::CliError;
