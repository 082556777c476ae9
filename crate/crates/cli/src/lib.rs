//! Configuration, fixtures and commands behind the `thinrep` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod fixtures;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
