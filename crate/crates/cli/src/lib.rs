//! Configuration, commands and report formats behind the `salpeter` binary.

pub mod commands;
pub mod config;
pub mod discrepancy;
pub mod error;
pub mod report;

pub use error::CliError;
