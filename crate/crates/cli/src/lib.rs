//! Command-line orchestration of evaporation runs.

pub mod checkpoint;
pub mod config;
pub mod error;
pub mod plot;
pub mod report;
pub mod run;

pub use config::{Mode, OutputFormat, RunConfig};
pub use error::{CliError, Result};
pub use run::{execute, oracle_compare, run, CompareReport};
