//! Command-line front end for `pinchperf-core`: parameter sweeps, oracle
//! validation, placement reports and power-gap searches.

pub mod app;
pub mod config;
pub mod error;
pub mod output;
pub mod placement_demo;
pub mod power_gap;
pub mod sweep;
pub mod validate;

pub use app::run;
pub use error::{CliError, CliResult};
