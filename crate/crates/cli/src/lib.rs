//! Command-line front end: declare a Finsler structure by its metric
//! function, request objects by id, and print them as text, LaTeX or JSON,
//! optionally verified against the numeric oracle.
//!
//! Exit status is 0 on success, 1 on a validation error and 2 when a
//! requested verification fails.

pub mod config;
pub mod emit;
pub mod error;
pub mod run;

pub use config::{Args, Format, MetricSource, RunConfig};
pub use error::CliError;
pub use run::{execute, run, Outcome, Report};
