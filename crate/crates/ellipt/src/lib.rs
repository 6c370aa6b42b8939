//! File formats, verification checks, the aggregated report and the
//! command-line plumbing around `ellipt-core`.

pub mod checks;
pub mod cli;
pub mod error;
pub mod json;
pub mod report;

pub use error::CliError;
