//! Command-line front end: argument parsing, χ files, and deterministic
//! JSON/CSV output for protocol runs, θ sweeps, random trials and state dumps.
//!
//! Exit statuses: 0 success, 1 a coverage check failed (`run`), 2 usage or
//! input error, 3 I/O error.

pub mod app;
pub mod args;
pub mod chi_file;
pub mod emit;
pub mod error;

pub use app::run_cli;
pub use args::{parse_args, CliConfig, Command, Format};
pub use error::CliError;
