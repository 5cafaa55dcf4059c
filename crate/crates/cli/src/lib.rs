//! Command line front end: argument parsing, run configuration and the
//! files each subcommand writes.

pub mod args;
pub mod config;
pub mod error;
pub mod figures;
pub mod pipeline;

pub use args::{run, Cli, Command};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
