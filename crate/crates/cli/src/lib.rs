//! Command-line front end for `mdframe-core`: window and report files, an
//! expression language for window inputs, and the `mdframe` subcommands.

pub mod commands;
pub mod error;
pub mod expr;
pub mod files;

pub use commands::{run, Cli};
pub use error::{CliError, EXIT_DATA, EXIT_OK, EXIT_REJECTED, EXIT_USAGE};
pub use files::{ReportFileV1, WindowFileV1};
