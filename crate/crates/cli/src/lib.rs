//! The `rauzy` command-line tool.
//!
//! Every subcommand is a pure function of its arguments, seeds and input
//! bytes. Exit codes: 0 success, 1 a check did not hold, 2 unreadable or
//! malformed input, 64 usage or parameter error, 70 internal error.

pub mod args;
mod commands;
pub mod error;
pub mod manifest;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use commands::dispatch;
pub use error::{CliError, CliResult};

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => error::EXIT_OK,
                _ => error::EXIT_USAGE,
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => error::EXIT_OK,
        Err(e) => {
            eprintln!("rauzy: {e}");
            e.exit_code()
        }
    }
}
