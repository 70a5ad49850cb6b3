mod analyze;
mod bounds;
mod generate;
mod measure;
mod oracle;
mod verify_codec;

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_rational::BigRational;
use rauzy_core::measures::parse_rational;

use crate::args::Command;
use crate::error::{CliError, CliResult};

pub fn dispatch(command: &Command) -> CliResult<()> {
    match command {
        Command::Analyze(a) => analyze::run(a),
        Command::Generate(a) => generate::run(a),
        Command::Bounds(a) => bounds::run(a),
        Command::Oracle(a) => oracle::run(a),
        Command::Measure(a) => measure::run_measure(a),
        Command::Search(a) => measure::run_search(a),
        Command::VerifyCodec(a) => verify_codec::run(a),
    }
}

/// Writes one line to stdout. A closed pipe (`rauzy ... | head`) is not an error.
fn emit(text: &str) -> CliResult<()> {
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(CliError::Internal(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn read_input(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn rational(flag: &str, text: &str) -> CliResult<BigRational> {
    parse_rational(text).map_err(|e| CliError::usage(format!("--{flag}: {e}")))
}

fn require<'a, T>(value: &'a Option<T>, flag: &str, what: &str) -> CliResult<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| CliError::usage(format!("{what} needs --{flag}")))
}

/// Divisor turning nats into the requested logarithm base.
fn log_scale(log_base: &str, digit_base: u32) -> CliResult<f64> {
    match log_base {
        "e" => Ok(1.0),
        "2" => Ok(std::f64::consts::LN_2),
        "10" => Ok(std::f64::consts::LN_10),
        "b" => Ok(f64::from(digit_base).ln()),
        other => Err(CliError::usage(format!(
            "--log-base must be e, 2, 10 or b, got {other:?}"
        ))),
    }
}
