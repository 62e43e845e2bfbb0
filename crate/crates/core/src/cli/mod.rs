//! Command-line front end: `density`, `verify`, `simulate`, `functionals`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error or invalid
//! parameters, 3 numerical failure.

mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;

pub use args::{
    parse_grid, parse_range, Command, DensityArgs, Format, Functional, FunctionalArgs, Grid, MethodArg, ProcessKind,
    RunConfig, SimulateArgs, VerifyArgs,
};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "FRACDIFF_THREADS";

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) | Error::Domain(_) | Error::UnsupportedOrder(_) => EXIT_USAGE,
        Error::NonConvergent { .. }
        | Error::OutOfWindow { .. }
        | Error::QuadratureFailure { .. }
        | Error::DegenerateInput(_) => EXIT_NUMERICAL,
    }
}

/// Failure of a command: a library error, or an I/O problem writing output.
#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

/// Result of a successful command: the rendered output and whether every
/// check passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got '{v}'"))?;
    // A second call in the same process fails harmlessly.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Run a parsed command and render its output.
pub fn execute(cfg: &RunConfig, command_line: &str) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::Density(a) => commands::density(a, command_line),
        Command::Verify(a) => commands::verify(a),
        Command::Simulate(a) => commands::simulate(a, command_line),
        Command::Functionals(a) => commands::functionals(a, command_line),
    }
}

fn output_path(cfg: &RunConfig) -> Option<&Path> {
    match &cfg.command {
        Command::Density(a) => a.output.as_deref(),
        Command::Verify(a) => a.output.as_deref(),
        Command::Simulate(a) => a.output.as_deref(),
        Command::Functionals(a) => a.output.as_deref(),
    }
}

/// Parse `args` (including the program name), run, write output and return
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cfg = match RunConfig::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    let command_line = std::iter::once("fracdiff".to_string())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    let outcome = match execute(&cfg, &command_line) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                CliError::Lib(e) => exit_code(&e),
                CliError::Io(_) => EXIT_NUMERICAL,
            };
        }
    };
    let written = match output_path(&cfg) {
        Some(p) => std::fs::write(p, &outcome.text),
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    if outcome.pass {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}
