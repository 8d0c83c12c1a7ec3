//! Command-line front end and JSON file formats for `minuncert-core`.
//!
//! Exit codes: 0 when the requested check passes, 1 when it fails on
//! scientific grounds, 2 for usage and I/O errors.

pub mod bundle;
pub mod cli;
pub mod commands;
pub mod error;
pub mod io;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use error::{CliError, Verdict, USAGE_EXIT};

use cli::{Cli, Command};

pub fn run_command(command: &Command, out: &mut dyn Write) -> Result<Verdict, CliError> {
    match command {
        Command::VerifyPaper(args) => commands::verify(args, out),
        Command::Find(args) => commands::find(args, out),
        Command::Search(args) => commands::search(args, out),
        Command::Gaussian(args) => commands::gaussian(args, out),
        Command::Spin(args) => commands::spin(args, out),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match run_command(&cli.command, out) {
        Ok(verdict) => verdict.code(),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            USAGE_EXIT
        }
    }
}
