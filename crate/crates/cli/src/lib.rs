//! Command-line front end: catalog objects, verification pipelines, coset
//! constructions and coverings over JSON interchange documents.

pub mod commands;
pub mod docs;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::{execute, Cli, Outcome};
pub use error::CliError;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => 4,
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(outcome) => {
            let sink: &mut dyn Write = if outcome.report_to_stderr { err } else { out };
            if let Err(e) = outcome.report.write(sink, cli.json) {
                let _ = writeln!(err, "error: {e}");
                return 4;
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
