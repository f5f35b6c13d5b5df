//! Problem files, JSON reports and the `teleport` command line.
//!
//! Exit codes: 0 success, 1 output could not be written, 2 unparsable input,
//! 3 input violates an invariant, 4 infeasible spectrum, 5 no phase factors
//! found, 6 verification failure.

pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::process::ExitCode;

use clap::Parser;

pub use commands::{Cli, Command, Output};
pub use error::CliError;
pub use problem::{Probability, ProblemSpec};
pub use report::ReportDoc;

/// Parses `args`, runs the command and reports errors on stderr.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = commands::run(&cli).and_then(|output| {
        let text = match output {
            Output::Report(doc) => doc.to_json(),
            Output::Text(text) => text + "\n",
        };
        match &cli.out {
            Some(path) => fs::write(path, text).map_err(CliError::from),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.into()
        }
    }
}
