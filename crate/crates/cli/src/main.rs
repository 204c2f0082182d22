//! Command-line front end for the average-adjusted variance estimators.
//!
//! Exit codes: 0 when the command's mathematical claim held, 1 on usage or
//! parse errors, 2 when a claim was violated.

mod args;
mod commands;
mod error;
mod files;
mod record;
mod spec;

use std::process::ExitCode;

use clap::Parser;

use error::CliError;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version print to stdout and exit cleanly
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Claim(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
