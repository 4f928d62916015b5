//! Command-line front end: parameter resolution, subcommand dispatch and
//! CSV/JSON output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::Outcome;
use config::RunConfig;
use error::{exit, CliError};

fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        Command::Constants => commands::constants(&config.params),
        Command::Signal(a) => commands::signal(&config.params, a),
        Command::Sql(a) => commands::sql(&config.params, &a.threshold),
        Command::Sweep(a) => commands::sweep(&config.params, a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn emit(config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    let text = match config.output_format {
        Format::Csv => outcome.table.to_csv()?,
        Format::Json => outcome.table.to_json(),
    };
    match config.output_path {
        Some(path) => std::fs::write(path, text)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn report(e: &CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}

/// Runs the program on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::VALIDATION } else { exit::OK };
        }
    };
    let config = match RunConfig::resolve(&cli) {
        Ok(c) => c,
        Err(e) => return report(&e),
    };
    let outcome = match execute(&config) {
        Ok(o) => o,
        Err(e) => return report(&e),
    };
    if let Err(e) = emit(&config, &outcome) {
        return report(&e);
    }
    match &outcome.failure {
        Some(e) => report(e),
        None => exit::OK,
    }
}
