mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use output::Report;

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Window(w) => commands::window(w),
        Command::Figure(f) => commands::figure(f),
        Command::Sweep(s) => commands::sweep(s),
        Command::Verify(v) => commands::verify(v),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = report.emit(cli.output.format, cli.output.output.as_deref()) {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match report.failure {
        Some(msg) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}
