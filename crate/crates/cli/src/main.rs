//! `gconc` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 I/O error.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::{EXIT_OK, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let result = match &cli.command {
        Command::Trajectory(a) => commands::run_trajectory(a, &cli.out_dir),
        Command::Verify(a) => commands::run_verify(a, &cli.out_dir),
        Command::Rates(a) => commands::run_rates(a, &cli.out_dir),
        Command::Roof(a) => commands::run_roof(a, &cli.out_dir),
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("gconc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
