//! `krausforge` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation or I/O error,
//! 3 failed invariant (`verify` only).

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let threads = cli.threads;
    let result = match cli.command {
        Command::Synth(a) => commands::synth(a),
        Command::SweepTime(a) => commands::sweep_time_cmd(a, threads),
        Command::SweepN(a) => commands::sweep_n_cmd(a, threads),
        Command::Verify(a) => commands::verify_cmd(a),
        Command::Extract(a) => commands::extract(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
