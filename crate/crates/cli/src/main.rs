//! `axisym`: branch scans, single-branch solves, limit orbits and the N = 3 check.

use std::process::ExitCode;

use axisym_cli::args::Cli;
use axisym_cli::commands;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(commands::EXIT_INVALID);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(commands::EXIT_FAILURE);
        }
    }
    match commands::run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
