use std::io;
use std::process::ExitCode;

use clap::Parser;

use bdi_tactics::cli::{run_scenario, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::try_from(cli).and_then(|cfg| run_scenario(&cfg, &mut io::stdout().lock()));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
