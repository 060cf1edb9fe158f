mod args;
mod commands;
mod error;
mod manifest;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use loadfair::par::Execution;

use args::{Cli, Command};
use commands::Context;
use error::CliError;

fn run(cli: &Cli) -> Result<(), CliError> {
    let execution = match cli.threads {
        Some(0) => return Err(CliError::Input("--threads must be at least 1".into())),
        Some(1) => Execution::Sequential,
        _ => Execution::Parallel,
    };
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let ctx = Context { execution, timing: cli.timing, started: Instant::now() };
    match &cli.command {
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::Assign(a) => commands::assign(&ctx, a),
        Command::Gen(a) => commands::gen(&ctx, a),
        Command::Oracle(a) => commands::oracle(&ctx, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LOADFAIR_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
