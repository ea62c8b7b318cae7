mod args;
mod commands;
mod envelope;
mod exit;

use std::io::Write;
use std::process;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use exit::{CliError, ExitCode};

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::usage("--threads must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot configure thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Fit(a) => commands::cmd_fit(a),
        Command::Proportions(a) => commands::cmd_proportions(a),
        Command::Simulate(a) => commands::cmd_simulate(a),
        Command::Alr(a) => commands::cmd_alr(a),
        Command::Reproduce(a) => commands::cmd_reproduce(a),
        Command::Data => commands::cmd_data(),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::Success,
                _ => ExitCode::Usage,
            };
            let _ = e.print();
            process::exit(code as i32);
        }
    };
    let code = match run(cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(outcome.stdout.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                process::exit(ExitCode::Input as i32);
            }
            outcome.code
        }
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    };
    process::exit(code as i32);
}
