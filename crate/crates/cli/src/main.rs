//! `biplane`: command-line front end for biplane-core.
//!
//! Exit codes: 0 success, 1 a verification or certification failed (or a
//! library precondition was not met), 2 malformed input or usage.

use std::process::ExitCode;

use clap::Parser;

mod cli;
mod commands;
mod report;

use cli::Cli;

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Failed,
}

fn threads_from_env() -> Result<usize, String> {
    match std::env::var("BIPLANE_THREADS") {
        Err(_) => Ok(1),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("BIPLANE_THREADS must be a positive integer, got '{s}'")),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = match threads_from_env() {
        Ok(n) => n,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
        eprintln!("error: thread pool: {e}");
        return ExitCode::from(2);
    }
    match commands::run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
