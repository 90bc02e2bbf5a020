mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Why a run stopped; each kind has its own exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or invalid input.
    Config(String),
    /// The eigensolver ran out of iterations.
    NonConvergence(String),
    /// A property that must hold did not.
    Property(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::NonConvergence(_) => 3,
            Failure::Property(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::NonConvergence(m) | Failure::Property(m) => m,
        }
    }
}

impl From<saddlespec_core::Error> for Failure {
    fn from(e: saddlespec_core::Error) -> Self {
        match e {
            saddlespec_core::Error::NotConverged { .. } => Failure::NonConvergence(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("saddlespec: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
