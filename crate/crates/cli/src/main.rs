//! `ionrate`: rate scans, method comparison and self-checks for the driven
//! δ-atom.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical or
//! convergence failure (partial output may have been written).

mod commands;
mod config;
mod selfcheck;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunArgs, RunConfig};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numeric(_) => 2,
        }
    }
}

impl From<deltaion::Error> for Failure {
    fn from(e: deltaion::Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ionrate",
    version,
    about = "Ionization rates of a driven one-dimensional δ-atom"
)]
struct Cli {
    /// Configuration file: a JSON object or `key = value` lines. Flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample Γ(z) with one engine, smooth it and extract the modulation period.
    Scan(RunArgs),
    /// Run both engines on the same grid and report their deviations.
    Compare(RunArgs),
    /// List the channel-closing thresholds z_k in the range.
    Thresholds(RunArgs),
    /// Imaginary-time traversal of the inverted-oscillator barrier.
    DemoAppendixC(RunArgs),
    /// Run the invariant checks and report pass/fail per item.
    Selfcheck(RunArgs),
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let args = match &cli.command {
        Command::Scan(a)
        | Command::Compare(a)
        | Command::Thresholds(a)
        | Command::DemoAppendixC(a)
        | Command::Selfcheck(a) => a,
    };
    cfg.apply(args);
    match cli.command {
        Command::Scan(_) => commands::scan(&cfg),
        Command::Compare(_) => commands::compare(&cfg),
        Command::Thresholds(_) => commands::thresholds(&cfg),
        Command::DemoAppendixC(_) => commands::demo_appendix_c(&cfg),
        Command::Selfcheck(_) => selfcheck::run(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Numeric(m) => eprintln!("numerical failure: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
