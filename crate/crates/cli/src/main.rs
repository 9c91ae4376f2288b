//! `egcstat` — first- and second-order SIR statistics of an M-branch
//! equal-gain combiner among N Rayleigh-faded cochannel interferers.
//!
//! Subcommands:
//! * `compute`  — all requested methods at one threshold,
//! * `sweep`    — CSV/JSON rows over an NSIRth grid,
//! * `validate` — Monte Carlo fading simulation against the analytic route,
//! * `bench`    — evaluation counts and wall time, quadrature vs. series.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure (tolerance
//! budget exhausted, non-convergence, or a failed `--check`).

mod args;
mod commands;
mod grid;
mod row;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "egcstat",
    version,
    about = "Outage probability, level crossing rate and fade duration of the \
             output SIR of an equal-gain combiner under Rayleigh cochannel \
             interference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every requested method at a single threshold.
    Compute(commands::ComputeArgs),
    /// Evaluate a threshold grid and emit one row per point and method.
    Sweep(commands::SweepArgs),
    /// Simulate Clarke-model fading and compare empirical statistics
    /// against the series route.
    Validate(commands::ValidateArgs),
    /// Report evaluation counts and wall time for the two numerical routes.
    Bench(commands::BenchArgs),
}

/// CLI-level failure, split by the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments, config-file mistakes, unsupported method/order
    /// combinations, I/O problems: exit 1.
    Usage(String),
    /// The numerics refused or disagreed: exit 2.
    Numerical(String),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure::Usage(msg.into())
    }

    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<egcstat::Error> for Failure {
    fn from(e: egcstat::Error) -> Failure {
        match e {
            // Misconfiguration the caller can fix; everything else means the
            // numerics gave up.
            egcstat::Error::MethodDomain { .. } | egcstat::Error::InvalidConfig { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numerical(other.to_string()),
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) => {
            let _ = e.print();
            std::process::exit(1);
        }
    };

    let result = match cli.command {
        Command::Compute(a) => commands::run_compute(&a),
        Command::Sweep(a) => commands::run_sweep(&a),
        Command::Validate(a) => commands::run_validate(&a),
        Command::Bench(a) => commands::run_bench(&a),
    };

    match result {
        Ok(()) => {}
        Err(f) => {
            eprintln!("error: {}", f.message());
            std::process::exit(f.exit_code());
        }
    }
}
