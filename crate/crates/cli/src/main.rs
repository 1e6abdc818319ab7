//! `adelic`: reproducible experiments over adelic-core.
//!
//! Exit codes: 0 success, 1 a mathematical inconsistency was detected,
//! 2 input or usage error.

mod demos;
mod explicit;
mod ff;
mod output;
mod thermo;

use std::path::PathBuf;
use std::process::ExitCode;

use adelic_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "adelic", version, about = "Experiments on partition functions, curve zeta functions, the explicit formula and the BC algebra")]
struct Cli {
    /// Seed for every randomised choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Z_p(λ, β) on a grid of λ in (1, p] or at one λ.
    Thermo(thermo::ThermoArgs),
    /// Digits c_k of λ in base p.
    Digits(thermo::DigitsArgs),
    /// Zeta numerator, Frobenius eigenvalues and RH checks from counts or a curve.
    Ff(ff::FfArgs),
    /// Projective point count of a plane curve over an extension.
    Points(ff::PointsArgs),
    /// Spectral and geometric sides of the explicit formula for a bump.
    Explicit(explicit::ExplicitArgs),
    /// ρ_n images, idempotents and Galois orbits in the group ring of ℚ/ℤ.
    Bc(demos::BcArgs),
    /// Orbit reduction, fiber labels and holonomy in the semilocal quotients.
    Semilocal(demos::SemilocalArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// A computed identity or bound does not hold (exit 1).
    Inconsistent(String),
    /// Bad input or parameters (exit 2).
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InconsistentCounts(_) => Failure::Inconsistent(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Thermo(a) => thermo::run(a),
        Command::Digits(a) => thermo::run_digits(a),
        Command::Ff(a) => ff::run(a),
        Command::Points(a) => ff::run_points(a),
        Command::Explicit(a) => explicit::run(a, cli.seed),
        Command::Bc(a) => demos::run_bc(a),
        Command::Semilocal(a) => demos::run_semilocal(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Inconsistent(m)) => {
            eprintln!("inconsistent: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
