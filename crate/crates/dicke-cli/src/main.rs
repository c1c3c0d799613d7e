//! `dicke`: datasets and plot scripts for the Dicke model and its
//! fast-slow adiabatic approximations.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "dicke", version, about = "Dicke-model spectra, Peres lattices, and adiabatic invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Map where each fast-slow approximation is valid.
    ValidityMap(commands::ValidityMapArgs),
    /// Peres lattices of exact eigenstates with adiabatic overlays.
    Peres(commands::PeresArgs),
    /// Exact vs requantized level curves along a coupling scan.
    Bands(commands::BandsArgs),
    /// Semiclassical DoS and expectation values per band.
    Semiclassical(commands::SemiclassicalArgs),
    /// Classical trajectories: variance maps, sections, frequency scans.
    Classical(commands::ClassicalArgs),
    /// Exact spectrum with parity labels.
    Spectrum(commands::SpectrumArgs),
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::ValidityMap(a) => commands::run_validity_map(a),
        Command::Peres(a) => commands::run_peres(a),
        Command::Bands(a) => commands::run_bands(a),
        Command::Semiclassical(a) => commands::run_semiclassical(a),
        Command::Classical(a) => commands::run_classical(a),
        Command::Spectrum(a) => commands::run_spectrum(a),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
