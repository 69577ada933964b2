//! `ebandsim` — command-line front end for the e-band coexistence
//! simulator.
//!
//! Three commands: `analyze` (deployment-geometry statistics over a station
//! registry), `simulate` (Monte Carlo aggregate-interference study), and
//! `generate` (synthetic scenes). All outputs are plot-ready CSV plus a
//! `manifest.json` that suffices to reproduce the run.
//!
//! Exit codes: 0 success, 2 input error (also clap usage errors),
//! 3 configuration error, 4 runtime error.

mod analyze;
mod errors;
mod generate;
mod manifest;
mod simulate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ebandsim_core::GeoPoint;

use crate::errors::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "ebandsim",
    version,
    about = "Aggregate 5G uplink interference into 70/80 GHz fixed stations",
    propagate_version = true
)]
struct Cli {
    /// Worker threads for the simulation engine (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Deployment-geometry statistics over a station registry.
    Analyze(analyze::AnalyzeArgs),
    /// Monte Carlo interference study over the scenario's (EIRP, carrier) grid.
    Simulate(simulate::SimulateArgs),
    /// Synthetic scenes: registries, building grids, scenario files.
    Generate(generate::GenerateArgs),
}

/// Parses "lon,lat" degrees into a validated geographic point.
pub(crate) fn parse_lon_lat(text: &str) -> CliResult<GeoPoint> {
    let parts: Vec<&str> = text.split(',').collect();
    let err = || CliError::Config(format!("expected \"lon,lat\" degrees, got \"{text}\""));
    if parts.len() != 2 {
        return Err(err());
    }
    let lon: f64 = parts[0].trim().parse().map_err(|_| err())?;
    let lat: f64 = parts[1].trim().parse().map_err(|_| err())?;
    GeoPoint::new(lon, lat).map_err(|e| CliError::Config(e.to_string()))
}

/// Parses a comma-separated list of numbers for a named flag.
pub(crate) fn parse_list(text: &str, flag: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("{flag}: \"{part}\" is not a number")))
        })
        .collect()
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be >= 1".to_string()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Analyze(args) => analyze::cmd_analyze(args),
        Command::Simulate(args) => simulate::cmd_simulate(args),
        Command::Generate(args) => generate::cmd_generate(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ebandsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
