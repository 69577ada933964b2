//! `analyze`: deployment-geometry statistics over a station registry.
//!
//! Emits one plot-ready CSV per study — pair density vs. radius, height
//! CDF, tilt histogram, beamwidth histogram, and the tilt-height profile —
//! plus the run manifest.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::Args;
use ebandsim_core::fs_analytics::{
    beamwidth_histogram, density_vs_radius, height_distribution, tilt_height_profile,
    tilt_histogram, write_cdf_csv, write_density_csv, write_histogram_csv, write_tilt_height_csv,
    DEFAULT_BEAMWIDTH_BIN_DEG, DEFAULT_HEIGHT_BIN_M, DEFAULT_TILT_BIN_DEG,
};
use ebandsim_core::ingest::load_fs_database;
use serde_json::json;

use crate::errors::{CliError, CliResult};
use crate::manifest::{ensure_out_dir, input_entry, now_rfc3339, write_manifest};
use crate::{parse_list, parse_lon_lat};

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Station registry CSV.
    #[arg(long, value_name = "FILE")]
    pub fs_db: PathBuf,

    /// Output directory (created if absent).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    /// Density center as "lon,lat" degrees.
    #[arg(
        long,
        value_name = "LON,LAT",
        default_value = "-87.63,41.88",
        allow_hyphen_values = true
    )]
    pub center: String,

    /// Density radii in km: comma-separated, strictly increasing.
    #[arg(long, value_name = "KM,..", default_value = "1,2,5,10,20,50,100,150")]
    pub radii: String,

    /// Tilt histogram bin width, degrees.
    #[arg(long, value_name = "DEG", default_value_t = DEFAULT_TILT_BIN_DEG)]
    pub tilt_bin: f64,

    /// Beamwidth histogram bin width, degrees.
    #[arg(long, value_name = "DEG", default_value_t = DEFAULT_BEAMWIDTH_BIN_DEG)]
    pub beamwidth_bin: f64,

    /// Height histogram bin width, meters.
    #[arg(long, value_name = "M", default_value_t = DEFAULT_HEIGHT_BIN_M)]
    pub height_bin: f64,
}

const OUTPUTS: [&str; 5] = [
    "density.csv",
    "height_cdf.csv",
    "tilt_hist.csv",
    "beamwidth_hist.csv",
    "tilt_height.csv",
];

pub fn cmd_analyze(args: &AnalyzeArgs) -> CliResult<()> {
    let center = parse_lon_lat(&args.center)?;
    let radii = parse_list(&args.radii, "--radii")?;

    let db = load_fs_database(&args.fs_db)?;
    if !db.rejected.is_empty() {
        eprintln!(
            "warning: {} row(s) rejected from {}",
            db.rejected.len(),
            args.fs_db.display()
        );
        for d in db.rejected.iter().take(5) {
            eprintln!("  {d}");
        }
    }
    if db.stations.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no valid stations",
            args.fs_db.display()
        )));
    }

    let density = density_vs_radius(&db.stations, center, &radii)?;
    let heights = height_distribution(&db.stations, args.height_bin)?;
    let tilts = tilt_histogram(&db.stations, args.tilt_bin)?;
    let beamwidths = beamwidth_histogram(&db.stations, args.beamwidth_bin)?;
    let profile = tilt_height_profile(&db.stations, args.tilt_bin)?;

    ensure_out_dir(&args.out)?;
    let writer = |name: &str| -> CliResult<BufWriter<File>> {
        Ok(BufWriter::new(File::create(args.out.join(name))?))
    };
    write_density_csv(writer("density.csv")?, &density)?;
    write_cdf_csv(writer("height_cdf.csv")?, "height_m", &heights)?;
    write_histogram_csv(writer("tilt_hist.csv")?, "tilt_deg", &tilts)?;
    write_histogram_csv(writer("beamwidth_hist.csv")?, "beamwidth_deg", &beamwidths)?;
    write_tilt_height_csv(writer("tilt_height.csv")?, &profile)?;

    write_manifest(
        &args.out,
        &json!({
            "artifact_version": env!("CARGO_PKG_VERSION"),
            "command": "analyze",
            "created_utc": now_rfc3339(),
            "inputs": { "fs_db": input_entry(&args.fs_db)? },
            "parameters": {
                "center_lon": center.lon_deg,
                "center_lat": center.lat_deg,
                "radii_km": radii,
                "tilt_bin_deg": args.tilt_bin,
                "beamwidth_bin_deg": args.beamwidth_bin,
                "height_bin_m": args.height_bin,
            },
            "stations": db.stations.len(),
            "rejected_rows": db.rejected.len(),
            "outputs": OUTPUTS,
        }),
    )?;

    println!(
        "analyze: {} stations -> {} ({} CSVs + manifest)",
        db.stations.len(),
        args.out.display(),
        OUTPUTS.len()
    );
    Ok(())
}
