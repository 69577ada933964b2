//! `simulate`: the Monte Carlo interference study.
//!
//! Expands the scenario's (EIRP, carrier) grid and runs the engine once per
//! cell. Each cell directory gets the per-receiver report, every
//! per-realization sample, the pooled INR CDF/PDF, and a two-view summary
//! (pooled samples and per-receiver means); the run root gets the manifest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use ebandsim_core::engine::{run, RunOptions, RunResult, DEFAULT_CULL_DISTANCE_M};
use ebandsim_core::geo::BuildingIndex;
use ebandsim_core::ingest::{load_buildings, load_fs_database, load_scenario, Scenario};
use ebandsim_core::stats::{
    write_cdf_csv, write_pdf_csv, write_summary_csv, EmpiricalDistribution, SummaryRow,
};
use ebandsim_core::GeoPoint;
use serde_json::json;

use crate::errors::{CliError, CliResult};
use crate::manifest::{ensure_out_dir, input_entry, now_rfc3339, write_manifest};

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario configuration file (TOML).
    #[arg(long, value_name = "FILE")]
    pub config: PathBuf,

    /// Station registry CSV.
    #[arg(long, value_name = "FILE")]
    pub fs_db: PathBuf,

    /// Building footprints GeoJSON; omit for an open scene.
    #[arg(long, value_name = "FILE")]
    pub buildings: Option<PathBuf>,

    /// Output directory (created if absent).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,

    /// Root seed override (defaults to the scenario file's seed).
    #[arg(long)]
    pub seed: Option<u64>,

    /// Disable log-normal shadow fading.
    #[arg(long)]
    pub no_shadowing: bool,

    /// Skip links whose ground distance exceeds this many meters;
    /// 0 evaluates every link.
    #[arg(long, value_name = "M", default_value_t = DEFAULT_CULL_DISTANCE_M)]
    pub cull_distance_m: f64,

    /// Pooled INR PDF bin width, dB.
    #[arg(long, value_name = "DB", default_value_t = 1.0)]
    pub inr_bin_db: f64,

    /// Use the literal two-gain terminal pattern sum, without the
    /// front-to-back floor on the combined value.
    #[arg(long)]
    pub literal_eq9: bool,
}

pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<()> {
    if !(args.cull_distance_m.is_finite() && args.cull_distance_m >= 0.0) {
        return Err(CliError::Config(format!(
            "--cull-distance-m {} must be >= 0",
            args.cull_distance_m
        )));
    }
    if !(args.inr_bin_db.is_finite() && args.inr_bin_db > 0.0) {
        return Err(CliError::Config(format!(
            "--inr-bin-db {} must be positive",
            args.inr_bin_db
        )));
    }

    let mut config = load_scenario(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if args.literal_eq9 {
        config.ue_beam_cap = false;
    }
    let cells = config.expand()?;

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

    let origin = GeoPoint::new(config.origin_lon, config.origin_lat)
        .map_err(|e| CliError::Config(format!("scenario origin: {e}")))?;
    let (index, buildings_info) = match &args.buildings {
        Some(path) => {
            let set = load_buildings(path, origin)?;
            if !set.rejected.is_empty() {
                eprintln!(
                    "warning: {} feature(s) rejected from {}",
                    set.rejected.len(),
                    path.display()
                );
            }
            if set.holes_dropped > 0 {
                eprintln!("warning: {} interior ring(s) dropped", set.holes_dropped);
            }
            let info = json!({
                "footprints": set.footprints.len(),
                "rejected_features": set.rejected.len(),
                "holes_dropped": set.holes_dropped,
            });
            (BuildingIndex::build(set.footprints), info)
        }
        None => (BuildingIndex::build(Vec::new()), serde_json::Value::Null),
    };

    let options = RunOptions {
        cull_distance_m: if args.cull_distance_m == 0.0 {
            None
        } else {
            Some(args.cull_distance_m)
        },
        shadowing: !args.no_shadowing,
    };

    ensure_out_dir(&args.out)?;
    let mut cell_entries = Vec::with_capacity(cells.len());
    for (i, cell) in cells.iter().enumerate() {
        let dir_name = cell_dir_name(i, cell);
        let cell_dir = args.out.join(&dir_name);
        ensure_out_dir(&cell_dir)?;

        let result = run(cell, &db.stations, &index, &options)?;
        write_cell_outputs(&cell_dir, &dir_name, cell, &result, args.inr_bin_db)?;

        cell_entries.push(json!({
            "dir": dir_name,
            "eirp_max_dbm": cell.eirp_max_dbm,
            "carrier_ghz": cell.carrier_ghz,
            "receivers": result.reports.len(),
            "culled_links": result.culled_links,
            "out_of_model_links": result.out_of_model_links,
        }));
    }

    let buildings_input = match &args.buildings {
        Some(path) => input_entry(path)?,
        None => serde_json::Value::Null,
    };
    write_manifest(
        &args.out,
        &json!({
            "artifact_version": env!("CARGO_PKG_VERSION"),
            "command": "simulate",
            "created_utc": now_rfc3339(),
            "seed": config.seed,
            "inputs": {
                "scenario": input_entry(&args.config)?,
                "fs_db": input_entry(&args.fs_db)?,
                "buildings": buildings_input,
            },
            "resolved_config": &config,
            "options": {
                "shadowing": options.shadowing,
                "cull_distance_m": options.cull_distance_m,
                "inr_bin_db": args.inr_bin_db,
                "ue_beam_cap": config.ue_beam_cap,
            },
            "stations": { "loaded": db.stations.len(), "rejected_rows": db.rejected.len() },
            "buildings": buildings_info,
            "cells": cell_entries,
        }),
    )?;

    println!(
        "simulate: {} cell(s) x {} receiver(s) x {} realization(s) -> {}",
        cells.len(),
        db.stations.len(),
        config.realizations,
        args.out.display()
    );
    Ok(())
}

/// `cell00_eirp33_f73.5` — index keeps names unique even for repeated
/// sweep values.
fn cell_dir_name(index: usize, cell: &Scenario) -> String {
    format!(
        "cell{:02}_eirp{}_f{}",
        index, cell.eirp_max_dbm, cell.carrier_ghz
    )
}

fn write_cell_outputs(
    dir: &Path,
    label: &str,
    cell: &Scenario,
    result: &RunResult,
    inr_bin_db: f64,
) -> CliResult<()> {
    // Per-receiver report: one row per station.
    let mut per_fs = BufWriter::new(File::create(dir.join("per_fs.csv"))?);
    writeln!(
        per_fs,
        "fs_index,pair_id,link_id,noise_dbm,mean_inr_db,median_inr_db,p95_inr_db,exceed_count,exceed_fraction"
    )?;
    for r in &result.reports {
        writeln!(
            per_fs,
            "{},{},{},{},{},{},{},{},{}",
            r.fs_index,
            r.pair_id,
            r.link_id,
            r.noise_power_dbm,
            r.summary.mean_inr_db,
            r.summary.median_inr_db,
            r.summary.p95_inr_db,
            r.exceed_count,
            r.exceed_count as f64 / r.samples.len().max(1) as f64,
        )?;
    }
    per_fs.flush()?;

    // Every (receiver, realization) sample.
    let mut samples = BufWriter::new(File::create(dir.join("samples.csv"))?);
    writeln!(samples, "fs_index,realization,aggregate_dbm,inr_db")?;
    for r in &result.reports {
        for s in &r.samples {
            writeln!(
                samples,
                "{},{},{},{}",
                r.fs_index, s.realization, s.aggregate_dbm, s.inr_db
            )?;
        }
    }
    samples.flush()?;

    // Pooled distribution over all (receiver, realization) samples.
    let pooled_values: Vec<f64> = result
        .reports
        .iter()
        .flat_map(|r| r.samples.iter().map(|s| s.inr_db))
        .collect();
    let pooled = EmpiricalDistribution::new(pooled_values)?;
    write_cdf_csv(
        BufWriter::new(File::create(dir.join("inr_cdf.csv"))?),
        &pooled,
    )?;

    // The density histogram needs finite samples; -inf marks realizations
    // where no interference reached a receiver, so those are excluded here
    // (the CDF above still counts them).
    let finite: Vec<f64> = pooled
        .samples()
        .iter()
        .copied()
        .filter(|x| x.is_finite())
        .collect();
    let mut pdf = BufWriter::new(File::create(dir.join("inr_pdf.csv"))?);
    if finite.is_empty() {
        writeln!(pdf, "bin_lo_db,bin_hi_db,count,density_per_db")?;
        pdf.flush()?;
    } else {
        let finite_dist = EmpiricalDistribution::new(finite)?;
        write_pdf_csv(pdf, &finite_dist.pdf_histogram(inr_bin_db)?)?;
    }

    // Table-shaped summary: pooled samples, and the distribution of
    // per-receiver mean INRs.
    let fs_means: Vec<f64> = result
        .reports
        .iter()
        .map(|r| r.summary.mean_inr_db)
        .collect();
    let rows = vec![
        SummaryRow {
            scenario: label.to_string(),
            view: "pooled".to_string(),
            stats: pooled.summarize(cell.inr_threshold_db),
        },
        SummaryRow {
            scenario: label.to_string(),
            view: "per_fs_mean".to_string(),
            stats: EmpiricalDistribution::new(fs_means)?.summarize(cell.inr_threshold_db),
        },
    ];
    write_summary_csv(
        BufWriter::new(File::create(dir.join("summary.csv"))?),
        &rows,
    )?;
    Ok(())
}
