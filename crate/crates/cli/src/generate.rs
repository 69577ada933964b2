//! `generate`: synthetic scenes for self-contained runs.
//!
//! Emits station registries with configurable height/tilt/beamwidth laws,
//! block-grid building layouts, matching scenario files, or all three as a
//! consistent bundle. Fixed (parameters, seed) reproduce every data file
//! byte for byte; only the manifest timestamp varies.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use ebandsim_core::ingest::{write_buildings_geojson, write_fs_database, write_scenario};
use ebandsim_core::synth::{
    generate_manhattan, generate_registry, generate_scenario, ManhattanParams, RegistryParams,
};
use ebandsim_core::GeoPoint;
use serde_json::{json, Value};

use crate::errors::CliResult;
use crate::manifest::{ensure_out_dir, now_rfc3339, sha256_hex, write_manifest};
use crate::parse_lon_lat;

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(subcommand)]
    pub kind: GenerateKind,
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Station registry CSV: disk-uniform receivers, exponential-tail
    /// heights, Laplace tilts, discrete beamwidth mixture.
    Registry(RegistryArgs),
    /// Block-grid building footprints (GeoJSON).
    Buildings(BuildingsArgs),
    /// Scenario file: square drop area around the center.
    Scenario(ScenarioArgs),
    /// A consistent dense-urban scene: registry inside a block grid plus a
    /// matching scenario (registry defaults differ: rooftop heights >= 12 m,
    /// horizontal tilts, receivers inside the grid).
    Bundle(BundleArgs),
}

#[derive(Debug, Args)]
pub struct RegistryArgs {
    /// Output directory (created if absent).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of links.
    #[arg(long, default_value_t = 100)]
    pub count: u32,
    /// Deployment center as "lon,lat" degrees.
    #[arg(
        long,
        value_name = "LON,LAT",
        default_value = "-87.63,41.88",
        allow_hyphen_values = true
    )]
    pub center: String,
    /// Receiver disk radius, km.
    #[arg(long, value_name = "KM", default_value_t = 10.0)]
    pub radius_km: f64,
    /// Minimum receiver height, m.
    #[arg(long, value_name = "M", default_value_t = 11.0)]
    pub height_min_m: f64,
    /// Mean of the exponential height tail above the minimum, m.
    #[arg(long, value_name = "M", default_value_t = 22.0)]
    pub height_scale_m: f64,
    /// Laplace tilt scale, degrees (0 = all horizontal). Default puts 93%
    /// of tilts inside +/-10 degrees.
    #[arg(long, value_name = "DEG")]
    pub tilt_scale_deg: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BuildingsArgs {
    /// Output directory (created if absent).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Grid center as "lon,lat" degrees.
    #[arg(
        long,
        value_name = "LON,LAT",
        default_value = "-87.63,41.88",
        allow_hyphen_values = true
    )]
    pub center: String,
    #[arg(long, default_value_t = 10)]
    pub blocks_x: u32,
    #[arg(long, default_value_t = 10)]
    pub blocks_y: u32,
    /// Square block side, m.
    #[arg(long, value_name = "M", default_value_t = 80.0)]
    pub block_m: f64,
    /// Street width between blocks, m.
    #[arg(long, value_name = "M", default_value_t = 20.0)]
    pub street_m: f64,
    /// Minimum building height, m.
    #[arg(long, value_name = "M", default_value_t = 10.0)]
    pub height_min_m: f64,
    /// Mean of the exponential height tail above the minimum, m.
    #[arg(long, value_name = "M", default_value_t = 15.0)]
    pub height_scale_m: f64,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Output directory (created if absent).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Drop-area center as "lon,lat" degrees.
    #[arg(
        long,
        value_name = "LON,LAT",
        default_value = "-87.63,41.88",
        allow_hyphen_values = true
    )]
    pub center: String,
    /// Half-width of the square drop area, m.
    #[arg(long, value_name = "M", default_value_t = 500.0)]
    pub half_extent_m: f64,
    /// Terminals per realization.
    #[arg(long, default_value_t = 100)]
    pub ue_count: u32,
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    /// Output directory (created if absent).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scene center as "lon,lat" degrees.
    #[arg(
        long,
        value_name = "LON,LAT",
        default_value = "-87.63,41.88",
        allow_hyphen_values = true
    )]
    pub center: String,
    /// Number of registry links.
    #[arg(long, default_value_t = 50)]
    pub count: u32,
    /// Minimum receiver height, m.
    #[arg(long, value_name = "M", default_value_t = 12.0)]
    pub height_min_m: f64,
    /// Mean of the exponential receiver-height tail, m.
    #[arg(long, value_name = "M", default_value_t = 22.0)]
    pub height_scale_m: f64,
    /// Laplace tilt scale, degrees (default 0: horizontal).
    #[arg(long, value_name = "DEG", default_value_t = 0.0)]
    pub tilt_scale_deg: f64,
    #[arg(long, default_value_t = 10)]
    pub blocks_x: u32,
    #[arg(long, default_value_t = 10)]
    pub blocks_y: u32,
    /// Square block side, m.
    #[arg(long, value_name = "M", default_value_t = 80.0)]
    pub block_m: f64,
    /// Street width between blocks, m.
    #[arg(long, value_name = "M", default_value_t = 20.0)]
    pub street_m: f64,
    /// Minimum building height, m.
    #[arg(long, value_name = "M", default_value_t = 10.0)]
    pub building_height_min_m: f64,
    /// Mean of the exponential building-height tail, m.
    #[arg(long, value_name = "M", default_value_t = 15.0)]
    pub building_height_scale_m: f64,
    /// Terminals per realization.
    #[arg(long, default_value_t = 100)]
    pub ue_count: u32,
}

pub fn cmd_generate(args: &GenerateArgs) -> CliResult<()> {
    match &args.kind {
        GenerateKind::Registry(a) => generate_registry_cmd(a),
        GenerateKind::Buildings(a) => generate_buildings_cmd(a),
        GenerateKind::Scenario(a) => generate_scenario_cmd(a),
        GenerateKind::Bundle(a) => generate_bundle_cmd(a),
    }
}

fn registry_params(
    center: GeoPoint,
    count: u32,
    radius_km: f64,
    height_min_m: f64,
    height_scale_m: f64,
    tilt_scale_deg: Option<f64>,
) -> RegistryParams {
    let mut p = RegistryParams {
        n_links: count,
        center,
        radius_km,
        height_min_m,
        height_scale_m,
        ..RegistryParams::default()
    };
    if let Some(t) = tilt_scale_deg {
        p.tilt_scale_deg = t;
    }
    p
}

fn write_registry_csv(dir: &Path, stations: &[ebandsim_core::FixedStation]) -> CliResult<()> {
    let w = BufWriter::new(File::create(dir.join("registry.csv"))?);
    write_fs_database(w, stations)?;
    Ok(())
}

fn output_digests(dir: &Path, names: &[&str]) -> CliResult<Value> {
    let mut entries = Vec::with_capacity(names.len());
    for name in names {
        entries.push(json!({ "file": name, "sha256": sha256_hex(&dir.join(name))? }));
    }
    Ok(Value::Array(entries))
}

fn generate_manifest(
    dir: &Path,
    kind: &str,
    seed: u64,
    parameters: Value,
    outputs: &[&str],
) -> CliResult<()> {
    write_manifest(
        dir,
        &json!({
            "artifact_version": env!("CARGO_PKG_VERSION"),
            "command": "generate",
            "kind": kind,
            "created_utc": now_rfc3339(),
            "seed": seed,
            "parameters": parameters,
            "outputs": output_digests(dir, outputs)?,
        }),
    )
}

fn generate_registry_cmd(a: &RegistryArgs) -> CliResult<()> {
    let center = parse_lon_lat(&a.center)?;
    let params = registry_params(
        center,
        a.count,
        a.radius_km,
        a.height_min_m,
        a.height_scale_m,
        a.tilt_scale_deg,
    );
    let stations = generate_registry(&params, a.seed)?;
    ensure_out_dir(&a.out)?;
    write_registry_csv(&a.out, &stations)?;
    generate_manifest(
        &a.out,
        "registry",
        a.seed,
        registry_params_json(&params),
        &["registry.csv"],
    )?;
    println!(
        "generate registry: {} links -> {}",
        stations.len(),
        a.out.display()
    );
    Ok(())
}

fn registry_params_json(p: &RegistryParams) -> Value {
    json!({
        "n_links": p.n_links,
        "center_lon": p.center.lon_deg,
        "center_lat": p.center.lat_deg,
        "radius_km": p.radius_km,
        "height_min_m": p.height_min_m,
        "height_scale_m": p.height_scale_m,
        "tilt_scale_deg": p.tilt_scale_deg,
        "beamwidth_choices": p.beamwidth_choices,
        "hop_min_m": p.hop_min_m,
        "hop_max_m": p.hop_max_m,
        "max_gain_dbi": p.max_gain_dbi,
        "noise_figure_db": p.noise_figure_db,
        "center_freq_ghz": p.center_freq_ghz,
        "bandwidth_mhz": p.bandwidth_mhz,
    })
}

fn manhattan_params_json(p: &ManhattanParams) -> Value {
    json!({
        "blocks_x": p.blocks_x,
        "blocks_y": p.blocks_y,
        "block_m": p.block_m,
        "street_m": p.street_m,
        "height_min_m": p.height_min_m,
        "height_scale_m": p.height_scale_m,
    })
}

fn generate_buildings_cmd(a: &BuildingsArgs) -> CliResult<()> {
    let center = parse_lon_lat(&a.center)?;
    let params = ManhattanParams {
        blocks_x: a.blocks_x,
        blocks_y: a.blocks_y,
        block_m: a.block_m,
        street_m: a.street_m,
        height_min_m: a.height_min_m,
        height_scale_m: a.height_scale_m,
    };
    let footprints = generate_manhattan(&params, a.seed)?;
    ensure_out_dir(&a.out)?;
    let w = BufWriter::new(File::create(a.out.join("buildings.geojson"))?);
    write_buildings_geojson(w, &footprints, center)?;
    let mut parameters = manhattan_params_json(&params);
    parameters["center_lon"] = json!(center.lon_deg);
    parameters["center_lat"] = json!(center.lat_deg);
    generate_manifest(
        &a.out,
        "buildings",
        a.seed,
        parameters,
        &["buildings.geojson"],
    )?;
    println!(
        "generate buildings: {} footprints -> {}",
        footprints.len(),
        a.out.display()
    );
    Ok(())
}

fn generate_scenario_cmd(a: &ScenarioArgs) -> CliResult<()> {
    let center = parse_lon_lat(&a.center)?;
    let config = generate_scenario(center, a.half_extent_m, a.ue_count, a.seed)?;
    ensure_out_dir(&a.out)?;
    let w = BufWriter::new(File::create(a.out.join("scenario.toml"))?);
    write_scenario(w, &config)?;
    generate_manifest(
        &a.out,
        "scenario",
        a.seed,
        json!({
            "center_lon": center.lon_deg,
            "center_lat": center.lat_deg,
            "half_extent_m": a.half_extent_m,
            "ue_count": a.ue_count,
        }),
        &["scenario.toml"],
    )?;
    println!("generate scenario: -> {}", a.out.display());
    Ok(())
}

fn generate_bundle_cmd(a: &BundleArgs) -> CliResult<()> {
    let center = parse_lon_lat(&a.center)?;

    let grid = ManhattanParams {
        blocks_x: a.blocks_x,
        blocks_y: a.blocks_y,
        block_m: a.block_m,
        street_m: a.street_m,
        height_min_m: a.building_height_min_m,
        height_scale_m: a.building_height_scale_m,
    };
    let (extent_x, extent_y) = grid.extent_m();
    let half_extent_m = extent_x.min(extent_y) / 2.0;

    // Receivers stay inside the grid; sub-seeds keep the three files
    // independently reproducible.
    let registry = registry_params(
        center,
        a.count,
        half_extent_m * 0.9 / 1000.0,
        a.height_min_m,
        a.height_scale_m,
        Some(a.tilt_scale_deg),
    );
    let stations = generate_registry(&registry, a.seed)?;
    let footprints = generate_manhattan(&grid, a.seed.wrapping_add(1))?;
    let scenario = generate_scenario(center, half_extent_m, a.ue_count, a.seed)?;

    ensure_out_dir(&a.out)?;
    write_registry_csv(&a.out, &stations)?;
    let w = BufWriter::new(File::create(a.out.join("buildings.geojson"))?);
    write_buildings_geojson(w, &footprints, center)?;
    let w = BufWriter::new(File::create(a.out.join("scenario.toml"))?);
    write_scenario(w, &scenario)?;

    generate_manifest(
        &a.out,
        "bundle",
        a.seed,
        json!({
            "registry": registry_params_json(&registry),
            "buildings": manhattan_params_json(&grid),
            "scenario": {
                "center_lon": center.lon_deg,
                "center_lat": center.lat_deg,
                "half_extent_m": half_extent_m,
                "ue_count": a.ue_count,
            },
            "buildings_seed": a.seed.wrapping_add(1),
        }),
        &["registry.csv", "buildings.geojson", "scenario.toml"],
    )?;
    println!(
        "generate bundle: {} links, {} footprints -> {}",
        stations.len(),
        footprints.len(),
        a.out.display()
    );
    Ok(())
}
