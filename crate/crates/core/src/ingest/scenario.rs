//! Scenario configuration: TOML file form, defaults, and sweep expansion.
//!
//! The file form allows `eirp_max_dbm` and `carrier_ghz` to be a scalar or
//! a list; [`ScenarioConfig::expand`] validates everything once and returns
//! one scalar [`Scenario`] per (EIRP, carrier) grid cell. The Monte Carlo
//! substreams are derived only from `seed`, realization index, and purpose,
//! so terminal positions are identical across all cells of a sweep — power
//! and band comparisons are exact sample-by-sample shifts, not statistics.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geo::{project, unproject, validate_simple_ring, GeoPoint, PlanarPoint};

use super::IngestError;

/// A scalar-or-list config value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> &[f64] {
        match self {
            OneOrMany::One(v) => std::slice::from_ref(v),
            OneOrMany::Many(vs) => vs,
        }
    }
}

/// Scenario file contents. Unknown keys are rejected; every key has a
/// default, so an empty file is a complete (single-cell) configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub origin_lon: f64,
    pub origin_lat: f64,
    /// Drop-area corners as `[lon, lat]` pairs; empty means a 1 km square
    /// centered on the origin.
    pub area_polygon: Vec<[f64; 2]>,
    pub ue_count: u32,
    pub ue_height_m: f64,
    pub gnb_height_m: f64,
    pub eirp_max_dbm: OneOrMany,
    pub carrier_ghz: OneOrMany,
    pub realizations: u32,
    pub seed: u64,
    pub inr_threshold_db: f64,
    pub ue_beam_cap: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            origin_lon: -87.63,
            origin_lat: 41.88,
            area_polygon: Vec::new(),
            ue_count: 100,
            ue_height_m: 1.5,
            gnb_height_m: 6.0,
            eirp_max_dbm: OneOrMany::One(33.0),
            carrier_ghz: OneOrMany::One(73.5),
            realizations: 100,
            seed: 0,
            inr_threshold_db: -6.0,
            ue_beam_cap: true,
        }
    }
}

/// One validated simulation cell: every field scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub origin: GeoPoint,
    pub area_polygon: Vec<GeoPoint>,
    pub ue_count: u32,
    pub ue_height_m: f64,
    pub gnb_height_m: f64,
    pub eirp_max_dbm: f64,
    pub carrier_ghz: f64,
    pub realizations: u32,
    pub seed: u64,
    pub inr_threshold_db: f64,
    pub ue_beam_cap: bool,
}

impl ScenarioConfig {
    /// Validates the config and expands the (EIRP, carrier) grid, EIRP
    /// outermost. All cells share seed, area, and terminal parameters.
    pub fn expand(&self) -> Result<Vec<Scenario>, IngestError> {
        let origin = GeoPoint::new(self.origin_lon, self.origin_lat)?;
        if self.realizations < 1 {
            return Err(IngestError::InvalidScenario(
                "realizations must be >= 1".into(),
            ));
        }
        if !(self.ue_height_m.is_finite() && self.ue_height_m > 0.0) {
            return Err(IngestError::InvalidScenario(format!(
                "ue_height_m {} must be positive",
                self.ue_height_m
            )));
        }
        if !(self.gnb_height_m.is_finite() && self.gnb_height_m > 0.0) {
            return Err(IngestError::InvalidScenario(format!(
                "gnb_height_m {} must be positive",
                self.gnb_height_m
            )));
        }
        if !self.inr_threshold_db.is_finite() {
            return Err(IngestError::InvalidScenario(
                "inr_threshold_db must be finite".into(),
            ));
        }
        let eirps = self.eirp_max_dbm.values();
        let carriers = self.carrier_ghz.values();
        if eirps.is_empty() || eirps.iter().any(|v| !v.is_finite()) {
            return Err(IngestError::InvalidScenario(
                "eirp_max_dbm must be a finite value or non-empty list".into(),
            ));
        }
        if carriers.is_empty() {
            return Err(IngestError::InvalidScenario(
                "carrier_ghz must be a value or non-empty list".into(),
            ));
        }
        for &c in carriers {
            if !c.is_finite() || !(0.5..=100.0).contains(&c) {
                return Err(IngestError::InvalidScenario(format!(
                    "carrier_ghz {c} outside the model's [0.5, 100] GHz range"
                )));
            }
        }
        let area_polygon = self.resolved_area(origin)?;

        let mut cells = Vec::with_capacity(eirps.len() * carriers.len());
        for &eirp in eirps {
            for &carrier in carriers {
                cells.push(Scenario {
                    origin,
                    area_polygon: area_polygon.clone(),
                    ue_count: self.ue_count,
                    ue_height_m: self.ue_height_m,
                    gnb_height_m: self.gnb_height_m,
                    eirp_max_dbm: eirp,
                    carrier_ghz: carrier,
                    realizations: self.realizations,
                    seed: self.seed,
                    inr_threshold_db: self.inr_threshold_db,
                    ue_beam_cap: self.ue_beam_cap,
                });
            }
        }
        Ok(cells)
    }

    fn resolved_area(&self, origin: GeoPoint) -> Result<Vec<GeoPoint>, IngestError> {
        if self.area_polygon.is_empty() {
            let half = 500.0;
            return Ok([(-half, -half), (half, -half), (half, half), (-half, half)]
                .iter()
                .map(|&(x, y)| unproject(PlanarPoint::new(x, y), origin))
                .collect());
        }
        let mut geo_ring = Vec::with_capacity(self.area_polygon.len());
        let mut planar_ring = Vec::with_capacity(self.area_polygon.len());
        for &[lon, lat] in &self.area_polygon {
            let gp = GeoPoint::new(lon, lat)?;
            planar_ring.push(project(gp, origin)?);
            geo_ring.push(gp);
        }
        validate_simple_ring(planar_ring)
            .map_err(|e| IngestError::InvalidScenario(format!("area_polygon: {e}")))?;
        Ok(geo_ring)
    }
}

/// Loads and parses a scenario TOML file (strict keys, defaults applied).
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|source| IngestError::Toml {
        path: path.to_path_buf(),
        source: Box::new(source),
    })
}

/// Writes a scenario config as TOML.
pub fn write_scenario<W: Write>(mut w: W, config: &ScenarioConfig) -> std::io::Result<()> {
    let text = toml::to_string(config).expect("scenario config serializes");
    w.write_all(text.as_bytes())
}
