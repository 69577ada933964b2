//! Loaders and writers for the three external inputs.
//!
//! * Fixed-station database — CSV, one row per directed link (a two-way
//!   pair is two rows, one per receiver).
//! * Building footprints — GeoJSON FeatureCollection with a `height_m`
//!   property per polygon feature.
//! * Scenario — TOML key-value file with paper-style defaults and strict
//!   unknown-key rejection.
//!
//! Parsing is total: every input row/feature either becomes a validated
//! domain object or a row-numbered diagnostic; nothing partial escapes.
//! Writers exist for every format so generated scenes round-trip.

mod buildings;
mod fs_db;
mod scenario;

pub use buildings::{load_buildings, write_buildings_geojson, BuildingSet};
pub use fs_db::{load_fs_database, write_fs_database, FsDatabase};
pub use scenario::{load_scenario, write_scenario, OneOrMany, Scenario, ScenarioConfig};

use std::path::PathBuf;

use thiserror::Error;

use crate::geo::{GeoError, GeoPoint};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: missing required column `{column}`")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: invalid JSON: {message}")]
    Json { path: PathBuf, message: String },
    #[error("{path}: not a GeoJSON FeatureCollection")]
    NotFeatureCollection { path: PathBuf },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        source: Box<toml::de::Error>,
    },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error(transparent)]
    Geo(#[from] GeoError),
}

/// A rejected input row/feature with its location and reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDiagnostic {
    /// 1-based data row (CSV) or feature index (GeoJSON).
    pub row: usize,
    /// Offending field, when attributable to one.
    pub field: Option<String>,
    pub message: String,
}

impl std::fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.field {
            Some(field) => write!(f, "row {}: field `{}`: {}", self.row, field, self.message),
            None => write!(f, "row {}: {}", self.row, self.message),
        }
    }
}

/// One directed fixed point-to-point link: the receiver under study plus
/// the transmitter it aims at.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedStation {
    pub pair_id: String,
    pub link_id: String,
    pub rx_pos: GeoPoint,
    pub rx_height_m: f64,
    pub tx_pos: GeoPoint,
    pub max_gain_dbi: f64,
    pub beamwidth_deg: f64,
    pub tilt_deg: f64,
    pub noise_figure_db: f64,
    pub center_freq_ghz: f64,
    pub bandwidth_mhz: f64,
}

impl FixedStation {
    /// Checks the registry invariants; returns the offending field and a
    /// message on failure.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if self.rx_pos == self.tx_pos {
            return Err((
                "tx_lon",
                "rx and tx coincide (zero-length beam axis)".to_string(),
            ));
        }
        if !self.rx_height_m.is_finite() || self.rx_height_m < 0.0 {
            return Err((
                "rx_height_m",
                format!("height {} must be >= 0", self.rx_height_m),
            ));
        }
        if !(self.beamwidth_deg > 0.0 && self.beamwidth_deg <= 1.2) {
            return Err((
                "beamwidth_deg",
                format!("beamwidth {} outside (0, 1.2] degrees", self.beamwidth_deg),
            ));
        }
        let f = self.center_freq_ghz;
        let in_band = (71.0..=76.0).contains(&f) || (81.0..=86.0).contains(&f);
        if !in_band {
            return Err((
                "center_freq_ghz",
                format!("{f} GHz outside [71, 76] or [81, 86]"),
            ));
        }
        if !self.bandwidth_mhz.is_finite() || self.bandwidth_mhz <= 0.0 {
            return Err((
                "bandwidth_mhz",
                format!("bandwidth {} must be positive", self.bandwidth_mhz),
            ));
        }
        for (name, v) in [
            ("max_gain_dbi", self.max_gain_dbi),
            ("tilt_deg", self.tilt_deg),
            ("noise_figure_db", self.noise_figure_db),
        ] {
            if !v.is_finite() {
                return Err((name, format!("{v} is not finite")));
            }
        }
        Ok(())
    }
}
