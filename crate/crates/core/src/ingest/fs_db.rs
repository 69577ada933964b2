//! Fixed-station registry CSV loader/writer.

use std::io::Write;
use std::path::Path;

use serde::Deserialize;

use super::{FixedStation, IngestError, RowDiagnostic};
use crate::geo::GeoPoint;

pub(crate) const FS_CSV_HEADER: &str = "pair_id,link_id,rx_lon,rx_lat,rx_height_m,tx_lon,tx_lat,\
max_gain_dbi,beamwidth_deg,tilt_deg,noise_figure_db,center_freq_ghz,bandwidth_mhz";

#[derive(Debug, Deserialize)]
struct RawFsRow {
    pair_id: String,
    link_id: String,
    rx_lon: f64,
    rx_lat: f64,
    rx_height_m: f64,
    tx_lon: f64,
    tx_lat: f64,
    max_gain_dbi: f64,
    beamwidth_deg: f64,
    tilt_deg: f64,
    noise_figure_db: f64,
    center_freq_ghz: f64,
    bandwidth_mhz: f64,
}

/// A loaded registry: validated stations plus diagnostics for every
/// rejected row.
#[derive(Debug, Clone)]
pub struct FsDatabase {
    pub stations: Vec<FixedStation>,
    pub rejected: Vec<RowDiagnostic>,
}

/// Loads a station registry CSV.
///
/// File-level problems (unreadable file, missing header column) fail the
/// whole load; row-level problems (unparseable number, invariant violation)
/// reject that row with a diagnostic and keep going. Duplicate
/// (pair, frequency) links are retained — the same pair may run several
/// channels.
pub fn load_fs_database(path: &Path) -> Result<FsDatabase, IngestError> {
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader
        .headers()
        .map_err(|source| IngestError::Csv {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    for column in FS_CSV_HEADER.split(',') {
        if !headers.iter().any(|h| h == column) {
            return Err(IngestError::MissingColumn {
                path: path.to_path_buf(),
                column: column.to_string(),
            });
        }
    }

    let mut stations = Vec::new();
    let mut rejected = Vec::new();
    for (idx, record) in reader.deserialize::<RawFsRow>().enumerate() {
        let row = idx + 1;
        let raw = match record {
            Ok(raw) => raw,
            Err(e) => {
                rejected.push(RowDiagnostic {
                    row,
                    field: None,
                    message: e.to_string(),
                });
                continue;
            }
        };
        match station_from_raw(raw) {
            Ok(st) => stations.push(st),
            Err((field, message)) => rejected.push(RowDiagnostic {
                row,
                field: Some(field.to_string()),
                message,
            }),
        }
    }
    Ok(FsDatabase { stations, rejected })
}

fn station_from_raw(raw: RawFsRow) -> Result<FixedStation, (&'static str, String)> {
    let rx_pos = GeoPoint::new(raw.rx_lon, raw.rx_lat).map_err(|e| ("rx_lon", e.to_string()))?;
    let tx_pos = GeoPoint::new(raw.tx_lon, raw.tx_lat).map_err(|e| ("tx_lon", e.to_string()))?;
    let station = FixedStation {
        pair_id: raw.pair_id,
        link_id: raw.link_id,
        rx_pos,
        rx_height_m: raw.rx_height_m,
        tx_pos,
        max_gain_dbi: raw.max_gain_dbi,
        beamwidth_deg: raw.beamwidth_deg,
        tilt_deg: raw.tilt_deg,
        noise_figure_db: raw.noise_figure_db,
        center_freq_ghz: raw.center_freq_ghz,
        bandwidth_mhz: raw.bandwidth_mhz,
    };
    station.validate()?;
    Ok(station)
}

/// Writes stations in the registry CSV schema. Floats use the shortest
/// representation that parses back to the identical value, so a write/load
/// cycle is lossless.
pub fn write_fs_database<W: Write>(mut w: W, stations: &[FixedStation]) -> std::io::Result<()> {
    writeln!(w, "{FS_CSV_HEADER}")?;
    for s in stations {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.pair_id,
            s.link_id,
            s.rx_pos.lon_deg,
            s.rx_pos.lat_deg,
            s.rx_height_m,
            s.tx_pos.lon_deg,
            s.tx_pos.lat_deg,
            s.max_gain_dbi,
            s.beamwidth_deg,
            s.tilt_deg,
            s.noise_figure_db,
            s.center_freq_ghz,
            s.bandwidth_mhz
        )?;
    }
    Ok(())
}
