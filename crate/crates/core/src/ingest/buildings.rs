//! Building-footprint GeoJSON loader/writer.
//!
//! Accepts a FeatureCollection of Polygon / MultiPolygon features, each
//! carrying a numeric `height_m` property. MultiPolygons are split into one
//! footprint per part; interior rings (courtyards) are dropped and counted,
//! which slightly overstates blockage — the conservative direction.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use super::{IngestError, RowDiagnostic};
use crate::geo::{project, unproject, Footprint, GeoPoint, PlanarPoint};

/// A loaded building set: projected footprints plus per-feature diagnostics
/// and the number of interior rings dropped.
#[derive(Debug, Clone)]
pub struct BuildingSet {
    pub footprints: Vec<Footprint>,
    pub rejected: Vec<RowDiagnostic>,
    pub holes_dropped: usize,
}

/// Loads footprints from GeoJSON and projects them into the plane anchored
/// at `origin`.
pub fn load_buildings(path: &Path, origin: GeoPoint) -> Result<BuildingSet, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let root: Value = serde_json::from_str(&text).map_err(|e| IngestError::Json {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(IngestError::NotFeatureCollection {
            path: path.to_path_buf(),
        });
    }
    let features = root
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| IngestError::NotFeatureCollection {
            path: path.to_path_buf(),
        })?;

    let mut set = BuildingSet {
        footprints: Vec::new(),
        rejected: Vec::new(),
        holes_dropped: 0,
    };
    for (idx, feature) in features.iter().enumerate() {
        let row = idx + 1;
        if let Err(message) = ingest_feature(feature, origin, row, &mut set) {
            set.rejected.push(RowDiagnostic {
                row,
                field: None,
                message,
            });
        }
    }
    Ok(set)
}

fn ingest_feature(
    feature: &Value,
    origin: GeoPoint,
    row: usize,
    set: &mut BuildingSet,
) -> Result<(), String> {
    let height_m = feature
        .get("properties")
        .and_then(|p| p.get("height_m"))
        .and_then(Value::as_f64)
        .ok_or("missing numeric `height_m` property")?;
    if height_m <= 0.0 {
        return Err(format!("non-positive height {height_m}"));
    }
    let geometry = feature.get("geometry").ok_or("missing geometry")?;
    let geom_type = geometry
        .get("type")
        .and_then(Value::as_str)
        .ok_or("geometry without type")?;
    let coords = geometry
        .get("coordinates")
        .and_then(Value::as_array)
        .ok_or("geometry without coordinates")?;

    let polygons: Vec<&Vec<Value>> = match geom_type {
        "Polygon" => vec![coords],
        "MultiPolygon" => coords
            .iter()
            .map(|p| p.as_array().ok_or("malformed MultiPolygon part"))
            .collect::<Result<_, _>>()?,
        other => return Err(format!("unsupported geometry type {other}")),
    };

    for rings in polygons {
        if rings.is_empty() {
            return Err("polygon with no rings".to_string());
        }
        set.holes_dropped += rings.len() - 1;
        let outer = rings[0].as_array().ok_or("malformed outer ring")?;
        let mut planar = Vec::with_capacity(outer.len());
        for vertex in outer {
            planar.push(parse_vertex(vertex, origin)?);
        }
        match Footprint::new(planar, height_m) {
            Ok(fp) => set.footprints.push(fp),
            Err(e) => {
                // One bad part rejects that part only; record and continue.
                set.rejected.push(RowDiagnostic {
                    row,
                    field: None,
                    message: e.to_string(),
                });
            }
        }
    }
    Ok(())
}

fn parse_vertex(vertex: &Value, origin: GeoPoint) -> Result<PlanarPoint, String> {
    let pair = vertex.as_array().ok_or("vertex is not an array")?;
    if pair.len() < 2 {
        return Err("vertex with fewer than 2 coordinates".to_string());
    }
    let lon = pair[0].as_f64().ok_or("non-numeric longitude")?;
    let lat = pair[1].as_f64().ok_or("non-numeric latitude")?;
    let gp = GeoPoint::new(lon, lat).map_err(|e| e.to_string())?;
    project(gp, origin).map_err(|e| e.to_string())
}

/// Writes footprints as a GeoJSON FeatureCollection, unprojecting vertices
/// relative to `origin`. Rings are closed GeoJSON-style.
pub fn write_buildings_geojson<W: Write>(
    mut w: W,
    footprints: &[Footprint],
    origin: GeoPoint,
) -> std::io::Result<()> {
    let features: Vec<Value> = footprints
        .iter()
        .map(|fp| {
            let mut ring: Vec<Value> = fp
                .vertices()
                .iter()
                .map(|&p| {
                    let gp = unproject(p, origin);
                    json!([gp.lon_deg, gp.lat_deg])
                })
                .collect();
            ring.push(ring[0].clone());
            json!({
                "type": "Feature",
                "properties": { "height_m": fp.height_m() },
                "geometry": { "type": "Polygon", "coordinates": [ring] },
            })
        })
        .collect();
    let doc = json!({ "type": "FeatureCollection", "features": features });
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)
}
