//! Equirectangular projection around a scenario origin.
//!
//! City-scale scenes (a few tens of km) tolerate the small-angle
//! approximation: x is scaled by the cosine of the origin latitude, y is
//! linear in latitude. Points more than one degree from the origin are
//! rejected rather than silently distorted.

use super::{GeoError, GeoPoint, PlanarPoint};

/// Mean Earth radius in meters (spherical model).
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Maximum angular offset from the origin the planar approximation accepts.
const MAX_OFFSET_DEG: f64 = 1.0;

/// Projects `p` into the tangent plane anchored at `origin`.
///
/// Returns an error if either coordinate is more than one degree away from
/// the origin, where the flat-earth approximation starts to bend.
pub fn project(p: GeoPoint, origin: GeoPoint) -> Result<PlanarPoint, GeoError> {
    let dlon = p.lon_deg - origin.lon_deg;
    let dlat = p.lat_deg - origin.lat_deg;
    if dlon.abs() > MAX_OFFSET_DEG || dlat.abs() > MAX_OFFSET_DEG {
        return Err(GeoError::TooFarFromOrigin {
            lon_deg: p.lon_deg,
            lat_deg: p.lat_deg,
        });
    }
    let x_m = EARTH_RADIUS_M * dlon.to_radians() * origin.lat_deg.to_radians().cos();
    let y_m = EARTH_RADIUS_M * dlat.to_radians();
    Ok(PlanarPoint { x_m, y_m })
}

/// Inverse of [`project`]: recovers the geographic position of a planar
/// point relative to `origin`.
pub fn unproject(p: PlanarPoint, origin: GeoPoint) -> GeoPoint {
    let dlat = (p.y_m / EARTH_RADIUS_M).to_degrees();
    let dlon = (p.x_m / (EARTH_RADIUS_M * origin.lat_deg.to_radians().cos())).to_degrees();
    GeoPoint {
        lon_deg: origin.lon_deg + dlon,
        lat_deg: origin.lat_deg + dlat,
    }
}

/// Haversine great-circle distance in meters on the spherical Earth model.
///
/// Used for regional analytics (hundreds of km), where the tangent-plane
/// projection is out of its validity range.
pub fn great_circle_distance_m(a: GeoPoint, b: GeoPoint) -> f64 {
    let lat1 = a.lat_deg.to_radians();
    let lat2 = b.lat_deg.to_radians();
    let dlat = (b.lat_deg - a.lat_deg).to_radians();
    let dlon = (b.lon_deg - a.lon_deg).to_radians();
    let s = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * s.sqrt().asin()
}
