//! Planar geometry for interference studies.
//!
//! Everything downstream of ingestion works in a local tangent plane:
//! geographic coordinates are projected once around a scenario origin and
//! all distance/angle math happens in meters. The module provides
//!
//! * an equirectangular projection ([`project`] / [`unproject`]) valid for
//!   city-scale scenes,
//! * building footprints with robust segment intersection tests,
//! * a uniform-grid index ([`BuildingIndex`]) so blockage queries don't scan
//!   every footprint,
//! * the link-blockage predicate ([`is_blocked`]), and
//! * off-axis angle computations for both ends of an interference path.

mod angles;
mod blockage;
mod footprint;
mod index;
mod projection;

pub use angles::{fold_deg, fs_off_axis, interference_axis, ue_off_axis};
pub use blockage::{blocks_link, is_blocked, BlockageOutcome, BlockageQuery};
pub use footprint::{
    polygon_contains, segment_intersects_footprint, validate_simple_ring, Footprint,
};
pub use index::BuildingIndex;
pub use projection::{great_circle_distance_m, project, unproject, EARTH_RADIUS_M};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by geometry construction and queries.
#[derive(Debug, Error)]
pub enum GeoError {
    #[error("longitude {0} out of range [-180, 180]")]
    LongitudeOutOfRange(f64),
    #[error("latitude {0} out of range [-90, 90]")]
    LatitudeOutOfRange(f64),
    #[error("coordinate is not finite")]
    NonFiniteCoordinate,
    #[error("point ({lon_deg}, {lat_deg}) lies more than 1 degree from the scenario origin")]
    TooFarFromOrigin { lon_deg: f64, lat_deg: f64 },
    #[error("footprint needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("footprint height must be positive and finite, got {0}")]
    InvalidHeight(f64),
    #[error("footprint ring is degenerate (zero area)")]
    DegenerateRing,
    #[error("footprint ring is self-intersecting")]
    SelfIntersectingRing,
    #[error("fixed link has zero length (tx and rx coincide)")]
    ZeroLengthLink,
    #[error("user terminal coincides with the victim receiver")]
    CoincidentEndpoints,
}

/// A WGS-84 position in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lon_deg: f64,
    pub lat_deg: f64,
}

impl GeoPoint {
    /// Builds a validated geographic point.
    pub fn new(lon_deg: f64, lat_deg: f64) -> Result<Self, GeoError> {
        if !lon_deg.is_finite() || !lat_deg.is_finite() {
            return Err(GeoError::NonFiniteCoordinate);
        }
        if !(-180.0..=180.0).contains(&lon_deg) {
            return Err(GeoError::LongitudeOutOfRange(lon_deg));
        }
        if !(-90.0..=90.0).contains(&lat_deg) {
            return Err(GeoError::LatitudeOutOfRange(lat_deg));
        }
        Ok(Self { lon_deg, lat_deg })
    }
}

/// A position in the local tangent plane, meters east (`x_m`) and north
/// (`y_m`) of the scenario origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x_m: f64,
    pub y_m: f64,
}

impl PlanarPoint {
    pub fn new(x_m: f64, y_m: f64) -> Self {
        Self { x_m, y_m }
    }

    /// Euclidean distance to `other` in meters.
    pub fn distance_to(&self, other: PlanarPoint) -> f64 {
        (other.x_m - self.x_m).hypot(other.y_m - self.y_m)
    }
}

/// Off-axis angles between an antenna's boresight and an interference path.
///
/// `azimuth_deg` is folded into `[0, 180]`; `elevation_deg` is a signed
/// offset in `(-180, 180]` (patterns consume its magnitude).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffAxisAngles {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
}
