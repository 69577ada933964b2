//! Building footprints and segment-vs-polygon intersection.
//!
//! A footprint is a simple (non-self-intersecting) polygon with a roof
//! height. The intersection test reports *where* a sight line first meets
//! the footprint, because the blockage rule needs the entry distance to
//! interpolate the ray height at the wall.

use super::{GeoError, PlanarPoint};

/// Relative tolerance for parallel/collinear classification.
const REL_EPS: f64 = 1e-12;
/// Absolute tolerance (meters) for on-boundary point tests.
const BOUNDARY_EPS_M: f64 = 1e-9;

/// A simple polygon with a roof height, in planar coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Footprint {
    vertices: Vec<PlanarPoint>,
    height_m: f64,
    bbox: BBox,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BBox {
    fn of(points: &[PlanarPoint]) -> Self {
        let mut b = BBox {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        };
        for p in points {
            b.min_x = b.min_x.min(p.x_m);
            b.min_y = b.min_y.min(p.y_m);
            b.max_x = b.max_x.max(p.x_m);
            b.max_y = b.max_y.max(p.y_m);
        }
        b
    }
}

impl Footprint {
    /// Builds a validated footprint from an open or closed vertex ring.
    ///
    /// A trailing vertex equal to the first (GeoJSON-style ring closure) is
    /// dropped, as are exact consecutive duplicates. The remaining ring must
    /// have at least three vertices, a strictly positive area, no
    /// self-intersections, and a positive finite height.
    pub fn new(vertices: Vec<PlanarPoint>, height_m: f64) -> Result<Self, GeoError> {
        if !height_m.is_finite() || height_m <= 0.0 {
            return Err(GeoError::InvalidHeight(height_m));
        }
        let vertices = validate_simple_ring(vertices)?;
        let bbox = BBox::of(&vertices);
        Ok(Self {
            vertices,
            height_m,
            bbox,
        })
    }

    pub fn vertices(&self) -> &[PlanarPoint] {
        &self.vertices
    }

    pub fn height_m(&self) -> f64 {
        self.height_m
    }

    pub(crate) fn bbox(&self) -> BBox {
        self.bbox
    }

    /// True if `p` is inside the footprint or on its boundary.
    pub fn contains(&self, p: PlanarPoint) -> bool {
        if p.x_m < self.bbox.min_x - BOUNDARY_EPS_M
            || p.x_m > self.bbox.max_x + BOUNDARY_EPS_M
            || p.y_m < self.bbox.min_y - BOUNDARY_EPS_M
            || p.y_m > self.bbox.max_y + BOUNDARY_EPS_M
        {
            return false;
        }
        polygon_contains(&self.vertices, p)
    }
}

/// Normalizes and validates a polygon ring.
///
/// Drops a GeoJSON-style closing vertex and exact consecutive duplicates,
/// then requires at least three vertices, finite coordinates, a nonzero
/// area, and no self-intersection. Returns the cleaned open ring.
pub fn validate_simple_ring(mut vertices: Vec<PlanarPoint>) -> Result<Vec<PlanarPoint>, GeoError> {
    if vertices
        .iter()
        .any(|v| !v.x_m.is_finite() || !v.y_m.is_finite())
    {
        return Err(GeoError::NonFiniteCoordinate);
    }
    if vertices.len() >= 2 && vertices.first() == vertices.last() {
        vertices.pop();
    }
    vertices.dedup();
    if vertices.len() < 3 {
        return Err(GeoError::TooFewVertices(vertices.len()));
    }
    // A fully collinear ring is degenerate, not self-intersecting; a
    // crossing ring can also have zero shoelace area (cancellation), so
    // collinearity and simplicity are decided before the area threshold.
    if all_collinear(&vertices) {
        return Err(GeoError::DegenerateRing);
    }
    if !ring_is_simple(&vertices) {
        return Err(GeoError::SelfIntersectingRing);
    }
    if ring_area_m2(&vertices).abs() < 1e-6 {
        return Err(GeoError::DegenerateRing);
    }
    Ok(vertices)
}

fn all_collinear(ring: &[PlanarPoint]) -> bool {
    let v0 = ring[0];
    let dx = ring[1].x_m - v0.x_m;
    let dy = ring[1].y_m - v0.y_m;
    let scale = ring
        .iter()
        .map(|v| (v.x_m - v0.x_m).abs() + (v.y_m - v0.y_m).abs())
        .fold(1.0, f64::max);
    ring.iter()
        .all(|v| cross2(dx, dy, v.x_m - v0.x_m, v.y_m - v0.y_m).abs() <= REL_EPS * scale * scale)
}

/// Signed shoelace area of a vertex ring, in square meters.
pub(crate) fn ring_area_m2(ring: &[PlanarPoint]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.x_m * b.y_m - b.x_m * a.y_m;
    }
    acc * 0.5
}

fn cross2(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    ax * by - ay * bx
}

fn point_on_segment(p: PlanarPoint, a: PlanarPoint, b: PlanarPoint) -> bool {
    let abx = b.x_m - a.x_m;
    let aby = b.y_m - a.y_m;
    let apx = p.x_m - a.x_m;
    let apy = p.y_m - a.y_m;
    let scale = (abx.abs() + aby.abs()).max(1.0);
    if cross2(abx, aby, apx, apy).abs() > BOUNDARY_EPS_M * scale {
        return false;
    }
    p.x_m >= a.x_m.min(b.x_m) - BOUNDARY_EPS_M
        && p.x_m <= a.x_m.max(b.x_m) + BOUNDARY_EPS_M
        && p.y_m >= a.y_m.min(b.y_m) - BOUNDARY_EPS_M
        && p.y_m <= a.y_m.max(b.y_m) + BOUNDARY_EPS_M
}

/// True if `p` lies inside the ring or on its boundary (even-odd rule).
pub fn polygon_contains(ring: &[PlanarPoint], p: PlanarPoint) -> bool {
    let n = ring.len();
    for i in 0..n {
        if point_on_segment(p, ring[i], ring[(i + 1) % n]) {
            return true;
        }
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let pi = ring[i];
        let pj = ring[j];
        if (pi.y_m > p.y_m) != (pj.y_m > p.y_m) {
            let x_cross = pi.x_m + (p.y_m - pi.y_m) * (pj.x_m - pi.x_m) / (pj.y_m - pi.y_m);
            if p.x_m < x_cross {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Earliest contact parameter `t` in `[0, 1]` along `a -> b` with segment
/// `c -> d`, or `None` if the segments do not touch. Endpoint grazing and
/// collinear overlap both count as contact.
fn segment_entry_t(a: PlanarPoint, b: PlanarPoint, c: PlanarPoint, d: PlanarPoint) -> Option<f64> {
    let rx = b.x_m - a.x_m;
    let ry = b.y_m - a.y_m;
    let sx = d.x_m - c.x_m;
    let sy = d.y_m - c.y_m;
    let qpx = c.x_m - a.x_m;
    let qpy = c.y_m - a.y_m;
    let denom = cross2(rx, ry, sx, sy);
    let scale = (rx.abs() + ry.abs()).max(sx.abs() + sy.abs()).max(1.0);

    if denom.abs() <= REL_EPS * scale * scale {
        // Parallel. Only collinear segments can still touch.
        if cross2(qpx, qpy, rx, ry).abs() > BOUNDARY_EPS_M * scale {
            return None;
        }
        let len2 = rx * rx + ry * ry;
        if len2 == 0.0 {
            return None;
        }
        let t1 = (qpx * rx + qpy * ry) / len2;
        let t2 = ((d.x_m - a.x_m) * rx + (d.y_m - a.y_m) * ry) / len2;
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        if hi < -REL_EPS || lo > 1.0 + REL_EPS {
            return None;
        }
        Some(lo.clamp(0.0, 1.0))
    } else {
        let t = cross2(qpx, qpy, sx, sy) / denom;
        let u = cross2(qpx, qpy, rx, ry) / denom;
        if (-REL_EPS..=1.0 + REL_EPS).contains(&t) && (-REL_EPS..=1.0 + REL_EPS).contains(&u) {
            Some(t.clamp(0.0, 1.0))
        } else {
            None
        }
    }
}

/// Tests a sight line `a -> b` against a footprint.
///
/// Returns the distance from `a` (meters) at which the line first meets the
/// footprint: `Some(0.0)` when `a` starts inside or on the boundary,
/// `Some(d)` for the earliest wall contact, `None` for a clean miss.
/// Touching a wall or corner counts as a hit.
pub fn segment_intersects_footprint(
    a: PlanarPoint,
    b: PlanarPoint,
    footprint: &Footprint,
) -> Option<f64> {
    if footprint.contains(a) {
        return Some(0.0);
    }
    let ring = footprint.vertices();
    let n = ring.len();
    let mut best_t: Option<f64> = None;
    for i in 0..n {
        if let Some(t) = segment_entry_t(a, b, ring[i], ring[(i + 1) % n]) {
            best_t = Some(match best_t {
                Some(cur) => cur.min(t),
                None => t,
            });
        }
    }
    best_t.map(|t| t * a.distance_to(b))
}

fn ring_is_simple(ring: &[PlanarPoint]) -> bool {
    let n = ring.len();
    for i in 0..n {
        let a1 = ring[i];
        let b1 = ring[(i + 1) % n];
        for j in (i + 1)..n {
            let a2 = ring[j];
            let b2 = ring[(j + 1) % n];
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Shared-endpoint edges may only touch at that endpoint; a
                // fold-back (antiparallel collinear continuation) is a spike.
                let d1x = b1.x_m - a1.x_m;
                let d1y = b1.y_m - a1.y_m;
                let d2x = b2.x_m - a2.x_m;
                let d2y = b2.y_m - a2.y_m;
                let scale = (d1x.abs() + d1y.abs()).max(d2x.abs() + d2y.abs()).max(1.0);
                if cross2(d1x, d1y, d2x, d2y).abs() <= REL_EPS * scale * scale
                    && d1x * d2x + d1y * d2y < 0.0
                {
                    return false;
                }
            } else if segment_entry_t(a1, b1, a2, b2).is_some() {
                return false;
            }
        }
    }
    true
}
