//! Uniform-grid spatial index over building footprints.
//!
//! Footprint ids are binned by bounding box into ~50 m cells. Queries gather
//! candidates from every cell overlapping the query's bounding box, so the
//! candidate set always contains every footprint whose bounding box touches
//! the query's — the index only prunes, it never decides.

use super::footprint::BBox;
use super::{Footprint, PlanarPoint};

/// Default cell edge, sized to typical urban footprint dimensions.
pub const DEFAULT_CELL_M: f64 = 50.0;

/// Hard cap on cells per axis; the cell size grows to respect it when a
/// scene is unusually spread out.
const MAX_CELLS_PER_AXIS: usize = 4096;

/// Grid-bucketed set of building footprints.
#[derive(Debug, Clone)]
pub struct BuildingIndex {
    footprints: Vec<Footprint>,
    min_x: f64,
    min_y: f64,
    cell_m: f64,
    cols: usize,
    rows: usize,
    cells: Vec<Vec<u32>>,
}

impl BuildingIndex {
    /// Indexes `footprints` with the default cell size.
    pub fn build(footprints: Vec<Footprint>) -> Self {
        Self::with_cell_size(footprints, DEFAULT_CELL_M)
    }

    /// Indexes `footprints` with an explicit cell size in meters.
    pub fn with_cell_size(footprints: Vec<Footprint>, cell_m: f64) -> Self {
        assert!(
            cell_m.is_finite() && cell_m > 0.0,
            "cell size must be positive"
        );
        if footprints.is_empty() {
            return Self {
                footprints,
                min_x: 0.0,
                min_y: 0.0,
                cell_m,
                cols: 0,
                rows: 0,
                cells: Vec::new(),
            };
        }
        let mut extent = footprints[0].bbox();
        for f in &footprints[1..] {
            let b = f.bbox();
            extent.min_x = extent.min_x.min(b.min_x);
            extent.min_y = extent.min_y.min(b.min_y);
            extent.max_x = extent.max_x.max(b.max_x);
            extent.max_y = extent.max_y.max(b.max_y);
        }
        let span_x = (extent.max_x - extent.min_x).max(0.0);
        let span_y = (extent.max_y - extent.min_y).max(0.0);
        let max_axis = MAX_CELLS_PER_AXIS as f64;
        let cell_m = cell_m.max(span_x / max_axis).max(span_y / max_axis);
        let cols = ((span_x / cell_m).ceil() as usize).max(1);
        let rows = ((span_y / cell_m).ceil() as usize).max(1);
        let mut cells = vec![Vec::new(); cols * rows];
        for (id, f) in footprints.iter().enumerate() {
            let b = f.bbox();
            let (c0, c1) = clamp_axis(b.min_x, b.max_x, extent.min_x, cell_m, cols);
            let (r0, r1) = clamp_axis(b.min_y, b.max_y, extent.min_y, cell_m, rows);
            for r in r0..=r1 {
                for c in c0..=c1 {
                    cells[r * cols + c].push(id as u32);
                }
            }
        }
        Self {
            footprints,
            min_x: extent.min_x,
            min_y: extent.min_y,
            cell_m,
            cols,
            rows,
            cells,
        }
    }

    pub fn footprints(&self) -> &[Footprint] {
        &self.footprints
    }

    pub fn len(&self) -> usize {
        self.footprints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.footprints.is_empty()
    }

    /// Ids of every indexed footprint whose bounding box intersects the
    /// bounding box of segment `a -> b`, ascending and deduplicated. May
    /// contain footprints the segment misses; never omits one it touches.
    pub fn candidates_for_segment(&self, a: PlanarPoint, b: PlanarPoint) -> Vec<u32> {
        let query = BBox {
            min_x: a.x_m.min(b.x_m),
            min_y: a.y_m.min(b.y_m),
            max_x: a.x_m.max(b.x_m),
            max_y: a.y_m.max(b.y_m),
        };
        self.candidates_in_bbox(query)
    }

    fn candidates_in_bbox(&self, query: BBox) -> Vec<u32> {
        if self.is_empty() {
            return Vec::new();
        }
        let grid_max_x = self.min_x + self.cell_m * self.cols as f64;
        let grid_max_y = self.min_y + self.cell_m * self.rows as f64;
        if query.max_x < self.min_x
            || query.min_x > grid_max_x
            || query.max_y < self.min_y
            || query.min_y > grid_max_y
        {
            return Vec::new();
        }
        let (c0, c1) = clamp_axis(query.min_x, query.max_x, self.min_x, self.cell_m, self.cols);
        let (r0, r1) = clamp_axis(query.min_y, query.max_y, self.min_y, self.cell_m, self.rows);
        let mut ids = Vec::new();
        for r in r0..=r1 {
            for c in c0..=c1 {
                ids.extend_from_slice(&self.cells[r * self.cols + c]);
            }
        }
        ids.sort_unstable();
        ids.dedup();
        // Cell granularity over-approximates; keep only true bbox overlaps.
        ids.retain(|&id| {
            let b = self.footprints[id as usize].bbox();
            b.min_x <= query.max_x
                && b.max_x >= query.min_x
                && b.min_y <= query.max_y
                && b.max_y >= query.min_y
        });
        ids
    }

    /// Id of some footprint containing `p`, if any.
    pub fn footprint_containing(&self, p: PlanarPoint) -> Option<u32> {
        let query = BBox {
            min_x: p.x_m,
            min_y: p.y_m,
            max_x: p.x_m,
            max_y: p.y_m,
        };
        self.candidates_in_bbox(query)
            .into_iter()
            .find(|&id| self.footprints[id as usize].contains(p))
    }
}

/// Maps a coordinate interval to an inclusive cell range along one axis.
fn clamp_axis(lo: f64, hi: f64, origin: f64, cell_m: f64, n: usize) -> (usize, usize) {
    let last = n - 1;
    let i0 = ((lo - origin) / cell_m).floor().clamp(0.0, last as f64) as usize;
    let i1 = ((hi - origin) / cell_m).floor().clamp(0.0, last as f64) as usize;
    (i0, i1)
}
