//! Line-of-sight blockage between a user terminal and a victim receiver.
//!
//! The sight line runs from the terminal at height `h_U` up to the receiver
//! at height `h_F`. Where the line crosses a footprint wall at ground
//! distance `d_BL` from the terminal, similar triangles give its height
//! above the terminal as `h = d_BL * (h_F - h_U) / d_F`. The link is blocked
//! when that height (plus the terminal height) does not clear the roof:
//! `h + h_U <= h_BL`. Touching the roof exactly counts as blocked.

use super::{segment_intersects_footprint, BuildingIndex, Footprint, PlanarPoint};

/// One terminal-to-receiver sight line.
///
/// Callers must ensure `ue_pos != fs_pos` and non-negative heights; the
/// simulation engine guarantees both before querying.
#[derive(Debug, Clone, Copy)]
pub struct BlockageQuery {
    pub ue_pos: PlanarPoint,
    pub ue_height_m: f64,
    pub fs_pos: PlanarPoint,
    pub fs_height_m: f64,
}

/// Result of a blockage query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockageOutcome {
    pub blocked: bool,
    /// Index (into the queried set) of the first footprint found blocking.
    pub blocking_footprint: Option<u32>,
}

/// Applies the similar-triangles roof test to a single footprint.
///
/// This is the whole decision rule; the spatial index only narrows which
/// footprints get tested. A footprint containing the terminal's ground
/// position yields entry distance 0 and therefore ray height `h_U`, which
/// blocks whenever the roof is at or above the terminal.
pub fn blocks_link(footprint: &Footprint, q: &BlockageQuery) -> bool {
    let Some(d_bl_m) = segment_intersects_footprint(q.ue_pos, q.fs_pos, footprint) else {
        return false;
    };
    let d_f_m = q.ue_pos.distance_to(q.fs_pos);
    debug_assert!(d_f_m > 0.0, "blockage query endpoints must be distinct");
    let ray_height_m = d_bl_m * (q.fs_height_m - q.ue_height_m) / d_f_m;
    ray_height_m + q.ue_height_m <= footprint.height_m()
}

/// Tests the sight line against every indexed footprint near it.
///
/// An empty index means an open scene: never blocked.
pub fn is_blocked(q: &BlockageQuery, buildings: &BuildingIndex) -> BlockageOutcome {
    for id in buildings.candidates_for_segment(q.ue_pos, q.fs_pos) {
        if blocks_link(&buildings.footprints()[id as usize], q) {
            return BlockageOutcome {
                blocked: true,
                blocking_footprint: Some(id),
            };
        }
    }
    BlockageOutcome {
        blocked: false,
        blocking_footprint: None,
    }
}
