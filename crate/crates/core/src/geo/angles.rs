//! Off-axis angles at both ends of an interference path.
//!
//! The victim receiver's boresight runs along its own link (toward its
//! transmitter, plus a mechanical tilt in elevation); the interfering
//! terminal's beam points wherever its serving cell happens to be. Pattern
//! lookups need the angular separation between each antenna's boresight and
//! the terminal-to-receiver interference axis.

use super::{GeoError, OffAxisAngles, PlanarPoint};

/// Folds an angle in degrees to the separation in `[0, 180]`.
///
/// `fold_deg(x) == fold_deg(-x) == fold_deg(360 - x)`; a 350 degree offset
/// is the same 10 degree separation seen from the other side.
pub fn fold_deg(x: f64) -> f64 {
    let m = (x % 360.0).abs();
    m.min(360.0 - m)
}

/// Off-axis angles of the interference path as seen by the victim receiver.
///
/// Azimuth is the planar angle between the receiver's beam axis (aimed at
/// its paired transmitter) and the direction back toward the terminal,
/// via the normalized dot product, so it lands in `[0, 180]`. Elevation is
/// the mechanical tilt plus the depression angle of the terminal below the
/// receiver: `tilt_deg + atan((h_F - h_U) / d_F)`. Negative tilt points at
/// the street.
pub fn fs_off_axis(
    fs_tx: PlanarPoint,
    fs_rx: PlanarPoint,
    fs_rx_height_m: f64,
    tilt_deg: f64,
    ue: PlanarPoint,
    ue_height_m: f64,
) -> Result<OffAxisAngles, GeoError> {
    let bx = fs_rx.x_m - fs_tx.x_m;
    let by = fs_rx.y_m - fs_tx.y_m;
    let beam_len = bx.hypot(by);
    if beam_len == 0.0 {
        return Err(GeoError::ZeroLengthLink);
    }
    let ax = fs_rx.x_m - ue.x_m;
    let ay = fs_rx.y_m - ue.y_m;
    let axis_len = ax.hypot(ay);
    if axis_len == 0.0 {
        return Err(GeoError::CoincidentEndpoints);
    }
    let cos_az = ((bx * ax + by * ay) / (beam_len * axis_len)).clamp(-1.0, 1.0);
    let azimuth_deg = cos_az.acos().to_degrees();
    let d_f_m = ue.distance_to(fs_rx);
    let elevation_deg = tilt_deg + ((fs_rx_height_m - ue_height_m) / d_f_m).atan().to_degrees();
    Ok(OffAxisAngles {
        azimuth_deg,
        elevation_deg,
    })
}

/// Off-axis angles of the interference path as seen by the terminal.
///
/// Raw differences beam-minus-axis are taken mod 360 and folded to `[0, 180]`
/// separations; the quadratic pattern laws are symmetric, so only the
/// separation matters.
pub fn ue_off_axis(
    ue_beam_azimuth_deg: f64,
    ue_beam_elevation_deg: f64,
    azimuth_to_fs_deg: f64,
    elevation_to_fs_deg: f64,
) -> OffAxisAngles {
    OffAxisAngles {
        azimuth_deg: fold_deg(ue_beam_azimuth_deg - azimuth_to_fs_deg),
        elevation_deg: fold_deg(ue_beam_elevation_deg - elevation_to_fs_deg),
    }
}

/// Bearing and elevation of the terminal-to-receiver interference axis.
///
/// Bearing is measured in the planar frame (`atan2(dy, dx)`, normalized to
/// `[0, 360)`), the same frame terminal beam azimuths are drawn in.
/// Elevation is positive when the receiver sits above the terminal.
pub fn interference_axis(
    ue_pos: PlanarPoint,
    ue_height_m: f64,
    fs_pos: PlanarPoint,
    fs_height_m: f64,
) -> (f64, f64) {
    let dx = fs_pos.x_m - ue_pos.x_m;
    let dy = fs_pos.y_m - ue_pos.y_m;
    let mut bearing_deg = dy.atan2(dx).to_degrees();
    if bearing_deg < 0.0 {
        bearing_deg += 360.0;
    }
    let d2d_m = ue_pos.distance_to(fs_pos);
    let elevation_deg = ((fs_height_m - ue_height_m) / d2d_m).atan().to_degrees();
    (bearing_deg, elevation_deg)
}
