//! Antenna gain models for both ends of an interference path.
//!
//! The victim fixed-service receiver uses a regulatory look-up pattern:
//! off-axis attenuations in azimuth and elevation are read from banded
//! tables, summed, and capped by the front-to-back ratio before being
//! subtracted from the boresight gain. The interfering terminal uses a
//! two-stage model — a steerable beam pattern and a fixed element pattern,
//! both quadratic in the off-axis angle — referenced to its maximum EIRP,
//! so [`ue_radiated_dbm`] returns radiated power toward the victim directly
//! in dBm.

use std::io::Read;
use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

use crate::geo::OffAxisAngles;

/// Default terminal beam-pattern 3 dB beamwidth, degrees.
pub const DEFAULT_UE_BEAM_3DB_DEG: f64 = 25.0;
/// Default terminal element-pattern 3 dB beamwidth, degrees.
pub const DEFAULT_UE_ELEMENT_3DB_DEG: f64 = 65.0;
/// Default terminal front-to-back ratio, dB.
pub const DEFAULT_UE_FTBR_DB: f64 = 30.0;
/// Default fixed-station front-to-back ratio, dB.
pub const DEFAULT_FS_FTBR_DB: f64 = 55.0;

/// Built-in 70/80 GHz band pattern table (azimuth and elevation bands),
/// shipped alongside the crate and overridable via [`load_pattern_tables`].
const DEFAULT_PATTERN_CSV: &str = include_str!("../data/fs_pattern_eband.csv");

#[derive(Debug, Error)]
pub enum AntennaError {
    #[error("pattern table has no rows for axis {0}")]
    EmptyTable(&'static str),
    #[error("pattern table must start at 0 degrees, first row starts at {0}")]
    TableStartsLate(f64),
    #[error("pattern table must reach 180 degrees, last row ends at {0}")]
    TableEndsEarly(f64),
    #[error("pattern rows must be contiguous: row starting at {found} should start at {expected}")]
    TableGap { expected: f64, found: f64 },
    #[error("pattern attenuation must be non-decreasing with angle (row starting at {0})")]
    AttenuationDecreasing(f64),
    #[error("pattern row [{lo}, {hi}) is malformed")]
    MalformedRow { lo: f64, hi: f64 },
    #[error("beamwidth {0} outside (0, 1.2] degrees")]
    BeamwidthOutOfRange(f64),
    #[error("front-to-back ratio must be positive, got {0}")]
    InvalidFtbr(f64),
    #[error("gain/EIRP values must be finite")]
    NonFinite,
    #[error("unknown pattern axis {0:?} (expected \"az\" or \"el\")")]
    UnknownAxis(String),
    #[error("failed to read pattern table: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse pattern table: {0}")]
    Csv(#[from] csv::Error),
}

/// One attenuation band: applies on `[angle_lo_deg, angle_hi_deg)`, except
/// the final band which is closed at 180.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternRow {
    pub angle_lo_deg: f64,
    pub angle_hi_deg: f64,
    pub attenuation_db: f64,
}

/// Banded off-axis attenuation over `[0, 180]` degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternTable {
    rows: Vec<PatternRow>,
}

impl PatternTable {
    /// Validates that `rows` tile `[0, 180]` contiguously with
    /// non-decreasing attenuation.
    pub fn new(rows: Vec<PatternRow>) -> Result<Self, AntennaError> {
        if rows.is_empty() {
            return Err(AntennaError::EmptyTable("(any)"));
        }
        for r in &rows {
            if !r.angle_lo_deg.is_finite()
                || !r.angle_hi_deg.is_finite()
                || !r.attenuation_db.is_finite()
                || r.angle_lo_deg >= r.angle_hi_deg
                || r.attenuation_db < 0.0
            {
                return Err(AntennaError::MalformedRow {
                    lo: r.angle_lo_deg,
                    hi: r.angle_hi_deg,
                });
            }
        }
        if rows[0].angle_lo_deg != 0.0 {
            return Err(AntennaError::TableStartsLate(rows[0].angle_lo_deg));
        }
        for w in rows.windows(2) {
            if w[1].angle_lo_deg != w[0].angle_hi_deg {
                return Err(AntennaError::TableGap {
                    expected: w[0].angle_hi_deg,
                    found: w[1].angle_lo_deg,
                });
            }
            if w[1].attenuation_db < w[0].attenuation_db {
                return Err(AntennaError::AttenuationDecreasing(w[1].angle_lo_deg));
            }
        }
        let last = rows.last().unwrap();
        if last.angle_hi_deg != 180.0 {
            return Err(AntennaError::TableEndsEarly(last.angle_hi_deg));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[PatternRow] {
        &self.rows
    }

    /// Attenuation for a folded off-axis angle in `[0, 180]`.
    pub fn attenuation_db(&self, angle_deg: f64) -> f64 {
        assert!(
            (0.0..=180.0).contains(&angle_deg),
            "pattern lookup angle {angle_deg} not folded into [0, 180]"
        );
        for r in &self.rows {
            if angle_deg < r.angle_hi_deg {
                return r.attenuation_db;
            }
        }
        // angle_deg == 180 exactly: the last band is closed.
        self.rows.last().unwrap().attenuation_db
    }
}

#[derive(Debug, Deserialize)]
struct PatternCsvRow {
    axis: String,
    angle_lo_deg: f64,
    angle_hi_deg: f64,
    attenuation_db: f64,
}

fn parse_pattern_tables<R: Read>(reader: R) -> Result<(PatternTable, PatternTable), AntennaError> {
    let mut az_rows = Vec::new();
    let mut el_rows = Vec::new();
    let mut csv_reader = csv::Reader::from_reader(reader);
    for record in csv_reader.deserialize::<PatternCsvRow>() {
        let row = record?;
        let parsed = PatternRow {
            angle_lo_deg: row.angle_lo_deg,
            angle_hi_deg: row.angle_hi_deg,
            attenuation_db: row.attenuation_db,
        };
        match row.axis.as_str() {
            "az" => az_rows.push(parsed),
            "el" => el_rows.push(parsed),
            other => return Err(AntennaError::UnknownAxis(other.to_string())),
        }
    }
    if az_rows.is_empty() {
        return Err(AntennaError::EmptyTable("az"));
    }
    if el_rows.is_empty() {
        return Err(AntennaError::EmptyTable("el"));
    }
    Ok((PatternTable::new(az_rows)?, PatternTable::new(el_rows)?))
}

/// Loads `(azimuth, elevation)` pattern tables from a CSV file with columns
/// `axis,angle_lo_deg,angle_hi_deg,attenuation_db`, where `axis` is `az` or
/// `el` and each axis's rows tile `[0, 180]`.
pub fn load_pattern_tables(path: &Path) -> Result<(PatternTable, PatternTable), AntennaError> {
    let file = std::fs::File::open(path)?;
    parse_pattern_tables(file)
}

/// The built-in e-band pattern tables `(azimuth, elevation)`.
pub fn default_pattern_tables() -> &'static (PatternTable, PatternTable) {
    static TABLES: OnceLock<(PatternTable, PatternTable)> = OnceLock::new();
    TABLES.get_or_init(|| {
        parse_pattern_tables(DEFAULT_PATTERN_CSV.as_bytes())
            .expect("built-in pattern table must be valid")
    })
}

/// Receive-side antenna description of a fixed point-to-point station.
#[derive(Debug, Clone)]
pub struct FsAntenna {
    pub max_gain_dbi: f64,
    pub beamwidth_deg: f64,
    pub tilt_deg: f64,
    pub ftbr_db: f64,
    az_table: PatternTable,
    el_table: PatternTable,
}

impl FsAntenna {
    pub fn new(
        max_gain_dbi: f64,
        beamwidth_deg: f64,
        tilt_deg: f64,
        ftbr_db: f64,
        az_table: PatternTable,
        el_table: PatternTable,
    ) -> Result<Self, AntennaError> {
        if !max_gain_dbi.is_finite() || !tilt_deg.is_finite() {
            return Err(AntennaError::NonFinite);
        }
        if !(beamwidth_deg > 0.0 && beamwidth_deg <= 1.2) {
            return Err(AntennaError::BeamwidthOutOfRange(beamwidth_deg));
        }
        if !(ftbr_db.is_finite() && ftbr_db > 0.0) {
            return Err(AntennaError::InvalidFtbr(ftbr_db));
        }
        Ok(Self {
            max_gain_dbi,
            beamwidth_deg,
            tilt_deg,
            ftbr_db,
            az_table,
            el_table,
        })
    }

    /// Builds a station antenna on the built-in e-band tables with the
    /// default 55 dB front-to-back ratio.
    pub fn with_default_pattern(
        max_gain_dbi: f64,
        beamwidth_deg: f64,
        tilt_deg: f64,
    ) -> Result<Self, AntennaError> {
        let (az, el) = default_pattern_tables().clone();
        Self::new(
            max_gain_dbi,
            beamwidth_deg,
            tilt_deg,
            DEFAULT_FS_FTBR_DB,
            az,
            el,
        )
    }
}

/// Receive gain of a fixed station toward an off-axis interferer:
/// boresight gain minus the FTBR-capped sum of the azimuth and elevation
/// band attenuations. Elevation uses the magnitude of the (signed) offset.
pub fn fs_gain_dbi(a: &FsAntenna, off: &OffAxisAngles) -> f64 {
    let a_az_db = a.az_table.attenuation_db(off.azimuth_deg);
    let a_el_db = a
        .el_table
        .attenuation_db(off.elevation_deg.abs().min(180.0));
    a.max_gain_dbi - (a_az_db + a_el_db).min(a.ftbr_db)
}

/// Transmit-side model of an interfering user terminal.
#[derive(Debug, Clone, Copy)]
pub struct UeAntenna {
    pub eirp_max_dbm: f64,
    pub beam_3db_deg: f64,
    pub element_3db_deg: f64,
    pub ftbr_db: f64,
    /// Also floor the beam-pattern sum at the front-to-back ratio. The
    /// literal quadratic law grows without bound (622 dB at 180 degrees
    /// off-axis with a 25 degree beam), which no physical antenna does;
    /// disable only to reproduce the uncapped equation.
    pub beam_cap: bool,
}

impl UeAntenna {
    pub fn new(
        eirp_max_dbm: f64,
        beam_3db_deg: f64,
        element_3db_deg: f64,
        ftbr_db: f64,
        beam_cap: bool,
    ) -> Result<Self, AntennaError> {
        if !eirp_max_dbm.is_finite() {
            return Err(AntennaError::NonFinite);
        }
        if !(beam_3db_deg.is_finite() && beam_3db_deg > 0.0) {
            return Err(AntennaError::BeamwidthOutOfRange(beam_3db_deg));
        }
        if !(element_3db_deg.is_finite() && element_3db_deg > 0.0) {
            return Err(AntennaError::BeamwidthOutOfRange(element_3db_deg));
        }
        if !(ftbr_db.is_finite() && ftbr_db > 0.0) {
            return Err(AntennaError::InvalidFtbr(ftbr_db));
        }
        Ok(Self {
            eirp_max_dbm,
            beam_3db_deg,
            element_3db_deg,
            ftbr_db,
            beam_cap,
        })
    }

    /// Terminal with the default beamwidths (25/65 degrees), 30 dB FTBR,
    /// and the beam cap on.
    pub fn with_eirp(eirp_max_dbm: f64) -> Result<Self, AntennaError> {
        Self::new(
            eirp_max_dbm,
            DEFAULT_UE_BEAM_3DB_DEG,
            DEFAULT_UE_ELEMENT_3DB_DEG,
            DEFAULT_UE_FTBR_DB,
            true,
        )
    }
}

/// Per-axis attenuation pair, dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAttenuation {
    pub azimuth_db: f64,
    pub elevation_db: f64,
}

impl AxisAttenuation {
    pub fn sum_db(&self) -> f64 {
        self.azimuth_db + self.elevation_db
    }
}

fn quadratic_db(angle_deg: f64, width_3db_deg: f64) -> f64 {
    let ratio = angle_deg / width_3db_deg;
    12.0 * ratio * ratio
}

/// Beam-pattern attenuation of the terminal, per axis, uncapped.
pub fn ue_beam_attenuation_db(a: &UeAntenna, off: &OffAxisAngles) -> AxisAttenuation {
    AxisAttenuation {
        azimuth_db: quadratic_db(off.azimuth_deg, a.beam_3db_deg),
        elevation_db: quadratic_db(off.elevation_deg, a.beam_3db_deg),
    }
}

/// Element-pattern attenuation of the terminal, per axis, uncapped.
pub fn ue_element_attenuation_db(a: &UeAntenna, off: &OffAxisAngles) -> AxisAttenuation {
    AxisAttenuation {
        azimuth_db: quadratic_db(off.azimuth_deg, a.element_3db_deg),
        elevation_db: quadratic_db(off.elevation_deg, a.element_3db_deg),
    }
}

/// Power radiated by the terminal toward the victim, dBm:
/// maximum EIRP minus the beam-pattern terms minus the FTBR-capped element
/// terms. With `beam_cap` the beam-pattern sum is FTBR-capped too.
pub fn ue_radiated_dbm(a: &UeAntenna, off: &OffAxisAngles) -> f64 {
    let beam = ue_beam_attenuation_db(a, off).sum_db();
    let elem = ue_element_attenuation_db(a, off).sum_db().min(a.ftbr_db);
    let beam = if a.beam_cap {
        beam.min(a.ftbr_db)
    } else {
        beam
    };
    a.eirp_max_dbm - beam - elem
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn off(az: f64, el: f64) -> OffAxisAngles {
        OffAxisAngles {
            azimuth_deg: az,
            elevation_deg: el,
        }
    }

    /// Coarse synthetic table used so tests don't depend on the shipped
    /// band values: 0 dB to 1 deg, 20 dB to 5, 40 dB to 30, 80 dB beyond.
    fn steep_table() -> PatternTable {
        PatternTable::new(vec![
            PatternRow {
                angle_lo_deg: 0.0,
                angle_hi_deg: 1.0,
                attenuation_db: 0.0,
            },
            PatternRow {
                angle_lo_deg: 1.0,
                angle_hi_deg: 5.0,
                attenuation_db: 20.0,
            },
            PatternRow {
                angle_lo_deg: 5.0,
                angle_hi_deg: 30.0,
                attenuation_db: 40.0,
            },
            PatternRow {
                angle_lo_deg: 30.0,
                angle_hi_deg: 180.0,
                attenuation_db: 80.0,
            },
        ])
        .unwrap()
    }

    fn steep_antenna(gain: f64) -> FsAntenna {
        FsAntenna::new(
            gain,
            1.0,
            0.0,
            DEFAULT_FS_FTBR_DB,
            steep_table(),
            steep_table(),
        )
        .unwrap()
    }

    #[test]
    fn table_validation_rejects_bad_shapes() {
        assert!(matches!(
            PatternTable::new(vec![]),
            Err(AntennaError::EmptyTable(_))
        ));
        assert!(matches!(
            PatternTable::new(vec![PatternRow {
                angle_lo_deg: 5.0,
                angle_hi_deg: 180.0,
                attenuation_db: 0.0
            }]),
            Err(AntennaError::TableStartsLate(_))
        ));
        assert!(matches!(
            PatternTable::new(vec![PatternRow {
                angle_lo_deg: 0.0,
                angle_hi_deg: 90.0,
                attenuation_db: 0.0
            }]),
            Err(AntennaError::TableEndsEarly(_))
        ));
        assert!(matches!(
            PatternTable::new(vec![
                PatternRow {
                    angle_lo_deg: 0.0,
                    angle_hi_deg: 30.0,
                    attenuation_db: 0.0
                },
                PatternRow {
                    angle_lo_deg: 40.0,
                    angle_hi_deg: 180.0,
                    attenuation_db: 10.0
                },
            ]),
            Err(AntennaError::TableGap { .. })
        ));
        assert!(matches!(
            PatternTable::new(vec![
                PatternRow {
                    angle_lo_deg: 0.0,
                    angle_hi_deg: 30.0,
                    attenuation_db: 10.0
                },
                PatternRow {
                    angle_lo_deg: 30.0,
                    angle_hi_deg: 180.0,
                    attenuation_db: 5.0
                },
            ]),
            Err(AntennaError::AttenuationDecreasing(_))
        ));
    }

    #[test]
    fn shipped_default_table_is_valid_and_open_at_boresight() {
        let (az, el) = default_pattern_tables();
        assert_eq!(az.attenuation_db(0.0), 0.0);
        assert_eq!(el.attenuation_db(0.0), 0.0);
        // Band lookups are well-defined across the whole range.
        for a in [0.0, 4.99, 5.0, 90.0, 179.9, 180.0] {
            assert!(az.attenuation_db(a) >= 0.0);
            assert!(el.attenuation_db(a) >= 0.0);
        }
    }

    #[test]
    fn boresight_gain_is_max_gain() {
        let ant = steep_antenna(43.0);
        assert_eq!(fs_gain_dbi(&ant, &off(0.0, 0.0)), 43.0);
    }

    #[test]
    fn deep_off_axis_caps_at_ftbr() {
        // 40 + 80 = 120 dB of band attenuation still caps at the 55 dB FTBR.
        let ant = steep_antenna(43.0);
        assert_eq!(fs_gain_dbi(&ant, &off(10.0, 40.0)), 43.0 - 55.0);
    }

    #[test]
    fn single_axis_band_lookup() {
        // Azimuth in the 20 dB band, elevation boresight: G = 43 - min(20, 55).
        let ant = steep_antenna(43.0);
        assert_eq!(fs_gain_dbi(&ant, &off(2.0, 0.0)), 23.0);
        // Elevation lookup uses magnitude.
        assert_eq!(fs_gain_dbi(&ant, &off(0.0, -2.0)), 23.0);
    }

    #[test]
    fn ue_beam_law_hand_values() {
        let ue = UeAntenna::with_eirp(33.0).unwrap();
        let b = ue_beam_attenuation_db(&ue, &off(12.5, 0.0));
        assert_eq!(b.azimuth_db, 3.0); // half the 25 deg beamwidth
        assert_eq!(b.elevation_db, 0.0);
        let b = ue_beam_attenuation_db(&ue, &off(25.0, 0.0));
        assert_eq!(b.azimuth_db, 12.0);
    }

    #[test]
    fn ue_element_law_hand_values() {
        let ue = UeAntenna::with_eirp(33.0).unwrap();
        let e = ue_element_attenuation_db(&ue, &off(32.5, 0.0));
        assert_eq!(e.azimuth_db, 3.0); // half the 65 deg element width
        let e = ue_element_attenuation_db(&ue, &off(65.0, 0.0));
        assert_eq!(e.azimuth_db, 12.0);
    }

    #[test]
    fn ue_radiated_hand_value() {
        // 33 dBm EIRP, 12.5 deg azimuth offset: beam 3 dB, element
        // 12*(12.5/65)^2 = 0.443787 dB -> 29.5562 dBm.
        let ue = UeAntenna::with_eirp(33.0).unwrap();
        let g = ue_radiated_dbm(&ue, &off(12.5, 0.0));
        assert!((g - 29.556213).abs() < 1e-6, "g = {g}");
    }

    #[test]
    fn ue_radiated_at_boresight_is_eirp() {
        let ue = UeAntenna::with_eirp(43.0).unwrap();
        assert_eq!(ue_radiated_dbm(&ue, &off(0.0, 0.0)), 43.0);
    }

    #[test]
    fn back_lobe_with_and_without_beam_cap() {
        // At 180 deg both sums blow past 30 dB; capped model floors each at
        // the FTBR: G = EIRP - 30 - 30.
        let capped = UeAntenna::with_eirp(33.0).unwrap();
        assert_eq!(ue_radiated_dbm(&capped, &off(180.0, 0.0)), 33.0 - 60.0);

        // Literal law: beam term 12*(180/25)^2 = 622.08 dB, element capped.
        let literal = UeAntenna::new(33.0, 25.0, 65.0, 30.0, false).unwrap();
        let g = ue_radiated_dbm(&literal, &off(180.0, 0.0));
        assert!((g - (33.0 - 622.08 - 30.0)).abs() < 1e-9, "g = {g}");
    }

    proptest! {
        // Receive gain never increases as either off-axis angle grows, and
        // stays within [G_max - FTBR, G_max].
        #[test]
        fn fs_gain_monotone_and_bounded(
            az in 0.0f64..180.0,
            el in -180.0f64..180.0,
            daz in 0.0f64..30.0,
            del in 0.0f64..30.0,
        ) {
            let ant = steep_antenna(43.0);
            let g = fs_gain_dbi(&ant, &off(az, el));
            prop_assert!((43.0 - 55.0..=43.0).contains(&g));
            let g_wider_az = fs_gain_dbi(&ant, &off((az + daz).min(180.0), el));
            prop_assert!(g_wider_az <= g);
            let el_mag = el.abs();
            let g_el = fs_gain_dbi(&ant, &off(az, el_mag));
            let g_wider_el = fs_gain_dbi(&ant, &off(az, (el_mag + del).min(180.0)));
            prop_assert!(g_wider_el <= g_el);
        }

        // EIRP enters the radiated power as a pure offset.
        #[test]
        fn eirp_is_pure_offset(
            az in 0.0f64..180.0,
            el in 0.0f64..180.0,
            delta in -20.0f64..20.0,
            cap in proptest::bool::ANY,
        ) {
            let base = UeAntenna::new(33.0, 25.0, 65.0, 30.0, cap).unwrap();
            let shifted = UeAntenna::new(33.0 + delta, 25.0, 65.0, 30.0, cap).unwrap();
            let o = off(az, el);
            let d = ue_radiated_dbm(&shifted, &o) - ue_radiated_dbm(&base, &o);
            prop_assert!((d - delta).abs() < 1e-12);
        }

        // Radiated power never exceeds the EIRP ceiling.
        #[test]
        fn radiated_at_most_eirp(az in 0.0f64..180.0, el in 0.0f64..180.0) {
            let ue = UeAntenna::with_eirp(33.0).unwrap();
            prop_assert!(ue_radiated_dbm(&ue, &off(az, el)) <= 33.0);
        }
    }
}
