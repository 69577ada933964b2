//! Monte Carlo orchestration: terminal placement, per-link evaluation,
//! linear-power aggregation, and INR reporting per victim receiver.
//!
//! Reproducibility contract: a root seed spawns one named substream per
//! (realization, purpose). Terminal geometry draws come from the placement
//! substream and shadow-fading draws from the shadowing substream, in
//! terminal-outer / station-inner order, so positions are identical across
//! power and carrier sweeps and appending terminals never perturbs the
//! draws of existing ones. Realizations are independent parallel work
//! units collected in index order, making results independent of thread
//! count and schedule.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::antenna::{
    fs_gain_dbi, ue_radiated_dbm, AntennaError, FsAntenna, UeAntenna, DEFAULT_UE_BEAM_3DB_DEG,
    DEFAULT_UE_ELEMENT_3DB_DEG, DEFAULT_UE_FTBR_DB,
};
use crate::geo::{
    fs_off_axis, interference_axis, is_blocked, polygon_contains, project, ue_off_axis,
    BlockageQuery, BuildingIndex, GeoError, PlanarPoint,
};
use crate::ingest::{FixedStation, Scenario};
use crate::propagation::{
    noise_power_dbm, path_loss_db, NoiseConfig, PathLossConfig, PropagationError,
};
use crate::stats::EmpiricalDistribution;

/// Reference temperature for receiver noise, kelvin.
pub const STANDARD_TEMPERATURE_K: f64 = 290.0;
/// The path-loss model's minimum link ground distance; the terminal
/// sampler keeps this clearance around every receiver position.
pub const MIN_LINK_DISTANCE_M: f64 = 1.0;
/// Links beyond this ground distance are outside the street-canyon model's
/// calibrated range; they are still evaluated but counted as diagnostics.
pub const MODEL_MAX_D2D_M: f64 = 5_000.0;
/// Default cull distance: at these carriers a link this long is > 140 dB
/// down and cannot move an aggregate.
pub const DEFAULT_CULL_DISTANCE_M: f64 = 10_000.0;

/// Substream label for terminal placement and beam draws.
pub const PURPOSE_UE_DROP: u64 = 1;
/// Substream label for shadow-fading draws.
pub const PURPOSE_SHADOW: u64 = 2;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(
        "terminal drop area is almost entirely covered by buildings \
         ({accepted} accepted in {attempts} attempts)"
    )]
    DropAreaCovered { attempts: u64, accepted: u64 },
    #[error("station {link_id}: {message}")]
    Station { link_id: String, message: String },
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error(transparent)]
    Antenna(#[from] AntennaError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
}

/// One dropped interfering terminal.
#[derive(Debug, Clone)]
pub struct UserTerminal {
    pub pos: PlanarPoint,
    pub height_m: f64,
    /// Beam azimuth in the planar frame (`atan2(dy, dx)` degrees, [0, 360)).
    pub beam_azimuth_deg: f64,
    /// Beam elevation toward the serving base station, degrees above horizontal.
    pub beam_elevation_deg: f64,
    pub antenna: UeAntenna,
}

/// One victim receiver resolved into planar scenario coordinates.
#[derive(Debug, Clone)]
pub struct PlacedStation {
    pub fs_index: usize,
    pub pair_id: String,
    pub link_id: String,
    pub rx_planar: PlanarPoint,
    pub tx_planar: PlanarPoint,
    pub rx_height_m: f64,
    pub antenna: FsAntenna,
    pub noise_power_dbm: f64,
}

/// Full budget of one terminal-to-receiver link.
#[derive(Debug, Clone, Copy)]
pub struct LinkEvaluation {
    pub ue_index: usize,
    pub fs_index: usize,
    pub blocked: bool,
    pub path_loss_db: f64,
    pub fs_gain_dbi: f64,
    pub ue_radiated_dbm: f64,
    /// Exactly `ue_radiated_dbm + fs_gain_dbi - path_loss_db`.
    pub interference_dbm: f64,
}

/// One realization's aggregate at one receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InrSample {
    pub realization: u32,
    /// Linear-power sum of all link contributions; −∞ when no link reaches
    /// the receiver (reported downstream as "no interference").
    pub aggregate_dbm: f64,
    pub inr_db: f64,
}

/// Headline statistics over one receiver's INR samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InrSummary {
    pub mean_inr_db: f64,
    pub median_inr_db: f64,
    pub p95_inr_db: f64,
}

/// Per-receiver Monte Carlo outcome.
#[derive(Debug, Clone)]
pub struct InrReport {
    pub fs_index: usize,
    pub pair_id: String,
    pub link_id: String,
    pub noise_power_dbm: f64,
    pub threshold_db: f64,
    pub samples: Vec<InrSample>,
    pub summary: InrSummary,
    /// Realizations with INR strictly above the threshold.
    pub exceed_count: u32,
}

/// Run-level switches that are not part of the scenario file.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Skip links whose ground distance exceeds this; `None` evaluates all.
    pub cull_distance_m: Option<f64>,
    /// Apply log-normal shadow fading.
    pub shadowing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            cull_distance_m: Some(DEFAULT_CULL_DISTANCE_M),
            shadowing: true,
        }
    }
}

/// All receiver reports plus run-level diagnostics.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub reports: Vec<InrReport>,
    /// Links skipped by the cull distance.
    pub culled_links: u64,
    /// Evaluated links whose ground distance exceeded the model's
    /// calibrated range (extrapolated, not skipped).
    pub out_of_model_links: u64,
}

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the generator for one (realization, purpose) substream. This
/// derivation is stable: it is part of the reproducibility contract.
pub fn substream(seed: u64, realization: u32, purpose: u64) -> ChaCha8Rng {
    let mut z = mix64(seed ^ mix64(purpose));
    z = mix64(z ^ mix64(realization as u64));
    let mut key = [0u8; 32];
    for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
        z = mix64(z.wrapping_add(i as u64 + 1));
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

fn terminal_antenna(scenario: &Scenario) -> Result<UeAntenna, AntennaError> {
    UeAntenna::new(
        scenario.eirp_max_dbm,
        DEFAULT_UE_BEAM_3DB_DEG,
        DEFAULT_UE_ELEMENT_3DB_DEG,
        DEFAULT_UE_FTBR_DB,
        scenario.ue_beam_cap,
    )
}

fn planar_area(scenario: &Scenario) -> Result<Vec<PlanarPoint>, GeoError> {
    scenario
        .area_polygon
        .iter()
        .map(|&gp| project(gp, scenario.origin))
        .collect()
}

/// Resolves registry rows into planar coordinates, antennas, and noise
/// floors. Rows whose endpoints fall outside the projection's validity
/// around the scenario origin are rejected with their link id.
pub fn place_stations(
    stations: &[FixedStation],
    scenario: &Scenario,
) -> Result<Vec<PlacedStation>, EngineError> {
    stations
        .iter()
        .enumerate()
        .map(|(fs_index, s)| {
            let station_err = |message: String| EngineError::Station {
                link_id: s.link_id.clone(),
                message,
            };
            let rx_planar = project(s.rx_pos, scenario.origin)
                .map_err(|e| station_err(format!("rx position: {e}")))?;
            let tx_planar = project(s.tx_pos, scenario.origin)
                .map_err(|e| station_err(format!("tx position: {e}")))?;
            let antenna =
                FsAntenna::with_default_pattern(s.max_gain_dbi, s.beamwidth_deg, s.tilt_deg)
                    .map_err(|e| station_err(format!("antenna: {e}")))?;
            let noise_cfg = NoiseConfig::new(
                s.bandwidth_mhz * 1e6,
                STANDARD_TEMPERATURE_K,
                s.noise_figure_db,
            )
            .map_err(|e| station_err(format!("noise: {e}")))?;
            Ok(PlacedStation {
                fs_index,
                pair_id: s.pair_id.clone(),
                link_id: s.link_id.clone(),
                rx_planar,
                tx_planar,
                rx_height_m: s.rx_height_m,
                antenna,
                noise_power_dbm: noise_power_dbm(&noise_cfg),
            })
        })
        .collect()
}

/// Drops `ue_count` terminals uniformly over the drop area minus building
/// footprints and minus a 1 m disc around every receiver's ground position
/// (the path-loss model's minimum link distance) by rejection sampling,
/// then assigns each an independent beam: azimuth uniform over [0, 360),
/// elevation aimed at a serving base station at uniform ground distance
/// 10–100 m.
///
/// Draw order per terminal: position x/y pairs until accepted, then beam
/// azimuth, then base-station distance.
pub fn drop_ues(
    scenario: &Scenario,
    buildings: &BuildingIndex,
    stations: &[PlacedStation],
    rng: &mut impl Rng,
) -> Result<Vec<UserTerminal>, EngineError> {
    let area = planar_area(scenario)?;
    let antenna = terminal_antenna(scenario)?;
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for v in &area {
        min_x = min_x.min(v.x_m);
        min_y = min_y.min(v.y_m);
        max_x = max_x.max(v.x_m);
        max_y = max_y.max(v.y_m);
    }

    let mut terminals = Vec::with_capacity(scenario.ue_count as usize);
    let mut attempts: u64 = 0;
    while terminals.len() < scenario.ue_count as usize {
        let pos = PlanarPoint::new(
            rng.random_range(min_x..=max_x),
            rng.random_range(min_y..=max_y),
        );
        attempts += 1;
        let outdoors = polygon_contains(&area, pos)
            && buildings.footprint_containing(pos).is_none()
            && stations
                .iter()
                .all(|s| pos.distance_to(s.rx_planar) >= MIN_LINK_DISTANCE_M);
        if outdoors {
            let beam_azimuth_deg = rng.random_range(0.0..360.0);
            let d_gnb_m = rng.random_range(10.0..100.0);
            let beam_elevation_deg = ((scenario.gnb_height_m - scenario.ue_height_m) / d_gnb_m)
                .atan()
                .to_degrees();
            terminals.push(UserTerminal {
                pos,
                height_m: scenario.ue_height_m,
                beam_azimuth_deg,
                beam_elevation_deg,
                antenna,
            });
        } else if attempts >= 10_000 && (terminals.len() as f64) < attempts as f64 * 0.001 {
            return Err(EngineError::DropAreaCovered {
                attempts,
                accepted: terminals.len() as u64,
            });
        }
    }
    Ok(terminals)
}

/// Evaluates one terminal-to-receiver link end to end: blockage state,
/// shadow draw, path loss, receiver off-axis gain, terminal off-axis
/// radiated power, and the budget identity `I = G_U + G_F − PL`.
///
/// Consumes exactly one shadow draw, taken after the blockage state is
/// known (the draw scales with the state's sigma when shadowing is on).
pub fn evaluate_link(
    ue_index: usize,
    ue: &UserTerminal,
    fs: &PlacedStation,
    buildings: &BuildingIndex,
    path_cfg: &PathLossConfig,
    rng: &mut impl Rng,
) -> Result<LinkEvaluation, EngineError> {
    let d2d_m = ue.pos.distance_to(fs.rx_planar);
    if d2d_m.is_nan() || d2d_m < MIN_LINK_DISTANCE_M {
        return Err(EngineError::Propagation(PropagationError::BelowModelFloor(
            d2d_m,
        )));
    }

    let query = BlockageQuery {
        ue_pos: ue.pos,
        ue_height_m: ue.height_m,
        fs_pos: fs.rx_planar,
        fs_height_m: fs.rx_height_m,
    };
    let blocked = is_blocked(&query, buildings).blocked;
    let shadow_draw: f64 = rng.sample(StandardNormal);
    let path_loss = path_loss_db(
        path_cfg,
        d2d_m,
        ue.height_m,
        fs.rx_height_m,
        blocked,
        shadow_draw,
    )?;

    let fs_off = fs_off_axis(
        fs.tx_planar,
        fs.rx_planar,
        fs.rx_height_m,
        fs.antenna.tilt_deg,
        ue.pos,
        ue.height_m,
    )?;
    let fs_gain = fs_gain_dbi(&fs.antenna, &fs_off);

    let (axis_azimuth_deg, axis_elevation_deg) =
        interference_axis(ue.pos, ue.height_m, fs.rx_planar, fs.rx_height_m);
    let ue_off = ue_off_axis(
        ue.beam_azimuth_deg,
        ue.beam_elevation_deg,
        axis_azimuth_deg,
        axis_elevation_deg,
    );
    let ue_radiated = ue_radiated_dbm(&ue.antenna, &ue_off);

    Ok(LinkEvaluation {
        ue_index,
        fs_index: fs.fs_index,
        blocked,
        path_loss_db: path_loss,
        fs_gain_dbi: fs_gain,
        ue_radiated_dbm: ue_radiated,
        interference_dbm: ue_radiated + fs_gain - path_loss,
    })
}

/// Linear-power aggregation: `10·log10(Σ 10^(x/10))`. An empty set yields
/// −∞ ("no interference").
pub fn aggregate_dbm(contributions_dbm: &[f64]) -> f64 {
    if contributions_dbm.is_empty() {
        return f64::NEG_INFINITY;
    }
    let linear_mw: f64 = contributions_dbm
        .iter()
        .map(|&x_dbm| 10f64.powf(x_dbm / 10.0))
        .sum();
    10.0 * linear_mw.log10()
}

struct RealizationOutcome {
    aggregates_dbm: Vec<f64>,
    culled: u64,
    out_of_model: u64,
}

fn run_realization(
    realization: u32,
    scenario: &Scenario,
    placed: &[PlacedStation],
    buildings: &BuildingIndex,
    path_cfg: &PathLossConfig,
    options: &RunOptions,
) -> Result<RealizationOutcome, EngineError> {
    let mut drop_rng = substream(scenario.seed, realization, PURPOSE_UE_DROP);
    let terminals = drop_ues(scenario, buildings, placed, &mut drop_rng)?;
    let mut shadow_rng = substream(scenario.seed, realization, PURPOSE_SHADOW);

    let mut per_fs: Vec<Vec<f64>> = vec![Vec::with_capacity(terminals.len()); placed.len()];
    let mut culled: u64 = 0;
    let mut out_of_model: u64 = 0;
    for (ue_index, ue) in terminals.iter().enumerate() {
        for fs in placed {
            let d2d_m = ue.pos.distance_to(fs.rx_planar);
            if let Some(cull_m) = options.cull_distance_m {
                if d2d_m > cull_m {
                    culled += 1;
                    continue;
                }
            }
            if d2d_m > MODEL_MAX_D2D_M {
                out_of_model += 1;
            }
            let eval = evaluate_link(ue_index, ue, fs, buildings, path_cfg, &mut shadow_rng)?;
            per_fs[fs.fs_index].push(eval.interference_dbm);
        }
    }

    Ok(RealizationOutcome {
        aggregates_dbm: per_fs.iter().map(|c| aggregate_dbm(c)).collect(),
        culled,
        out_of_model,
    })
}

/// Runs the full Monte Carlo study for one scenario cell.
///
/// Realizations execute in parallel on the current thread pool and are
/// collected by realization index, so the result is bit-identical for a
/// fixed (scenario, seed) at any thread count.
pub fn run(
    scenario: &Scenario,
    stations: &[FixedStation],
    buildings: &BuildingIndex,
    options: &RunOptions,
) -> Result<RunResult, EngineError> {
    let placed = place_stations(stations, scenario)?;
    let path_cfg = PathLossConfig::new(scenario.carrier_ghz)
        .map_err(EngineError::Propagation)?
        .with_shadowing(options.shadowing);

    let outcomes: Vec<RealizationOutcome> = (0..scenario.realizations)
        .into_par_iter()
        .map(|r| run_realization(r, scenario, &placed, buildings, &path_cfg, options))
        .collect::<Result<Vec<_>, EngineError>>()?;

    let culled_links = outcomes.iter().map(|o| o.culled).sum();
    let out_of_model_links = outcomes.iter().map(|o| o.out_of_model).sum();

    let reports = placed
        .iter()
        .map(|fs| {
            let samples: Vec<InrSample> = outcomes
                .iter()
                .enumerate()
                .map(|(r, o)| {
                    let aggregate_dbm = o.aggregates_dbm[fs.fs_index];
                    InrSample {
                        realization: r as u32,
                        aggregate_dbm,
                        inr_db: aggregate_dbm - fs.noise_power_dbm,
                    }
                })
                .collect();
            let dist = EmpiricalDistribution::new(samples.iter().map(|s| s.inr_db).collect())
                .expect("at least one realization");
            let exceed_count = samples
                .iter()
                .filter(|s| s.inr_db > scenario.inr_threshold_db)
                .count() as u32;
            InrReport {
                fs_index: fs.fs_index,
                pair_id: fs.pair_id.clone(),
                link_id: fs.link_id.clone(),
                noise_power_dbm: fs.noise_power_dbm,
                threshold_db: scenario.inr_threshold_db,
                samples,
                summary: InrSummary {
                    mean_inr_db: dist.mean(),
                    median_inr_db: dist.percentile(50.0),
                    p95_inr_db: dist.percentile(95.0),
                },
                exceed_count,
            }
        })
        .collect();

    Ok(RunResult {
        reports,
        culled_links,
        out_of_model_links,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::{unproject, Footprint, GeoPoint};
    use crate::ingest::FixedStation;

    fn empty_index() -> BuildingIndex {
        BuildingIndex::build(Vec::new())
    }

    fn test_scenario() -> Scenario {
        let origin = GeoPoint::new(-87.63, 41.88).unwrap();
        let half = 500.0;
        let area = [(-half, -half), (half, -half), (half, half), (-half, half)]
            .iter()
            .map(|&(x, y)| unproject(PlanarPoint::new(x, y), origin))
            .collect();
        Scenario {
            origin,
            area_polygon: area,
            ue_count: 20,
            ue_height_m: 1.5,
            gnb_height_m: 6.0,
            eirp_max_dbm: 33.0,
            carrier_ghz: 73.5,
            realizations: 5,
            seed: 7,
            inr_threshold_db: -6.0,
            ue_beam_cap: true,
        }
    }

    /// A receiver at planar (x, y) whose boresight points from its paired
    /// transmitter placed on the far side, i.e. the beam axis points in the
    /// direction (x, y) − (tx_x, tx_y).
    fn station_row(
        id: u32,
        origin: GeoPoint,
        rx_xy: (f64, f64),
        tx_xy: (f64, f64),
        rx_height_m: f64,
        tilt_deg: f64,
    ) -> FixedStation {
        let rx = unproject(PlanarPoint::new(rx_xy.0, rx_xy.1), origin);
        let tx = unproject(PlanarPoint::new(tx_xy.0, tx_xy.1), origin);
        FixedStation {
            pair_id: format!("P{id}"),
            link_id: format!("L{id}"),
            rx_pos: rx,
            rx_height_m,
            tx_pos: tx,
            max_gain_dbi: 43.0,
            beamwidth_deg: 1.0,
            tilt_deg,
            noise_figure_db: 5.0,
            center_freq_ghz: 73.5,
            bandwidth_mhz: 1000.0,
        }
    }

    #[test]
    fn desk_oracle_boresight_link() {
        // Terminal at the origin aiming straight at a receiver 100 m east
        // at equal height; receiver boresight looks straight back.
        //   PL  = 32.4 + 21·log10(100) + 20·log10(73.5) = 111.7257468 dB
        //   I   = 33 + 43 − 111.7257468 = −35.7257468 dBm
        let scenario = test_scenario();
        let row = station_row(1, scenario.origin, (100.0, 0.0), (-100.0, 0.0), 1.5, 0.0);
        let placed = place_stations(&[row], &scenario).unwrap();
        let ue = UserTerminal {
            pos: PlanarPoint::new(0.0, 0.0),
            height_m: 1.5,
            beam_azimuth_deg: 0.0, // axis to the receiver is along +x
            beam_elevation_deg: 0.0,
            antenna: UeAntenna::with_eirp(33.0).unwrap(),
        };
        let cfg = PathLossConfig::new(73.5).unwrap().with_shadowing(false);
        let mut rng = substream(0, 0, PURPOSE_SHADOW);
        let eval = evaluate_link(0, &ue, &placed[0], &empty_index(), &cfg, &mut rng).unwrap();
        assert!(!eval.blocked);
        assert!((eval.ue_radiated_dbm - 33.0).abs() < 1e-12);
        assert!((eval.fs_gain_dbi - 43.0).abs() < 1e-12);
        assert!((eval.path_loss_db - 111.7257468).abs() < 1e-6);
        assert!((eval.interference_dbm - (-35.7257468)).abs() < 1e-6);
        // Budget identity is exact, not approximate.
        assert_eq!(
            eval.interference_dbm,
            eval.ue_radiated_dbm + eval.fs_gain_dbi - eval.path_loss_db
        );
    }

    #[test]
    fn aggregate_identities() {
        // Two −90 dBm links: 10·log10(2·10⁻⁹) = −86.9897000 dBm.
        let two = aggregate_dbm(&[-90.0, -90.0]);
        assert!((two - (-86.98970004336019)).abs() < 1e-9);
        // Dominant term: 10·log10(10⁻⁶ + 10⁻¹²) = −59.9999957 dBm.
        let dom = aggregate_dbm(&[-60.0, -120.0]);
        assert!((dom - (-59.999995657055)).abs() < 1e-6);
        // Single link passes through; empty set is the no-interference sentinel.
        assert_eq!(aggregate_dbm(&[-42.5]), -42.5);
        assert_eq!(aggregate_dbm(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn drop_ues_uniform_over_open_square() {
        // Building-free square, 1000 drops: chi-square over a 4×4 grid
        // must clear the 1% critical value (30.578 at 15 dof).
        let mut scenario = test_scenario();
        scenario.ue_count = 1000;
        let mut rng = substream(3, 0, PURPOSE_UE_DROP);
        let ues = drop_ues(&scenario, &empty_index(), &[], &mut rng).unwrap();
        assert_eq!(ues.len(), 1000);
        let mut counts = [[0u32; 4]; 4];
        for ue in &ues {
            let cx = (((ue.pos.x_m + 500.0) / 250.0) as usize).min(3);
            let cy = (((ue.pos.y_m + 500.0) / 250.0) as usize).min(3);
            counts[cx][cy] += 1;
        }
        let expected = 1000.0 / 16.0;
        let chi2: f64 = counts
            .iter()
            .flatten()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(
            chi2 < 30.578,
            "chi-square {chi2} exceeds the 1% critical value"
        );
        // Beam elevations span atan(4.5/100)=2.577° to atan(4.5/10)=24.228°.
        for ue in &ues {
            assert!(ue.beam_elevation_deg >= 2.577 - 1e-3);
            assert!(ue.beam_elevation_deg <= 24.228 + 1e-3);
            assert!((0.0..360.0).contains(&ue.beam_azimuth_deg));
        }
    }

    #[test]
    fn drop_ues_keeps_clearance_around_receivers() {
        // A receiver in the middle of the drop area: no terminal may land
        // inside its minimum-link-distance disc, so every evaluated link
        // satisfies the path-loss model's domain.
        let mut scenario = test_scenario();
        scenario.ue_count = 2000;
        let row = station_row(1, scenario.origin, (0.0, 0.0), (400.0, 0.0), 20.0, 0.0);
        let placed = place_stations(&[row], &scenario).unwrap();
        let mut rng = substream(3, 0, PURPOSE_UE_DROP);
        let ues = drop_ues(&scenario, &empty_index(), &placed, &mut rng).unwrap();
        assert_eq!(ues.len(), 2000);
        for ue in &ues {
            assert!(ue.pos.distance_to(placed[0].rx_planar) >= MIN_LINK_DISTANCE_M);
        }
    }

    #[test]
    fn drop_ues_fully_covered_area_errors() {
        let scenario = test_scenario();
        // One footprint swallowing the whole drop area.
        let block = Footprint::new(
            vec![
                PlanarPoint::new(-600.0, -600.0),
                PlanarPoint::new(600.0, -600.0),
                PlanarPoint::new(600.0, 600.0),
                PlanarPoint::new(-600.0, 600.0),
            ],
            30.0,
        )
        .unwrap();
        let index = BuildingIndex::build(vec![block]);
        let mut rng = substream(3, 0, PURPOSE_UE_DROP);
        match drop_ues(&scenario, &index, &[], &mut rng) {
            Err(EngineError::DropAreaCovered { attempts, accepted }) => {
                assert!(attempts >= 10_000);
                assert_eq!(accepted, 0);
            }
            other => panic!("expected DropAreaCovered, got {other:?}"),
        }
    }

    #[test]
    fn run_matches_manual_recomputation() {
        // One receiver, one terminal, one realization: the report must equal
        // an independent walk of the same substreams through the public ops.
        let mut scenario = test_scenario();
        scenario.ue_count = 1;
        scenario.realizations = 1;
        let row = station_row(1, scenario.origin, (2000.0, 0.0), (2100.0, 0.0), 20.0, 0.0);
        let index = empty_index();
        let options = RunOptions {
            cull_distance_m: None,
            shadowing: true,
        };
        let result = run(&scenario, std::slice::from_ref(&row), &index, &options).unwrap();

        let placed = place_stations(&[row], &scenario).unwrap();
        let cfg = PathLossConfig::new(scenario.carrier_ghz)
            .unwrap()
            .with_shadowing(true);
        let mut drop_rng = substream(scenario.seed, 0, PURPOSE_UE_DROP);
        let ues = drop_ues(&scenario, &index, &placed, &mut drop_rng).unwrap();
        let mut shadow_rng = substream(scenario.seed, 0, PURPOSE_SHADOW);
        let eval = evaluate_link(0, &ues[0], &placed[0], &index, &cfg, &mut shadow_rng).unwrap();
        let agg = aggregate_dbm(&[eval.interference_dbm]);

        let sample = &result.reports[0].samples[0];
        assert_eq!(sample.aggregate_dbm, agg);
        assert_eq!(sample.inr_db, agg - placed[0].noise_power_dbm);
    }

    #[test]
    fn run_is_deterministic_across_thread_counts() {
        let scenario = test_scenario();
        let rows = vec![
            station_row(1, scenario.origin, (300.0, 40.0), (900.0, 40.0), 25.0, -1.0),
            station_row(
                2,
                scenario.origin,
                (-250.0, -100.0),
                (-800.0, -90.0),
                18.0,
                0.5,
            ),
            station_row(3, scenario.origin, (50.0, 420.0), (60.0, 1400.0), 35.0, 0.0),
        ];
        let footprint = Footprint::new(
            vec![
                PlanarPoint::new(-50.0, -50.0),
                PlanarPoint::new(50.0, -50.0),
                PlanarPoint::new(50.0, 50.0),
                PlanarPoint::new(-50.0, 50.0),
            ],
            22.0,
        )
        .unwrap();
        let index = BuildingIndex::build(vec![footprint]);
        let options = RunOptions::default();

        let run_in_pool = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| run(&scenario, &rows, &index, &options).unwrap())
        };
        let a = run_in_pool(1);
        let b = run_in_pool(4);
        let c = run_in_pool(4);
        for (ra, rb) in a.reports.iter().zip(&b.reports) {
            assert_eq!(ra.samples, rb.samples);
        }
        for (rb, rc) in b.reports.iter().zip(&c.reports) {
            assert_eq!(rb.samples, rc.samples);
        }
        assert_eq!(a.culled_links, b.culled_links);
        assert_eq!(a.out_of_model_links, b.out_of_model_links);
    }

    #[test]
    fn eirp_step_shifts_every_sample_exactly() {
        let scenario = test_scenario();
        let mut boosted = scenario.clone();
        boosted.eirp_max_dbm = 43.0;
        let rows = vec![
            station_row(1, scenario.origin, (300.0, 40.0), (900.0, 40.0), 25.0, 0.0),
            station_row(
                2,
                scenario.origin,
                (-250.0, -100.0),
                (-800.0, -90.0),
                18.0,
                0.0,
            ),
        ];
        let index = empty_index();
        let options = RunOptions::default();
        let base = run(&scenario, &rows, &index, &options).unwrap();
        let high = run(&boosted, &rows, &index, &options).unwrap();
        for (rb, rh) in base.reports.iter().zip(&high.reports) {
            for (sb, sh) in rb.samples.iter().zip(&rh.samples) {
                assert!((sh.inr_db - sb.inr_db - 10.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn carrier_step_shifts_every_sample_in_first_slope() {
        // Receivers at 30 m keep the dual-slope breakpoint beyond 14 km, so
        // every city-scale link stays on the first slope at both carriers
        // and the shift is exactly 20·log10(83.5/73.5) per sample.
        let mut scenario = test_scenario();
        scenario.ue_count = 15;
        let mut shifted = scenario.clone();
        shifted.carrier_ghz = 83.5;
        let rows = vec![
            station_row(1, scenario.origin, (350.0, 60.0), (1200.0, 80.0), 30.0, 0.0),
            station_row(
                2,
                scenario.origin,
                (-400.0, 250.0),
                (-1300.0, 260.0),
                30.0,
                0.0,
            ),
        ];
        let index = empty_index();
        let options = RunOptions {
            cull_distance_m: None,
            shadowing: false,
        };
        let base = run(&scenario, &rows, &index, &options).unwrap();
        let high = run(&shifted, &rows, &index, &options).unwrap();
        let expected_shift_db = -20.0 * (83.5f64 / 73.5).log10();
        for (rb, rh) in base.reports.iter().zip(&high.reports) {
            for (sb, sh) in rb.samples.iter().zip(&rh.samples) {
                assert!((sh.inr_db - sb.inr_db - expected_shift_db).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_terminals_report_no_interference() {
        let mut scenario = test_scenario();
        scenario.ue_count = 0;
        scenario.realizations = 3;
        let rows = vec![station_row(
            1,
            scenario.origin,
            (100.0, 0.0),
            (300.0, 0.0),
            20.0,
            0.0,
        )];
        let result = run(&scenario, &rows, &empty_index(), &RunOptions::default()).unwrap();
        let report = &result.reports[0];
        assert!(report
            .samples
            .iter()
            .all(|s| s.aggregate_dbm == f64::NEG_INFINITY && s.inr_db == f64::NEG_INFINITY));
        assert_eq!(report.exceed_count, 0);
    }

    #[test]
    fn adding_a_terminal_never_decreases_aggregates() {
        let mut small = test_scenario();
        small.ue_count = 10;
        let mut large = small.clone();
        large.ue_count = 11;
        let rows = vec![
            station_row(1, small.origin, (300.0, 40.0), (900.0, 40.0), 25.0, 0.0),
            station_row(
                2,
                small.origin,
                (-250.0, -100.0),
                (-800.0, -90.0),
                18.0,
                0.0,
            ),
        ];
        let footprint = Footprint::new(
            vec![
                PlanarPoint::new(-120.0, -40.0),
                PlanarPoint::new(-20.0, -40.0),
                PlanarPoint::new(-20.0, 60.0),
                PlanarPoint::new(-120.0, 60.0),
            ],
            25.0,
        )
        .unwrap();
        let index = BuildingIndex::build(vec![footprint]);
        let options = RunOptions::default();
        let a = run(&small, &rows, &index, &options).unwrap();
        let b = run(&large, &rows, &index, &options).unwrap();
        for (ra, rb) in a.reports.iter().zip(&b.reports) {
            for (sa, sb) in ra.samples.iter().zip(&rb.samples) {
                assert!(sb.aggregate_dbm >= sa.aggregate_dbm);
            }
        }
    }

    #[test]
    fn removing_buildings_never_decreases_aggregates() {
        // A 200 m wall strictly east of the ±500 m drop area intercepts every
        // terminal-to-receiver path without touching the drop region itself,
        // so both runs draw identical terminal sets and only the sight-line
        // outcome differs.
        let scenario = test_scenario();
        let rows = vec![
            station_row(1, scenario.origin, (900.0, 0.0), (1500.0, 0.0), 20.0, 0.0),
            station_row(
                2,
                scenario.origin,
                (1200.0, 300.0),
                (1800.0, 300.0),
                15.0,
                0.0,
            ),
        ];
        let footprint = Footprint::new(
            vec![
                PlanarPoint::new(600.0, -800.0),
                PlanarPoint::new(700.0, -800.0),
                PlanarPoint::new(700.0, 800.0),
                PlanarPoint::new(600.0, 800.0),
            ],
            200.0,
        )
        .unwrap();
        let blocked_index = BuildingIndex::build(vec![footprint]);
        let options = RunOptions {
            cull_distance_m: None,
            shadowing: false,
        };
        let with = run(&scenario, &rows, &blocked_index, &options).unwrap();
        let without = run(&scenario, &rows, &empty_index(), &options).unwrap();
        for (rw, ro) in with.reports.iter().zip(&without.reports) {
            for (sw, so) in rw.samples.iter().zip(&ro.samples) {
                // Every path crosses the wall, and the obstructed loss curve
                // strictly exceeds the clear one at these ranges, so each
                // sample must drop - not merely stay put.
                assert!(
                    so.aggregate_dbm > sw.aggregate_dbm,
                    "clear {} <= walled {}",
                    so.aggregate_dbm,
                    sw.aggregate_dbm
                );
            }
        }
    }

    #[test]
    fn cull_distance_skips_far_links() {
        // Receiver ~20 km east of a ±500 m drop area: every link is culled
        // under the default distance and the report degenerates to −∞.
        let scenario = test_scenario();
        let row = station_row(
            1,
            scenario.origin,
            (20_000.0, 0.0),
            (21_000.0, 0.0),
            20.0,
            0.0,
        );
        let culled = run(
            &scenario,
            std::slice::from_ref(&row),
            &empty_index(),
            &RunOptions::default(),
        )
        .unwrap();
        assert_eq!(
            culled.culled_links,
            (scenario.ue_count * scenario.realizations) as u64
        );
        assert!(culled.reports[0]
            .samples
            .iter()
            .all(|s| s.aggregate_dbm == f64::NEG_INFINITY));

        // With the cull off the same links are evaluated but flagged as
        // beyond the model's calibrated distance.
        let unculled = run(
            &scenario,
            &[row],
            &empty_index(),
            &RunOptions {
                cull_distance_m: None,
                shadowing: true,
            },
        )
        .unwrap();
        assert_eq!(unculled.culled_links, 0);
        assert_eq!(
            unculled.out_of_model_links,
            (scenario.ue_count * scenario.realizations) as u64
        );
        assert!(unculled.reports[0]
            .samples
            .iter()
            .all(|s| s.aggregate_dbm.is_finite()));
    }

    #[test]
    fn exceed_count_matches_threshold_rule() {
        let scenario = test_scenario();
        let rows = vec![station_row(
            1,
            scenario.origin,
            (80.0, 0.0),
            (400.0, 0.0),
            12.0,
            0.0,
        )];
        let result = run(&scenario, &rows, &empty_index(), &RunOptions::default()).unwrap();
        let report = &result.reports[0];
        let manual = report
            .samples
            .iter()
            .filter(|s| s.inr_db > scenario.inr_threshold_db)
            .count() as u32;
        assert_eq!(report.exceed_count, manual);
        // Summary is recomputable from the samples.
        let dist =
            EmpiricalDistribution::new(report.samples.iter().map(|s| s.inr_db).collect()).unwrap();
        assert_eq!(report.summary.mean_inr_db, dist.mean());
        assert_eq!(report.summary.median_inr_db, dist.percentile(50.0));
        assert_eq!(report.summary.p95_inr_db, dist.percentile(95.0));
    }
}
