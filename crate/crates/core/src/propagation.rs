//! Street-canyon path loss and thermal noise.
//!
//! Links are classified LOS or NLOS by the geometry module's blockage test;
//! this module prices them. The LOS law is dual-slope with a
//! frequency-dependent breakpoint; the NLOS law is lower-bounded by LOS.
//! Log-normal shadowing is applied from a caller-supplied standard-normal
//! draw so the module stays stateless — the engine owns all randomness.

use thiserror::Error;

/// Boltzmann constant, J/K.
pub const BOLTZMANN_J_PER_K: f64 = 1.380649e-23;

/// Propagation speed used by the breakpoint formula, m/s.
const SPEED_OF_LIGHT_M_PER_S: f64 = 3.0e8;

/// Effective environment height subtracted from antenna heights in the
/// breakpoint formula, meters.
const EFFECTIVE_ENV_HEIGHT_M: f64 = 1.0;

/// Default LOS shadowing standard deviation, dB.
pub const DEFAULT_SIGMA_LOS_DB: f64 = 4.0;
/// Default NLOS shadowing standard deviation, dB.
pub const DEFAULT_SIGMA_NLOS_DB: f64 = 7.82;

#[derive(Debug, Error)]
pub enum PropagationError {
    #[error("carrier {0} GHz outside the model's [0.5, 100] GHz applicability")]
    CarrierOutOfRange(f64),
    #[error("shadowing sigma must be non-negative and finite, got {0}")]
    InvalidSigma(f64),
    #[error("2D distance {0} m is below the 1 m model floor (terminal inside the mast exclusion)")]
    BelowModelFloor(f64),
    #[error("antenna heights must be non-negative and finite, got {0}")]
    InvalidHeight(f64),
    #[error("noise bandwidth must be positive, got {0} Hz")]
    InvalidBandwidth(f64),
    #[error("noise temperature must be positive, got {0} K")]
    InvalidTemperature(f64),
}

/// Carrier and shadowing parameters for path-loss evaluation.
#[derive(Debug, Clone, Copy)]
pub struct PathLossConfig {
    pub carrier_ghz: f64,
    pub sigma_los_db: f64,
    pub sigma_nlos_db: f64,
    pub shadowing_enabled: bool,
}

impl PathLossConfig {
    /// Config at `carrier_ghz` with default sigmas and shadowing enabled.
    pub fn new(carrier_ghz: f64) -> Result<Self, PropagationError> {
        if !carrier_ghz.is_finite() || !(0.5..=100.0).contains(&carrier_ghz) {
            return Err(PropagationError::CarrierOutOfRange(carrier_ghz));
        }
        Ok(Self {
            carrier_ghz,
            sigma_los_db: DEFAULT_SIGMA_LOS_DB,
            sigma_nlos_db: DEFAULT_SIGMA_NLOS_DB,
            shadowing_enabled: true,
        })
    }

    pub fn with_shadowing(mut self, enabled: bool) -> Self {
        self.shadowing_enabled = enabled;
        self
    }

    pub fn with_sigmas(
        mut self,
        sigma_los_db: f64,
        sigma_nlos_db: f64,
    ) -> Result<Self, PropagationError> {
        for s in [sigma_los_db, sigma_nlos_db] {
            if !s.is_finite() || s < 0.0 {
                return Err(PropagationError::InvalidSigma(s));
            }
        }
        self.sigma_los_db = sigma_los_db;
        self.sigma_nlos_db = sigma_nlos_db;
        Ok(self)
    }
}

/// Thermal-noise parameters of a victim receiver.
#[derive(Debug, Clone, Copy)]
pub struct NoiseConfig {
    pub bandwidth_hz: f64,
    pub temperature_k: f64,
    pub noise_figure_db: f64,
}

impl NoiseConfig {
    pub fn new(
        bandwidth_hz: f64,
        temperature_k: f64,
        noise_figure_db: f64,
    ) -> Result<Self, PropagationError> {
        if !bandwidth_hz.is_finite() || bandwidth_hz <= 0.0 {
            return Err(PropagationError::InvalidBandwidth(bandwidth_hz));
        }
        if !temperature_k.is_finite() || temperature_k <= 0.0 {
            return Err(PropagationError::InvalidTemperature(temperature_k));
        }
        Ok(Self {
            bandwidth_hz,
            temperature_k,
            noise_figure_db,
        })
    }
}

/// Dual-slope breakpoint distance in meters.
///
/// Heights enter reduced by the 1 m effective environment height; the
/// reduced height is floored at 0.1 m so sub-1 m antennas do not collapse
/// the breakpoint to zero.
pub fn breakpoint_distance_m(carrier_ghz: f64, ue_height_m: f64, fs_height_m: f64) -> f64 {
    let h_ue = (ue_height_m - EFFECTIVE_ENV_HEIGHT_M).max(0.1);
    let h_fs = (fs_height_m - EFFECTIVE_ENV_HEIGHT_M).max(0.1);
    4.0 * h_fs * h_ue * (carrier_ghz * 1e9) / SPEED_OF_LIGHT_M_PER_S
}

fn d3d_m(d2d_m: f64, ue_height_m: f64, fs_height_m: f64) -> f64 {
    d2d_m.hypot(fs_height_m - ue_height_m)
}

/// LOS path loss in dB (no shadowing).
///
/// Below the breakpoint: `32.4 + 21 log10(d3D) + 20 log10(f)`. Beyond it the
/// slope doubles with a correction term that keeps the law continuous at
/// the breakpoint.
pub fn los_path_loss_db(
    cfg: &PathLossConfig,
    d2d_m: f64,
    ue_height_m: f64,
    fs_height_m: f64,
) -> f64 {
    let d3d = d3d_m(d2d_m, ue_height_m, fs_height_m);
    let d_bp = breakpoint_distance_m(cfg.carrier_ghz, ue_height_m, fs_height_m);
    let freq_term_db = 20.0 * cfg.carrier_ghz.log10();
    if d2d_m <= d_bp {
        32.4 + 21.0 * d3d.log10() + freq_term_db
    } else {
        let dh = fs_height_m - ue_height_m;
        32.4 + 40.0 * d3d.log10() + freq_term_db - 9.5 * (d_bp * d_bp + dh * dh).log10()
    }
}

/// NLOS path loss in dB (no shadowing): the street-canyon NLOS law,
/// lower-bounded by the LOS law at the same geometry.
pub fn nlos_path_loss_db(
    cfg: &PathLossConfig,
    d2d_m: f64,
    ue_height_m: f64,
    fs_height_m: f64,
) -> f64 {
    let d3d = d3d_m(d2d_m, ue_height_m, fs_height_m);
    let nlos =
        35.3 * d3d.log10() + 22.4 + 21.3 * cfg.carrier_ghz.log10() - 0.3 * (ue_height_m - 1.5);
    nlos.max(los_path_loss_db(cfg, d2d_m, ue_height_m, fs_height_m))
}

/// Composite path loss in dB for one link.
///
/// `blocked` selects the branch; `shadow_draw` is a standard-normal variate
/// scaled by the branch's sigma when shadowing is enabled (pass any value
/// otherwise, it is ignored).
pub fn path_loss_db(
    cfg: &PathLossConfig,
    d2d_m: f64,
    ue_height_m: f64,
    fs_height_m: f64,
    blocked: bool,
    shadow_draw: f64,
) -> Result<f64, PropagationError> {
    if d2d_m.is_nan() || d2d_m < 1.0 {
        return Err(PropagationError::BelowModelFloor(d2d_m));
    }
    for h in [ue_height_m, fs_height_m] {
        if !h.is_finite() || h < 0.0 {
            return Err(PropagationError::InvalidHeight(h));
        }
    }
    let (base_db, sigma_db) = if blocked {
        (
            nlos_path_loss_db(cfg, d2d_m, ue_height_m, fs_height_m),
            cfg.sigma_nlos_db,
        )
    } else {
        (
            los_path_loss_db(cfg, d2d_m, ue_height_m, fs_height_m),
            cfg.sigma_los_db,
        )
    };
    let shadow_db = if cfg.shadowing_enabled {
        sigma_db * shadow_draw
    } else {
        0.0
    };
    Ok(base_db + shadow_db)
}

/// Thermal noise power in dBm: `10 log10(k T * 1000) + 10 log10(B) + F`.
pub fn noise_power_dbm(cfg: &NoiseConfig) -> f64 {
    10.0 * (BOLTZMANN_J_PER_K * cfg.temperature_k * 1000.0).log10()
        + 10.0 * cfg.bandwidth_hz.log10()
        + cfg.noise_figure_db
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(f_ghz: f64) -> PathLossConfig {
        PathLossConfig::new(f_ghz).unwrap().with_shadowing(false)
    }

    #[test]
    fn config_validation() {
        assert!(PathLossConfig::new(73.5).is_ok());
        assert!(matches!(
            PathLossConfig::new(0.3),
            Err(PropagationError::CarrierOutOfRange(_))
        ));
        assert!(matches!(
            PathLossConfig::new(150.0),
            Err(PropagationError::CarrierOutOfRange(_))
        ));
        assert!(PathLossConfig::new(73.5)
            .unwrap()
            .with_sigmas(-1.0, 4.0)
            .is_err());
    }

    #[test]
    fn first_slope_hand_value() {
        // Equal heights, d3D = d2D = 100 m, f = 73.5 GHz, below breakpoint:
        // 32.4 + 21*2 + 20*log10(73.5) = 32.4 + 42 + 37.3257468 = 111.7257468.
        let pl = los_path_loss_db(&cfg(73.5), 100.0, 1.5, 1.5);
        assert!((pl - 111.7257468).abs() < 1e-6, "pl = {pl}");
    }

    #[test]
    fn within_first_slope_frequency_shift_is_exact() {
        // Both carriers stay below their breakpoints for this geometry, so
        // only the 20 log10(f) term moves: 20 log10(83.5/73.5) = 1.10798 dB.
        let lo = los_path_loss_db(&cfg(73.5), 100.0, 1.5, 30.0);
        let hi = los_path_loss_db(&cfg(83.5), 100.0, 1.5, 30.0);
        let expected = 20.0 * (83.5f64 / 73.5).log10();
        assert!(((hi - lo) - expected).abs() < 1e-12);
    }

    #[test]
    fn nlos_height_correction_vanishes_at_reference_height() {
        // At h_U = 1.5 the -0.3(h_U - 1.5) term is zero:
        // NLOS(100 m, 73.5 GHz) = 35.3*2 + 22.4 + 21.3*log10(73.5)
        //                       = 70.6 + 22.4 + 39.7519203 = 132.7519203.
        let pl = nlos_path_loss_db(&cfg(73.5), 100.0, 1.5, 1.5);
        assert!((pl - 132.7519203).abs() < 1e-6, "pl = {pl}");
    }

    #[test]
    fn breakpoint_value_and_continuity() {
        // h_F = 10, h_U = 1.5, f = 73.5 GHz:
        // d_BP = 4 * 9 * 0.5 * 73.5e9 / 3e8 = 4410 m.
        let d_bp = breakpoint_distance_m(73.5, 1.5, 10.0);
        assert!((d_bp - 4410.0).abs() < 1e-9, "d_bp = {d_bp}");

        // The two LOS slopes agree at the breakpoint itself.
        let c = cfg(73.5);
        let pl1 = los_path_loss_db(&c, d_bp, 1.5, 10.0);
        let dh: f64 = 10.0 - 1.5;
        let d3d = d_bp.hypot(dh);
        let pl2 = 32.4 + 40.0 * d3d.log10() + 20.0 * 73.5f64.log10()
            - 9.5 * (d_bp * d_bp + dh * dh).log10();
        assert!((pl1 - pl2).abs() < 1e-9, "PL1 = {pl1}, PL2 = {pl2}");
    }

    #[test]
    fn sub_meter_heights_keep_breakpoint_positive() {
        let d_bp = breakpoint_distance_m(73.5, 0.5, 10.0);
        assert!(d_bp > 0.0);
    }

    #[test]
    fn model_floor_rejected() {
        assert!(matches!(
            path_loss_db(&cfg(73.5), 0.5, 1.5, 10.0, false, 0.0),
            Err(PropagationError::BelowModelFloor(_))
        ));
        assert!(matches!(
            path_loss_db(&cfg(73.5), f64::NAN, 1.5, 10.0, false, 0.0),
            Err(PropagationError::BelowModelFloor(_))
        ));
    }

    #[test]
    fn shadow_draw_scales_by_branch_sigma() {
        let shadowed = PathLossConfig::new(73.5).unwrap();
        let base_los = path_loss_db(&shadowed, 100.0, 1.5, 10.0, false, 0.0).unwrap();
        let los = path_loss_db(&shadowed, 100.0, 1.5, 10.0, false, 1.0).unwrap();
        assert!((los - base_los - 4.0).abs() < 1e-12);
        let base_nlos = path_loss_db(&shadowed, 100.0, 1.5, 10.0, true, 0.0).unwrap();
        let nlos = path_loss_db(&shadowed, 100.0, 1.5, 10.0, true, -1.0).unwrap();
        assert!((nlos - base_nlos + 7.82).abs() < 1e-12);
        // Disabled shadowing ignores the draw entirely.
        let off = path_loss_db(&cfg(73.5), 100.0, 1.5, 10.0, false, 3.0).unwrap();
        assert_eq!(off, base_los);
    }

    #[test]
    fn noise_floor_hand_values() {
        // 290 K, 1 GHz, F = 0: 10 log10(kT*1000) = -173.9752, +90 -> -83.9752.
        let n = noise_power_dbm(&NoiseConfig::new(1e9, 290.0, 0.0).unwrap());
        assert!((n - (-83.9752)).abs() < 0.001, "n = {n}");
        // Additive noise figure.
        let n5 = noise_power_dbm(&NoiseConfig::new(1e9, 290.0, 5.0).unwrap());
        assert!((n5 - (n + 5.0)).abs() < 1e-12);
        // Doubling bandwidth adds 3.0103 dB.
        let n2 = noise_power_dbm(&NoiseConfig::new(2e9, 290.0, 0.0).unwrap());
        assert!((n2 - n - 3.0103).abs() < 1e-4);
    }

    proptest! {
        // NLOS never undercuts LOS at the same geometry.
        #[test]
        fn nlos_at_least_los(
            d in 1.0f64..5000.0,
            h_u in 0.5f64..3.0,
            h_f in 3.0f64..100.0,
            f in 71.0f64..86.0,
        ) {
            let c = cfg(f);
            prop_assert!(
                nlos_path_loss_db(&c, d, h_u, h_f) >= los_path_loss_db(&c, d, h_u, h_f)
            );
        }

        // Strictly increasing in distance (checked across the whole range,
        // which also exercises the branch transition).
        #[test]
        fn path_loss_increases_with_distance(
            d in 1.0f64..20_000.0,
            step in 1.0f64..500.0,
            h_f in 3.0f64..100.0,
            blocked in proptest::bool::ANY,
        ) {
            let c = cfg(73.5);
            let near = path_loss_db(&c, d, 1.5, h_f, blocked, 0.0).unwrap();
            let far = path_loss_db(&c, d + step, 1.5, h_f, blocked, 0.0).unwrap();
            prop_assert!(far > near, "PL({d}) = {near} vs PL({}) = {far}", d + step);
        }

        // The LOS dual-slope law is continuous at the breakpoint for any
        // geometry: approach from both sides.
        #[test]
        fn los_continuous_at_breakpoint(
            h_u in 1.1f64..3.0,
            h_f in 5.0f64..80.0,
            f in 71.0f64..86.0,
        ) {
            let c = cfg(f);
            let d_bp = breakpoint_distance_m(f, h_u, h_f);
            let below = los_path_loss_db(&c, d_bp, h_u, h_f);
            let above = los_path_loss_db(&c, d_bp * (1.0 + 1e-12), h_u, h_f);
            prop_assert!((below - above).abs() < 1e-6, "jump at d_BP: {below} vs {above}");
        }
    }
}
