//! Deployment-geometry analytics over a fixed-station registry: pair density
//! versus region radius, receiver-height distribution, tilt and beamwidth
//! histograms, and the tilt-height correlation profile.
//!
//! Units of analysis: *pairs* (unique endpoint couples, keyed by `pair_id`)
//! for density, *links* (rows) for everything else. All routines are pure
//! batch computations and permutation-invariant in the station list.

use std::collections::HashSet;
use std::io::Write;

use thiserror::Error;

use crate::geo::{great_circle_distance_m, GeoPoint};
use crate::ingest::FixedStation;
use crate::stats::{histogram_counts, EmpiricalDistribution, StatsError};

/// Default histogram bin widths (CLI-overridable).
pub const DEFAULT_TILT_BIN_DEG: f64 = 1.0;
pub const DEFAULT_BEAMWIDTH_BIN_DEG: f64 = 0.1;
pub const DEFAULT_HEIGHT_BIN_M: f64 = 5.0;

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("station list is empty")]
    NoStations,
    #[error("bin width {0} must be positive and finite")]
    InvalidBin(f64),
    #[error("radii must be finite, positive, and strictly increasing")]
    InvalidRadii,
    #[error("station field {field} is not finite: {value}")]
    NonFiniteField { field: &'static str, value: f64 },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("failed to write analytics output: {0}")]
    Io(#[from] std::io::Error),
}

/// Pair density as a function of region radius around a center point.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDensitySeries {
    pub radii_km: Vec<f64>,
    /// Unique pairs whose receiver lies within each radius (cumulative).
    pub pair_counts: Vec<usize>,
    /// `pair_counts[i] / (π · radii_km[i]²)`, in pairs per km².
    pub density_per_km2: Vec<f64>,
}

/// One fixed-width histogram bin: `[lo, hi)` (last bin closed above).
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Summary of one scalar deployment attribute: headline percentiles, a
/// fixed-width histogram, and the full empirical CDF support.
#[derive(Debug, Clone)]
pub struct DistributionSummary {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub p5: f64,
    pub p95: f64,
    pub histogram: Vec<HistogramBin>,
    /// Ascending sample values; the empirical CDF assigns rank (i+1)/n.
    pub sorted_values: Vec<f64>,
}

impl DistributionSummary {
    fn from_values(
        field: &'static str,
        values: Vec<f64>,
        bin: f64,
    ) -> Result<Self, AnalyticsError> {
        if !(bin.is_finite() && bin > 0.0) {
            return Err(AnalyticsError::InvalidBin(bin));
        }
        if values.is_empty() {
            return Err(AnalyticsError::NoStations);
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(AnalyticsError::NonFiniteField { field, value: bad });
        }
        let dist = EmpiricalDistribution::new(values)?;
        let histogram = histogram_counts(dist.samples(), bin)
            .into_iter()
            .map(|(lo, hi, count)| HistogramBin { lo, hi, count })
            .collect();
        Ok(Self {
            n: dist.n(),
            mean: dist.mean(),
            median: dist.percentile(50.0),
            p5: dist.percentile(5.0),
            p95: dist.percentile(95.0),
            histogram,
            sorted_values: dist.samples().to_vec(),
        })
    }

    /// Empirical CDF points `(value, rank)` with rank (i+1)/n.
    pub fn cdf_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n as f64;
        self.sorted_values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (v, (i + 1) as f64 / n))
    }

    /// Fraction of samples inside the closed interval `[lo, hi]`.
    pub fn fraction_within(&self, lo: f64, hi: f64) -> f64 {
        let hits = self
            .sorted_values
            .iter()
            .filter(|&&v| v >= lo && v <= hi)
            .count();
        hits as f64 / self.n as f64
    }
}

/// One tilt bin of the tilt-height correlation profile. Only bins holding
/// at least one link are reported.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltHeightBin {
    pub tilt_lo_deg: f64,
    pub tilt_hi_deg: f64,
    pub n: usize,
    pub mean_height_m: f64,
}

/// Counts unique pairs (by `pair_id`) whose receiver lies within each radius
/// of `center` and divides by the disc area. Distances are great-circle, so
/// regional radii (hundreds of km) are handled exactly.
pub fn density_vs_radius(
    stations: &[FixedStation],
    center: GeoPoint,
    radii_km: &[f64],
) -> Result<RadialDensitySeries, AnalyticsError> {
    if stations.is_empty() {
        return Err(AnalyticsError::NoStations);
    }
    let increasing = radii_km.windows(2).all(|w| w[0] < w[1]);
    if radii_km.is_empty() || !increasing || radii_km.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(AnalyticsError::InvalidRadii);
    }

    let mut seen = HashSet::new();
    let mut pair_distances_km = Vec::new();
    for s in stations {
        if seen.insert(s.pair_id.as_str()) {
            pair_distances_km.push(great_circle_distance_m(s.rx_pos, center) / 1000.0);
        }
    }

    let mut pair_counts = Vec::with_capacity(radii_km.len());
    let mut density_per_km2 = Vec::with_capacity(radii_km.len());
    for &r in radii_km {
        let count = pair_distances_km.iter().filter(|&&d| d <= r).count();
        pair_counts.push(count);
        density_per_km2.push(count as f64 / (std::f64::consts::PI * r * r));
    }
    Ok(RadialDensitySeries {
        radii_km: radii_km.to_vec(),
        pair_counts,
        density_per_km2,
    })
}

/// Distribution of receiver heights over all links.
pub fn height_distribution(
    stations: &[FixedStation],
    bin_m: f64,
) -> Result<DistributionSummary, AnalyticsError> {
    DistributionSummary::from_values(
        "rx_height_m",
        stations.iter().map(|s| s.rx_height_m).collect(),
        bin_m,
    )
}

/// Distribution of antenna tilts over all links.
pub fn tilt_histogram(
    stations: &[FixedStation],
    bin_deg: f64,
) -> Result<DistributionSummary, AnalyticsError> {
    DistributionSummary::from_values(
        "tilt_deg",
        stations.iter().map(|s| s.tilt_deg).collect(),
        bin_deg,
    )
}

/// Distribution of antenna beamwidths over all links.
pub fn beamwidth_histogram(
    stations: &[FixedStation],
    bin_deg: f64,
) -> Result<DistributionSummary, AnalyticsError> {
    DistributionSummary::from_values(
        "beamwidth_deg",
        stations.iter().map(|s| s.beamwidth_deg).collect(),
        bin_deg,
    )
}

/// Mean receiver height per tilt bin. Empty bins are absent from the output;
/// bins are reported in ascending tilt order.
pub fn tilt_height_profile(
    stations: &[FixedStation],
    bin_deg: f64,
) -> Result<Vec<TiltHeightBin>, AnalyticsError> {
    if !(bin_deg.is_finite() && bin_deg > 0.0) {
        return Err(AnalyticsError::InvalidBin(bin_deg));
    }
    if stations.is_empty() {
        return Err(AnalyticsError::NoStations);
    }
    for s in stations {
        if !s.tilt_deg.is_finite() {
            return Err(AnalyticsError::NonFiniteField {
                field: "tilt_deg",
                value: s.tilt_deg,
            });
        }
        if !s.rx_height_m.is_finite() {
            return Err(AnalyticsError::NonFiniteField {
                field: "rx_height_m",
                value: s.rx_height_m,
            });
        }
    }

    use std::collections::BTreeMap;
    let mut bins: BTreeMap<i64, (usize, f64)> = BTreeMap::new();
    for s in stations {
        let idx = (s.tilt_deg / bin_deg).floor() as i64;
        let entry = bins.entry(idx).or_insert((0, 0.0));
        entry.0 += 1;
        entry.1 += s.rx_height_m;
    }
    Ok(bins
        .into_iter()
        .map(|(idx, (n, sum))| TiltHeightBin {
            tilt_lo_deg: idx as f64 * bin_deg,
            tilt_hi_deg: (idx + 1) as f64 * bin_deg,
            n,
            mean_height_m: sum / n as f64,
        })
        .collect())
}

// ===== Plot-ready CSV emitters =====

/// `radius_km,pairs,density_per_km2`
pub fn write_density_csv<W: Write>(
    mut w: W,
    series: &RadialDensitySeries,
) -> Result<(), AnalyticsError> {
    writeln!(w, "radius_km,pairs,density_per_km2")?;
    for i in 0..series.radii_km.len() {
        writeln!(
            w,
            "{},{},{}",
            series.radii_km[i], series.pair_counts[i], series.density_per_km2[i]
        )?;
    }
    Ok(())
}

/// Empirical CDF of a deployment attribute: `<label>,cdf`.
pub fn write_cdf_csv<W: Write>(
    mut w: W,
    label: &str,
    summary: &DistributionSummary,
) -> Result<(), AnalyticsError> {
    writeln!(w, "{label},cdf")?;
    for (value, rank) in summary.cdf_points() {
        writeln!(w, "{value},{rank}")?;
    }
    Ok(())
}

/// Histogram of a deployment attribute: `<label>_lo,<label>_hi,count`.
pub fn write_histogram_csv<W: Write>(
    mut w: W,
    label: &str,
    summary: &DistributionSummary,
) -> Result<(), AnalyticsError> {
    writeln!(w, "{label}_lo,{label}_hi,count")?;
    for b in &summary.histogram {
        writeln!(w, "{},{},{}", b.lo, b.hi, b.count)?;
    }
    Ok(())
}

/// `tilt_lo_deg,tilt_hi_deg,links,mean_height_m`
pub fn write_tilt_height_csv<W: Write>(
    mut w: W,
    profile: &[TiltHeightBin],
) -> Result<(), AnalyticsError> {
    writeln!(w, "tilt_lo_deg,tilt_hi_deg,links,mean_height_m")?;
    for b in profile {
        writeln!(
            w,
            "{},{},{},{}",
            b.tilt_lo_deg, b.tilt_hi_deg, b.n, b.mean_height_m
        )?;
    }
    Ok(())
}
