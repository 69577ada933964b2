//! Empirical distributions and report emitters.
//!
//! Interference results are reported as empirical CDFs, normalized PDFs,
//! linear-interpolation percentiles, and threshold exceedance fractions.
//! Samples may include `-inf` ("no interference received"); only NaN is
//! rejected. Density histograms require fully finite data.

use std::io::Write;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("empirical distribution needs at least one sample")]
    Empty,
    #[error("samples must not contain NaN")]
    NaN,
    #[error("PDF histogram requires finite samples ({0} non-finite present)")]
    NonFiniteForPdf(usize),
    #[error("bin width must be positive and finite, got {0}")]
    InvalidBin(f64),
    #[error("failed to write report: {0}")]
    Io(#[from] std::io::Error),
}

/// A sorted sample set with distribution queries.
#[derive(Debug, Clone)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self, StatsError> {
        if samples.is_empty() {
            return Err(StatsError::Empty);
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(StatsError::NaN);
        }
        samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { samples })
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    /// Samples in ascending order.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn min(&self) -> f64 {
        self.samples[0]
    }

    pub fn max(&self) -> f64 {
        *self.samples.last().unwrap()
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Right-continuous empirical CDF: fraction of samples `<= x`.
    pub fn cdf_at(&self, x: f64) -> f64 {
        let below = self.samples.partition_point(|&s| s <= x);
        below as f64 / self.samples.len() as f64
    }

    /// Linear-interpolation quantile; `p` is in percent, `[0, 100]`.
    pub fn percentile(&self, p: f64) -> f64 {
        assert!(
            (0.0..=100.0).contains(&p),
            "percentile {p} outside [0, 100]"
        );
        let n = self.samples.len();
        let rank = p / 100.0 * (n - 1) as f64;
        let lo = rank.floor() as usize;
        let hi = rank.ceil() as usize;
        let frac = rank - lo as f64;
        let (a, b) = (self.samples[lo], self.samples[hi]);
        if frac == 0.0 || a == b {
            return a;
        }
        let gap = b - a;
        if gap.is_finite() {
            a + frac * gap
        } else if a == f64::NEG_INFINITY {
            // The limit of interpolating toward an unbounded lower sample.
            a
        } else {
            b
        }
    }

    /// Fraction of samples strictly above `threshold_db`.
    pub fn exceedance(&self, threshold_db: f64) -> f64 {
        1.0 - self.cdf_at(threshold_db)
    }

    /// Normalized density histogram with bins of width `bin_db`, anchored
    /// on multiples of the bin width. Contiguous from the first to the last
    /// occupied bin; fails if any sample is non-finite.
    pub fn pdf_histogram(&self, bin_db: f64) -> Result<Vec<PdfBin>, StatsError> {
        if !bin_db.is_finite() || bin_db <= 0.0 {
            return Err(StatsError::InvalidBin(bin_db));
        }
        let non_finite = self.samples.iter().filter(|x| !x.is_finite()).count();
        if non_finite > 0 {
            return Err(StatsError::NonFiniteForPdf(non_finite));
        }
        let counts = histogram_counts(&self.samples, bin_db);
        let n = self.samples.len() as f64;
        Ok(counts
            .into_iter()
            .map(|(lo, hi, count)| PdfBin {
                lo_db: lo,
                hi_db: hi,
                count,
                density_per_db: count as f64 / (n * bin_db),
            })
            .collect())
    }

    /// Mean/median/p95 plus exceedance against `threshold_db`.
    pub fn summarize(&self, threshold_db: f64) -> SummaryStats {
        SummaryStats {
            n: self.n(),
            mean_db: self.mean(),
            median_db: self.percentile(50.0),
            p95_db: self.percentile(95.0),
            exceed_fraction: self.exceedance(threshold_db),
        }
    }
}

/// One density-histogram bin over `[lo_db, hi_db)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdfBin {
    pub lo_db: f64,
    pub hi_db: f64,
    pub count: usize,
    pub density_per_db: f64,
}

/// Headline statistics of one sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub n: usize,
    pub mean_db: f64,
    pub median_db: f64,
    pub p95_db: f64,
    pub exceed_fraction: f64,
}

/// Fixed-width binning over sorted finite values: contiguous bins anchored
/// on multiples of `bin`, covering `[first occupied, last occupied]`.
/// Shared by the PDF histogram and the deployment analytics.
pub(crate) fn histogram_counts(sorted: &[f64], bin: f64) -> Vec<(f64, f64, usize)> {
    debug_assert!(!sorted.is_empty());
    let anchor = (sorted[0] / bin).floor() * bin;
    let last_idx = ((sorted[sorted.len() - 1] - anchor) / bin).floor() as usize;
    let mut counts = vec![0usize; last_idx + 1];
    for &x in sorted {
        let idx = (((x - anchor) / bin).floor() as usize).min(last_idx);
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let lo = anchor + i as f64 * bin;
            (lo, lo + bin, c)
        })
        .collect()
}

/// One labeled row of a headline-statistics table.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub scenario: String,
    pub view: String,
    pub stats: SummaryStats,
}

// ===== CSV emitters =====

/// Emits the empirical CDF as `value_db,cdf` rows, one per sample.
pub fn write_cdf_csv<W: Write>(mut w: W, d: &EmpiricalDistribution) -> Result<(), StatsError> {
    writeln!(w, "inr_db,cdf")?;
    let n = d.n() as f64;
    for (i, x) in d.samples().iter().enumerate() {
        writeln!(w, "{},{}", x, (i + 1) as f64 / n)?;
    }
    Ok(())
}

/// Emits PDF bins as `bin_lo_db,bin_hi_db,count,density_per_db` rows.
pub fn write_pdf_csv<W: Write>(mut w: W, bins: &[PdfBin]) -> Result<(), StatsError> {
    writeln!(w, "bin_lo_db,bin_hi_db,count,density_per_db")?;
    for b in bins {
        writeln!(
            w,
            "{},{},{},{}",
            b.lo_db, b.hi_db, b.count, b.density_per_db
        )?;
    }
    Ok(())
}

/// Emits labeled headline statistics, one row per (scenario, view).
pub fn write_summary_csv<W: Write>(mut w: W, rows: &[SummaryRow]) -> Result<(), StatsError> {
    writeln!(
        w,
        "scenario,view,n,mean_db,median_db,p95_db,exceed_fraction"
    )?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.scenario,
            r.view,
            r.stats.n,
            r.stats.mean_db,
            r.stats.median_db,
            r.stats.p95_db,
            r.stats.exceed_fraction
        )?;
    }
    Ok(())
}
