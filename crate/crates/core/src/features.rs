//! Statistical and peak features of an accelerometer trace.
//!
//! Statistics are taken over absolute values (variance and standard
//! deviation with the sample N−1 divisor) while the RMS error and the
//! residual count are taken over signed values with the population divisor.
//! Peaks are found on the centered horizontal signal by repeatedly taking the
//! global maximum of a working copy and zeroing just that sample; each peak's
//! area is a left-endpoint rectangle sum of |h| over a ±`half_window` sample
//! window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::preprocess::{self, GravityReport, HorizontalSignal};
use crate::trace::{SensorTrace, TransportMode};

pub const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisStats {
    pub mean_abs: f64,
    pub variance_abs: f64,
    pub std_abs: f64,
    pub min_abs: f64,
    pub max_abs: f64,
    pub range_abs: f64,
    pub signed_mean: f64,
    pub rmse: f64,
    pub residual_within_rmse: usize,
}

pub fn axis_stats(values: &[f64]) -> Result<AxisStats> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let nf = n as f64;
    let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let mean_abs = abs.iter().sum::<f64>() / nf;
    let variance_abs = abs.iter().map(|a| (a - mean_abs).powi(2)).sum::<f64>() / (nf - 1.0);
    let min_abs = abs.iter().copied().fold(f64::INFINITY, f64::min);
    let max_abs = abs.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let signed_mean = values.iter().sum::<f64>() / nf;
    let rmse = (values
        .iter()
        .map(|v| (signed_mean - v).powi(2))
        .sum::<f64>()
        / nf)
        .sqrt();
    let residual_within_rmse = values
        .iter()
        .filter(|&&v| (signed_mean - v).abs() < rmse)
        .count();

    Ok(AxisStats {
        // rounding can push the mean a hair outside [min, max] for flat input
        mean_abs: mean_abs.clamp(min_abs, max_abs),
        variance_abs,
        std_abs: variance_abs.sqrt(),
        min_abs,
        max_abs,
        range_abs: max_abs - min_abs,
        signed_mean,
        rmse,
        residual_within_rmse,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_centers: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Ten equal-width bins spanning `[min, max]`.
///
/// A value on an interior edge falls in the upper bin and the maximum falls
/// in the last bin. When every value is equal the bins get unit width with
/// the value at the center of bin 5.
pub fn histogram10(values: &[f64]) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut counts = vec![0usize; HISTOGRAM_BINS];

    if hi == lo {
        counts[HISTOGRAM_BINS / 2] = values.len();
        let bin_centers = (0..HISTOGRAM_BINS)
            .map(|k| lo + k as f64 - (HISTOGRAM_BINS / 2) as f64)
            .collect();
        return Ok(Histogram {
            bin_centers,
            counts,
        });
    }

    let width = (hi - lo) / HISTOGRAM_BINS as f64;
    for &v in values {
        let bin = ((v - lo) / width).floor() as usize;
        counts[bin.min(HISTOGRAM_BINS - 1)] += 1;
    }
    let bin_centers = (0..HISTOGRAM_BINS)
        .map(|k| lo + width * (k as f64 + 0.5))
        .collect();
    Ok(Histogram {
        bin_centers,
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakConfig {
    pub n_peaks: usize,
    pub half_window: usize,
}

impl Default for PeakConfig {
    fn default() -> Self {
        PeakConfig {
            n_peaks: 10,
            half_window: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub index: usize,
    /// Centered acceleration at the peak, m/s².
    pub value: f64,
    /// m/s
    pub area: f64,
    /// Seconds spanned by the window.
    pub interval_s: f64,
    /// Inclusive sample range `[start, end]`.
    pub window: (usize, usize),
}

/// Σ |h[i]| · (t[i+1] − t[i]) for i in `center − half_window .. center + half_window`.
pub fn peak_area(sig: &HorizontalSignal, center: usize, half_window: usize) -> Result<f64> {
    let len = sig.len();
    if center < half_window || center + half_window >= len || sig.t_ms.len() != len {
        return Err(Error::WindowOutOfBounds { center, len });
    }
    let start = center - half_window;
    let end = center + half_window;
    // accumulate in m/s² · ms so uniform integer grids stay exact
    let sum: f64 = (start..end)
        .map(|i| sig.h[i].abs() * (sig.t_ms[i + 1] - sig.t_ms[i]) as f64)
        .sum();
    Ok(sum / 1000.0)
}

pub fn find_peaks(sig: &HorizontalSignal, cfg: &PeakConfig) -> Result<Vec<Peak>> {
    let window = 2 * cfg.half_window + 1;
    let len = sig.len();
    if len < window {
        return Err(Error::SignalTooShort { len, window });
    }
    let hw = cfg.half_window;
    let mut work = sig.h.clone();
    let mut peaks = Vec::with_capacity(cfg.n_peaks);

    while peaks.len() < cfg.n_peaks {
        let mut best = 0usize;
        for (i, &v) in work.iter().enumerate().skip(1) {
            if v > work[best] {
                best = i;
            }
        }
        let value = work[best];
        if value.is_nan() || value <= 0.0 {
            break;
        }
        if best >= hw && best + hw < len {
            peaks.push(Peak {
                index: best,
                value,
                area: peak_area(sig, best, hw)?,
                interval_s: (sig.t_ms[best + hw] - sig.t_ms[best - hw]) as f64 / 1000.0,
                window: (best - hw, best + hw),
            });
        }
        work[best] = 0.0;
    }
    Ok(peaks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub mode_label: Option<TransportMode>,
    pub gravity: GravityReport,
    pub horizontal_axis: crate::trace::Axis,
    /// Statistics of |horizontal-axis readings|.
    pub stats: AxisStats,
    /// m/s
    pub avg_peak_area: f64,
    /// s
    pub avg_peak_interval: f64,
    pub peaks: Vec<Peak>,
}

impl FeatureVector {
    /// A vector carrying only the fields the classifier reads.
    pub fn from_summary(std_abs: f64, avg_peak_interval: f64, avg_peak_area: f64) -> Self {
        FeatureVector {
            mode_label: None,
            gravity: GravityReport {
                gravity_axis: crate::trace::Axis::Z,
                per_axis_mean_abs: [0.0, 0.0, preprocess::STANDARD_GRAVITY],
                confidence: 0.0,
            },
            horizontal_axis: crate::trace::Axis::X,
            stats: AxisStats {
                mean_abs: 0.0,
                variance_abs: std_abs * std_abs,
                std_abs,
                min_abs: 0.0,
                max_abs: 0.0,
                range_abs: 0.0,
                signed_mean: 0.0,
                rmse: 0.0,
                residual_within_rmse: 0,
            },
            avg_peak_area,
            avg_peak_interval,
            peaks: Vec::new(),
        }
    }
}

pub fn extract_features(trace: &SensorTrace) -> Result<FeatureVector> {
    extract_features_with(trace, &PeakConfig::default())
}

pub fn extract_features_with(trace: &SensorTrace, cfg: &PeakConfig) -> Result<FeatureVector> {
    let gravity = preprocess::estimate_gravity_axis(trace)?;
    let sig = preprocess::horizontal_signal(trace, gravity.gravity_axis)?;
    let stats = axis_stats(&trace.axis_values(sig.source_axis))?;
    let peaks = find_peaks(&sig, cfg)?;
    if peaks.is_empty() {
        return Err(Error::DegenerateTrace(trace.len()));
    }
    let n = peaks.len() as f64;
    let avg_peak_area = peaks.iter().map(|p| p.area).sum::<f64>() / n;
    let avg_peak_interval = peaks.iter().map(|p| p.interval_s).sum::<f64>() / n;
    Ok(FeatureVector {
        mode_label: trace.label,
        gravity,
        horizontal_axis: sig.source_axis,
        stats,
        avg_peak_area,
        avg_peak_interval,
        peaks,
    })
}
