//! On-device signal path: low-pass smoothing, change gating, and locating
//! the gravity and horizontal axes of an accelerometer trace.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::{Axis, SensorKind, SensorSample, SensorTrace};

pub const STANDARD_GRAVITY: f64 = 9.81;

/// Low-pass filter setup.
///
/// `alpha = t / (t + dT)` where `t` is the latency the filter may add and
/// `dT` is the sensor event delivery period. The defaults take the 20 s
/// listening window as the latency and a 200 µs delivery period, both
/// expressed in microseconds here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    pub alpha: f64,
    /// Timing the factor was derived from, if any: (latency ms, period µs).
    pub timing: Option<(f64, f64)>,
}

impl FilterConfig {
    pub fn from_timing(t_latency_ms: f64, dt_us: f64) -> Result<Self> {
        let alpha = compute_alpha(t_latency_ms * 1000.0, dt_us)?;
        Ok(FilterConfig {
            alpha,
            timing: Some((t_latency_ms, dt_us)),
        })
    }

    /// A config with an explicit smoothing factor.
    pub fn with_alpha(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(FilterConfig {
            alpha,
            timing: None,
        })
    }
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig::from_timing(20_000.0, 200.0).expect("default timing is valid")
    }
}

/// Minimum change between kept samples, per sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateConfig {
    /// m/s²
    pub accel_threshold: f64,
    /// rad/s
    pub gyro_threshold: f64,
}

impl Default for GateConfig {
    fn default() -> Self {
        GateConfig {
            accel_threshold: 0.4,
            gyro_threshold: 0.5,
        }
    }
}

impl GateConfig {
    pub fn threshold(&self, kind: SensorKind) -> f64 {
        match kind {
            SensorKind::Accelerometer => self.accel_threshold,
            SensorKind::Gyroscope => self.gyro_threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GravityReport {
    pub gravity_axis: Axis,
    /// Mean of |value| for x, y, z.
    pub per_axis_mean_abs: [f64; 3],
    /// Distance of the gravity axis' mean |value| from 9.81 m/s².
    pub confidence: f64,
}

/// The centered horizontal acceleration used for peak analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizontalSignal {
    pub t_ms: Vec<u64>,
    pub h: Vec<f64>,
    pub source_axis: Axis,
}

impl HorizontalSignal {
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::BadAlpha(alpha))
    }
}

/// `t / (t + dT)`; both arguments in the same unit.
pub fn compute_alpha(t_latency: f64, dt: f64) -> Result<f64> {
    if t_latency.is_nan() || t_latency <= 0.0 || t_latency.is_infinite() {
        return Err(Error::NonPositiveLatency(t_latency));
    }
    let alpha = t_latency / (t_latency + dt);
    // negative or NaN dT pushes alpha out of (0, 1]
    if dt.is_nan() || dt < 0.0 {
        return Err(Error::BadAlpha(alpha));
    }
    Ok(alpha)
}

/// First-order low-pass: `y[0] = x[0]`, `y[i] = a·x[i] + (1 − a)·y[i − 1]`.
pub fn lowpass(values: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let mut out = Vec::with_capacity(values.len());
    let mut prev: Option<f64> = None;
    for &x in values {
        let y = match prev {
            None => x,
            Some(p) => alpha * x + (1.0 - alpha) * p,
        };
        out.push(y);
        prev = Some(y);
    }
    Ok(out)
}

pub fn filter_trace(trace: &SensorTrace, cfg: &FilterConfig) -> Result<SensorTrace> {
    let xs = lowpass(&trace.axis_values(Axis::X), cfg.alpha)?;
    let ys = lowpass(&trace.axis_values(Axis::Y), cfg.alpha)?;
    let zs = lowpass(&trace.axis_values(Axis::Z), cfg.alpha)?;
    let samples = trace
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| SensorSample::new(s.t_ms, xs[i], ys[i], zs[i]))
        .collect();
    Ok(SensorTrace {
        samples,
        ..trace.clone()
    })
}

fn change_norm(a: &SensorSample, b: &SensorSample) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let dz = b.z - a.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Keeps the first sample and every sample whose change from the last kept
/// sample exceeds the sensor's threshold.
pub fn gate_trace(trace: &SensorTrace, cfg: &GateConfig) -> SensorTrace {
    let threshold = cfg.threshold(trace.kind);
    let mut kept: Vec<SensorSample> = Vec::with_capacity(trace.len());
    for s in &trace.samples {
        match kept.last() {
            Some(last) if change_norm(last, s) <= threshold => {}
            _ => kept.push(*s),
        }
    }
    SensorTrace {
        samples: kept,
        ..trace.clone()
    }
}

/// Picks the axis whose mean absolute reading lies closest to 9.81 m/s².
pub fn estimate_gravity_axis(trace: &SensorTrace) -> Result<GravityReport> {
    if trace.kind != SensorKind::Accelerometer {
        return Err(Error::NotAccelerometer);
    }
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let n = trace.len() as f64;
    let mut mean_abs = [0.0; 3];
    for axis in Axis::ALL {
        mean_abs[axis.index()] = trace
            .samples
            .iter()
            .map(|s| s.axis(axis).abs())
            .sum::<f64>()
            / n;
    }
    let distance = |a: Axis| (mean_abs[a.index()] - STANDARD_GRAVITY).abs();
    // strict comparison keeps the earlier axis on ties
    let mut best = Axis::X;
    for axis in [Axis::Y, Axis::Z] {
        if distance(axis) < distance(best) {
            best = axis;
        }
    }
    Ok(GravityReport {
        gravity_axis: best,
        per_axis_mean_abs: mean_abs,
        confidence: distance(best),
    })
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn sum_sq_dev(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum()
}

/// Centers the higher-variance of the two non-gravity axes.
pub fn horizontal_signal(trace: &SensorTrace, gravity: Axis) -> Result<HorizontalSignal> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if trace.len() < 2 {
        return Err(Error::DegenerateTrace(trace.len()));
    }
    let candidates: Vec<Axis> = Axis::ALL.into_iter().filter(|&a| a != gravity).collect();
    let (first, second) = (candidates[0], candidates[1]);
    let a_first = trace.axis_values(first);
    let a_second = trace.axis_values(second);
    let (source_axis, values) = if sum_sq_dev(&a_second) > sum_sq_dev(&a_first) {
        (second, a_second)
    } else {
        (first, a_first)
    };
    let h = if values.iter().all(|&v| v == values[0]) {
        vec![0.0; values.len()]
    } else {
        let rough = mean(&values);
        let m = rough + values.iter().map(|v| v - rough).sum::<f64>() / values.len() as f64;
        values.iter().map(|v| v - m).collect()
    };
    Ok(HorizontalSignal {
        t_ms: trace.timestamps(),
        h,
        source_axis,
    })
}
