//! Domain types for recorded sensor traces.
//!
//! A trace is one listening window of a single motion sensor: an ordered list
//! of timestamped three-axis readings, optionally labeled with the transport
//! mode the user selected while recording.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SensorKind {
    Accelerometer,
    Gyroscope,
}

/// The user-selectable transport modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TransportMode {
    Car,
    Motorbike,
    Metro,
    Bus,
    Train,
    Other,
}

impl TransportMode {
    pub const ALL: [TransportMode; 6] = [
        TransportMode::Car,
        TransportMode::Motorbike,
        TransportMode::Metro,
        TransportMode::Bus,
        TransportMode::Train,
        TransportMode::Other,
    ];

    /// The five motorized modes covered by the reference analysis.
    pub const MOTORIZED: [TransportMode; 5] = [
        TransportMode::Bus,
        TransportMode::Car,
        TransportMode::Motorbike,
        TransportMode::Metro,
        TransportMode::Train,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TransportMode::Car => "Car",
            TransportMode::Motorbike => "Motorbike",
            TransportMode::Metro => "Metro",
            TransportMode::Bus => "Bus",
            TransportMode::Train => "Train",
            TransportMode::Other => "Other",
        }
    }
}

impl fmt::Display for TransportMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Case-sensitive: only the exact labels of the selection list parse.
impl FromStr for TransportMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TransportMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown transport mode {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// One reading: milliseconds since the window started plus the three axis
/// values (m/s² for the accelerometer, rad/s for the gyroscope).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorSample {
    pub t_ms: u64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SensorSample {
    pub fn new(t_ms: u64, x: f64, y: f64, z: f64) -> Self {
        SensorSample { t_ms, x, y, z }
    }

    pub fn axis(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Z => self.z,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorTrace {
    pub kind: SensorKind,
    pub label: Option<TransportMode>,
    pub captured_at: Option<NaiveDateTime>,
    pub samples: Vec<SensorSample>,
}

impl SensorTrace {
    pub fn new(kind: SensorKind, samples: Vec<SensorSample>) -> Self {
        SensorTrace {
            kind,
            label: None,
            captured_at: None,
            samples,
        }
    }

    pub fn with_label(mut self, label: TransportMode) -> Self {
        self.label = Some(label);
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Elapsed time between the first and the last sample.
    pub fn duration_ms(&self) -> Result<u64> {
        trace_duration(self)
    }

    pub fn axis_values(&self, axis: Axis) -> Vec<f64> {
        axis_values(self, axis)
    }

    pub fn timestamps(&self) -> Vec<u64> {
        self.samples.iter().map(|s| s.t_ms).collect()
    }

    /// True when every sample is finite and timestamps strictly increase.
    pub fn is_well_formed(&self) -> bool {
        self.samples.iter().all(SensorSample::is_finite)
            && self.samples.windows(2).all(|w| w[0].t_ms < w[1].t_ms)
    }
}

pub fn trace_duration(trace: &SensorTrace) -> Result<u64> {
    match (trace.samples.first(), trace.samples.last()) {
        (Some(first), Some(last)) => Ok(last.t_ms - first.t_ms),
        _ => Err(Error::EmptyTrace),
    }
}

pub fn axis_values(trace: &SensorTrace, axis: Axis) -> Vec<f64> {
    trace.samples.iter().map(|s| s.axis(axis)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_at(times: &[u64]) -> SensorTrace {
        let samples = times
            .iter()
            .enumerate()
            .map(|(i, &t)| SensorSample::new(t, i as f64, 10.0 + i as f64, -(i as f64)))
            .collect();
        SensorTrace::new(SensorKind::Accelerometer, samples)
    }

    #[test]
    fn duration_is_last_minus_first() {
        assert_eq!(trace_duration(&trace_at(&[0, 100, 250])).unwrap(), 250);
        assert_eq!(trace_duration(&trace_at(&[1238])).unwrap(), 0);
        assert_eq!(
            trace_duration(&trace_at(&[1238, 2000, 5266])).unwrap(),
            4028
        );
    }

    #[test]
    fn duration_of_empty_trace_fails() {
        assert!(matches!(
            trace_duration(&trace_at(&[])),
            Err(Error::EmptyTrace)
        ));
    }

    #[test]
    fn axis_projection_preserves_order() {
        let t = trace_at(&[0, 10, 20]);
        assert_eq!(axis_values(&t, Axis::X), vec![0.0, 1.0, 2.0]);
        assert_eq!(axis_values(&t, Axis::Y), vec![10.0, 11.0, 12.0]);
        assert!(axis_values(&trace_at(&[]), Axis::Z).is_empty());

        let fig = SensorTrace::new(
            SensorKind::Accelerometer,
            vec![SensorSample::new(1238, -0.565, 3.380, 7.843)],
        );
        assert_eq!(axis_values(&fig, Axis::Z)[0], 7.843);
    }

    #[test]
    fn mode_labels_parse_case_sensitively() {
        for m in TransportMode::ALL {
            assert_eq!(m.as_str().parse::<TransportMode>().unwrap(), m);
        }
        assert!("bus".parse::<TransportMode>().is_err());
        assert!("Bicycle".parse::<TransportMode>().is_err());
    }
}
