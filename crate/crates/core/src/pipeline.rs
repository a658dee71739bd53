//! End-to-end processing of one trace: optional smoothing and gating,
//! feature extraction, and classification.

use serde::{Deserialize, Serialize};

use crate::classify::{classify, ModeDecision, ReferenceTable};
use crate::error::Result;
use crate::features::{
    axis_stats, extract_features_with, histogram10, AxisStats, FeatureVector, Histogram, PeakConfig,
};
use crate::preprocess::{filter_trace, gate_trace, FilterConfig, GateConfig};
use crate::trace::{Axis, SensorTrace};

#[derive(Debug, Clone, PartialEq)]
pub struct Pipeline {
    /// Low-pass applied before analysis; `None` analyzes the trace as stored.
    pub filter: Option<FilterConfig>,
    pub gate: Option<GateConfig>,
    pub peaks: PeakConfig,
    pub reference: ReferenceTable,
}

impl Default for Pipeline {
    fn default() -> Self {
        Pipeline {
            filter: Some(FilterConfig::default()),
            gate: None,
            peaks: PeakConfig::default(),
            reference: ReferenceTable::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisReport {
    pub axis: Axis,
    pub stats: AxisStats,
    /// Histogram of |value|.
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceAnalysis {
    pub samples: usize,
    pub duration_ms: u64,
    pub axes: Vec<AxisReport>,
    pub features: FeatureVector,
    pub decision: ModeDecision,
}

impl Pipeline {
    pub fn prepare(&self, trace: &SensorTrace) -> Result<SensorTrace> {
        let mut out = match &self.filter {
            Some(cfg) => filter_trace(trace, cfg)?,
            None => trace.clone(),
        };
        if let Some(gate) = &self.gate {
            out = gate_trace(&out, gate);
        }
        Ok(out)
    }

    pub fn features(&self, trace: &SensorTrace) -> Result<FeatureVector> {
        extract_features_with(&self.prepare(trace)?, &self.peaks)
    }

    pub fn classify(&self, trace: &SensorTrace) -> Result<(FeatureVector, ModeDecision)> {
        let fv = self.features(trace)?;
        let decision = classify(&fv, &self.reference);
        Ok((fv, decision))
    }

    pub fn analyze(&self, trace: &SensorTrace) -> Result<TraceAnalysis> {
        let prepared = self.prepare(trace)?;
        let features = extract_features_with(&prepared, &self.peaks)?;
        let mut axes = Vec::with_capacity(3);
        for axis in Axis::ALL {
            let values = prepared.axis_values(axis);
            let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
            axes.push(AxisReport {
                axis,
                stats: axis_stats(&values)?,
                histogram: histogram10(&abs)?,
            });
        }
        let decision = classify(&features, &self.reference);
        Ok(TraceAnalysis {
            samples: prepared.len(),
            duration_ms: prepared.duration_ms()?,
            axes,
            features,
            decision,
        })
    }
}
