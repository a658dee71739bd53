//! Transport-mode detection from smartphone accelerometer traces.
//!
//! The crate covers the whole offline path: reading the semicolon-delimited
//! trace files written on the phone ([`ingest`]), the on-device low-pass and
//! gating stages ([`preprocess`]), per-axis statistics and horizontal peak
//! features ([`features`]), and the road/rail rule classifier together with
//! the activity vote ([`classify`]). [`collector`] holds the listening-window
//! schedule and a synthetic trace generator.

pub mod classify;
pub mod collector;
pub mod error;
pub mod features;
pub mod ingest;
pub mod pipeline;
pub mod preprocess;
pub mod trace;

pub use classify::{
    classify, estimate_activity, should_listen, tally_add, Activity, ActivityTally, EngineFamily,
    ModeDecision, ReferenceRow, ReferenceTable, Rule,
};
pub use collector::{generate_trace, schedule_windows, GeneratorProfile, WindowSchedule};
pub use error::{Error, Result};
pub use features::{extract_features, AxisStats, FeatureVector, Histogram, Peak, PeakConfig};
pub use ingest::{DirectoryLoad, FileMeta};
pub use pipeline::{Pipeline, TraceAnalysis};
pub use preprocess::{FilterConfig, GateConfig, GravityReport, HorizontalSignal};
pub use trace::{Axis, SensorKind, SensorSample, SensorTrace, TransportMode};
