//! Fixtures shared by the benchmarks.

use modeclass_core::ingest::write_sensor_csv;
use modeclass_core::preprocess::{estimate_gravity_axis, horizontal_signal};
use modeclass_core::{
    generate_trace, GeneratorProfile, HorizontalSignal, SensorTrace, TransportMode,
};

/// A generated trace of the given length, seed 1.
pub fn trace(mode: TransportMode, seconds: f64) -> SensorTrace {
    let profile = GeneratorProfile::for_mode(mode, 1).expect("motorized mode");
    generate_trace(&profile, seconds).expect("positive duration")
}

pub fn csv_text(mode: TransportMode, seconds: f64) -> String {
    write_sensor_csv(&trace(mode, seconds)).expect("under an hour")
}

pub fn horizontal(mode: TransportMode, seconds: f64) -> HorizontalSignal {
    let t = trace(mode, seconds);
    let g = estimate_gravity_axis(&t).expect("non-empty");
    horizontal_signal(&t, g.gravity_axis).expect("non-empty")
}
