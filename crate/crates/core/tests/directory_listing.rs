use std::fs;

use modeclass_core::ingest::{format_filename, load_directory, write_sensor_csv};
use modeclass_core::{generate_trace, GeneratorProfile, SensorKind, TransportMode};

// the server listing of one upload batch
const LISTING: [&str; 20] = [
    "acceleration_Metro_2016-04-10_14-20-37.csv",
    "acceleration_Metro_2016-04-10_14-23-26.csv",
    "acceleration_Metro_2016-04-10_14-26-31.csv",
    "acceleration_Metro_2016-04-10_14-29-15.csv",
    "acceleration_Metro_2016-04-12_06-52-54.csv",
    "acceleration_Metro_2016-04-12_06-55-32.csv",
    "acceleration_Motorbike_2016-04-10_18-25-32.csv",
    "acceleration_Motorbike_2016-04-10_18-28-21.csv",
    "acceleration_Motorbike_2016-04-10_18-31-03.csv",
    "acceleration_Motorbike_2016-04-10_18-33-21.csv",
    "acceleration_Motorbike_2016-04-10_18-35-31.csv",
    "acceleration_Motorbike_2016-04-10_18-38-36.csv",
    "acceleration_Motorbike_2016-04-10_18-41-05.csv",
    "acceleration_Motorbike_2016-04-10_18-43-42.csv",
    "acceleration_Motorbike_2016-04-10_18-46-10.csv",
    "acceleration_Motorbike_2016-04-10_18-48-53.csv",
    "acceleration_Motorbike_2016-04-10_18-51-36.csv",
    "acceleration_Motorbike_2016-04-10_18-54-17.csv",
    "acceleration_Motorbike_2016-04-10_18-56-28.csv",
    "acceleration_Motorbike_2016-04-10_18-59-37.csv",
];

#[test]
fn loads_a_full_upload_batch() {
    let dir = tempfile::tempdir().unwrap();
    for (i, name) in LISTING.iter().enumerate() {
        let meta = modeclass_core::ingest::parse_filename(name).unwrap();
        assert_eq!(&format_filename(&meta), name);
        let profile = GeneratorProfile::for_mode(meta.mode, i as u64).unwrap();
        let trace = generate_trace(&profile, 2.0).unwrap();
        fs::write(dir.path().join(name), write_sensor_csv(&trace).unwrap()).unwrap();
    }
    let load = load_directory(dir.path()).unwrap();
    assert!(load.skipped.is_empty());
    assert_eq!(load.traces.len(), 20);
    let names: Vec<String> = load
        .traces
        .iter()
        .map(|(m, _)| format_filename(m))
        .collect();
    assert_eq!(names, LISTING.to_vec());
    for (meta, trace) in &load.traces {
        assert_eq!(trace.kind, SensorKind::Accelerometer);
        assert_eq!(trace.label, Some(meta.mode));
        assert!(matches!(
            meta.mode,
            TransportMode::Metro | TransportMode::Motorbike
        ));
    }
}
