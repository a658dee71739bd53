use modeclass_core::classify::EngineFamily;
use modeclass_core::preprocess::{estimate_gravity_axis, horizontal_signal};
use modeclass_core::{
    extract_features, generate_trace, Axis, GeneratorProfile, Pipeline, TransportMode,
};

fn centered_std(h: &[f64]) -> f64 {
    let n = h.len() as f64;
    let m = h.iter().sum::<f64>() / n;
    (h.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

#[test]
fn generated_traces_hit_their_targets() {
    for mode in TransportMode::MOTORIZED {
        for seed in 1..=5 {
            let profile = GeneratorProfile::for_mode(mode, seed).unwrap();
            let trace = generate_trace(&profile, 20.0).unwrap();
            let gravity = estimate_gravity_axis(&trace).unwrap();
            assert!(gravity.confidence < 0.1, "{mode} seed {seed}: {gravity:?}");
            let sig = horizontal_signal(&trace, gravity.gravity_axis).unwrap();
            assert_eq!(sig.source_axis, Axis::X);

            let sd = centered_std(&sig.h);
            assert!(
                (sd / profile.target_std - 1.0).abs() <= 0.10,
                "{mode} seed {seed}: std {sd} vs {}",
                profile.target_std
            );
            let fv = extract_features(&trace).unwrap();
            assert!(
                (fv.avg_peak_area / profile.target_peak_area - 1.0).abs() <= 0.20,
                "{mode} seed {seed}: area {} vs {}",
                fv.avg_peak_area,
                profile.target_peak_area
            );
            assert!(
                (fv.avg_peak_interval / profile.target_interval_s - 1.0).abs() <= 0.20,
                "{mode} seed {seed}: interval {}",
                fv.avg_peak_interval
            );
        }
    }
}

#[test]
fn metro_profile_lands_in_the_rail_band() {
    let profile = GeneratorProfile::for_mode(TransportMode::Metro, 1).unwrap();
    let fv = extract_features(&generate_trace(&profile, 20.0).unwrap()).unwrap();
    assert!(fv.stats.std_abs >= 1.5, "{}", fv.stats.std_abs);
}

#[test]
fn bus_profile_classifies_as_bus() {
    let profile = GeneratorProfile::for_mode(TransportMode::Bus, 1).unwrap();
    let (_, decision) = Pipeline::default()
        .classify(&generate_trace(&profile, 20.0).unwrap())
        .unwrap();
    assert_eq!(decision.mode, TransportMode::Bus);
    assert!(decision.confident);
}

#[test]
fn every_mode_round_trips_through_the_pipeline() {
    let pipeline = Pipeline::default();
    for mode in TransportMode::MOTORIZED {
        for seed in 1..=10 {
            let profile = GeneratorProfile::for_mode(mode, seed).unwrap();
            let (_, decision) = pipeline
                .classify(&generate_trace(&profile, 20.0).unwrap())
                .unwrap();
            assert_eq!(
                Some(decision.family),
                EngineFamily::of(mode),
                "{mode} seed {seed}"
            );
            if decision.family == EngineFamily::Road {
                assert_eq!(decision.mode, mode, "{mode} seed {seed}");
            }
        }
    }
}

#[test]
fn longer_sessions_still_calibrate() {
    let profile = GeneratorProfile::for_mode(TransportMode::Motorbike, 4).unwrap();
    let trace = generate_trace(&profile, 65.0).unwrap();
    assert!(trace.duration_ms().unwrap() <= 65_000);
    let fv = extract_features(&trace).unwrap();
    assert!((fv.avg_peak_area / profile.target_peak_area - 1.0).abs() <= 0.20);
}
