mod support;

use modeclass_core::classify::{classify, classify_family, EngineFamily, ReferenceTable};
use modeclass_core::features::{axis_stats, find_peaks, histogram10, FeatureVector, PeakConfig};
use modeclass_core::ingest::{
    format_filename, parse_filename, parse_sensor_csv, write_sensor_csv, FileMeta,
};
use modeclass_core::preprocess::{
    estimate_gravity_axis, gate_trace, horizontal_signal, lowpass, GateConfig, HorizontalSignal,
};
use modeclass_core::{Axis, SensorKind, SensorSample, SensorTrace, TransportMode};
use proptest::prelude::*;
use support::oracles::{brute_force_peaks, population_std, recurrence_lowpass};

fn finite_values(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 1..max_len)
}

fn trace_strategy(kind: SensorKind) -> impl Strategy<Value = SensorTrace> {
    prop::collection::vec(
        (1u64..500, -20.0f64..20.0, -20.0f64..20.0, -20.0f64..20.0),
        0..200,
    )
    .prop_map(move |rows| {
        let mut t = 0;
        let samples = rows
            .into_iter()
            .map(|(dt, x, y, z)| {
                t += dt;
                SensorSample::new(t, x, y, z)
            })
            .collect();
        SensorTrace::new(kind, samples)
    })
}

fn signal_strategy() -> impl Strategy<Value = HorizontalSignal> {
    (21usize..300, any::<bool>()).prop_flat_map(|(n, coarse)| {
        let values = if coarse {
            // coarse grid to provoke equal maxima
            prop::collection::vec((-6i32..=6).prop_map(|k| k as f64 * 0.5), n).boxed()
        } else {
            prop::collection::vec(-5.0f64..5.0, n).boxed()
        };
        (values, prop::collection::vec(1u64..120, n)).prop_map(|(h, steps)| {
            let mut t = 0;
            let t_ms = steps
                .into_iter()
                .map(|dt| {
                    t += dt;
                    t
                })
                .collect();
            HorizontalSignal {
                t_ms,
                h,
                source_axis: Axis::X,
            }
        })
    })
}

proptest! {
    #[test]
    fn lowpass_has_unit_dc_gain(c in -100.0f64..100.0, n in 1usize..200, alpha in 0.001f64..=1.0) {
        let y = lowpass(&vec![c; n], alpha).unwrap();
        for v in y {
            prop_assert!((v - c).abs() < 1e-12);
        }
    }

    #[test]
    fn lowpass_is_bounded_by_its_input(x in finite_values(300), alpha in 0.001f64..=1.0) {
        let y = lowpass(&x, alpha).unwrap();
        let bound = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert_eq!(y.len(), x.len());
        for v in &y {
            prop_assert!(v.abs() <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn lowpass_matches_the_unexpanded_recurrence(x in finite_values(300), alpha in 0.001f64..=1.0) {
        let y = lowpass(&x, alpha).unwrap();
        let oracle = recurrence_lowpass(&x, alpha);
        for (a, b) in y.iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
        prop_assert_eq!(lowpass(&x, 1.0).unwrap(), x);
    }

    #[test]
    fn gating_keeps_a_subsequence_and_is_idempotent(t in trace_strategy(SensorKind::Accelerometer)) {
        let cfg = GateConfig::default();
        let once = gate_trace(&t, &cfg);
        let twice = gate_trace(&once, &cfg);
        prop_assert_eq!(&once, &twice);
        let mut it = t.samples.iter();
        for kept in &once.samples {
            prop_assert!(it.any(|s| s == kept));
        }
        if !t.is_empty() {
            prop_assert_eq!(once.samples[0], t.samples[0]);
        }
    }

    #[test]
    fn gravity_axis_ignores_sample_order(t in trace_strategy(SensorKind::Accelerometer), seed in any::<u64>()) {
        prop_assume!(!t.is_empty());
        let mut shuffled = t.clone();
        let n = shuffled.samples.len();
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.samples.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let a = estimate_gravity_axis(&t).unwrap();
        let b = estimate_gravity_axis(&shuffled).unwrap();
        prop_assert_eq!(a.gravity_axis, b.gravity_axis);
    }

    #[test]
    fn horizontal_signal_is_centered(t in trace_strategy(SensorKind::Accelerometer)) {
        prop_assume!(t.len() >= 2);
        let h = horizontal_signal(&t, Axis::Z).unwrap();
        let raw = t.axis_values(h.source_axis);
        let scale = raw.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mean = h.h.iter().sum::<f64>() / h.h.len() as f64;
        prop_assert!(mean.abs() <= 1e-9 * scale);
        prop_assert_eq!(h.h.len(), t.len());
    }

    #[test]
    fn rmse_is_the_population_std(v in prop::collection::vec(-30.0f64..30.0, 2..400)) {
        let s = axis_stats(&v).unwrap();
        let expected = population_std(&v);
        prop_assert!((s.rmse - expected).abs() <= 1e-12 * expected.max(f64::MIN_POSITIVE));
        prop_assert!(s.min_abs <= s.mean_abs && s.mean_abs <= s.max_abs);
        prop_assert_eq!(s.range_abs, s.max_abs - s.min_abs);
        prop_assert_eq!(s.std_abs, s.variance_abs.sqrt());
    }

    #[test]
    fn histogram_counts_every_value(v in finite_values(500)) {
        let h = histogram10(&v).unwrap();
        prop_assert_eq!(h.counts.iter().sum::<usize>(), v.len());
        prop_assert!(h.bin_centers.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn peaks_match_the_brute_force_search(sig in signal_strategy()) {
        let peaks = find_peaks(&sig, &PeakConfig::default()).unwrap();
        let oracle = brute_force_peaks(&sig.t_ms, &sig.h, 10, 10);
        prop_assert_eq!(peaks.len(), oracle.len());
        for (p, o) in peaks.iter().zip(&oracle) {
            prop_assert_eq!(p.index, o.index);
            prop_assert!((p.area - o.area).abs() <= 1e-12 * o.area.abs().max(1e-300));
            prop_assert!((p.interval_s - o.interval_s).abs() <= 1e-12 * o.interval_s);
            prop_assert!(p.area >= 0.0 && p.interval_s > 0.0);
            prop_assert!(p.window.1 - p.window.0 < 21);
        }
        if !peaks.is_empty() {
            let avg = peaks.iter().map(|p| p.area).sum::<f64>() / peaks.len() as f64;
            let max = peaks.iter().map(|p| p.area).fold(0.0, f64::max);
            prop_assert!(avg <= max * (1.0 + 1e-12));
        }
    }

    #[test]
    fn peaks_ignore_a_timestamp_shift(sig in signal_strategy(), shift in 0u64..3_000_000) {
        let shifted = HorizontalSignal {
            t_ms: sig.t_ms.iter().map(|t| t + shift).collect(),
            ..sig.clone()
        };
        let a = find_peaks(&sig, &PeakConfig::default()).unwrap();
        let b = find_peaks(&shifted, &PeakConfig::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn every_feature_vector_gets_a_consistent_decision(
        std in -1.0f64..10.0, interval in -1.0f64..5.0, area in -1.0f64..5.0,
    ) {
        let r = ReferenceTable::default();
        let d = classify(&FeatureVector::from_summary(std, interval, area), &r);
        prop_assert_eq!(EngineFamily::of(d.mode), Some(d.family));
        prop_assert_eq!(d.confident, d.family == EngineFamily::Road);
        prop_assert_eq!(d.rule_trail.len() >= 2, true);
    }

    #[test]
    fn raising_std_never_returns_to_road(std in 0.0f64..5.0, bump in 0.0f64..5.0) {
        let r = ReferenceTable::default();
        let low = classify_family(&FeatureVector::from_summary(std, 0.5, 1.0), &r);
        let high = classify_family(&FeatureVector::from_summary(std + bump, 0.5, 1.0), &r);
        if low == EngineFamily::Rail {
            prop_assert_eq!(high, EngineFamily::Rail);
        }
    }

    #[test]
    fn csv_round_trip_rounds_to_three_decimals(t in trace_strategy(SensorKind::Gyroscope)) {
        let text = write_sensor_csv(&t).unwrap();
        let back = parse_sensor_csv(&text, SensorKind::Gyroscope).unwrap();
        prop_assert_eq!(back.timestamps(), t.timestamps());
        for (a, b) in back.samples.iter().zip(&t.samples) {
            for axis in Axis::ALL {
                let rounded = (b.axis(axis) * 1000.0).round() / 1000.0;
                prop_assert!((a.axis(axis) - rounded).abs() < 1e-9);
            }
        }
        // writing the parsed trace again is byte-stable
        prop_assert_eq!(write_sensor_csv(&back).unwrap(), text);
    }

    #[test]
    fn comma_decimals_read_like_points(t in trace_strategy(SensorKind::Accelerometer)) {
        let text = write_sensor_csv(&t).unwrap();
        let mut lines = text.lines();
        let mut commas = format!("{}\n", lines.next().unwrap());
        for line in lines {
            let mut fields = line.splitn(2, ';');
            let stamp = fields.next().unwrap();
            let rest = fields.next().unwrap().replace('.', ",");
            commas.push_str(&format!("{stamp};{rest}\n"));
        }
        prop_assert_eq!(
            parse_sensor_csv(&text, SensorKind::Accelerometer).unwrap(),
            parse_sensor_csv(&commas, SensorKind::Accelerometer).unwrap()
        );
    }

    #[test]
    fn filename_codec_is_a_bijection(
        gyro in any::<bool>(),
        mode in prop::sample::select(TransportMode::ALL.to_vec()),
        secs in 0i64..4_000_000_000,
    ) {
        let meta = FileMeta {
            kind: if gyro { SensorKind::Gyroscope } else { SensorKind::Accelerometer },
            mode,
            captured_at: chrono::DateTime::from_timestamp(secs, 0).unwrap().naive_utc(),
        };
        let name = format_filename(&meta);
        prop_assert_eq!(parse_filename(&name).unwrap(), meta);
        prop_assert_eq!(format_filename(&parse_filename(&name).unwrap()), name);
    }
}
