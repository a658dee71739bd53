//! Reference implementations used only by tests. They follow the original
//! procedures literally and share no code with the library's algorithms.
#![allow(dead_code)]

/// One peak as the brute-force search reports it.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePeak {
    pub index: usize,
    pub area: f64,
    pub interval_s: f64,
}

/// Rescans the whole working copy every round; areas are summed term by term
/// in seconds.
pub fn brute_force_peaks(t_ms: &[u64], h: &[f64], n_peaks: usize, half: usize) -> Vec<OraclePeak> {
    let mut copy = h.to_vec();
    let mut out = Vec::new();
    for _round in 0..h.len() {
        if out.len() == n_peaks {
            break;
        }
        let mut pos = usize::MAX;
        let mut maximum = f64::NEG_INFINITY;
        for (i, &v) in copy.iter().enumerate() {
            // strict: the first occurrence of the maximum wins
            if v > maximum {
                maximum = v;
                pos = i;
            }
        }
        if pos == usize::MAX || maximum <= 0.0 {
            break;
        }
        if pos >= half && pos + half < h.len() {
            let init = pos - half;
            let mut area = 0.0;
            for i in 1..=(2 * half) {
                let dt = t_ms[init + i] as f64 / 1000.0 - t_ms[init + i - 1] as f64 / 1000.0;
                area += h[init + i - 1].abs() * dt;
            }
            out.push(OraclePeak {
                index: pos,
                area,
                interval_s: (t_ms[pos + half] as f64 - t_ms[pos - half] as f64) / 1000.0,
            });
        }
        copy[pos] = 0.0;
    }
    out
}

/// Index order of the counters as passed to the vote routine.
const ON_FOOT: usize = 0;
const BICYCLE: usize = 1;
const STILL: usize = 2;
const VEHICLE: usize = 3;

fn find_max(counts: [i64; 5]) -> Vec<usize> {
    let top = *counts.iter().max().unwrap();
    (0..5).filter(|&i| counts[i] == top).collect()
}

fn to_activity(index: usize) -> &'static str {
    match index {
        ON_FOOT => "on_foot",
        BICYCLE => "bicycle",
        STILL => "still",
        VEHICLE => "vehicle",
        _ => "unknown",
    }
}

/// Line-by-line transliteration of the modified vehicle-priority vote.
pub fn literal_activity_estimation(
    is_onfoot: i64,
    is_bicycle: i64,
    is_still: i64,
    is_vehicle: i64,
    is_unknown: i64,
) -> &'static str {
    let max = find_max([is_onfoot, is_bicycle, is_still, is_vehicle, is_unknown]);
    let has = |k: usize| max.contains(&k);
    match max.len() {
        1 => {
            if max[0] == 3 {
                to_activity(max[0])
            } else if max[0] == 1 && (is_bicycle - is_vehicle) > 3 {
                to_activity(1)
            } else if max[0] == 0 && (is_onfoot - is_vehicle) > 3 {
                to_activity(0)
            } else if max[0] == 2 && (is_still - is_vehicle) > 3 {
                to_activity(2)
            } else {
                to_activity(3)
            }
        }
        2 => {
            if has(3) {
                to_activity(3)
            } else if has(1) && is_bicycle - is_vehicle > 3 {
                to_activity(1)
            } else if has(0) && is_onfoot - is_vehicle > 3 {
                to_activity(0)
            } else if is_still - is_vehicle > 3 {
                to_activity(2)
            } else {
                to_activity(3)
            }
        }
        3 => {
            if has(3) {
                to_activity(3)
            } else if has(1) && is_bicycle - is_vehicle > 3 {
                to_activity(1)
            } else if is_onfoot - is_vehicle > 3 {
                to_activity(0)
            } else {
                to_activity(3)
            }
        }
        4 => {
            if has(3) {
                to_activity(3)
            } else if is_bicycle - is_vehicle > 3 {
                to_activity(1)
            } else {
                to_activity(3)
            }
        }
        5 => to_activity(2),
        _ => "still",
    }
}

/// `y[i] = y[i-1] + a (x[i] - y[i-1])`, the unexpanded form of the filter.
pub fn recurrence_lowpass(x: &[f64], alpha: f64) -> Vec<f64> {
    let mut y: Vec<f64> = Vec::with_capacity(x.len());
    for (i, &xi) in x.iter().enumerate() {
        if i == 0 {
            y.push(xi);
        } else {
            let prev = y[i - 1];
            y.push(prev + alpha * (xi - prev));
        }
    }
    y
}

/// Population standard deviation via Welford's running update.
pub fn population_std(v: &[f64]) -> f64 {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (k, &x) in v.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
    }
    (m2 / v.len() as f64).sqrt()
}
