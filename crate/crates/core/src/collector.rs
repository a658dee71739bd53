//! Collection-side helpers: the listening-window schedule and a synthetic
//! trace generator that stands in for recorded journeys.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::classify::ReferenceTable;
use crate::error::{Error, Result};
use crate::features::{find_peaks, PeakConfig};
use crate::preprocess::{HorizontalSignal, STANDARD_GRAVITY};
use crate::trace::{Axis, SensorKind, SensorSample, SensorTrace, TransportMode};

pub const LISTEN_MS: u64 = 20_000;
pub const PERIOD_MS: u64 = 120_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSchedule {
    pub listen_ms: u64,
    pub period_ms: u64,
    /// Half-open `[start, end)` intervals relative to session start.
    pub windows: Vec<(u64, u64)>,
}

/// Listening windows of 20 s opening every 2 min, keeping each window that
/// ends by `session_ms`. Each window start is also an activity-vote boundary.
pub fn schedule_windows(session_ms: u64) -> WindowSchedule {
    let windows = (0..)
        .map(|k| k * PERIOD_MS)
        .map(|start| (start, start + LISTEN_MS))
        .take_while(|&(_, end)| end <= session_ms)
        .collect();
    WindowSchedule {
        listen_ms: LISTEN_MS,
        period_ms: PERIOD_MS,
        windows,
    }
}

/// Parameters of a synthetic journey.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorProfile {
    pub mode: TransportMode,
    /// Standard deviation of the centered horizontal signal, m/s².
    pub target_std: f64,
    /// Average peak area, m/s.
    pub target_peak_area: f64,
    /// Average ±10-sample window span, s.
    pub target_interval_s: f64,
    pub base_rate_hz: f64,
    /// Offset of the horizontal axis, m/s².
    pub horizontal_mean: f64,
    pub seed: u64,
}

impl GeneratorProfile {
    /// Targets taken from the mode's reference row; the sample rate puts 20
    /// sample periods in one target interval.
    pub fn for_mode(mode: TransportMode, seed: u64) -> Result<Self> {
        Self::from_reference(&ReferenceTable::default(), mode, seed)
    }

    pub fn from_reference(
        reference: &ReferenceTable,
        mode: TransportMode,
        seed: u64,
    ) -> Result<Self> {
        let row = reference.row(mode)?;
        Ok(GeneratorProfile {
            mode,
            target_std: row.std,
            target_peak_area: row.area,
            target_interval_s: row.interval_s,
            base_rate_hz: 20.0 / row.interval_s,
            horizontal_mean: row.mean,
            seed,
        })
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            ("target_std", self.target_std),
            ("target_peak_area", self.target_peak_area),
            ("target_interval_s", self.target_interval_s),
            ("base_rate_hz", self.base_rate_hz),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::BadProfile(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !self.horizontal_mean.is_finite() {
            return Err(Error::BadProfile("horizontal_mean must be finite".into()));
        }
        Ok(())
    }

    fn gravity_axis(&self) -> Axis {
        // bus recordings had the phone upright, the rest lying flat
        match self.mode {
            TransportMode::Bus => Axis::Y,
            _ => Axis::Z,
        }
    }
}

const HALF_WINDOW: usize = 10;
const JITTER: f64 = 0.2;
const CALIBRATION_ROUNDS: usize = 60;

/// Raised-cosine bump spanning one peak window.
fn bump(k: i64) -> f64 {
    0.5 + 0.5 * (std::f64::consts::PI * k as f64 / (HALF_WINDOW as f64 + 1.0)).cos()
}

fn centered(values: &[f64]) -> Vec<f64> {
    let m = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| v - m).collect()
}

fn sample_std(values: &[f64]) -> f64 {
    let c = centered(values);
    (c.iter().map(|v| v * v).sum::<f64>() / (c.len() as f64 - 1.0)).sqrt()
}

fn covariance(a: &[f64], b: &[f64]) -> f64 {
    let (ca, cb) = (centered(a), centered(b));
    ca.iter().zip(&cb).map(|(x, y)| x * y).sum::<f64>() / (a.len() as f64 - 1.0)
}

struct Mixer<'a> {
    t_ms: &'a [u64],
    noise: &'a [f64],
    bursts: &'a [f64],
    var_noise: f64,
    var_bursts: f64,
    cov: f64,
}

impl Mixer<'_> {
    fn mix(&self, sigma: f64, amp: f64) -> Vec<f64> {
        self.noise
            .iter()
            .zip(self.bursts)
            .map(|(n, b)| sigma * n + amp * b)
            .collect()
    }

    fn avg_area(&self, sigma: f64, amp: f64) -> Option<f64> {
        let sig = HorizontalSignal {
            t_ms: self.t_ms.to_vec(),
            h: centered(&self.mix(sigma, amp)),
            source_axis: Axis::X,
        };
        let peaks = find_peaks(&sig, &PeakConfig::default()).ok()?;
        if peaks.is_empty() {
            return None;
        }
        Some(peaks.iter().map(|p| p.area).sum::<f64>() / peaks.len() as f64)
    }

    /// Noise level giving the target std for a fixed burst amplitude.
    fn sigma_for(&self, target_std: f64, amp: f64) -> f64 {
        let (a, b, c) = (
            self.var_noise,
            2.0 * amp * self.cov,
            amp * amp * self.var_bursts - target_std * target_std,
        );
        let disc = b * b - 4.0 * a * c;
        if a <= 0.0 || disc < 0.0 {
            return 0.0;
        }
        ((-b + disc.sqrt()) / (2.0 * a)).max(0.0)
    }
}

/// Generates a labeled accelerometer trace lasting about `seconds`.
///
/// The horizontal axis is Gaussian noise plus raised-cosine bursts. Their
/// two amplitudes are tuned against the peak extractor so that the
/// centered signal's standard deviation and the average peak area match the
/// profile. Sample spacing is jittered ±20 % around `1 / base_rate_hz`.
pub fn generate_trace(profile: &GeneratorProfile, seconds: f64) -> Result<SensorTrace> {
    profile.validate()?;
    if !(seconds > 0.0 && seconds.is_finite()) {
        return Err(Error::BadProfile(format!(
            "duration must be positive, got {seconds}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let span_ms = seconds * 1000.0;
    let step_ms = 1000.0 / profile.base_rate_hz;

    let mut t_ms = vec![0u64];
    loop {
        let jitter: f64 = rng.random_range(-JITTER..=JITTER);
        let next = t_ms[t_ms.len() - 1] + ((step_ms * (1.0 + jitter)).round() as u64).max(1);
        if next as f64 > span_ms {
            break;
        }
        t_ms.push(next);
    }
    if t_ms.len() < 2 {
        return Err(Error::BadProfile(format!(
            "{seconds} s at {} Hz yields fewer than two samples",
            profile.base_rate_hz
        )));
    }
    let n = t_ms.len();

    let noise: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut bursts = vec![0.0; n];
    let window = 2 * HALF_WINDOW + 1;
    if n > window + 4 {
        let count = ((seconds / 10.0).round() as usize).max(1);
        let lo = HALF_WINDOW + 2;
        let hi = n - HALF_WINDOW - 3;
        let mut centers: Vec<usize> = Vec::new();
        for _ in 0..count * 20 {
            if centers.len() == count {
                break;
            }
            let c = rng.random_range(lo..=hi);
            if centers.iter().all(|&o| o.abs_diff(c) > window + 4) {
                centers.push(c);
            }
        }
        for c in centers {
            for k in -(HALF_WINDOW as i64)..=HALF_WINDOW as i64 {
                bursts[(c as i64 + k) as usize] += bump(k);
            }
        }
    }

    let mixer = Mixer {
        t_ms: &t_ms,
        noise: &noise,
        bursts: &bursts,
        var_noise: sample_std(&noise).powi(2),
        var_bursts: sample_std(&bursts).powi(2),
        cov: covariance(&noise, &bursts),
    };
    let target_std = profile.target_std;
    let target_area = profile.target_peak_area;
    // a bump covers its window with mean height ~0.524
    let mut amp = if bursts.iter().any(|&b| b > 0.0) {
        target_area / (profile.target_interval_s * 0.524)
    } else {
        0.0
    };
    let mut sigma = mixer.sigma_for(target_std, amp);
    if amp > 0.0 {
        for _ in 0..CALIBRATION_ROUNDS {
            let Some(area) = mixer.avg_area(sigma, amp) else {
                break;
            };
            if (area / target_area - 1.0).abs() < 0.005 {
                break;
            }
            amp *= (target_area / area).clamp(0.5, 2.0);
            sigma = mixer.sigma_for(target_std, amp);
            if sigma == 0.0 {
                // bursts alone exceed the std budget; shrink them to fit
                amp = amp.min(target_std / mixer.var_bursts.sqrt());
            }
        }
    }

    let h = mixer.mix(sigma, amp);
    let gravity = profile.gravity_axis();
    let third = Axis::ALL
        .into_iter()
        .find(|&a| a != gravity && a != Axis::X)
        .unwrap_or(Axis::Y);
    let samples = (0..n)
        .map(|i| {
            let mut v = [0.0; 3];
            v[Axis::X.index()] = profile.horizontal_mean + h[i];
            let g: f64 = StandardNormal.sample(&mut rng);
            v[gravity.index()] = STANDARD_GRAVITY + 0.05 * g;
            let w: f64 = StandardNormal.sample(&mut rng);
            v[third.index()] = 0.3 + 0.05 * w;
            SensorSample::new(t_ms[i], v[0], v[1], v[2])
        })
        .collect();

    Ok(SensorTrace::new(SensorKind::Accelerometer, samples).with_label(profile.mode))
}
