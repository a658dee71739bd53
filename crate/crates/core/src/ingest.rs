//! Reader and writer for the on-device CSV trace format.
//!
//! Files carry one header line followed by rows of
//! `"MM:SS:FFF";x;y;z`. Rows are `;`-delimited. The reader accepts decimal
//! commas as well as decimal points and strips double quotes from every
//! field; the writer always emits points, three decimals, and a quoted
//! timestamp, so the output for a given trace is byte-for-byte stable.
//!
//! File names follow `<sensor>_<Mode>_<YYYY-MM-DD_HH-MM-SS>.csv` where the
//! sensor is `acceleration` or `gyroscope`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::{SensorKind, SensorSample, SensorTrace, TransportMode};

pub const DELIMITER: char = ';';
pub const HEADER: &str = "time;x;y;z";

/// `MM:SS:FFF` wraps every hour; the reader adds this much per wrap.
pub const MINUTE_WRAP_MS: u64 = 3_600_000;

const FILENAME_DATE_FORMAT: &str = "%Y-%m-%d_%H-%M-%S";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FileMeta {
    pub kind: SensorKind,
    pub mode: TransportMode,
    pub captured_at: NaiveDateTime,
}

fn strip_quotes(field: &str) -> &str {
    let field = field.trim();
    let field = field.strip_prefix('"').unwrap_or(field);
    field.strip_suffix('"').unwrap_or(field)
}

fn fixed_digits(text: &str) -> Option<u64> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Parses an `MM:SS:FFF` timer reading into milliseconds.
pub fn parse_timestamp(text: &str) -> Result<u64> {
    let bad = || Error::BadTimestamp(text.to_string());
    let inner = strip_quotes(text);
    let mut parts = inner.split(':');
    let (Some(mm), Some(ss), Some(fff), None) =
        (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(bad());
    };
    if mm.len() != 2 || ss.len() != 2 || fff.len() != 3 {
        return Err(bad());
    }
    let minutes = fixed_digits(mm).ok_or_else(bad)?;
    let seconds = fixed_digits(ss).ok_or_else(bad)?;
    let millis = fixed_digits(fff).ok_or_else(bad)?;
    if seconds >= 60 || millis >= 1000 {
        return Err(bad());
    }
    Ok(minutes * 60_000 + seconds * 1000 + millis)
}

/// Inverse of [`parse_timestamp`] for values below one hour.
pub fn format_timestamp(t_ms: u64) -> Result<String> {
    if t_ms >= MINUTE_WRAP_MS {
        return Err(Error::TimestampOverflow(t_ms));
    }
    Ok(format!(
        "{:02}:{:02}:{:03}",
        t_ms / 60_000,
        (t_ms / 1000) % 60,
        t_ms % 1000
    ))
}

fn parse_axis(field: &str, line: usize) -> Result<f64> {
    let text = strip_quotes(field).replace(',', ".");
    match text.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::BadRow {
            line,
            reason: format!("unparsable axis value {field:?}"),
        }),
    }
}

/// Parses a whole CSV document. Line numbers in errors are 1-based and count
/// the header line.
pub fn parse_sensor_csv(text: &str, kind: SensorKind) -> Result<SensorTrace> {
    let mut samples: Vec<SensorSample> = Vec::new();
    let mut wrap_offset = 0u64;
    let mut prev_raw: Option<u64> = None;

    for (idx, raw_line) in text.lines().enumerate().skip(1) {
        let line = idx + 1;
        let row = raw_line.trim_end_matches('\r');
        if row.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = row.split(DELIMITER).collect();
        if fields.len() != 4 {
            return Err(Error::BadRow {
                line,
                reason: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let raw_t = parse_timestamp(fields[0]).map_err(|e| Error::BadRow {
            line,
            reason: e.to_string(),
        })?;
        let x = parse_axis(fields[1], line)?;
        let y = parse_axis(fields[2], line)?;
        let z = parse_axis(fields[3], line)?;

        if prev_raw.is_some_and(|p| raw_t < p) {
            wrap_offset += MINUTE_WRAP_MS;
        }
        prev_raw = Some(raw_t);
        let t_ms = raw_t + wrap_offset;
        if samples.last().is_some_and(|s| t_ms <= s.t_ms) {
            return Err(Error::NonMonotonic(line));
        }
        samples.push(SensorSample { t_ms, x, y, z });
    }

    Ok(SensorTrace::new(kind, samples))
}

/// Serializes a trace; fails if any timestamp reaches one hour.
pub fn write_sensor_csv(trace: &SensorTrace) -> Result<String> {
    let mut out = String::with_capacity(32 * (trace.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for s in &trace.samples {
        let stamp = format_timestamp(s.t_ms)?;
        // writing into a String cannot fail
        let _ = writeln!(out, "\"{stamp}\";{:.3};{:.3};{:.3}", s.x, s.y, s.z);
    }
    Ok(out)
}

fn sensor_prefix(kind: SensorKind) -> &'static str {
    match kind {
        SensorKind::Accelerometer => "acceleration",
        SensorKind::Gyroscope => "gyroscope",
    }
}

pub fn parse_filename(name: &str) -> Result<FileMeta> {
    let base = Path::new(name)
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or(name);
    let bad = |segment: &str| Error::BadFilename {
        name: name.to_string(),
        segment: segment.to_string(),
    };

    let stem = base.strip_suffix(".csv").ok_or_else(|| bad(base))?;
    let (sensor, rest) = stem.split_once('_').ok_or_else(|| bad(stem))?;
    let kind = match sensor {
        "acceleration" => SensorKind::Accelerometer,
        "gyroscope" => SensorKind::Gyroscope,
        other => return Err(bad(other)),
    };
    let (mode, date) = rest.split_once('_').ok_or_else(|| bad(rest))?;
    let mode: TransportMode = mode.parse().map_err(|_| bad(mode))?;
    let captured_at =
        NaiveDateTime::parse_from_str(date, FILENAME_DATE_FORMAT).map_err(|_| bad(date))?;
    // chrono tolerates unpadded fields; insist on the canonical spelling
    if captured_at.format(FILENAME_DATE_FORMAT).to_string() != date {
        return Err(bad(date));
    }
    Ok(FileMeta {
        kind,
        mode,
        captured_at,
    })
}

pub fn format_filename(meta: &FileMeta) -> String {
    format!(
        "{}_{}_{}.csv",
        sensor_prefix(meta.kind),
        meta.mode,
        meta.captured_at.format(FILENAME_DATE_FORMAT)
    )
}

/// Result of loading every trace file in a directory.
#[derive(Debug, Default)]
pub struct DirectoryLoad {
    /// Successfully parsed files, sorted by file name.
    pub traces: Vec<(FileMeta, SensorTrace)>,
    /// Files that were skipped, with the reason.
    pub skipped: Vec<(PathBuf, Error)>,
}

/// Reads one labeled trace file, taking kind and label from its name.
pub fn load_file(path: &Path) -> Result<(FileMeta, SensorTrace)> {
    let name = path
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    let meta = parse_filename(name)?;
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut trace = parse_sensor_csv(&text, meta.kind)?;
    trace.label = Some(meta.mode);
    trace.captured_at = Some(meta.captured_at);
    Ok((meta, trace))
}

pub fn load_directory(path: &Path) -> Result<DirectoryLoad> {
    let entries = fs::read_dir(path).map_err(|e| Error::io(path, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(path, e))?;
        let p = entry.path();
        if p.is_file() && p.extension().is_some_and(|ext| ext == "csv") {
            files.push(p);
        }
    }
    files.sort();

    let mut load = DirectoryLoad::default();
    for file in files {
        match load_file(&file) {
            Ok(pair) => load.traces.push(pair),
            Err(e) => load.skipped.push((file, e)),
        }
    }
    Ok(load)
}
