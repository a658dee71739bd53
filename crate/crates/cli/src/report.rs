//! Text and JSON renderings of pipeline results.
//!
//! Batch reports are one `;`-separated row per trace, with the header
//!
//! ```text
//! file;label;gravity;mean_abs;variance_abs;std_abs;min_abs;max_abs;range_abs;signed_mean;rmse;residual_within_rmse;avg_peak_area;avg_peak_interval;predicted;family;confident
//! ```
//!
//! The nine statistics are those of |horizontal axis|. Reals are printed with
//! three decimals, `residual_within_rmse` is a count, an unlabeled file has
//! an empty label, and `confident` is `true`/`false`.

use std::fmt::Write as _;

use modeclass_core::pipeline::TraceAnalysis;
use modeclass_core::{AxisStats, FeatureVector, ModeDecision, TransportMode};
use serde::Serialize;

pub const REPORT_HEADER: &str = "file;label;gravity;mean_abs;variance_abs;std_abs;min_abs;max_abs;range_abs;signed_mean;rmse;residual_within_rmse;avg_peak_area;avg_peak_interval;predicted;family;confident";

/// Three decimals, with negative zero printed as zero.
pub fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub file: String,
    pub label: Option<TransportMode>,
    pub gravity: modeclass_core::Axis,
    pub stats: AxisStats,
    pub avg_peak_area: f64,
    pub avg_peak_interval: f64,
    pub decision: ModeDecision,
}

impl ReportRow {
    pub fn new(file: &str, fv: &FeatureVector, decision: &ModeDecision) -> Self {
        ReportRow {
            file: file.to_string(),
            label: fv.mode_label,
            gravity: fv.gravity.gravity_axis,
            stats: fv.stats,
            avg_peak_area: fv.avg_peak_area,
            avg_peak_interval: fv.avg_peak_interval,
            decision: decision.clone(),
        }
    }

    pub fn to_line(&self) -> String {
        let s = &self.stats;
        let label = self.label.map(|m| m.as_str()).unwrap_or("");
        format!(
            "{};{};{};{};{};{};{};{};{};{};{};{};{};{};{};{};{}",
            self.file,
            label,
            self.gravity,
            num(s.mean_abs),
            num(s.variance_abs),
            num(s.std_abs),
            num(s.min_abs),
            num(s.max_abs),
            num(s.range_abs),
            num(s.signed_mean),
            num(s.rmse),
            s.residual_within_rmse,
            num(self.avg_peak_area),
            num(self.avg_peak_interval),
            self.decision.mode,
            self.decision.family,
            self.decision.confident,
        )
    }
}

pub fn rule_trail(decision: &ModeDecision) -> String {
    decision
        .rule_trail
        .iter()
        .map(|r| r.id())
        .collect::<Vec<_>>()
        .join(" > ")
}

pub fn stats_header() -> &'static str {
    "axis  mean_abs  variance_abs  std_abs  min_abs  max_abs  range_abs  signed_mean  rmse  residual_within_rmse"
}

pub fn stats_line(label: &str, s: &AxisStats) -> String {
    format!(
        "{label}  {}  {}  {}  {}  {}  {}  {}  {}  {}",
        num(s.mean_abs),
        num(s.variance_abs),
        num(s.std_abs),
        num(s.min_abs),
        num(s.max_abs),
        num(s.range_abs),
        num(s.signed_mean),
        num(s.rmse),
        s.residual_within_rmse
    )
}

pub fn analysis_text(file: &str, label: Option<TransportMode>, a: &TraceAnalysis) -> String {
    let mut out = String::new();
    let fv = &a.features;
    let g = &fv.gravity;
    // writing into a String cannot fail
    let _ = writeln!(out, "file: {file}");
    let _ = writeln!(out, "label: {}", label.map(|m| m.as_str()).unwrap_or("-"));
    let _ = writeln!(out, "samples: {}", a.samples);
    let _ = writeln!(out, "duration_ms: {}", a.duration_ms);
    let _ = writeln!(
        out,
        "gravity: {} mean_abs x={} y={} z={} distance={}",
        g.gravity_axis,
        num(g.per_axis_mean_abs[0]),
        num(g.per_axis_mean_abs[1]),
        num(g.per_axis_mean_abs[2]),
        num(g.confidence)
    );
    let _ = writeln!(out, "horizontal: {}", fv.horizontal_axis);
    let _ = writeln!(out);
    let _ = writeln!(out, "{}", stats_header());
    for axis in &a.axes {
        let _ = writeln!(out, "{}", stats_line(&axis.axis.to_string(), &axis.stats));
    }
    let _ = writeln!(out, "{}", stats_line("h", &fv.stats));
    for axis in &a.axes {
        let _ = writeln!(out);
        let _ = writeln!(out, "histogram |{}|: center count", axis.axis);
        for (c, n) in axis
            .histogram
            .bin_centers
            .iter()
            .zip(&axis.histogram.counts)
        {
            let _ = writeln!(out, "  {} {n}", num(*c));
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "peaks: index value area interval_s");
    for p in &fv.peaks {
        let _ = writeln!(
            out,
            "  {} {} {} {}",
            p.index,
            num(p.value),
            num(p.area),
            num(p.interval_s)
        );
    }
    let _ = writeln!(out, "avg_peak_area: {}", num(fv.avg_peak_area));
    let _ = writeln!(out, "avg_peak_interval: {}", num(fv.avg_peak_interval));
    let _ = writeln!(out);
    let _ = writeln!(out, "decision: {}", a.decision);
    let _ = writeln!(out, "rules: {}", rule_trail(&a.decision));
    out
}

/// Label-versus-prediction counts over a batch.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Confusion {
    /// `cells[label][predicted]`, both indexed like `TransportMode::ALL`.
    cells: [[usize; 6]; 6],
    pub unlabeled: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfusionRow {
    pub label: TransportMode,
    pub total: usize,
    pub hits: usize,
    pub predicted: Vec<(TransportMode, usize)>,
}

fn slot(m: TransportMode) -> usize {
    TransportMode::ALL.iter().position(|&x| x == m).unwrap_or(0)
}

impl Confusion {
    pub fn record(&mut self, label: Option<TransportMode>, predicted: TransportMode) {
        match label {
            Some(l) => self.cells[slot(l)][slot(predicted)] += 1,
            None => self.unlabeled += 1,
        }
    }

    pub fn count(&self, label: TransportMode, predicted: TransportMode) -> usize {
        self.cells[slot(label)][slot(predicted)]
    }

    /// One row per label seen, in `TransportMode::ALL` order.
    pub fn rows(&self) -> Vec<ConfusionRow> {
        TransportMode::ALL
            .iter()
            .filter_map(|&label| {
                let row = &self.cells[slot(label)];
                let total: usize = row.iter().sum();
                (total > 0).then(|| ConfusionRow {
                    label,
                    total,
                    hits: row[slot(label)],
                    predicted: TransportMode::ALL
                        .iter()
                        .map(|&m| (m, row[slot(m)]))
                        .filter(|&(_, n)| n > 0)
                        .collect(),
                })
            })
            .collect()
    }

    pub fn text(&self) -> String {
        let mut out = String::from("confusion: label hits/total predicted\n");
        for row in self.rows() {
            let spread = row
                .predicted
                .iter()
                .map(|(m, n)| format!("{m}={n}"))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(out, "  {} {}/{} {spread}", row.label, row.hits, row.total);
        }
        if self.unlabeled > 0 {
            let _ = writeln!(out, "  unlabeled {}", self.unlabeled);
        }
        out
    }
}
