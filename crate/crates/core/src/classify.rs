//! Two-stage rule classifier and the activity vote that decides whether a
//! window is recorded at all.
//!
//! Stage one splits road from rail vehicles on the standard deviation of the
//! horizontal acceleration. Stage two separates the road modes by average
//! peak area (bus) and then average peak interval (car vs motorbike); rail
//! modes are resolved by nearest centroid and always reported as
//! low-confidence.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::trace::TransportMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EngineFamily {
    Road,
    Rail,
}

impl EngineFamily {
    pub fn of(mode: TransportMode) -> Option<EngineFamily> {
        match mode {
            TransportMode::Bus | TransportMode::Car | TransportMode::Motorbike => {
                Some(EngineFamily::Road)
            }
            TransportMode::Metro | TransportMode::Train => Some(EngineFamily::Rail),
            TransportMode::Other => None,
        }
    }
}

impl fmt::Display for EngineFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineFamily::Road => "Road",
            EngineFamily::Rail => "Rail",
        })
    }
}

/// Identifiers of the rules a decision passed through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    StdAtLeastSplit,
    StdBelowSplit,
    AreaAtLeastBusFloor,
    AreaBelowBusFloor,
    IntervalAtLeastCarFloor,
    IntervalBelowCarFloor,
    RailNearestMetro,
    RailNearestTrain,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::StdAtLeastSplit => "std>=split:rail",
            Rule::StdBelowSplit => "std<split:road",
            Rule::AreaAtLeastBusFloor => "area>=bus_floor:bus",
            Rule::AreaBelowBusFloor => "area<bus_floor",
            Rule::IntervalAtLeastCarFloor => "interval>=car_floor:car",
            Rule::IntervalBelowCarFloor => "interval<car_floor:motorbike",
            Rule::RailNearestMetro => "rail_centroid:metro",
            Rule::RailNearestTrain => "rail_centroid:train",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeDecision {
    pub family: EngineFamily,
    pub mode: TransportMode,
    pub confident: bool,
    pub rule_trail: Vec<Rule>,
}

impl fmt::Display for ModeDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}, {})",
            self.mode,
            self.family,
            if self.confident {
                "confident"
            } else {
                "not confident"
            }
        )
    }
}

/// Reference centroid of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub mean: f64,
    pub std: f64,
    pub max: f64,
    pub min: f64,
    pub interval_s: f64,
    pub area: f64,
}

/// Per-mode reference parameters plus the three decision thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub bus: ReferenceRow,
    pub car: ReferenceRow,
    pub motorbike: ReferenceRow,
    pub metro: ReferenceRow,
    pub train: ReferenceRow,
    pub std_split: f64,
    pub bus_area_floor: f64,
    pub car_interval_floor: f64,
}

const FIELDS: [&str; 6] = ["mean", "std", "max", "min", "interval", "area"];

impl Default for ReferenceTable {
    /// Journey averages from the reference recordings. The motorbike mean
    /// (3.03) and metro minimum (0.004) are the summary-table values; the
    /// per-mode result tables list 3.08 and 0.04.
    fn default() -> Self {
        let row = |mean, std, max, min, interval_s, area| ReferenceRow {
            mean,
            std,
            max,
            min,
            interval_s,
            area,
        };
        ReferenceTable {
            bus: row(5.17, 0.72, 8.2, 0.015, 0.5, 1.1),
            car: row(5.26, 0.63, 6.14, 2.45, 1.37, 0.78),
            motorbike: row(3.03, 0.7, 5.55, 1.26, 0.52, 0.66),
            metro: row(3.32, 2.52, 13.7, 0.004, 0.6, 1.57),
            train: row(4.13, 2.41, 12.36, 0.097, 0.67, 1.65),
            std_split: 1.5,
            bus_area_floor: 0.94,
            car_interval_floor: 0.95,
        }
    }
}

impl ReferenceTable {
    pub fn row(&self, mode: TransportMode) -> Result<&ReferenceRow> {
        match mode {
            TransportMode::Bus => Ok(&self.bus),
            TransportMode::Car => Ok(&self.car),
            TransportMode::Motorbike => Ok(&self.motorbike),
            TransportMode::Metro => Ok(&self.metro),
            TransportMode::Train => Ok(&self.train),
            TransportMode::Other => Err(Error::UnsupportedMode(mode)),
        }
    }

    fn row_mut(&mut self, mode: TransportMode) -> Result<&mut ReferenceRow> {
        match mode {
            TransportMode::Bus => Ok(&mut self.bus),
            TransportMode::Car => Ok(&mut self.car),
            TransportMode::Motorbike => Ok(&mut self.motorbike),
            TransportMode::Metro => Ok(&mut self.metro),
            TransportMode::Train => Ok(&mut self.train),
            TransportMode::Other => Err(Error::UnsupportedMode(mode)),
        }
    }

    /// Checks that every threshold sits strictly between the reference
    /// values it separates.
    pub fn validate(&self) -> Result<()> {
        let road = [&self.bus, &self.car, &self.motorbike];
        let rail = [&self.metro, &self.train];
        let max_road_std = road.iter().map(|r| r.std).fold(f64::NEG_INFINITY, f64::max);
        let min_rail_std = rail.iter().map(|r| r.std).fold(f64::INFINITY, f64::min);
        let fail = |what: String| Err(Error::BadReference(what));

        for mode in TransportMode::MOTORIZED {
            let r = self.row(mode)?;
            let values = [r.mean, r.std, r.max, r.min, r.interval_s, r.area];
            if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return fail(format!("{mode} row has a negative or non-finite value"));
            }
        }
        if !(max_road_std < self.std_split && self.std_split < min_rail_std) {
            return fail(format!(
                "std_split {} must lie strictly between {max_road_std} and {min_rail_std}",
                self.std_split
            ));
        }
        let other_road_area = self.car.area.max(self.motorbike.area);
        if !(other_road_area < self.bus_area_floor && self.bus_area_floor < self.bus.area) {
            return fail(format!(
                "bus_area_floor {} must lie strictly between {other_road_area} and {}",
                self.bus_area_floor, self.bus.area
            ));
        }
        if !(self.motorbike.interval_s < self.car_interval_floor
            && self.car_interval_floor < self.car.interval_s)
        {
            return fail(format!(
                "car_interval_floor {} must lie strictly between {} and {}",
                self.car_interval_floor, self.motorbike.interval_s, self.car.interval_s
            ));
        }
        if self.metro.interval_s + self.train.interval_s <= 0.0
            || self.metro.area + self.train.area <= 0.0
        {
            return fail("rail centroids must not both be zero".into());
        }
        Ok(())
    }

    /// Parses the flat `key = value` format on top of the compiled-in
    /// defaults. Keys are `<Mode>.<field>` or one of the threshold names;
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = ReferenceTable::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |why: &str| Error::BadReference(format!("line {}: {why}", idx + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key = value"))?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| bad(&format!("bad number {:?}", value.trim())))?;
            match key {
                "std_split" => table.std_split = value,
                "bus_area_floor" => table.bus_area_floor = value,
                "car_interval_floor" => table.car_interval_floor = value,
                _ => {
                    let (mode, field) = key
                        .split_once('.')
                        .ok_or_else(|| bad(&format!("unknown key {key:?}")))?;
                    let mode: TransportMode = mode.parse().map_err(|e: String| bad(&e))?;
                    let row = table.row_mut(mode).map_err(|e| bad(&e.to_string()))?;
                    match field {
                        "mean" => row.mean = value,
                        "std" => row.std = value,
                        "max" => row.max = value,
                        "min" => row.min = value,
                        "interval" => row.interval_s = value,
                        "area" => row.area = value,
                        _ => return Err(bad(&format!("unknown field {field:?}"))),
                    }
                }
            }
        }
        table.validate()?;
        Ok(table)
    }

    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for mode in TransportMode::MOTORIZED {
            let r = self.row(mode).expect("motorized modes have rows");
            let values = [r.mean, r.std, r.max, r.min, r.interval_s, r.area];
            for (field, value) in FIELDS.iter().zip(values) {
                out.push_str(&format!("{mode}.{field} = {value}\n"));
            }
        }
        out.push_str(&format!("std_split = {}\n", self.std_split));
        out.push_str(&format!("bus_area_floor = {}\n", self.bus_area_floor));
        out.push_str(&format!(
            "car_interval_floor = {}\n",
            self.car_interval_floor
        ));
        out
    }
}

impl FromStr for ReferenceTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReferenceTable::parse(s)
    }
}

pub fn classify_family(fv: &FeatureVector, reference: &ReferenceTable) -> EngineFamily {
    if fv.stats.std_abs >= reference.std_split {
        EngineFamily::Rail
    } else {
        EngineFamily::Road
    }
}

fn road_decision(fv: &FeatureVector, reference: &ReferenceTable) -> (TransportMode, Vec<Rule>) {
    if fv.avg_peak_area >= reference.bus_area_floor {
        (TransportMode::Bus, vec![Rule::AreaAtLeastBusFloor])
    } else if fv.avg_peak_interval >= reference.car_interval_floor {
        (
            TransportMode::Car,
            vec![Rule::AreaBelowBusFloor, Rule::IntervalAtLeastCarFloor],
        )
    } else {
        (
            TransportMode::Motorbike,
            vec![Rule::AreaBelowBusFloor, Rule::IntervalBelowCarFloor],
        )
    }
}

pub fn classify_road(fv: &FeatureVector, reference: &ReferenceTable) -> TransportMode {
    road_decision(fv, reference).0
}

/// Nearest of the metro and train centroids in (interval, area) space, each
/// axis scaled by the mean of the two centroids. Ties go to metro.
pub fn classify_rail(fv: &FeatureVector, reference: &ReferenceTable) -> TransportMode {
    let (m, t) = (&reference.metro, &reference.train);
    let dims = [
        (fv.avg_peak_interval, m.interval_s, t.interval_s),
        (fv.avg_peak_area, m.area, t.area),
    ];
    // d²(metro) − d²(train) = 2 Σ (t − m)(x − (m + t)/2) / s²
    let score: f64 = dims
        .iter()
        .map(|&(x, mc, tc)| {
            let scale = (mc + tc) / 2.0;
            (tc - mc) * (x - (mc + tc) / 2.0) / (scale * scale)
        })
        .sum();
    if score > 0.0 {
        TransportMode::Train
    } else {
        TransportMode::Metro
    }
}

pub fn classify(fv: &FeatureVector, reference: &ReferenceTable) -> ModeDecision {
    match classify_family(fv, reference) {
        EngineFamily::Road => {
            let (mode, rules) = road_decision(fv, reference);
            let mut rule_trail = vec![Rule::StdBelowSplit];
            rule_trail.extend(rules);
            ModeDecision {
                family: EngineFamily::Road,
                mode,
                confident: true,
                rule_trail,
            }
        }
        EngineFamily::Rail => {
            let mode = classify_rail(fv, reference);
            let rule = match mode {
                TransportMode::Train => Rule::RailNearestTrain,
                _ => Rule::RailNearestMetro,
            };
            ModeDecision {
                family: EngineFamily::Rail,
                mode,
                confident: false,
                rule_trail: vec![Rule::StdAtLeastSplit, rule],
            }
        }
    }
}

/// Activity labels reported by the platform's activity recognition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Activity {
    Vehicle,
    Bicycle,
    OnFoot,
    Still,
    Unknown,
}

impl Activity {
    pub const ALL: [Activity; 5] = [
        Activity::Vehicle,
        Activity::Bicycle,
        Activity::OnFoot,
        Activity::Still,
        Activity::Unknown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Activity::Vehicle => "vehicle",
            Activity::Bicycle => "bicycle",
            Activity::OnFoot => "on_foot",
            Activity::Still => "still",
            Activity::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Activity::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownActivityName(s.to_string()))
    }
}

/// Activity updates counted over one two-minute segment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActivityTally {
    pub vehicle: u32,
    pub bicycle: u32,
    pub on_foot: u32,
    pub still: u32,
    pub unknown: u32,
}

impl ActivityTally {
    pub fn count(&self, activity: Activity) -> u32 {
        match activity {
            Activity::Vehicle => self.vehicle,
            Activity::Bicycle => self.bicycle,
            Activity::OnFoot => self.on_foot,
            Activity::Still => self.still,
            Activity::Unknown => self.unknown,
        }
    }

    pub fn record(&mut self, activity: Activity) {
        let slot = match activity {
            Activity::Vehicle => &mut self.vehicle,
            Activity::Bicycle => &mut self.bicycle,
            Activity::OnFoot => &mut self.on_foot,
            Activity::Still => &mut self.still,
            Activity::Unknown => &mut self.unknown,
        };
        *slot += 1;
    }
}

pub fn tally_add(tally: ActivityTally, activity: &str) -> Result<ActivityTally> {
    let activity: Activity = activity.parse()?;
    let mut next = tally;
    next.record(activity);
    Ok(next)
}

/// Vehicle-favoring vote.
///
/// Vehicle wins whenever it shares the top count. Otherwise a top non-vehicle
/// activity wins only if it leads vehicle by more than 3 updates, preferring
/// bicycle, then on_foot, then still; `unknown` never wins on its own. A tie
/// across all five counters yields `still`.
pub fn estimate_activity(tally: &ActivityTally) -> Activity {
    let top = Activity::ALL
        .iter()
        .map(|&a| tally.count(a))
        .max()
        .unwrap_or(0);
    let at_top: Vec<Activity> = Activity::ALL
        .into_iter()
        .filter(|&a| tally.count(a) == top)
        .collect();

    if at_top.len() == Activity::ALL.len() {
        return Activity::Still;
    }
    if at_top.contains(&Activity::Vehicle) {
        return Activity::Vehicle;
    }
    if top > tally.vehicle + 3 {
        if let Some(&winner) = [Activity::Bicycle, Activity::OnFoot, Activity::Still]
            .iter()
            .find(|a| at_top.contains(a))
        {
            return winner;
        }
    }
    Activity::Vehicle
}

/// Whether sensors should be sampled after this vote: not for `still` or
/// `on_foot`.
pub fn should_listen(activity: Activity) -> bool {
    activity != Activity::Still && activity != Activity::OnFoot
}
