//! Fare policies and their resolution from range-valued fare schedules.
//!
//! An edge traversal costs `base_fare + cost_per_minute * time +
//! cost_per_meter * distance`, rounded half-up to whole cents. The base fare
//! is charged on every edge traversal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::{Cents, Rate, RATE_UNITS_PER_CENT};
use crate::rng::SplitMix64;

/// Dense index of a transport mode within a [`FareTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModeId(pub u16);

impl ModeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mode#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FarePolicy {
    pub base_fare: Cents,
    pub cost_per_meter: Rate,
    pub cost_per_minute: Rate,
}

impl FarePolicy {
    pub fn new(base_fare: Cents, cost_per_meter: Rate, cost_per_minute: Rate) -> Result<Self> {
        let policy = Self {
            base_fare,
            cost_per_meter,
            cost_per_minute,
        };
        policy.validate("<policy>")?;
        Ok(policy)
    }

    fn validate(&self, mode: &str) -> Result<()> {
        if self.base_fare.0 < 0 || self.cost_per_meter.0 < 0 || self.cost_per_minute.0 < 0 {
            return Err(Error::Config(format!(
                "fare policy for `{mode}` has a negative component"
            )));
        }
        Ok(())
    }

    /// Cost of one traversal of `distance_m` meters taking `time_min` minutes.
    ///
    /// Distance and time are quantized to thousandths before the fixed-point
    /// product, so the result is exact for inputs with at most three
    /// decimals.
    pub fn cost(&self, distance_m: f64, time_min: f64) -> Cents {
        let milli_m = quantize_milli(distance_m);
        let milli_min = quantize_milli(time_min);
        // rate units are 1e-4 cent, quantities are 1e-3 units: products are 1e-7 cent.
        const SCALE: i128 = RATE_UNITS_PER_CENT as i128 * 1000;
        let total = i128::from(self.base_fare.0) * SCALE
            + i128::from(self.cost_per_meter.0) * milli_m
            + i128::from(self.cost_per_minute.0) * milli_min;
        Cents(((total + SCALE / 2).div_euclid(SCALE)) as i64)
    }

    /// Component-wise scaling, used for argmin-stability checks.
    pub fn scaled(&self, factor: i64) -> FarePolicy {
        FarePolicy {
            base_fare: Cents(self.base_fare.0 * factor),
            cost_per_meter: Rate(self.cost_per_meter.0 * factor),
            cost_per_minute: Rate(self.cost_per_minute.0 * factor),
        }
    }

    /// Component-wise median. For an even count the two middle values are
    /// averaged, rounding half-up.
    pub fn median<'a>(policies: impl IntoIterator<Item = &'a FarePolicy>) -> Option<FarePolicy> {
        let policies: Vec<&FarePolicy> = policies.into_iter().collect();
        if policies.is_empty() {
            return None;
        }
        let median = |mut v: Vec<i64>| -> i64 {
            v.sort_unstable();
            let n = v.len();
            if n % 2 == 1 {
                v[n / 2]
            } else {
                (v[n / 2 - 1] + v[n / 2] + 1).div_euclid(2)
            }
        };
        Some(FarePolicy {
            base_fare: Cents(median(policies.iter().map(|p| p.base_fare.0).collect())),
            cost_per_meter: Rate(median(policies.iter().map(|p| p.cost_per_meter.0).collect())),
            cost_per_minute: Rate(median(policies.iter().map(|p| p.cost_per_minute.0).collect())),
        })
    }
}

fn quantize_milli(x: f64) -> i128 {
    if !x.is_finite() || x <= 0.0 {
        return 0;
    }
    (x * 1000.0).round() as i128
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeEntry {
    pub name: String,
    pub policy: FarePolicy,
}

/// Per-mode fare policies, indexed densely by [`ModeId`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareTable {
    modes: Vec<ModeEntry>,
}

impl FareTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (String, FarePolicy)>) -> Result<Self> {
        let mut table = Self::new();
        for (name, policy) in entries {
            table.add_mode(name, policy)?;
        }
        Ok(table)
    }

    pub fn add_mode(&mut self, name: impl Into<String>, policy: FarePolicy) -> Result<ModeId> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Config("mode name must not be empty".into()));
        }
        if self.mode_id(&name).is_some() {
            return Err(Error::DuplicateMode(name));
        }
        policy.validate(&name)?;
        let id = u16::try_from(self.modes.len()).map_err(|_| Error::Config("too many transport modes".into()))?;
        self.modes.push(ModeEntry { name, policy });
        Ok(ModeId(id))
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn mode_id(&self, name: &str) -> Option<ModeId> {
        self.modes.iter().position(|m| m.name == name).map(|i| ModeId(i as u16))
    }

    pub fn require_mode(&self, name: &str) -> Result<ModeId> {
        self.mode_id(name)
            .ok_or_else(|| Error::MissingFarePolicy { mode: name.to_string() })
    }

    pub fn name(&self, mode: ModeId) -> &str {
        self.modes.get(mode.index()).map(|m| m.name.as_str()).unwrap_or("?")
    }

    pub fn policy(&self, mode: ModeId) -> Result<&FarePolicy> {
        self.modes
            .get(mode.index())
            .map(|m| &m.policy)
            .ok_or_else(|| Error::MissingFarePolicy { mode: mode.to_string() })
    }

    pub fn entries(&self) -> impl Iterator<Item = (ModeId, &ModeEntry)> {
        self.modes.iter().enumerate().map(|(i, m)| (ModeId(i as u16), m))
    }

    pub fn mode_ids(&self) -> impl Iterator<Item = ModeId> {
        (0..self.modes.len()).map(|i| ModeId(i as u16))
    }

    /// The default policy for connectivity-repair edges.
    pub fn median_policy(&self) -> Option<FarePolicy> {
        FarePolicy::median(self.modes.iter().map(|m| &m.policy))
    }

    pub fn scaled(&self, factor: i64) -> FareTable {
        FareTable {
            modes: self
                .modes
                .iter()
                .map(|m| ModeEntry {
                    name: m.name.clone(),
                    policy: m.policy.scaled(factor),
                })
                .collect(),
        }
    }
}

/// How a fare range collapses to a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FareStrategy {
    #[default]
    Low,
    High,
    Mid,
    SeededUniform,
}

impl FromStr for FareStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" => Ok(FareStrategy::Low),
            "high" => Ok(FareStrategy::High),
            "mid" => Ok(FareStrategy::Mid),
            "seeded" | "seeded-uniform" => Ok(FareStrategy::SeededUniform),
            other => Err(Error::Config(format!("unknown fare strategy `{other}`"))),
        }
    }
}

impl fmt::Display for FareStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FareStrategy::Low => "low",
            FareStrategy::High => "high",
            FareStrategy::Mid => "mid",
            FareStrategy::SeededUniform => "seeded-uniform",
        })
    }
}

/// Inclusive range of a fixed-point quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedRange {
    pub low: i64,
    pub high: i64,
}

impl FixedRange {
    pub fn exact(v: i64) -> Self {
        Self { low: v, high: v }
    }

    fn resolve(&self, strategy: FareStrategy, rng: &mut SplitMix64) -> i64 {
        match strategy {
            FareStrategy::Low => self.low,
            FareStrategy::High => self.high,
            FareStrategy::Mid => (self.low + self.high + 1).div_euclid(2),
            FareStrategy::SeededUniform => rng.range_inclusive(self.low, self.high),
        }
    }

    /// Parses `"2.50 - 4.00"`, `"~5.00"` or `"3.20"` at the given scale.
    fn parse(s: &str, scale: u32) -> Option<Self> {
        let s = s.trim().trim_start_matches('~').trim();
        let (low, high) = match s.split_once('-') {
            Some((a, b)) => (a, b.trim().trim_start_matches('~')),
            None => (s, s),
        };
        Some(Self {
            low: crate::money::parse_fixed(low, scale)?,
            high: crate::money::parse_fixed(high, scale)?,
        })
    }
}

/// Range-valued fare record for one mode, in major currency units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareRangeRecord {
    pub mode: String,
    /// Cents.
    pub base_fare: FixedRange,
    /// Rate units (1e-4 cent) per meter.
    pub cost_per_meter: FixedRange,
    /// Rate units (1e-4 cent) per minute.
    pub cost_per_minute: FixedRange,
    /// Per-record override of the global strategy.
    pub strategy: Option<FareStrategy>,
}

impl FareRangeRecord {
    pub fn parse(mode: &str, base_fare: &str, cost_per_meter: &str, cost_per_minute: &str) -> Result<Self> {
        let field = |value: &str, scale: u32, name: &str| {
            FixedRange::parse(value, scale)
                .ok_or_else(|| Error::Config(format!("mode `{mode}`: cannot parse {name} `{value}`")))
        };
        let record = Self {
            mode: mode.trim().to_string(),
            base_fare: field(base_fare, 2, "base_fare")?,
            cost_per_meter: field(cost_per_meter, 6, "cost_per_meter")?,
            cost_per_minute: field(cost_per_minute, 6, "cost_per_minute")?,
            strategy: None,
        };
        record.check()?;
        Ok(record)
    }

    fn check(&self) -> Result<()> {
        let ranges = [
            ("base_fare", self.base_fare, 2u32),
            ("cost_per_meter", self.cost_per_meter, 6),
            ("cost_per_minute", self.cost_per_minute, 6),
        ];
        for (field, r, scale) in ranges {
            if r.low > r.high {
                let show = |v: i64| format!("{:.*}", scale as usize, v as f64 / 10f64.powi(scale as i32));
                return Err(Error::InvertedRange {
                    mode: self.mode.clone(),
                    field,
                    low: show(r.low),
                    high: show(r.high),
                });
            }
        }
        Ok(())
    }
}

/// A fare configuration: one range record per mode.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FareSchedule {
    pub records: Vec<FareRangeRecord>,
}

impl FareSchedule {
    fn from_rows(rows: &[(&str, &str, &str, &str)]) -> Self {
        Self {
            records: rows
                .iter()
                .map(|(m, b, pm, pmin)| FareRangeRecord::parse(m, b, pm, pmin).expect("built-in fare table is valid"))
                .collect(),
        }
    }

    /// Swiss transit fares, CHF.
    pub fn switzerland() -> Self {
        Self::from_rows(&[
            ("Bus", "2.50 - 4.00", "0.01 - 0.03", "0.05 - 0.10"),
            ("Tram", "2.50 - 4.00", "0.01 - 0.03", "0.05 - 0.10"),
            ("Train", "~5.00", "0.03 - 0.05", "0.10 - 0.15"),
            ("Ferry", "5.00 - 10.00", "0.05 - 0.10", "0.15 - 0.25"),
            ("Funicular", "1.30 - 5.00", "0.02 - 0.04", "0.10 - 0.15"),
            ("Gondola", "5.00 - 15.00", "0.05 - 0.15", "0.20 - 0.50"),
            ("Subway", "2.50 - 4.00", "0.01 - 0.03", "0.05 - 0.10"),
        ])
    }

    /// Helsinki fares, EUR.
    pub fn helsinki() -> Self {
        Self::from_rows(&[
            ("Bike", "0.00 - 5.00", "0.00 - 0.10", "0.05 - 0.10"),
            ("Public Transport", "3.20", "0.03 - 0.05", "0.05 - 0.10"),
            ("Private Car (Taxi)", "5.90", "0.01 - 0.05", "0.74"),
        ])
    }

    pub fn record(&self, mode: &str) -> Option<&FareRangeRecord> {
        self.records.iter().find(|r| r.mode == mode)
    }
}

/// Collapses every range of `schedule` into a concrete [`FareTable`].
///
/// `SeededUniform` draws base fare, per-meter and per-minute components for
/// each mode in record order from one generator seeded with `seed`.
pub fn resolve_fares(schedule: &FareSchedule, strategy: FareStrategy, seed: u64) -> Result<FareTable> {
    let mut rng = SplitMix64::new(seed);
    let mut table = FareTable::new();
    for record in &schedule.records {
        record.check()?;
        let strategy = record.strategy.unwrap_or(strategy);
        let policy = FarePolicy {
            base_fare: Cents(record.base_fare.resolve(strategy, &mut rng)),
            cost_per_meter: Rate(record.cost_per_meter.resolve(strategy, &mut rng)),
            cost_per_minute: Rate(record.cost_per_minute.resolve(strategy, &mut rng)),
        };
        table.add_mode(record.mode.clone(), policy)?;
    }
    Ok(table)
}
