use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fare::{FareRangeRecord, FareSchedule, FareTable};
use crate::ingest::{csv_error, open};
use crate::money::RATE_UNITS_PER_CENT;

pub const FARE_CONFIG_HEADER: [&str; 5] = [
    "mode",
    "base_fare",
    "cost_per_meter",
    "cost_per_minute",
    "resolution_strategy",
];

/// Reads a fare config CSV. Values are in major currency units and may be
/// ranges (`2.50 - 4.00`); an empty `resolution_strategy` defers to the
/// strategy passed to [`crate::fare::resolve_fares`].
pub fn load_fare_schedule(path: impl AsRef<Path>) -> Result<FareSchedule> {
    let path = path.as_ref();
    read_fare_schedule(open(path)?, path)
}

pub fn read_fare_schedule<R: Read>(reader: R, label: &Path) -> Result<FareSchedule> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(label, e))?.clone();
    let found: Vec<&str> = headers.iter().map(|h| h.trim_start_matches('\u{feff}')).collect();
    let required = &FARE_CONFIG_HEADER[..4];
    if found.len() < 4 || found[..4] != *required || (found.len() > 4 && found[4] != FARE_CONFIG_HEADER[4]) {
        return Err(Error::parse(
            label,
            1,
            format!(
                "expected header `{}`, found `{}`",
                FARE_CONFIG_HEADER.join(","),
                found.join(",")
            ),
        ));
    }
    let mut schedule = FareSchedule::default();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(label, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(i).unwrap_or("");
        let mut parsed = FareRangeRecord::parse(field(0), field(1), field(2), field(3))
            .map_err(|e| Error::parse(label, line, e.to_string()))?;
        let strategy = field(4);
        if !strategy.is_empty() {
            parsed.strategy = Some(
                strategy
                    .parse()
                    .map_err(|e: Error| Error::parse(label, line, e.to_string()))?,
            );
        }
        if schedule.record(&parsed.mode).is_some() {
            return Err(Error::parse(label, line, format!("duplicate mode `{}`", parsed.mode)));
        }
        schedule.records.push(parsed);
    }
    Ok(schedule)
}

fn major(value: i64, scale: u32) -> String {
    let pow = 10i64.pow(scale);
    format!("{}.{:0width$}", value / pow, value % pow, width = scale as usize)
}

/// Writes a resolved table as an exact single-valued fare config.
pub fn write_fare_table<W: Write>(table: &FareTable, writer: W) -> Result<()> {
    debug_assert_eq!(RATE_UNITS_PER_CENT, 10_000);
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(FARE_CONFIG_HEADER).map_err(io)?;
    for (_, entry) in table.entries() {
        let p = entry.policy;
        w.write_record([
            entry.name.clone(),
            major(p.base_fare.0, 2),
            major(p.cost_per_meter.0, 6),
            major(p.cost_per_minute.0, 6),
            String::new(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io("<fare table>", e))?;
    Ok(())
}
