use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fare::FareTable;
use crate::ingest::{csv_error, open};
use crate::network::{MultiModalNetwork, NetworkBuilder};

pub const EDGE_LIST_HEADER: [&str; 5] = ["u", "v", "mode", "distance_m", "time_min"];

/// Loads an edge-list CSV. PoIs are created in order of first appearance,
/// named by the `u`/`v` values.
pub fn load_edge_list(path: impl AsRef<Path>, fares: &FareTable) -> Result<MultiModalNetwork> {
    let path = path.as_ref();
    read_edge_list(open(path)?, path, fares)
}

pub fn read_edge_list<R: Read>(reader: R, label: &Path, fares: &FareTable) -> Result<MultiModalNetwork> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_error(label, e))?.clone();
    let found: Vec<&str> = headers.iter().map(|h| h.trim_start_matches('\u{feff}')).collect();
    if found != EDGE_LIST_HEADER {
        return Err(Error::parse(
            label,
            1,
            format!(
                "expected header `{}`, found `{}`",
                EDGE_LIST_HEADER.join(","),
                found.join(",")
            ),
        ));
    }
    let mut builder = NetworkBuilder::new(fares.clone());
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(label, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |msg: String| Error::parse(label, line, msg);
        let field = |i: usize| record.get(i).unwrap_or("");
        let (u, v, mode) = (field(0), field(1), field(2));
        if u.is_empty() || v.is_empty() {
            return Err(bad("empty PoI id".into()));
        }
        let mode_id = fares
            .mode_id(mode)
            .ok_or_else(|| bad(format!("unknown mode `{mode}`")))?;
        let number = |i: usize, name: &str| -> Result<f64> {
            let raw = field(i);
            let x: f64 = raw
                .parse()
                .map_err(|_| bad(format!("{name} `{raw}` is not a number")))?;
            if !x.is_finite() || x < 0.0 {
                return Err(bad(format!("{name} `{raw}` must be finite and >= 0")));
            }
            Ok(x)
        };
        let distance = number(3, "distance_m")?;
        let time = number(4, "time_min")?;
        let (a, b) = (builder.intern_poi(u), builder.intern_poi(v));
        builder
            .add_edge(a, b, mode_id, distance, time)
            .map_err(|e| bad(e.to_string()))?;
    }
    builder.build()
}

pub fn export_edge_list(net: &MultiModalNetwork, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_edge_list(net, file).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Writes edges in edge-id order; distances and times use the shortest
/// representation that parses back to the same value.
pub fn write_edge_list<W: Write>(net: &MultiModalNetwork, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::io("<edge list>", e),
        other => Error::Config(format!("{other:?}")),
    };
    w.write_record(EDGE_LIST_HEADER).map_err(io)?;
    for e in net.edges() {
        w.write_record([
            net.label(e.u),
            net.label(e.v),
            net.fare_table().name(e.mode).to_string(),
            e.distance_m.to_string(),
            e.time_min.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io("<edge list>", e))?;
    Ok(())
}
