//! Building networks and queries from files.

mod categorize;
mod edge_list;
mod fares;
mod gtfs;
mod query;

pub use categorize::{categorize, CategoryConfig, CategoryStrategy, DEFAULT_CATEGORY_KEYWORDS};
pub use edge_list::{export_edge_list, load_edge_list, read_edge_list, write_edge_list, EDGE_LIST_HEADER};
pub use fares::{load_fare_schedule, read_fare_schedule, write_fare_table, FARE_CONFIG_HEADER};
pub use gtfs::{load_gtfs, mode_for_route_type, GtfsFeed, GtfsRoute, GtfsStop, GtfsStopTime, GtfsTrip};
pub use query::{load_query, parse_query, PoiRef, QueryFile};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
        _ => Error::io(path, e),
    })
}

pub(crate) fn csv_error(file: &Path, err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    Error::parse(file, line, err.to_string())
}
