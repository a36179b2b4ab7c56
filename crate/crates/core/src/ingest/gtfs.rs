//! Static GTFS feeds (stops, routes, trips, stop_times).

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fare::FareTable;
use crate::ingest::{csv_error, open};
use crate::network::{Coord, MultiModalNetwork, NetworkBuilder, PoiId};
use crate::planner::{Timetable, Trip};

#[derive(Debug, Clone, PartialEq)]
pub struct GtfsStop {
    pub id: String,
    pub name: String,
    pub lat: f64,
    pub lon: f64,
    pub line: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GtfsRoute {
    pub id: String,
    pub route_type: u32,
    pub line: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GtfsTrip {
    pub id: String,
    pub route_id: String,
    pub line: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GtfsStopTime {
    pub trip_id: String,
    pub stop_id: String,
    /// Minutes after midnight of the service day.
    pub arrival: f64,
    pub departure: f64,
    pub sequence: u32,
    pub line: u64,
}

/// A parsed and cross-checked feed. `stop_times` is grouped by trip (in
/// trips.txt order) and sorted by sequence within each trip.
#[derive(Debug, Clone, PartialEq)]
pub struct GtfsFeed {
    pub dir: PathBuf,
    pub stops: Vec<GtfsStop>,
    pub routes: Vec<GtfsRoute>,
    pub trips: Vec<GtfsTrip>,
    pub stop_times: Vec<GtfsStopTime>,
}

/// Mode name for a basic or extended GTFS `route_type`.
pub fn mode_for_route_type(route_type: u32) -> Option<&'static str> {
    Some(match route_type {
        0 | 5 | 900..=999 => "Tram",
        1 | 400..=499 => "Subway",
        2 | 12 | 100..=199 => "Train",
        3 | 11 | 200..=299 | 700..=799 => "Bus",
        4 | 1000..=1099 | 1200..=1299 => "Ferry",
        6 | 1300..=1399 => "Gondola",
        7 | 1400..=1499 => "Funicular",
        _ => return None,
    })
}

/// `HH:MM:SS` to minutes; hours may exceed 23.
fn parse_time(raw: &str) -> Option<f64> {
    let mut parts = raw.trim().split(':');
    let h: u32 = parts.next()?.parse().ok()?;
    let m: u32 = parts.next()?.parse().ok()?;
    let s: u32 = parts.next()?.parse().ok()?;
    if parts.next().is_some() || m > 59 || s > 59 {
        return None;
    }
    Some(f64::from(h) * 60.0 + f64::from(m) + f64::from(s) / 60.0)
}

#[derive(Deserialize)]
struct StopRow {
    stop_id: String,
    #[serde(default)]
    stop_name: String,
    stop_lat: String,
    stop_lon: String,
}

#[derive(Deserialize)]
struct RouteRow {
    route_id: String,
    route_type: String,
}

#[derive(Deserialize)]
struct TripRow {
    route_id: String,
    trip_id: String,
}

#[derive(Deserialize)]
struct StopTimeRow {
    trip_id: String,
    #[serde(default)]
    arrival_time: String,
    #[serde(default)]
    departure_time: String,
    stop_id: String,
    stop_sequence: String,
}

fn read_rows<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<Vec<(u64, T)>> {
    let path = dir.join(name);
    let file = open(&path)?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let mut headers = rdr.headers().map_err(|e| csv_error(&path, e))?.clone();
    // a UTF-8 BOM would otherwise stick to the first column name
    if let Some(first) = headers.get(0).filter(|h| h.starts_with('\u{feff}')) {
        let fixed = first.trim_start_matches('\u{feff}').to_string();
        let mut rest: Vec<String> = headers.iter().map(str::to_string).collect();
        rest[0] = fixed;
        headers = csv::StringRecord::from(rest);
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row: T = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::parse(&path, line, e.to_string()))?;
        rows.push((line, row));
    }
    Ok(rows)
}

impl GtfsFeed {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let ((stops, routes), (trips, times)) = rayon::join(
            || {
                rayon::join(
                    || read_rows::<StopRow>(dir, "stops.txt"),
                    || read_rows::<RouteRow>(dir, "routes.txt"),
                )
            },
            || {
                rayon::join(
                    || read_rows::<TripRow>(dir, "trips.txt"),
                    || read_rows::<StopTimeRow>(dir, "stop_times.txt"),
                )
            },
        );
        let (stops, routes, trips, times) = (stops?, routes?, trips?, times?);

        let file = |name: &str| dir.join(name);
        let mut stop_index = HashMap::new();
        let mut out_stops = Vec::with_capacity(stops.len());
        for (line, r) in stops {
            let bad = |m: String| Error::parse(file("stops.txt"), line, m);
            let coord = |raw: &str, what: &str, limit: f64| -> Result<f64> {
                raw.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite() && x.abs() <= limit)
                    .ok_or_else(|| bad(format!("invalid {what} `{raw}`")))
            };
            let lat = coord(&r.stop_lat, "stop_lat", 90.0)?;
            let lon = coord(&r.stop_lon, "stop_lon", 180.0)?;
            if r.stop_id.is_empty() || stop_index.insert(r.stop_id.clone(), out_stops.len()).is_some() {
                return Err(bad(format!("empty or duplicate stop_id `{}`", r.stop_id)));
            }
            out_stops.push(GtfsStop {
                id: r.stop_id,
                name: r.stop_name,
                lat,
                lon,
                line,
            });
        }

        let mut route_index = HashMap::new();
        let mut out_routes = Vec::with_capacity(routes.len());
        for (line, r) in routes {
            let bad = |m: String| Error::parse(file("routes.txt"), line, m);
            let route_type: u32 = r
                .route_type
                .parse()
                .map_err(|_| bad(format!("invalid route_type `{}`", r.route_type)))?;
            if route_index.insert(r.route_id.clone(), out_routes.len()).is_some() {
                return Err(bad(format!("duplicate route_id `{}`", r.route_id)));
            }
            out_routes.push(GtfsRoute {
                id: r.route_id,
                route_type,
                line,
            });
        }

        let mut trip_index = HashMap::new();
        let mut out_trips = Vec::with_capacity(trips.len());
        for (line, r) in trips {
            let bad = |m: String| Error::parse(file("trips.txt"), line, m);
            if !route_index.contains_key(&r.route_id) {
                return Err(bad(format!(
                    "trip `{}` references unknown route `{}`",
                    r.trip_id, r.route_id
                )));
            }
            if trip_index.insert(r.trip_id.clone(), out_trips.len()).is_some() {
                return Err(bad(format!("duplicate trip_id `{}`", r.trip_id)));
            }
            out_trips.push(GtfsTrip {
                id: r.trip_id,
                route_id: r.route_id,
                line,
            });
        }

        let mut per_trip: Vec<Vec<GtfsStopTime>> = vec![Vec::new(); out_trips.len()];
        for (line, r) in times {
            let bad = |m: String| Error::parse(file("stop_times.txt"), line, m);
            let trip = *trip_index
                .get(&r.trip_id)
                .ok_or_else(|| bad(format!("unknown trip `{}`", r.trip_id)))?;
            if !stop_index.contains_key(&r.stop_id) {
                return Err(bad(format!("unknown stop `{}`", r.stop_id)));
            }
            let sequence: u32 = r
                .stop_sequence
                .parse()
                .map_err(|_| bad(format!("invalid stop_sequence `{}`", r.stop_sequence)))?;
            let time = |raw: &str, what: &str| -> Result<Option<f64>> {
                if raw.is_empty() {
                    return Ok(None);
                }
                parse_time(raw)
                    .map(Some)
                    .ok_or_else(|| bad(format!("invalid {what} `{raw}`")))
            };
            let (arrival, departure) = match (
                time(&r.arrival_time, "arrival_time")?,
                time(&r.departure_time, "departure_time")?,
            ) {
                (Some(a), Some(d)) => (a, d),
                (Some(a), None) => (a, a),
                (None, Some(d)) => (d, d),
                (None, None) => return Err(bad("stop time has neither arrival nor departure".into())),
            };
            if departure < arrival {
                return Err(bad(format!(
                    "departure {} precedes arrival {}",
                    r.departure_time, r.arrival_time
                )));
            }
            per_trip[trip].push(GtfsStopTime {
                trip_id: r.trip_id,
                stop_id: r.stop_id,
                arrival,
                departure,
                sequence,
                line,
            });
        }

        let mut stop_times = Vec::new();
        for mut list in per_trip {
            list.sort_by_key(|st| (st.sequence, st.line));
            for w in list.windows(2) {
                let bad = |m: String| Error::parse(file("stop_times.txt"), w[0].line.max(w[1].line), m);
                if w[0].sequence == w[1].sequence {
                    return Err(bad(format!(
                        "trip `{}` repeats stop_sequence {}",
                        w[1].trip_id, w[1].sequence
                    )));
                }
                if w[1].arrival < w[0].departure {
                    return Err(bad(format!(
                        "trip `{}` arrives at sequence {} before departing sequence {}",
                        w[1].trip_id, w[1].sequence, w[0].sequence
                    )));
                }
            }
            stop_times.extend(list);
        }

        Ok(GtfsFeed {
            dir: dir.to_path_buf(),
            stops: out_stops,
            routes: out_routes,
            trips: out_trips,
            stop_times,
        })
    }

    fn route_mode(&self, route: &GtfsRoute, fares: &FareTable) -> Result<crate::fare::ModeId> {
        let name = mode_for_route_type(route.route_type).ok_or_else(|| {
            Error::parse(
                self.dir.join("routes.txt"),
                route.line,
                format!("unsupported route_type {}", route.route_type),
            )
        })?;
        fares.mode_id(name).ok_or_else(|| {
            Error::parse(
                self.dir.join("routes.txt"),
                route.line,
                format!(
                    "route_type {} maps to mode `{name}`, which has no fare policy",
                    route.route_type
                ),
            )
        })
    }

    /// Stop times of each trip, in trips.txt order.
    fn trip_runs(&self) -> impl Iterator<Item = (&GtfsTrip, &[GtfsStopTime])> {
        let mut rest = self.stop_times.as_slice();
        self.trips.iter().map(move |trip| {
            let n = rest.iter().take_while(|st| st.trip_id == trip.id).count();
            let (run, tail) = rest.split_at(n);
            rest = tail;
            (trip, run)
        })
    }

    fn route(&self, id: &str) -> &GtfsRoute {
        self.routes
            .iter()
            .find(|r| r.id == id)
            .expect("validated route reference")
    }

    /// One PoI per stop (in stops.txt order); one edge per consecutive stop
    /// pair, merged per unordered (u, v, mode) keeping the shortest time.
    pub fn to_network(&self, fares: &FareTable) -> Result<MultiModalNetwork> {
        let mut builder = NetworkBuilder::new(fares.clone());
        let mut ids = HashMap::with_capacity(self.stops.len());
        for s in &self.stops {
            let id = builder.add_poi(s.id.clone(), s.name.clone(), Some(Coord::new(s.lat, s.lon)))?;
            ids.insert(s.id.as_str(), id);
        }
        let mut merged: Vec<(PoiId, PoiId, crate::fare::ModeId, f64)> = Vec::new();
        let mut slot: HashMap<(PoiId, PoiId, crate::fare::ModeId), usize> = HashMap::new();
        for (trip, run) in self.trip_runs() {
            let mode = self.route_mode(self.route(&trip.route_id), fares)?;
            for w in run.windows(2) {
                let (a, b) = (ids[w[0].stop_id.as_str()], ids[w[1].stop_id.as_str()]);
                if a == b {
                    continue;
                }
                let time = w[1].arrival - w[0].departure;
                let key = (a.min(b), a.max(b), mode);
                match slot.get(&key) {
                    Some(&i) => merged[i].3 = merged[i].3.min(time),
                    None => {
                        slot.insert(key, merged.len());
                        merged.push((a, b, mode, time));
                    }
                }
            }
        }
        let coord = |p: PoiId| {
            let s = &self.stops[p.index()];
            Coord::new(s.lat, s.lon)
        };
        for (a, b, mode, time) in merged {
            builder.add_edge(a, b, mode, coord(a).distance_m(&coord(b)), time)?;
        }
        builder.build()
    }

    /// Each trip as a timetable entry over the PoIs of `net`, which must
    /// have been built from this feed.
    pub fn timetable(&self, net: &MultiModalNetwork) -> Result<Timetable> {
        let mut trips = Vec::new();
        for (trip, run) in self.trip_runs() {
            if run.len() < 2 {
                continue;
            }
            let route = run
                .iter()
                .map(|st| net.require_external(&st.stop_id))
                .collect::<Result<Vec<_>>>()?;
            trips.push(Trip {
                route,
                mode: self.route_mode(self.route(&trip.route_id), net.fare_table())?,
                start_time: run[0].departure,
                end_time: run[run.len() - 1].arrival,
            });
        }
        Timetable::new(trips)
    }
}

pub fn load_gtfs(dir: impl AsRef<Path>, fares: &FareTable) -> Result<MultiModalNetwork> {
    let feed = GtfsFeed::load(dir)?;
    let net = feed.to_network(fares)?;
    log::info!(
        "GTFS feed {}: {} stops, {} trips, {} edges",
        feed.dir.display(),
        feed.stops.len(),
        feed.trips.len(),
        net.edges().len()
    );
    Ok(net)
}
