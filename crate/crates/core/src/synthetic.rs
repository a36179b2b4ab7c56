//! Seeded synthetic networks and query instances.

use crate::error::{Error, Result};
use crate::fare::{resolve_fares, FarePolicy, FareSchedule, FareStrategy, FareTable, ModeId};
use crate::money::{Cents, Rate};
use crate::network::{Coord, MultiModalNetwork, NetworkBuilder, PoiId, RepairConfig};
use crate::planner::{Agent, QueryInstance};
use crate::rng::{derive_seed, SplitMix64};

/// A random "city": PoIs scattered in a lat/lon box, each linked to its
/// nearest neighbors by one to three modes.
#[derive(Debug, Clone, PartialEq)]
pub struct CityParams {
    pub pois: usize,
    /// Links per PoI toward its nearest neighbors.
    pub nearest: usize,
    pub max_modes_per_link: usize,
    pub south_west: Coord,
    pub north_east: Coord,
    pub fares: FareTable,
}

impl Default for CityParams {
    fn default() -> Self {
        Self {
            pois: 200,
            nearest: 3,
            max_modes_per_link: 3,
            south_west: Coord::new(47.32, 8.45),
            north_east: Coord::new(47.42, 8.60),
            fares: resolve_fares(&FareSchedule::switzerland(), FareStrategy::Low, 0)
                .expect("built-in fare table is valid"),
        }
    }
}

/// Metres per minute by mode name.
fn speed(mode: &str) -> f64 {
    match mode {
        "Train" => 1200.0,
        "Subway" => 600.0,
        "Tram" => 300.0,
        "Bus" => 333.0,
        "Ferry" => 250.0,
        "Funicular" | "Gondola" => 150.0,
        _ => 400.0,
    }
}

/// Builds a connected synthetic city; disconnected pieces are joined with
/// repair edges.
pub fn synthetic_city(params: &CityParams, seed: u64) -> Result<MultiModalNetwork> {
    if params.pois == 0 {
        return Err(Error::EmptyNetwork);
    }
    if params.fares.is_empty() || params.max_modes_per_link == 0 {
        return Err(Error::Config("synthetic city needs at least one mode per link".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut b = NetworkBuilder::new(params.fares.clone());
    let (sw, ne) = (params.south_west, params.north_east);
    let coords: Vec<Coord> = (0..params.pois)
        .map(|_| {
            Coord::new(
                sw.lat + (ne.lat - sw.lat) * rng.unit_f64(),
                sw.lon + (ne.lon - sw.lon) * rng.unit_f64(),
            )
        })
        .collect();
    for (i, c) in coords.iter().enumerate() {
        b.add_poi(format!("p{i}"), format!("PoI {i}"), Some(*c))?;
    }
    let modes: Vec<ModeId> = params.fares.mode_ids().collect();
    let mut linked = std::collections::HashSet::new();
    for i in 0..params.pois {
        let mut by_distance: Vec<(f64, usize)> = (0..params.pois)
            .filter(|&j| j != i)
            .map(|j| (coords[i].distance_m(&coords[j]), j))
            .collect();
        by_distance.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(d, j) in by_distance.iter().take(params.nearest) {
            if !linked.insert((i.min(j), i.max(j))) {
                continue;
            }
            let count = 1 + rng.index(params.max_modes_per_link.min(modes.len()));
            for mode in rng.sample(&modes, count) {
                let v = speed(params.fares.name(mode));
                b.add_edge(PoiId(i as u32), PoiId(j as u32), mode, d, d / v)?;
            }
        }
    }
    let net = b.build()?;
    let (net, added) = net.connect_components(&RepairConfig::default())?;
    log::debug!(
        "synthetic city: {} PoIs, {} edges, {} repair edges",
        net.poi_count(),
        net.edges().len(),
        added.len()
    );
    Ok(net)
}

/// Bounds for [`random_case`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseParams {
    pub max_pois: usize,
    pub max_categories: usize,
    pub max_category_size: usize,
    pub max_agents: usize,
    pub max_modes: usize,
}

impl Default for CaseParams {
    fn default() -> Self {
        Self {
            max_pois: 40,
            max_categories: 4,
            max_category_size: 5,
            max_agents: 4,
            max_modes: 3,
        }
    }
}

/// A small connected instance with integer distances and times and
/// whole-cent rates, so every cost is an exact integer.
///
/// Categories are disjoint; agents' endpoints are drawn from all PoIs and
/// may coincide with category members or with each other.
pub fn random_case(seed: u64, params: &CaseParams) -> (MultiModalNetwork, QueryInstance) {
    let mut rng = SplitMix64::new(seed);
    let k = 1 + rng.index(params.max_categories);
    let sizes: Vec<usize> = (0..k).map(|_| 1 + rng.index(params.max_category_size)).collect();
    let members: usize = sizes.iter().sum();
    let n = rng.range_inclusive(members.max(2) as i64, params.max_pois.max(members.max(2)) as i64) as usize;
    let g = 1 + rng.index(params.max_modes);

    let mut fares = FareTable::new();
    for m in 0..g {
        let policy = FarePolicy::new(
            Cents(rng.range_inclusive(0, 50)),
            Rate::from_cents(rng.range_inclusive(0, 3)),
            Rate::from_cents(rng.range_inclusive(0, 5)),
        )
        .expect("non-negative draws");
        fares.add_mode(format!("M{m}"), policy).expect("distinct names");
    }
    let mut b = NetworkBuilder::new(fares);
    for i in 0..n {
        b.add_poi(format!("n{i}"), "", None).expect("distinct ids");
    }
    let link = |b: &mut NetworkBuilder, rng: &mut SplitMix64, u: usize, v: usize| {
        let parallel = 1 + rng.index(g);
        for _ in 0..parallel {
            let mode = ModeId(rng.index(g) as u16);
            let d = rng.range_inclusive(1, 50) as f64;
            let t = rng.range_inclusive(0, 20) as f64;
            b.add_edge(PoiId(u as u32), PoiId(v as u32), mode, d, t)
                .expect("valid edge");
        }
    };
    for v in 1..n {
        let u = rng.index(v);
        link(&mut b, &mut rng, u, v);
    }
    for _ in 0..rng.index(n + 1) {
        let (u, v) = (rng.index(n), rng.index(n));
        if u != v {
            link(&mut b, &mut rng, u, v);
        }
    }
    let net = b.build().expect("valid network");

    let all: Vec<PoiId> = net.poi_ids().collect();
    let drawn = rng.sample(&all, members);
    let mut categories = Vec::with_capacity(k);
    let mut at = 0;
    for s in sizes {
        categories.push(drawn[at..at + s].to_vec());
        at += s;
    }
    let agents = (0..1 + rng.index(params.max_agents))
        .map(|_| Agent {
            source: all[rng.index(n)],
            destination: all[rng.index(n)],
        })
        .collect();
    let inst = QueryInstance::new(agents, categories).expect("nonempty query");
    (net, inst)
}

/// A network of exactly `components` random trees over `pois` PoIs
/// (`components <= pois`), with coordinates on every other PoI so repair
/// exercises both distance rules.
pub fn random_forest(seed: u64, pois: usize, components: usize) -> MultiModalNetwork {
    assert!(components >= 1 && components <= pois, "need 1 <= components <= pois");
    let mut rng = SplitMix64::new(derive_seed(seed, 0xF0));
    let mut fares = FareTable::new();
    for (m, cents) in [("Bus", 1), ("Tram", 2)] {
        fares
            .add_mode(
                m,
                FarePolicy::new(Cents(10 * cents), Rate::from_cents(cents), Rate(0)).expect("valid"),
            )
            .expect("distinct");
    }
    let mut b = NetworkBuilder::new(fares);
    for i in 0..pois {
        let coords = (i % 2 == 0).then(|| Coord::new(47.0 + rng.unit_f64() * 0.1, 8.0 + rng.unit_f64() * 0.1));
        b.add_poi(format!("f{i}"), "", coords).expect("distinct");
    }
    // random labels, then components are runs of the shuffled order
    let mut order: Vec<usize> = (0..pois).collect();
    rng.shuffle(&mut order);
    let mut cuts: Vec<usize> = rng.sample(&(1..pois).collect::<Vec<_>>(), components - 1);
    cuts.sort_unstable();
    cuts.push(pois);
    let mut start = 0;
    for end in cuts {
        for i in start + 1..end {
            let parent = order[start + rng.index(i - start)];
            let mode = ModeId(rng.index(2) as u16);
            let d = rng.range_inclusive(10, 500) as f64;
            b.add_edge(PoiId(parent as u32), PoiId(order[i] as u32), mode, d, d / 300.0)
                .expect("valid");
        }
        start = end;
    }
    b.build().expect("valid network")
}
