#![allow(dead_code)]

pub mod timetable_cases;

use std::collections::HashMap;
use std::path::PathBuf;

use gtpmm::fare::{resolve_fares, FareStrategy};
use gtpmm::ingest::{load_edge_list, load_fare_schedule, load_query};
use gtpmm::network::EdgeId;
use gtpmm::{Cents, MultiModalNetwork, PoiId, QueryInstance};
use petgraph::graph::{NodeIndex, UnGraph};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// The ten-PoI worked example with its two agents and three categories.
pub fn ten_poi() -> (MultiModalNetwork, QueryInstance) {
    let schedule = load_fare_schedule(fixture("ten_poi_fares.csv")).unwrap();
    let fares = resolve_fares(&schedule, FareStrategy::Low, 0).unwrap();
    let net = load_edge_list(fixture("ten_poi_edges.csv"), &fares).unwrap();
    let inst = load_query(fixture("ten_poi_query.toml"), &net).unwrap();
    (net, inst)
}

pub fn v(net: &MultiModalNetwork, name: &str) -> PoiId {
    net.require_external(name).unwrap()
}

pub fn names(net: &MultiModalNetwork, ids: &[PoiId]) -> Vec<String> {
    ids.iter().map(|&p| net.label(p)).collect()
}

/// All-destination cheapest costs from `source`, computed by petgraph over
/// every parallel edge.
pub fn petgraph_costs(net: &MultiModalNetwork, source: PoiId) -> HashMap<PoiId, Cents> {
    let mut g: UnGraph<(), i64> = UnGraph::with_capacity(net.poi_count(), net.edges().len());
    for _ in 0..net.poi_count() {
        g.add_node(());
    }
    for (i, e) in net.edges().iter().enumerate() {
        let w = net.edge_cost(EdgeId(i as u32)).0;
        g.add_edge(NodeIndex::new(e.u.index()), NodeIndex::new(e.v.index()), w);
    }
    petgraph::algo::dijkstra(&g, NodeIndex::new(source.index()), None, |e| *e.weight())
        .into_iter()
        .map(|(n, c)| (PoiId(n.index() as u32), Cents(c)))
        .collect()
}

/// Cheapest cost over every simple path and every choice of parallel edge
/// per hop. Exponential; for tiny networks only.
pub fn exhaustive_cost(net: &MultiModalNetwork, source: PoiId, target: PoiId) -> Option<Cents> {
    fn walk(
        net: &MultiModalNetwork,
        at: PoiId,
        target: PoiId,
        visited: &mut Vec<bool>,
        so_far: i64,
        best: &mut Option<i64>,
    ) {
        if at == target {
            *best = Some(best.map_or(so_far, |b| b.min(so_far)));
            return;
        }
        for &eid in net.incident_edges(at) {
            let e = net.edge(eid);
            let next = e.other(at);
            if visited[next.index()] {
                continue;
            }
            visited[next.index()] = true;
            walk(net, next, target, visited, so_far + net.edge_cost(eid).0, best);
            visited[next.index()] = false;
        }
    }
    let mut visited = vec![false; net.poi_count()];
    visited[source.index()] = true;
    let mut best = None;
    walk(net, source, target, &mut visited, 0, &mut best);
    best.map(Cents)
}
