//! The multimodal city network.
//!
//! PoIs are vertices; every (PoI, PoI, mode) connection is its own
//! undirected edge, so two PoIs may be joined by several parallel edges.
//! Because no transfer penalty exists, the cheapest route between two PoIs
//! picks the cheapest parallel edge on every hop independently, and the
//! network precomputes that collapse once when it is finalized.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fare::{FarePolicy, FareTable, ModeId};
use crate::money::Cents;

pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PoiId(pub u32);

impl PoiId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PoiId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coord {
    pub lat: f64,
    pub lon: f64,
}

impl Coord {
    pub fn new(lat: f64, lon: f64) -> Self {
        Self { lat, lon }
    }

    /// Haversine great-circle distance in meters.
    pub fn distance_m(&self, other: &Coord) -> f64 {
        let (p1, p2) = (self.lat.to_radians(), other.lat.to_radians());
        let dp = p2 - p1;
        let dl = (other.lon - self.lon).to_radians();
        let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
        2.0 * EARTH_RADIUS_M * a.sqrt().asin()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poi {
    pub id: PoiId,
    /// Identifier in the source data, e.g. a GTFS `stop_id`.
    pub external_id: String,
    #[serde(default)]
    pub name: String,
    /// Category index, if the PoI has been categorized.
    #[serde(default)]
    pub category: Option<usize>,
    #[serde(default)]
    pub coords: Option<Coord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitEdge {
    pub u: PoiId,
    pub v: PoiId,
    pub mode: ModeId,
    pub distance_m: f64,
    pub time_min: f64,
}

impl TransitEdge {
    pub fn other(&self, end: PoiId) -> PoiId {
        if end == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Cost of traversing `edge` under `fares`.
pub fn edge_cost(edge: &TransitEdge, fares: &FareTable) -> Result<Cents> {
    Ok(fares.policy(edge.mode)?.cost(edge.distance_m, edge.time_min))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Leg {
    pub edge: EdgeId,
    pub mode: ModeId,
}

/// A priced route between two PoIs, one [`Leg`] per hop.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathResult {
    pub cost: Cents,
    pub legs: Vec<Leg>,
    pub poi_sequence: Vec<PoiId>,
}

impl PathResult {
    pub fn empty(at: PoiId) -> Self {
        Self {
            cost: Cents::ZERO,
            legs: Vec::new(),
            poi_sequence: vec![at],
        }
    }

    pub fn source(&self) -> PoiId {
        self.poi_sequence[0]
    }

    pub fn target(&self) -> PoiId {
        *self.poi_sequence.last().expect("non-empty poi sequence")
    }

    /// (from, to, leg) triples in travel order.
    pub fn hops(&self) -> impl Iterator<Item = (PoiId, PoiId, Leg)> + '_ {
        self.poi_sequence
            .windows(2)
            .zip(&self.legs)
            .map(|(w, leg)| (w[0], w[1], *leg))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Neighbor {
    to: PoiId,
    edge: EdgeId,
    cost: Cents,
}

/// Serialized form; adjacency is rebuilt on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct NetworkData {
    pois: Vec<Poi>,
    edges: Vec<TransitEdge>,
    fare_table: FareTable,
}

/// Immutable multimodal multigraph.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "NetworkData", into = "NetworkData")]
pub struct MultiModalNetwork {
    pois: Vec<Poi>,
    edges: Vec<TransitEdge>,
    fare_table: FareTable,
    edge_costs: Vec<Cents>,
    adjacency: Vec<Vec<EdgeId>>,
    /// Per PoI, the cheapest parallel edge to each neighbor, sorted by neighbor id.
    collapsed: Vec<Vec<Neighbor>>,
    by_external: HashMap<String, PoiId>,
}

impl TryFrom<NetworkData> for MultiModalNetwork {
    type Error = Error;

    fn try_from(data: NetworkData) -> Result<Self> {
        let mut builder = NetworkBuilder::new(data.fare_table);
        for (i, poi) in data.pois.into_iter().enumerate() {
            if poi.id.index() != i {
                return Err(Error::Config(format!(
                    "PoI ids must be dense: found {} at position {i}",
                    poi.id
                )));
            }
            let id = builder.add_poi(poi.external_id, poi.name, poi.coords)?;
            builder.set_category(id, poi.category)?;
        }
        builder.allow_self_loops(true);
        for e in data.edges {
            builder.add_edge(e.u, e.v, e.mode, e.distance_m, e.time_min)?;
        }
        builder.build()
    }
}

impl From<MultiModalNetwork> for NetworkData {
    fn from(net: MultiModalNetwork) -> Self {
        NetworkData {
            pois: net.pois,
            edges: net.edges,
            fare_table: net.fare_table,
        }
    }
}

/// Single-writer construction of a [`MultiModalNetwork`].
#[derive(Debug, Clone)]
pub struct NetworkBuilder {
    pois: Vec<Poi>,
    edges: Vec<TransitEdge>,
    fare_table: FareTable,
    by_external: HashMap<String, PoiId>,
    allow_self_loops: bool,
}

impl NetworkBuilder {
    pub fn new(fare_table: FareTable) -> Self {
        Self {
            pois: Vec::new(),
            edges: Vec::new(),
            fare_table,
            by_external: HashMap::new(),
            allow_self_loops: false,
        }
    }

    pub fn allow_self_loops(&mut self, allow: bool) -> &mut Self {
        self.allow_self_loops = allow;
        self
    }

    pub fn fare_table(&self) -> &FareTable {
        &self.fare_table
    }

    pub fn poi_count(&self) -> usize {
        self.pois.len()
    }

    pub fn add_poi(
        &mut self,
        external_id: impl Into<String>,
        name: impl Into<String>,
        coords: Option<Coord>,
    ) -> Result<PoiId> {
        let external_id = external_id.into();
        if self.by_external.contains_key(&external_id) {
            return Err(Error::Config(format!("duplicate PoI id `{external_id}`")));
        }
        let id = PoiId(self.pois.len() as u32);
        self.by_external.insert(external_id.clone(), id);
        self.pois.push(Poi {
            id,
            external_id,
            name: name.into(),
            category: None,
            coords,
        });
        Ok(id)
    }

    /// Returns the PoI with this external id, creating it on first sight.
    pub fn intern_poi(&mut self, external_id: &str) -> PoiId {
        match self.by_external.get(external_id) {
            Some(&id) => id,
            None => self.add_poi(external_id, external_id, None).expect("fresh external id"),
        }
    }

    pub fn poi_by_external(&self, external_id: &str) -> Option<PoiId> {
        self.by_external.get(external_id).copied()
    }

    pub fn set_category(&mut self, poi: PoiId, category: Option<usize>) -> Result<()> {
        self.pois.get_mut(poi.index()).ok_or(Error::UnknownPoi(poi.0))?.category = category;
        Ok(())
    }

    pub fn add_edge(&mut self, u: PoiId, v: PoiId, mode: ModeId, distance_m: f64, time_min: f64) -> Result<EdgeId> {
        let label = |p: PoiId| {
            self.pois
                .get(p.index())
                .map(|x| x.external_id.clone())
                .unwrap_or_else(|| p.to_string())
        };
        let invalid = |reason: String| Error::InvalidEdge {
            u: label(u),
            v: label(v),
            reason,
        };
        for p in [u, v] {
            if p.index() >= self.pois.len() {
                return Err(Error::UnknownPoi(p.0));
            }
        }
        if u == v && !self.allow_self_loops {
            return Err(invalid("self-loop".into()));
        }
        if mode.index() >= self.fare_table.len() {
            return Err(Error::MissingFarePolicy { mode: mode.to_string() });
        }
        if !distance_m.is_finite() || distance_m < 0.0 {
            return Err(invalid(format!("distance {distance_m} must be finite and >= 0")));
        }
        if !time_min.is_finite() || time_min < 0.0 {
            return Err(invalid(format!("time {time_min} must be finite and >= 0")));
        }
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(TransitEdge {
            u,
            v,
            mode,
            distance_m,
            time_min,
        });
        Ok(id)
    }

    pub fn build(self) -> Result<MultiModalNetwork> {
        let n = self.pois.len();
        let mut edge_costs = Vec::with_capacity(self.edges.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut collapsed: Vec<Vec<Neighbor>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            let id = EdgeId(i as u32);
            let cost = edge_cost(e, &self.fare_table)?;
            edge_costs.push(cost);
            adjacency[e.u.index()].push(id);
            if e.u != e.v {
                adjacency[e.v.index()].push(id);
                collapsed[e.u.index()].push(Neighbor {
                    to: e.v,
                    edge: id,
                    cost,
                });
                collapsed[e.v.index()].push(Neighbor {
                    to: e.u,
                    edge: id,
                    cost,
                });
            }
        }
        let modes: Vec<ModeId> = self.edges.iter().map(|e| e.mode).collect();
        for list in &mut collapsed {
            // cheapest first within a neighbor, then lowest mode, then lowest edge id
            list.sort_by_key(|nb| (nb.to, nb.cost, modes[nb.edge.index()], nb.edge));
            list.dedup_by_key(|nb| nb.to);
        }
        Ok(MultiModalNetwork {
            pois: self.pois,
            edges: self.edges,
            fare_table: self.fare_table,
            edge_costs,
            adjacency,
            collapsed,
            by_external: self.by_external,
        })
    }
}

impl MultiModalNetwork {
    pub fn pois(&self) -> &[Poi] {
        &self.pois
    }

    pub fn poi(&self, id: PoiId) -> Result<&Poi> {
        self.pois.get(id.index()).ok_or(Error::UnknownPoi(id.0))
    }

    pub fn poi_count(&self) -> usize {
        self.pois.len()
    }

    pub fn poi_ids(&self) -> impl Iterator<Item = PoiId> {
        (0..self.pois.len() as u32).map(PoiId)
    }

    pub fn edges(&self) -> &[TransitEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &TransitEdge {
        &self.edges[id.index()]
    }

    pub fn edge_cost(&self, id: EdgeId) -> Cents {
        self.edge_costs[id.index()]
    }

    pub fn incident_edges(&self, poi: PoiId) -> &[EdgeId] {
        &self.adjacency[poi.index()]
    }

    pub fn fare_table(&self) -> &FareTable {
        &self.fare_table
    }

    pub fn poi_by_external(&self, external_id: &str) -> Option<PoiId> {
        self.by_external.get(external_id).copied()
    }

    pub fn require_external(&self, external_id: &str) -> Result<PoiId> {
        self.poi_by_external(external_id)
            .ok_or_else(|| Error::UnknownExternalPoi(external_id.to_string()))
    }

    pub fn label(&self, id: PoiId) -> String {
        self.pois
            .get(id.index())
            .map(|p| p.external_id.clone())
            .unwrap_or_else(|| id.to_string())
    }

    pub fn check_poi(&self, id: PoiId) -> Result<()> {
        if id.index() < self.pois.len() {
            Ok(())
        } else {
            Err(Error::UnknownPoi(id.0))
        }
    }

    /// Returns a builder holding a copy of this network, for derivations.
    pub fn to_builder(&self) -> NetworkBuilder {
        NetworkBuilder {
            pois: self.pois.clone(),
            edges: self.edges.clone(),
            fare_table: self.fare_table.clone(),
            by_external: self.by_external.clone(),
            allow_self_loops: true,
        }
    }

    /// Same topology priced with a different fare table. Every mode used by
    /// an edge must still exist in `fare_table`.
    pub fn with_fares(&self, fare_table: FareTable) -> Result<MultiModalNetwork> {
        let mut b = self.to_builder();
        b.fare_table = fare_table;
        b.build()
    }

    /// Distinct neighbors of `poi`, ascending by id.
    pub fn neighbors(&self, poi: PoiId) -> impl Iterator<Item = PoiId> + '_ {
        self.collapsed[poi.index()].iter().map(|nb| nb.to)
    }

    /// All edges joining `u` and `v`, in edge-id order.
    pub fn parallel_edges(&self, u: PoiId, v: PoiId) -> Vec<EdgeId> {
        if u == v || u.index() >= self.pois.len() || v.index() >= self.pois.len() {
            return Vec::new();
        }
        self.adjacency[u.index()]
            .iter()
            .copied()
            .filter(|&e| self.edges[e.index()].other(u) == v)
            .collect()
    }

    /// The cheapest edge joining `u` and `v`; ties go to the lower mode id,
    /// then the lower edge id.
    pub fn cheapest_parallel_edge(&self, u: PoiId, v: PoiId) -> Option<(EdgeId, Cents)> {
        if u == v {
            return None;
        }
        let list = self.collapsed.get(u.index())?;
        let i = list.binary_search_by_key(&v, |nb| nb.to).ok()?;
        Some((list[i].edge, list[i].cost))
    }

    /// Single-pair cheapest path. `None` when the PoIs are disconnected.
    pub fn shortest_path(&self, source: PoiId, target: PoiId) -> Option<PathResult> {
        if source.index() >= self.pois.len() || target.index() >= self.pois.len() {
            return None;
        }
        let tree = self.dijkstra(source, Some(target));
        tree.path_to(self, target)
    }

    /// Single-source cheapest-path tree over the whole network.
    pub fn shortest_path_tree(&self, source: PoiId) -> ShortestPathTree {
        self.dijkstra(source, None)
    }

    // Heap entries order by (cost, poi id), so equal tentative costs settle
    // the lower PoI first; predecessors change only on strict improvement.
    fn dijkstra(&self, source: PoiId, target: Option<PoiId>) -> ShortestPathTree {
        let n = self.pois.len();
        let mut dist: Vec<Option<Cents>> = vec![None; n];
        let mut pred: Vec<Option<(PoiId, EdgeId)>> = vec![None; n];
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source.index()] = Some(Cents::ZERO);
        heap.push(Reverse((Cents::ZERO, source)));
        while let Some(Reverse((cost, u))) = heap.pop() {
            if settled[u.index()] {
                continue;
            }
            settled[u.index()] = true;
            if Some(u) == target {
                break;
            }
            for nb in &self.collapsed[u.index()] {
                if settled[nb.to.index()] {
                    continue;
                }
                let next = cost + nb.cost;
                let better = match dist[nb.to.index()] {
                    None => true,
                    Some(d) => next < d,
                };
                if better {
                    dist[nb.to.index()] = Some(next);
                    pred[nb.to.index()] = Some((u, nb.edge));
                    heap.push(Reverse((next, nb.to)));
                }
            }
        }
        for (i, s) in settled.iter().enumerate() {
            if !s {
                dist[i] = None;
                pred[i] = None;
            }
        }
        ShortestPathTree { source, dist, pred }
    }

    /// Fewest-hops route from `source` to `target` as a PoI sequence.
    /// BFS visits neighbors in ascending id order.
    pub fn fewest_hops_path(&self, source: PoiId, target: PoiId) -> Option<Vec<PoiId>> {
        let n = self.pois.len();
        if source.index() >= n || target.index() >= n {
            return None;
        }
        let mut pred: Vec<Option<PoiId>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[source.index()] = true;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            if u == target {
                break;
            }
            for v in self.neighbors(u) {
                if !seen[v.index()] {
                    seen[v.index()] = true;
                    pred[v.index()] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        if !seen[target.index()] {
            return None;
        }
        let mut path = vec![target];
        let mut at = target;
        while let Some(p) = pred[at.index()] {
            path.push(p);
            at = p;
        }
        path.reverse();
        Some(path)
    }

    /// Connected components, each sorted ascending, ordered by lowest member.
    pub fn connected_components(&self) -> Vec<Vec<PoiId>> {
        let n = self.pois.len();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut members = Vec::new();
            let mut stack = vec![PoiId(start as u32)];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                members.push(u);
                for v in self.neighbors(u) {
                    if !seen[v.index()] {
                        seen[v.index()] = true;
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Joins consecutive components (ordered by lowest PoI id) with one
    /// repair edge each, between their lowest-id PoIs.
    ///
    /// Returns the repaired network and the ids of the added edges; an
    /// already-connected network comes back unchanged.
    pub fn connect_components(&self, repair: &RepairConfig) -> Result<(MultiModalNetwork, Vec<EdgeId>)> {
        if self.pois.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let components = self.connected_components();
        if components.len() == 1 {
            return Ok((self.clone(), Vec::new()));
        }
        let mut builder = self.to_builder();
        let policy = match repair.policy {
            Some(p) => p,
            None => self.fare_table.median_policy().unwrap_or_default(),
        };
        if builder.fare_table.mode_id(&repair.mode_name).is_some() {
            return Err(Error::RepairModeNotFresh(repair.mode_name.clone()));
        }
        let mode = builder.fare_table.add_mode(repair.mode_name.clone(), policy)?;
        let mut added = Vec::with_capacity(components.len() - 1);
        for pair in components.windows(2) {
            let (a, b) = (pair[0][0], pair[1][0]);
            let distance = match (self.pois[a.index()].coords, self.pois[b.index()].coords) {
                (Some(ca), Some(cb)) => ca.distance_m(&cb),
                _ => repair.default_distance_m,
            };
            let time = distance / repair.speed_m_per_min;
            added.push(builder.add_edge(a, b, mode, distance, time)?);
        }
        log::debug!(
            "connected {} components with {} `{}` edges",
            components.len(),
            added.len(),
            repair.mode_name
        );
        Ok((builder.build()?, added))
    }
}

/// Parameters for connectivity repair edges.
#[derive(Debug, Clone, PartialEq)]
pub struct RepairConfig {
    pub mode_name: String,
    /// `None` uses the component-wise median of the configured policies.
    pub policy: Option<FarePolicy>,
    pub default_distance_m: f64,
    pub speed_m_per_min: f64,
}

impl Default for RepairConfig {
    fn default() -> Self {
        Self {
            mode_name: "UN".to_string(),
            policy: None,
            default_distance_m: 1000.0,
            speed_m_per_min: 500.0,
        }
    }
}

/// Result of a single-source Dijkstra run.
#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    source: PoiId,
    dist: Vec<Option<Cents>>,
    pred: Vec<Option<(PoiId, EdgeId)>>,
}

impl ShortestPathTree {
    pub fn source(&self) -> PoiId {
        self.source
    }

    pub fn cost_to(&self, target: PoiId) -> Option<Cents> {
        self.dist.get(target.index()).copied().flatten()
    }

    pub fn path_to(&self, net: &MultiModalNetwork, target: PoiId) -> Option<PathResult> {
        let cost = self.cost_to(target)?;
        let mut pois = vec![target];
        let mut legs = Vec::new();
        let mut at = target;
        while at != self.source {
            let (prev, edge) = self.pred[at.index()]?;
            legs.push(Leg {
                edge,
                mode: net.edges[edge.index()].mode,
            });
            pois.push(prev);
            at = prev;
        }
        pois.reverse();
        legs.reverse();
        Some(PathResult {
            cost,
            legs,
            poi_sequence: pois,
        })
    }
}
