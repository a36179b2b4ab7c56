//! Exact group trip planning over ordered PoI categories.
//!
//! The planner runs a layered dynamic program whose layers are the query's
//! categories. Layer entries keep the cheapest prefix cost for every PoI of
//! the category (not just the best PoI of the layer), which is what makes
//! the final answer globally optimal:
//!
//! ```text
//! cost[1][j] = sum_i sp(source_i, j)
//! cost[c][j] = min_{i in C(c-1)} cost[c-1][i] + m * sp(i, j)
//! answer     = min_{j in C(k)}   cost[k][j]   + sum_i sp(j, dest_i)
//! ```
//!
//! `m` is the number of agents under [`SharingMode::PerPersonIntermediate`]
//! and 1 under [`SharingMode::SharedIntermediate`]. `sp` is the
//! cheapest-fare path cost on the multigraph.

mod timetable;

pub use timetable::{
    validate_hops, validate_timing, AgentTiming, FeasibilityReport, Hop, Ride, Timetable, Trip, Violation,
    ViolationKind,
};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Cents;
use crate::network::{MultiModalNetwork, PathResult, PoiId, ShortestPathTree};

/// How the shared middle of the trip is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SharingMode {
    /// Every agent pays every intermediate leg (legs multiplied by the agent count).
    #[default]
    PerPersonIntermediate,
    /// Intermediate legs are paid once for the whole group.
    SharedIntermediate,
}

impl SharingMode {
    pub fn multiplier(self, agents: usize) -> i64 {
        match self {
            SharingMode::PerPersonIntermediate => agents as i64,
            SharingMode::SharedIntermediate => 1,
        }
    }
}

impl FromStr for SharingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "per-person" | "per-person-intermediate" | "perperson" => Ok(SharingMode::PerPersonIntermediate),
            "shared" | "shared-intermediate" => Ok(SharingMode::SharedIntermediate),
            other => Err(Error::Config(format!("unknown sharing mode `{other}`"))),
        }
    }
}

impl fmt::Display for SharingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SharingMode::PerPersonIntermediate => "per-person",
            SharingMode::SharedIntermediate => "shared",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Agent {
    pub source: PoiId,
    pub destination: PoiId,
}

/// Agents plus the ordered intermediate categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryInstance {
    agents: Vec<Agent>,
    /// Each category sorted ascending and deduplicated.
    categories: Vec<Vec<PoiId>>,
}

impl QueryInstance {
    pub fn new(agents: Vec<Agent>, categories: Vec<Vec<PoiId>>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::NoAgents);
        }
        if categories.is_empty() {
            return Err(Error::NoCategories);
        }
        let mut categories = categories;
        for (index, c) in categories.iter_mut().enumerate() {
            if c.is_empty() {
                return Err(Error::EmptyCategory { index });
            }
            c.sort_unstable();
            c.dedup();
        }
        Ok(Self { agents, categories })
    }

    pub fn from_pairs(pairs: &[(PoiId, PoiId)], categories: Vec<Vec<PoiId>>) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(source, destination)| Agent { source, destination })
                .collect(),
            categories,
        )
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn categories(&self) -> &[Vec<PoiId>] {
        &self.categories
    }

    pub fn k(&self) -> usize {
        self.categories.len()
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    /// Every referenced id must exist in `net`.
    pub fn validate(&self, net: &MultiModalNetwork) -> Result<()> {
        for a in &self.agents {
            net.check_poi(a.source)?;
            net.check_poi(a.destination)?;
        }
        for c in &self.categories {
            for &p in c {
                net.check_poi(p)?;
            }
        }
        Ok(())
    }

    /// Copy with one more agent.
    pub fn with_agent(&self, agent: Agent) -> Self {
        let mut next = self.clone();
        next.agents.push(agent);
        next
    }

    /// Copy with `poi` removed from category `index`; `None` if that would
    /// empty the category.
    pub fn without_poi(&self, index: usize, poi: PoiId) -> Option<Self> {
        let mut next = self.clone();
        next.categories.get_mut(index)?.retain(|&p| p != poi);
        if next.categories[index].is_empty() {
            None
        } else {
            Some(next)
        }
    }

    /// Checks that `common` picks one member of every category, in order.
    pub fn check_common(&self, net: &MultiModalNetwork, common: &[PoiId]) -> Result<()> {
        if common.len() != self.k() {
            return Err(Error::CommonPathLength {
                expected: self.k(),
                actual: common.len(),
            });
        }
        for (index, (poi, cat)) in common.iter().zip(&self.categories).enumerate() {
            if cat.binary_search(poi).is_err() {
                return Err(Error::NotInCategory {
                    index,
                    poi: net.label(*poi),
                });
            }
        }
        Ok(())
    }
}

/// Lazily computed, memoized cheapest paths keyed by (PoI, PoI).
///
/// A miss runs one single-source Dijkstra from the first PoI of the pair and
/// keeps its tree, so later pairs with the same origin are answered without
/// another search. There is no all-pairs precomputation.
#[derive(Debug, Default)]
pub struct LegCache {
    trees: HashMap<PoiId, ShortestPathTree>,
    paths: HashMap<(PoiId, PoiId), PathResult>,
    dijkstra_runs: usize,
}

impl LegCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn tree(&mut self, net: &MultiModalNetwork, from: PoiId) -> &ShortestPathTree {
        let runs = &mut self.dijkstra_runs;
        self.trees.entry(from).or_insert_with(|| {
            *runs += 1;
            net.shortest_path_tree(from)
        })
    }

    pub fn cost(&mut self, net: &MultiModalNetwork, from: PoiId, to: PoiId) -> Option<Cents> {
        if from == to {
            return Some(Cents::ZERO);
        }
        self.tree(net, from).cost_to(to)
    }

    pub fn path(&mut self, net: &MultiModalNetwork, from: PoiId, to: PoiId) -> Option<PathResult> {
        if let Some(p) = self.paths.get(&(from, to)) {
            return Some(p.clone());
        }
        let path = if from == to {
            PathResult::empty(from)
        } else {
            self.tree(net, from).path_to(net, to)?
        };
        self.paths.insert((from, to), path.clone());
        Some(path)
    }

    /// Number of single-source shortest-path searches performed so far.
    pub fn dijkstra_runs(&self) -> usize {
        self.dijkstra_runs
    }
}

/// Per-category DP state.
#[derive(Debug)]
pub struct DpTable {
    categories: Vec<Vec<PoiId>>,
    cost: Vec<Vec<Option<Cents>>>,
    /// Index into the previous category's member list.
    parent: Vec<Vec<Option<usize>>>,
    /// `cost[k][j] + sum_i sp(j, dest_i)` for every `j` in the last category.
    completion: Vec<Option<Cents>>,
    /// Per distinct destination, `min_j cost[k][j] + sp(j, dest)`.
    destination_totals: Vec<(PoiId, Option<Cents>)>,
    pub leg_cache: LegCache,
}

impl DpTable {
    pub fn k(&self) -> usize {
        self.categories.len()
    }

    pub fn categories(&self) -> &[Vec<PoiId>] {
        &self.categories
    }

    fn position(&self, category: usize, poi: PoiId) -> Option<usize> {
        self.categories.get(category)?.binary_search(&poi).ok()
    }

    /// Cheapest prefix cost ending at `poi` in `category` (0-based).
    pub fn cost(&self, category: usize, poi: PoiId) -> Option<Cents> {
        let j = self.position(category, poi)?;
        self.cost[category][j]
    }

    pub fn parent(&self, category: usize, poi: PoiId) -> Option<PoiId> {
        let j = self.position(category, poi)?;
        let i = self.parent[category][j]?;
        Some(self.categories[category - 1][i])
    }

    /// Total cost of the best plan whose last common PoI is `poi`.
    pub fn completion(&self, poi: PoiId) -> Option<Cents> {
        let j = self.position(self.k() - 1, poi)?;
        self.completion[j]
    }

    pub fn destination_totals(&self) -> &[(PoiId, Option<Cents>)] {
        &self.destination_totals
    }

    pub fn destination_total(&self, destination: PoiId) -> Option<Cents> {
        self.destination_totals
            .iter()
            .find(|(d, _)| *d == destination)
            .and_then(|(_, c)| *c)
    }

    /// Best last-category PoI, lowest id on ties.
    pub fn best_last(&self) -> Option<(PoiId, Cents)> {
        let last = self.k() - 1;
        let mut best: Option<(PoiId, Cents)> = None;
        for (j, c) in self.completion.iter().enumerate() {
            if let Some(c) = *c {
                if best.is_none_or(|(_, b)| c < b) {
                    best = Some((self.categories[last][j], c));
                }
            }
        }
        best
    }
}

/// Walks parent links back from `best_last` to the first category.
pub fn reconstruct(dp: &DpTable, best_last: PoiId) -> Result<Vec<PoiId>> {
    let k = dp.k();
    let broken = |category| Error::BrokenParentChain { category };
    let mut j = dp.position(k - 1, best_last).ok_or(broken(k - 1))?;
    if dp.cost[k - 1][j].is_none() {
        return Err(broken(k - 1));
    }
    let mut out = vec![best_last];
    for c in (1..k).rev() {
        j = dp.parent[c][j].ok_or(broken(c))?;
        if dp.cost[c - 1][j].is_none() {
            return Err(broken(c - 1));
        }
        out.push(dp.categories[c - 1][j]);
    }
    out.reverse();
    Ok(out)
}

/// The recommended common PoIs and every agent's priced legs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JourneyPlan {
    pub agents: Vec<Agent>,
    pub common_pois: Vec<PoiId>,
    /// Between consecutive common PoIs.
    pub common_legs: Vec<PathResult>,
    /// Per agent, source to the first common PoI.
    pub source_legs: Vec<PathResult>,
    /// Per agent, last common PoI to destination.
    pub dest_legs: Vec<PathResult>,
    pub sharing: SharingMode,
    pub total_cost: Cents,
}

impl JourneyPlan {
    /// Group cost recomputed from the stored legs.
    pub fn recompute_total(&self) -> Cents {
        let m = self.sharing.multiplier(self.agents.len());
        let individual: Cents = self.source_legs.iter().chain(&self.dest_legs).map(|p| p.cost).sum();
        let common: Cents = self.common_legs.iter().map(|p| p.cost).sum();
        individual + common * m
    }

    /// The agent's full path: source leg, common legs, destination leg.
    pub fn agent_path(&self, agent: usize) -> Vec<&PathResult> {
        let mut out = vec![&self.source_legs[agent]];
        out.extend(&self.common_legs);
        out.push(&self.dest_legs[agent]);
        out
    }

    /// Cost paid by one agent when every leg is charged individually.
    pub fn agent_cost(&self, agent: usize) -> Cents {
        self.agent_path(agent).iter().map(|p| p.cost).sum()
    }

    pub fn document(&self, net: &MultiModalNetwork) -> PlanDocument {
        let leg_doc = |p: &PathResult| LegDocument {
            pois: p.poi_sequence.iter().map(|&x| net.label(x)).collect(),
            modes: p
                .legs
                .iter()
                .map(|l| net.fare_table().name(l.mode).to_string())
                .collect(),
            hop_costs_cents: p.legs.iter().map(|l| net.edge_cost(l.edge).0).collect(),
            cost_cents: p.cost.0,
        };
        PlanDocument {
            sharing: self.sharing,
            total_cost_cents: self.total_cost.0,
            common_pois: self.common_pois.iter().map(|&p| net.label(p)).collect(),
            common_legs: self.common_legs.iter().map(leg_doc).collect(),
            agents: self
                .agents
                .iter()
                .enumerate()
                .map(|(i, a)| AgentDocument {
                    source: net.label(a.source),
                    destination: net.label(a.destination),
                    source_leg: leg_doc(&self.source_legs[i]),
                    destination_leg: leg_doc(&self.dest_legs[i]),
                    cost_cents: self.agent_cost(i).0,
                })
                .collect(),
        }
    }
}

/// Serializable plan output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub sharing: SharingMode,
    pub total_cost_cents: i64,
    pub common_pois: Vec<String>,
    pub common_legs: Vec<LegDocument>,
    pub agents: Vec<AgentDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegDocument {
    pub pois: Vec<String>,
    pub modes: Vec<String>,
    pub hop_costs_cents: Vec<i64>,
    pub cost_cents: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentDocument {
    pub source: String,
    pub destination: String,
    pub source_leg: LegDocument,
    pub destination_leg: LegDocument,
    /// Sum of this agent's legs, each charged in full.
    pub cost_cents: i64,
}

/// Planner output together with its DP table.
#[derive(Debug)]
pub struct Solution {
    pub plan: JourneyPlan,
    pub table: DpTable,
}

impl Solution {
    pub fn dijkstra_runs(&self) -> usize {
        self.table.leg_cache.dijkstra_runs()
    }
}

struct Unreachable(Option<(PoiId, PoiId)>);

impl Unreachable {
    fn note(&mut self, from: PoiId, to: PoiId) {
        self.0.get_or_insert((from, to));
    }

    fn into_error(self, net: &MultiModalNetwork) -> Error {
        match self.0 {
            Some((from, to)) => Error::Infeasible {
                from: net.label(from),
                to: net.label(to),
            },
            None => Error::Infeasible {
                from: "?".into(),
                to: "?".into(),
            },
        }
    }
}

/// Solves the query exactly and returns the optimal plan.
pub fn plan(net: &MultiModalNetwork, inst: &QueryInstance, sharing: SharingMode) -> Result<JourneyPlan> {
    solve(net, inst, sharing).map(|s| s.plan)
}

/// Like [`plan`], keeping the DP table for inspection.
pub fn solve(net: &MultiModalNetwork, inst: &QueryInstance, sharing: SharingMode) -> Result<Solution> {
    inst.validate(net)?;
    let m = sharing.multiplier(inst.agent_count());
    let cats = inst.categories();
    let k = cats.len();
    let mut cache = LegCache::new();
    let mut unreachable = Unreachable(None);

    let mut cost: Vec<Vec<Option<Cents>>> = Vec::with_capacity(k);
    let mut parent: Vec<Vec<Option<usize>>> = Vec::with_capacity(k);

    // first category: every agent travels on its own
    let first: Vec<Option<Cents>> = cats[0]
        .iter()
        .map(|&j| {
            let mut total = Cents::ZERO;
            for a in inst.agents() {
                match cache.cost(net, a.source, j) {
                    Some(c) => total += c,
                    None => {
                        unreachable.note(a.source, j);
                        return None;
                    }
                }
            }
            Some(total)
        })
        .collect();
    cost.push(first);
    parent.push(vec![None; cats[0].len()]);

    for c in 1..k {
        let mut layer = Vec::with_capacity(cats[c].len());
        let mut links = Vec::with_capacity(cats[c].len());
        for &j in &cats[c] {
            let mut best: Option<(Cents, usize)> = None;
            for (ii, &i) in cats[c - 1].iter().enumerate() {
                let Some(prefix) = cost[c - 1][ii] else { continue };
                let Some(step) = cache.cost(net, i, j) else {
                    unreachable.note(i, j);
                    continue;
                };
                let total = prefix + step * m;
                if best.is_none_or(|(b, _)| total < b) {
                    best = Some((total, ii));
                }
            }
            layer.push(best.map(|(t, _)| t));
            links.push(best.map(|(_, ii)| ii));
        }
        cost.push(layer);
        parent.push(links);
    }

    let last = &cats[k - 1];
    let completion: Vec<Option<Cents>> = last
        .iter()
        .zip(&cost[k - 1])
        .map(|(&j, prefix)| {
            let mut total = (*prefix)?;
            for a in inst.agents() {
                match cache.cost(net, j, a.destination) {
                    Some(c) => total += c,
                    None => {
                        unreachable.note(j, a.destination);
                        return None;
                    }
                }
            }
            Some(total)
        })
        .collect();

    let mut destinations: Vec<PoiId> = Vec::new();
    for a in inst.agents() {
        if !destinations.contains(&a.destination) {
            destinations.push(a.destination);
        }
    }
    let destination_totals = destinations
        .into_iter()
        .map(|d| {
            let best = last
                .iter()
                .zip(&cost[k - 1])
                .filter_map(|(&j, prefix)| Some((*prefix)? + cache.cost(net, j, d)?))
                .min();
            (d, best)
        })
        .collect();

    let table = DpTable {
        categories: cats.to_vec(),
        cost,
        parent,
        completion,
        destination_totals,
        leg_cache: cache,
    };
    let Some((best_last, best_cost)) = table.best_last() else {
        return Err(unreachable.into_error(net));
    };
    let common = reconstruct(&table, best_last)?;
    let mut table = table;
    let plan = assemble_plan(net, &mut table.leg_cache, inst, &common, sharing)?;
    debug_assert_eq!(plan.total_cost, best_cost);
    log::debug!(
        "planned k={k} agents={} cost={} with {} Dijkstra runs",
        inst.agent_count(),
        best_cost,
        table.leg_cache.dijkstra_runs()
    );
    Ok(Solution { plan, table })
}

/// Builds the plan that visits `common` with cheapest-fare legs.
pub fn assemble_plan(
    net: &MultiModalNetwork,
    cache: &mut LegCache,
    inst: &QueryInstance,
    common: &[PoiId],
    sharing: SharingMode,
) -> Result<JourneyPlan> {
    inst.check_common(net, common)?;
    let mut leg = |from: PoiId, to: PoiId| {
        cache.path(net, from, to).ok_or_else(|| Error::Infeasible {
            from: net.label(from),
            to: net.label(to),
        })
    };
    let first = common[0];
    let last = *common.last().expect("k >= 1");
    let source_legs = inst
        .agents()
        .iter()
        .map(|a| leg(a.source, first))
        .collect::<Result<Vec<_>>>()?;
    let common_legs = common.windows(2).map(|w| leg(w[0], w[1])).collect::<Result<Vec<_>>>()?;
    let dest_legs = inst
        .agents()
        .iter()
        .map(|a| leg(last, a.destination))
        .collect::<Result<Vec<_>>>()?;
    let mut plan = JourneyPlan {
        agents: inst.agents().to_vec(),
        common_pois: common.to_vec(),
        common_legs,
        source_legs,
        dest_legs,
        sharing,
        total_cost: Cents::ZERO,
    };
    plan.total_cost = plan.recompute_total();
    Ok(plan)
}

/// Group cost of visiting `common` with cheapest-fare legs.
pub fn group_cost(
    net: &MultiModalNetwork,
    inst: &QueryInstance,
    common: &[PoiId],
    sharing: SharingMode,
) -> Result<Cents> {
    inst.validate(net)?;
    inst.check_common(net, common)?;
    let mut cache = LegCache::new();
    let mut sp = |from: PoiId, to: PoiId| {
        cache.cost(net, from, to).ok_or_else(|| Error::Infeasible {
            from: net.label(from),
            to: net.label(to),
        })
    };
    let m = sharing.multiplier(inst.agent_count());
    let mut total = Cents::ZERO;
    for a in inst.agents() {
        total += sp(a.source, common[0])?;
    }
    for w in common.windows(2) {
        total += sp(w[0], w[1])? * m;
    }
    let last = *common.last().expect("k >= 1");
    for a in inst.agents() {
        total += sp(last, a.destination)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fare::{FarePolicy, FareTable, ModeId};
    use crate::money::Rate;
    use crate::network::NetworkBuilder;

    fn unit_fares() -> FareTable {
        FareTable::from_entries([(
            "Walk".to_string(),
            FarePolicy::new(Cents(0), Rate::from_cents(1), Rate(0)).unwrap(),
        )])
        .unwrap()
    }

    /// Star around `hub` plus a second layer, all unit cost per meter.
    fn small() -> (MultiModalNetwork, Vec<PoiId>) {
        let mut b = NetworkBuilder::new(unit_fares());
        let ids: Vec<PoiId> = (0..6).map(|i| b.add_poi(format!("p{i}"), "", None).unwrap()).collect();
        let walk = ModeId(0);
        for (u, v, d) in [
            (0, 1, 2.0),
            (0, 2, 2.0),
            (1, 3, 1.0),
            (2, 3, 1.0),
            (3, 4, 5.0),
            (1, 5, 4.0),
        ] {
            b.add_edge(ids[u], ids[v], walk, d, 0.0).unwrap();
        }
        (b.build().unwrap(), ids)
    }

    #[test]
    fn degenerate_single_poi_instance_costs_nothing() {
        let (net, ids) = small();
        let inst = QueryInstance::from_pairs(&[(ids[3], ids[3])], vec![vec![ids[3]]]).unwrap();
        let p = plan(&net, &inst, SharingMode::PerPersonIntermediate).unwrap();
        assert_eq!(p.total_cost, Cents::ZERO);
        assert!(p.source_legs[0].legs.is_empty());
        assert!(p.dest_legs[0].legs.is_empty());
        assert!(p.common_legs.is_empty());
    }

    #[test]
    fn equal_chains_keep_lower_parent() {
        let (net, ids) = small();
        // p1 and p2 are symmetric around p0 -> p3
        let inst = QueryInstance::from_pairs(&[(ids[0], ids[3])], vec![vec![ids[1], ids[2]], vec![ids[3]]]).unwrap();
        let s = solve(&net, &inst, SharingMode::SharedIntermediate).unwrap();
        assert_eq!(s.table.parent(1, ids[3]), Some(ids[1]));
        assert_eq!(s.plan.common_pois, vec![ids[1], ids[3]]);
        assert_eq!(reconstruct(&s.table, ids[3]).unwrap(), vec![ids[1], ids[3]]);
    }

    #[test]
    fn reconstruct_single_category() {
        let (net, ids) = small();
        let inst = QueryInstance::from_pairs(&[(ids[0], ids[4])], vec![vec![ids[1], ids[3]]]).unwrap();
        let s = solve(&net, &inst, SharingMode::PerPersonIntermediate).unwrap();
        let (best, _) = s.table.best_last().unwrap();
        assert_eq!(reconstruct(&s.table, best).unwrap(), vec![best]);
    }

    #[test]
    fn reconstruct_rejects_unknown_last() {
        let (net, ids) = small();
        let inst = QueryInstance::from_pairs(&[(ids[0], ids[4])], vec![vec![ids[1]], vec![ids[3]]]).unwrap();
        let s = solve(&net, &inst, SharingMode::PerPersonIntermediate).unwrap();
        assert!(matches!(
            reconstruct(&s.table, ids[5]),
            Err(Error::BrokenParentChain { .. })
        ));
    }

    #[test]
    fn empty_category_and_no_agents_rejected() {
        let (_, ids) = small();
        assert!(matches!(
            QueryInstance::from_pairs(&[(ids[0], ids[1])], vec![vec![ids[1]], vec![]]),
            Err(Error::EmptyCategory { index: 1 })
        ));
        assert!(matches!(
            QueryInstance::from_pairs(&[], vec![vec![ids[1]]]),
            Err(Error::NoAgents)
        ));
    }

    #[test]
    fn unreachable_pair_is_named() {
        let mut b = NetworkBuilder::new(unit_fares());
        let a = b.add_poi("a", "", None).unwrap();
        let c = b.add_poi("c", "", None).unwrap();
        let island = b.add_poi("island", "", None).unwrap();
        b.add_edge(a, c, ModeId(0), 1.0, 0.0).unwrap();
        let net = b.build().unwrap();
        let inst = QueryInstance::from_pairs(&[(a, c)], vec![vec![island]]).unwrap();
        match plan(&net, &inst, SharingMode::SharedIntermediate) {
            Err(Error::Infeasible { from, to }) => {
                assert_eq!((from.as_str(), to.as_str()), ("a", "island"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            group_cost(&net, &inst, &[island], SharingMode::SharedIntermediate),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn group_cost_checks_membership() {
        let (net, ids) = small();
        let inst = QueryInstance::from_pairs(&[(ids[0], ids[4])], vec![vec![ids[1]], vec![ids[3]]]).unwrap();
        assert!(matches!(
            group_cost(&net, &inst, &[ids[2], ids[3]], SharingMode::SharedIntermediate),
            Err(Error::NotInCategory { index: 0, .. })
        ));
        assert!(matches!(
            group_cost(&net, &inst, &[ids[1]], SharingMode::SharedIntermediate),
            Err(Error::CommonPathLength { .. })
        ));
    }

    #[test]
    fn sharing_modes_agree_for_one_agent() {
        let (net, ids) = small();
        let inst =
            QueryInstance::from_pairs(&[(ids[0], ids[4])], vec![vec![ids[1], ids[2]], vec![ids[3], ids[5]]]).unwrap();
        let a = plan(&net, &inst, SharingMode::SharedIntermediate).unwrap();
        let b = plan(&net, &inst, SharingMode::PerPersonIntermediate).unwrap();
        assert_eq!(a.total_cost, b.total_cost);
    }

    #[test]
    fn sharing_mode_parses() {
        assert_eq!(
            "shared".parse::<SharingMode>().unwrap(),
            SharingMode::SharedIntermediate
        );
        assert_eq!(
            "per-person".parse::<SharingMode>().unwrap(),
            SharingMode::PerPersonIntermediate
        );
        assert!("both".parse::<SharingMode>().is_err());
    }
}
