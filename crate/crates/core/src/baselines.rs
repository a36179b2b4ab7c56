//! Reference heuristics the exact planner is compared against.
//!
//! * RPRM: random PoI per category, random mode per hop along fewest-hops routes.
//! * RPCM: random PoI per category, cheapest-fare legs.
//! * NNCM: nearest PoI to the group first, then nearest to the previous pick,
//!   cheapest-fare legs.
//!
//! RPRM and RPCM draw the common PoIs identically from a [`SplitMix64`]
//! seeded with `seed` (one bounded draw per category, in category order), so
//! under the same seed both visit the same PoIs. RPRM then keeps drawing from
//! the same generator: one mode per hop, over source legs in agent order,
//! then common legs, then destination legs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::Cents;
use crate::network::{Leg, MultiModalNetwork, PathResult, PoiId};
use crate::planner::{assemble_plan, JourneyPlan, LegCache, QueryInstance, SharingMode};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineKind {
    Rprm,
    Rpcm,
    Nncm,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 3] = [BaselineKind::Rprm, BaselineKind::Rpcm, BaselineKind::Nncm];

    /// `seed` is ignored by NNCM.
    pub fn run(
        self,
        net: &MultiModalNetwork,
        inst: &QueryInstance,
        sharing: SharingMode,
        seed: u64,
    ) -> Result<JourneyPlan> {
        match self {
            BaselineKind::Rprm => rprm(net, inst, sharing, seed),
            BaselineKind::Rpcm => rpcm(net, inst, sharing, seed),
            BaselineKind::Nncm => nncm(net, inst, sharing),
        }
    }

    pub fn is_randomized(self) -> bool {
        !matches!(self, BaselineKind::Nncm)
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselineKind::Rprm => "rprm",
            BaselineKind::Rpcm => "rpcm",
            BaselineKind::Nncm => "nncm",
        })
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rprm" => Ok(BaselineKind::Rprm),
            "rpcm" => Ok(BaselineKind::Rpcm),
            "nncm" => Ok(BaselineKind::Nncm),
            other => Err(Error::Config(format!("unknown baseline `{other}`"))),
        }
    }
}

fn random_common(inst: &QueryInstance, rng: &mut SplitMix64) -> Vec<PoiId> {
    inst.categories().iter().map(|c| c[rng.index(c.len())]).collect()
}

fn random_mode_leg(net: &MultiModalNetwork, from: PoiId, to: PoiId, rng: &mut SplitMix64) -> Result<PathResult> {
    let pois = net.fewest_hops_path(from, to).ok_or_else(|| Error::Infeasible {
        from: net.label(from),
        to: net.label(to),
    })?;
    let mut legs = Vec::with_capacity(pois.len().saturating_sub(1));
    let mut cost = Cents::ZERO;
    for w in pois.windows(2) {
        let parallel = net.parallel_edges(w[0], w[1]);
        let edge = parallel[rng.index(parallel.len())];
        cost += net.edge_cost(edge);
        legs.push(Leg {
            edge,
            mode: net.edge(edge).mode,
        });
    }
    Ok(PathResult {
        cost,
        legs,
        poi_sequence: pois,
    })
}

/// Random PoIs, random mode per hop.
pub fn rprm(net: &MultiModalNetwork, inst: &QueryInstance, sharing: SharingMode, seed: u64) -> Result<JourneyPlan> {
    inst.validate(net)?;
    let mut rng = SplitMix64::new(seed);
    let common = random_common(inst, &mut rng);
    let first = common[0];
    let last = *common.last().expect("k >= 1");
    let source_legs = inst
        .agents()
        .iter()
        .map(|a| random_mode_leg(net, a.source, first, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let common_legs = common
        .windows(2)
        .map(|w| random_mode_leg(net, w[0], w[1], &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let dest_legs = inst
        .agents()
        .iter()
        .map(|a| random_mode_leg(net, last, a.destination, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let mut plan = JourneyPlan {
        agents: inst.agents().to_vec(),
        common_pois: common,
        common_legs,
        source_legs,
        dest_legs,
        sharing,
        total_cost: Cents::ZERO,
    };
    plan.total_cost = plan.recompute_total();
    Ok(plan)
}

/// Random PoIs, cheapest-fare legs.
pub fn rpcm(net: &MultiModalNetwork, inst: &QueryInstance, sharing: SharingMode, seed: u64) -> Result<JourneyPlan> {
    inst.validate(net)?;
    let mut rng = SplitMix64::new(seed);
    let common = random_common(inst, &mut rng);
    assemble_plan(net, &mut LegCache::new(), inst, &common, sharing)
}

/// Greedy nearest-neighbor chain with cheapest-fare legs.
pub fn nncm(net: &MultiModalNetwork, inst: &QueryInstance, sharing: SharingMode) -> Result<JourneyPlan> {
    inst.validate(net)?;
    let mut cache = LegCache::new();
    let mut unreachable: Option<(PoiId, PoiId)> = None;
    let infeasible = |pair: Option<(PoiId, PoiId)>| match pair {
        Some((from, to)) => Error::Infeasible {
            from: net.label(from),
            to: net.label(to),
        },
        None => Error::Infeasible {
            from: "?".into(),
            to: "?".into(),
        },
    };

    let mut best: Option<(Cents, PoiId)> = None;
    for &j in &inst.categories()[0] {
        let mut total = Cents::ZERO;
        let mut ok = true;
        for a in inst.agents() {
            match cache.cost(net, a.source, j) {
                Some(c) => total += c,
                None => {
                    unreachable.get_or_insert((a.source, j));
                    ok = false;
                    break;
                }
            }
        }
        if ok && best.is_none_or(|(b, _)| total < b) {
            best = Some((total, j));
        }
    }
    let (_, mut at) = best.ok_or_else(|| infeasible(unreachable))?;
    let mut common = vec![at];
    for category in &inst.categories()[1..] {
        let mut next: Option<(Cents, PoiId)> = None;
        for &j in category {
            match cache.cost(net, at, j) {
                Some(c) if next.is_none_or(|(b, _)| c < b) => next = Some((c, j)),
                Some(_) => {}
                None => {
                    unreachable.get_or_insert((at, j));
                }
            }
        }
        at = next.ok_or_else(|| infeasible(unreachable))?.1;
        common.push(at);
    }
    assemble_plan(net, &mut cache, inst, &common, sharing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fare::{FarePolicy, FareTable, ModeId};
    use crate::money::Rate;
    use crate::network::NetworkBuilder;

    fn two_mode_square() -> (MultiModalNetwork, Vec<PoiId>) {
        let fares = FareTable::from_entries([
            (
                "Bus".to_string(),
                FarePolicy::new(Cents(0), Rate::from_cents(1), Rate(0)).unwrap(),
            ),
            (
                "Taxi".to_string(),
                FarePolicy::new(Cents(50), Rate::from_cents(2), Rate(0)).unwrap(),
            ),
        ])
        .unwrap();
        let mut b = NetworkBuilder::new(fares);
        let ids: Vec<PoiId> = (0..4).map(|i| b.add_poi(format!("q{i}"), "", None).unwrap()).collect();
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            b.add_edge(ids[u], ids[v], ModeId(0), 10.0, 1.0).unwrap();
            b.add_edge(ids[u], ids[v], ModeId(1), 10.0, 1.0).unwrap();
        }
        (b.build().unwrap(), ids)
    }

    #[test]
    fn singleton_categories_fix_the_pois() {
        let (net, ids) = two_mode_square();
        let inst = QueryInstance::from_pairs(&[(ids[0], ids[2])], vec![vec![ids[1]], vec![ids[2]]]).unwrap();
        for seed in 0..10 {
            let p = rprm(&net, &inst, SharingMode::PerPersonIntermediate, seed).unwrap();
            assert_eq!(p.common_pois, vec![ids[1], ids[2]]);
            let q = rpcm(&net, &inst, SharingMode::PerPersonIntermediate, seed).unwrap();
            let exact = crate::planner::plan(&net, &inst, SharingMode::PerPersonIntermediate).unwrap();
            assert_eq!(q, exact);
        }
    }

    #[test]
    fn baselines_are_deterministic() {
        let (net, ids) = two_mode_square();
        let inst = QueryInstance::from_pairs(
            &[(ids[0], ids[2]), (ids[1], ids[3])],
            vec![vec![ids[1], ids[3]], vec![ids[0], ids[2]]],
        )
        .unwrap();
        for kind in BaselineKind::ALL {
            let a = kind.run(&net, &inst, SharingMode::SharedIntermediate, 42).unwrap();
            let b = kind.run(&net, &inst, SharingMode::SharedIntermediate, 42).unwrap();
            assert_eq!(a, b, "{kind}");
        }
    }

    #[test]
    fn rpcm_never_exceeds_rprm_on_same_seed() {
        let (net, ids) = two_mode_square();
        let inst = QueryInstance::from_pairs(
            &[(ids[0], ids[2]), (ids[1], ids[3])],
            vec![vec![ids[1], ids[3]], vec![ids[0], ids[2]]],
        )
        .unwrap();
        for seed in 0..50 {
            let r = rprm(&net, &inst, SharingMode::PerPersonIntermediate, seed).unwrap();
            let c = rpcm(&net, &inst, SharingMode::PerPersonIntermediate, seed).unwrap();
            assert_eq!(r.common_pois, c.common_pois);
            assert!(c.total_cost <= r.total_cost);
        }
    }

    #[test]
    fn nncm_single_category_picks_nearest() {
        let (net, ids) = two_mode_square();
        let inst = QueryInstance::from_pairs(&[(ids[0], ids[0])], vec![vec![ids[1], ids[2]]]).unwrap();
        let p = nncm(&net, &inst, SharingMode::PerPersonIntermediate).unwrap();
        assert_eq!(p.common_pois, vec![ids[1]]);
    }

    #[test]
    fn kinds_parse() {
        assert_eq!("RPCM".parse::<BaselineKind>().unwrap(), BaselineKind::Rpcm);
        assert!("ojpa".parse::<BaselineKind>().is_err());
    }
}
