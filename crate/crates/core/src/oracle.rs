//! Brute-force ground truth for small instances.
//!
//! Every combination of one PoI per category is evaluated with pairwise
//! single-target shortest paths; nothing is shared with the planner's DP or
//! its leg cache.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::money::Cents;
use crate::network::{MultiModalNetwork, PoiId};
use crate::planner::{QueryInstance, SharingMode};

/// Default cap on the number of enumerated common paths.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 10_000_000;

/// Product of the category sizes, saturating at `u128::MAX`.
pub fn valid_path_count(sizes: &[usize]) -> u128 {
    sizes
        .iter()
        .try_fold(1u128, |acc, &n| acc.checked_mul(n as u128))
        .unwrap_or(u128::MAX)
}

/// Lexicographic walk over the cartesian product of the categories.
#[derive(Debug, Clone)]
pub struct ValidPathIterator {
    categories: Vec<Vec<PoiId>>,
    cursor: Vec<usize>,
    remaining: u128,
}

impl ValidPathIterator {
    fn new(categories: Vec<Vec<PoiId>>) -> Self {
        let sizes: Vec<usize> = categories.iter().map(Vec::len).collect();
        let remaining = valid_path_count(&sizes);
        Self {
            cursor: vec![0; categories.len()],
            categories,
            remaining,
        }
    }

    pub fn total(&self) -> u128 {
        let sizes: Vec<usize> = self.categories.iter().map(Vec::len).collect();
        valid_path_count(&sizes)
    }
}

impl Iterator for ValidPathIterator {
    type Item = Vec<PoiId>;

    fn next(&mut self) -> Option<Vec<PoiId>> {
        if self.remaining == 0 {
            return None;
        }
        let tuple = self.cursor.iter().zip(&self.categories).map(|(&i, c)| c[i]).collect();
        self.remaining -= 1;
        // odometer, last position fastest
        for pos in (0..self.cursor.len()).rev() {
            self.cursor[pos] += 1;
            if self.cursor[pos] < self.categories[pos].len() {
                break;
            }
            self.cursor[pos] = 0;
        }
        Some(tuple)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match usize::try_from(self.remaining) {
            Ok(n) => (n, Some(n)),
            Err(_) => (usize::MAX, None),
        }
    }
}

pub fn enumerate_valid_paths(inst: &QueryInstance) -> Result<ValidPathIterator> {
    enumerate_valid_paths_with_limit(inst, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_valid_paths_with_limit(inst: &QueryInstance, limit: u128) -> Result<ValidPathIterator> {
    let it = ValidPathIterator::new(inst.categories().to_vec());
    let size = it.total();
    if size > limit {
        return Err(Error::EnumerationTooLarge { size, limit });
    }
    Ok(it)
}

struct PairCosts<'a> {
    net: &'a MultiModalNetwork,
    memo: HashMap<(PoiId, PoiId), Option<Cents>>,
}

impl<'a> PairCosts<'a> {
    fn new(net: &'a MultiModalNetwork) -> Self {
        Self {
            net,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, from: PoiId, to: PoiId) -> Result<Cents> {
        let net = self.net;
        let cost = *self
            .memo
            .entry((from, to))
            .or_insert_with(|| net.shortest_path(from, to).map(|p| p.cost));
        cost.ok_or_else(|| Error::Infeasible {
            from: net.label(from),
            to: net.label(to),
        })
    }

    fn evaluate(&mut self, inst: &QueryInstance, common: &[PoiId], intermediate_factor: i64) -> Result<Cents> {
        let mut total = Cents::ZERO;
        for a in inst.agents() {
            total += self.get(a.source, common[0])?;
        }
        for w in common.windows(2) {
            total += self.get(w[0], w[1])? * intermediate_factor;
        }
        let last = *common.last().expect("k >= 1");
        for a in inst.agents() {
            total += self.get(last, a.destination)?;
        }
        Ok(total)
    }
}

/// Sum of the agents' source legs, the intermediate legs once, and the
/// agents' destination legs.
pub fn aggregated_distance(net: &MultiModalNetwork, inst: &QueryInstance, common: &[PoiId]) -> Result<Cents> {
    inst.validate(net)?;
    inst.check_common(net, common)?;
    PairCosts::new(net).evaluate(inst, common, 1)
}

/// Exact optimum by exhaustive enumeration; ties go to the
/// lexicographically smallest tuple.
pub fn brute_force_optimal(
    net: &MultiModalNetwork,
    inst: &QueryInstance,
    sharing: SharingMode,
) -> Result<(Vec<PoiId>, Cents)> {
    brute_force_optimal_with_limit(net, inst, sharing, DEFAULT_ENUMERATION_LIMIT)
}

pub fn brute_force_optimal_with_limit(
    net: &MultiModalNetwork,
    inst: &QueryInstance,
    sharing: SharingMode,
    limit: u128,
) -> Result<(Vec<PoiId>, Cents)> {
    inst.validate(net)?;
    let m = sharing.multiplier(inst.agent_count());
    let mut costs = PairCosts::new(net);
    let mut best: Option<(Vec<PoiId>, Cents)> = None;
    let mut first_error = None;
    for tuple in enumerate_valid_paths_with_limit(inst, limit)? {
        match costs.evaluate(inst, &tuple, m) {
            Ok(c) => {
                if best.as_ref().is_none_or(|(_, b)| c < *b) {
                    best = Some((tuple, c));
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_error.expect("at least one tuple was enumerated"))
}
