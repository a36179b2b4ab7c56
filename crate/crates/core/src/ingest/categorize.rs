use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{MultiModalNetwork, PoiId};
use crate::rng::SplitMix64;

/// Default name keywords, one per category index.
pub const DEFAULT_CATEGORY_KEYWORDS: [&str; 10] = [
    "Train Station",
    "Public Square",
    "City Center",
    "Bridge",
    "School",
    "Park",
    "Bus Stop",
    "Airport",
    "Healthcare Facility",
    "Hotel",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CategoryStrategy {
    /// First keyword (case-insensitive substring of the PoI name) wins;
    /// PoIs matching nothing stay uncategorized.
    ByNameKeyword(Vec<(String, usize)>),
    /// Shuffle the PoIs, then deal them out like cards.
    SeededRandom(u64),
    /// PoI `i` goes to category `i mod k`.
    RoundRobin,
}

impl CategoryStrategy {
    pub fn default_keywords() -> Self {
        CategoryStrategy::ByNameKeyword(
            DEFAULT_CATEGORY_KEYWORDS
                .iter()
                .enumerate()
                .map(|(i, k)| (k.to_string(), i))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryConfig {
    pub k: usize,
    pub strategy: CategoryStrategy,
}

/// Assigns categories and returns the relabelled network with the `k`
/// category sets, each sorted by PoI id.
pub fn categorize(net: &MultiModalNetwork, cfg: &CategoryConfig) -> Result<(MultiModalNetwork, Vec<Vec<PoiId>>)> {
    if cfg.k == 0 {
        return Err(Error::Config("category count k must be at least 1".into()));
    }
    if cfg.k > net.poi_count() {
        return Err(Error::Sizing(format!(
            "{} categories requested but the network has {} PoIs",
            cfg.k,
            net.poi_count()
        )));
    }
    let mut assignment: Vec<Option<usize>> = vec![None; net.poi_count()];
    match &cfg.strategy {
        CategoryStrategy::RoundRobin => {
            for (i, slot) in assignment.iter_mut().enumerate() {
                *slot = Some(i % cfg.k);
            }
        }
        CategoryStrategy::SeededRandom(seed) => {
            let mut order: Vec<usize> = (0..net.poi_count()).collect();
            SplitMix64::new(*seed).shuffle(&mut order);
            for (rank, poi) in order.into_iter().enumerate() {
                assignment[poi] = Some(rank % cfg.k);
            }
        }
        CategoryStrategy::ByNameKeyword(keywords) => {
            if let Some((kw, c)) = keywords.iter().find(|(_, c)| *c >= cfg.k) {
                return Err(Error::Config(format!(
                    "keyword `{kw}` maps to category {c}, outside 0..{}",
                    cfg.k
                )));
            }
            let lowered: Vec<(String, usize)> = keywords.iter().map(|(k, c)| (k.to_lowercase(), *c)).collect();
            for (poi, slot) in net.pois().iter().zip(assignment.iter_mut()) {
                let name = poi.name.to_lowercase();
                *slot = lowered.iter().find(|(k, _)| name.contains(k.as_str())).map(|(_, c)| *c);
            }
        }
    }

    let mut sets: Vec<Vec<PoiId>> = vec![Vec::new(); cfg.k];
    for (i, c) in assignment.iter().enumerate() {
        if let Some(c) = c {
            sets[*c].push(PoiId(i as u32));
        }
    }
    if let Some(index) = sets.iter().position(Vec::is_empty) {
        return Err(Error::EmptyCategory { index });
    }
    let mut builder = net.to_builder();
    for (i, c) in assignment.into_iter().enumerate() {
        builder.set_category(PoiId(i as u32), c)?;
    }
    Ok((builder.build()?, sets))
}
