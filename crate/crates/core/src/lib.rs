//! Group trip planning over multimodal transit networks.
//!
//! A group of agents each travel from their own source, meet at one PoI
//! per category in a fixed order, then split up toward their own
//! destinations. [`planner::plan`] finds the cheapest choice of PoIs and
//! per-hop transport modes exactly; [`baselines`] holds the heuristics it
//! is compared against and [`oracle`] the brute-force ground truth.

pub mod baselines;
pub mod bench;
pub mod error;
pub mod fare;
pub mod ingest;
pub mod money;
pub mod network;
pub mod oracle;
pub mod planner;
pub mod rng;
pub mod synthetic;

pub use error::{Error, Result};
pub use fare::{FarePolicy, FareStrategy, FareTable, ModeId};
pub use money::{Cents, Rate};
pub use network::{MultiModalNetwork, NetworkBuilder, PoiId, RepairConfig};
pub use planner::{plan, solve, Agent, JourneyPlan, QueryInstance, SharingMode};
