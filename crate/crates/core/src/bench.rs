//! Experiment sweeps over agents, categories and PoIs per category.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::BaselineKind;
use crate::error::{Error, Result};
use crate::money::Cents;
use crate::network::{MultiModalNetwork, PathResult, PoiId};
use crate::planner::{plan, Agent, JourneyPlan, QueryInstance, SharingMode};
use crate::rng::{derive_seed, SplitMix64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ojpa,
    Rprm,
    Rpcm,
    Nncm,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Ojpa, Method::Rprm, Method::Rpcm, Method::Nncm];

    pub fn run(
        self,
        net: &MultiModalNetwork,
        inst: &QueryInstance,
        sharing: SharingMode,
        seed: u64,
    ) -> Result<JourneyPlan> {
        match self {
            Method::Ojpa => plan(net, inst, sharing),
            Method::Rprm => BaselineKind::Rprm.run(net, inst, sharing, seed),
            Method::Rpcm => BaselineKind::Rpcm.run(net, inst, sharing, seed),
            Method::Nncm => BaselineKind::Nncm.run(net, inst, sharing, seed),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ojpa => "ojpa",
            Method::Rprm => "rprm",
            Method::Rpcm => "rpcm",
            Method::Nncm => "nncm",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ojpa" | "planner" => Ok(Method::Ojpa),
            other => other.parse::<BaselineKind>().map(|b| match b {
                BaselineKind::Rprm => Method::Rprm,
                BaselineKind::Rpcm => Method::Rpcm,
                BaselineKind::Nncm => Method::Nncm,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub agent_counts: Vec<usize>,
    pub category_counts: Vec<usize>,
    pub pois_per_category: Vec<usize>,
    pub runs: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub sharing: SharingMode,
    /// Every category gets exactly `pois_per_category` PoIs; otherwise
    /// sizes are drawn from `1..=pois_per_category`.
    pub equal_size: bool,
    /// Run cells on the rayon pool. Output order is unaffected.
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            agent_counts: vec![5, 10, 20, 50, 100],
            category_counts: vec![5, 10, 20],
            pois_per_category: vec![5, 10, 15, 20],
            runs: 3,
            seed: 0,
            methods: Method::ALL.to_vec(),
            sharing: SharingMode::PerPersonIntermediate,
            equal_size: true,
            parallel: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let lists = [
            ("agent_counts", &self.agent_counts),
            ("category_counts", &self.category_counts),
            ("pois_per_category", &self.pois_per_category),
        ];
        for (name, list) in lists {
            if list.is_empty() || list.contains(&0) {
                return Err(Error::Config(format!("{name} must be nonempty with every entry >= 1")));
            }
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        Ok(())
    }
}

/// Leg traversals and what they cost, per mode (indexed by mode id).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageStats {
    pub legs: Vec<u64>,
    pub cost: Vec<Cents>,
}

impl UsageStats {
    pub fn zero(modes: usize) -> Self {
        Self {
            legs: vec![0; modes],
            cost: vec![Cents::ZERO; modes],
        }
    }

    pub fn total_legs(&self) -> u64 {
        self.legs.iter().sum()
    }

    pub fn total_cost(&self) -> Cents {
        self.cost.iter().copied().sum()
    }

    fn add(&mut self, net: &MultiModalNetwork, path: &PathResult, times: u64) {
        for leg in &path.legs {
            self.legs[leg.mode.index()] += times;
            self.cost[leg.mode.index()] += net.edge_cost(leg.edge) * times as i64;
        }
    }
}

/// Counts each hop once per traversing agent on individual legs, and once
/// per sharing-multiplier unit on common legs.
pub fn medium_usage(net: &MultiModalNetwork, plan: &JourneyPlan) -> UsageStats {
    let mut stats = UsageStats::zero(net.fare_table().len());
    let m = plan.sharing.multiplier(plan.agents.len()) as u64;
    for p in plan.source_legs.iter().chain(&plan.dest_legs) {
        stats.add(net, p, 1);
    }
    for p in &plan.common_legs {
        stats.add(net, p, m);
    }
    stats
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: Method,
    pub agents: usize,
    pub k: usize,
    pub pois_per_category: usize,
    pub run: usize,
    pub total_cost: Cents,
    pub wall_time_ms: f64,
    pub usage: UsageStats,
}

/// Rows of one sweep plus the mode names labelling the usage columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub modes: Vec<String>,
    pub rows: Vec<ResultRow>,
}

pub const CSV_FIXED_COLUMNS: [&str; 7] = [
    "method",
    "agents",
    "k",
    "pois_per_category",
    "run",
    "total_cost_cents",
    "wall_time_ms",
];

#[derive(Debug, Clone, Copy)]
struct Cell {
    agents: usize,
    k: usize,
    ppc: usize,
    run: usize,
}

impl Cell {
    fn seed(&self, base: u64) -> u64 {
        let mut s = derive_seed(base, self.agents as u64);
        s = derive_seed(s, self.k as u64);
        s = derive_seed(s, self.ppc as u64);
        derive_seed(s, self.run as u64)
    }
}

/// Draws the query of one cell: `k` disjoint categories, then uniform
/// endpoints for every agent.
fn draw_instance(
    net: &MultiModalNetwork,
    cell: &Cell,
    equal_size: bool,
    rng: &mut SplitMix64,
) -> Result<QueryInstance> {
    let sizes: Vec<usize> = (0..cell.k)
        .map(|_| if equal_size { cell.ppc } else { 1 + rng.index(cell.ppc) })
        .collect();
    let all: Vec<PoiId> = net.poi_ids().collect();
    let drawn = rng.sample(&all, sizes.iter().sum());
    let mut categories = Vec::with_capacity(cell.k);
    let mut at = 0;
    for s in sizes {
        categories.push(drawn[at..at + s].to_vec());
        at += s;
    }
    let agents = (0..cell.agents)
        .map(|_| Agent {
            source: all[rng.index(all.len())],
            destination: all[rng.index(all.len())],
        })
        .collect();
    QueryInstance::new(agents, categories)
}

/// One query drawn the same way a sweep cell draws it.
pub fn random_query(
    net: &MultiModalNetwork,
    agents: usize,
    k: usize,
    pois_per_category: usize,
    equal_size: bool,
    seed: u64,
) -> Result<QueryInstance> {
    if k * pois_per_category > net.poi_count() {
        return Err(Error::Sizing(format!(
            "{k} categories of {pois_per_category} PoIs need more than the network's {} PoIs",
            net.poi_count()
        )));
    }
    let cell = Cell {
        agents,
        k,
        ppc: pois_per_category,
        run: 0,
    };
    draw_instance(net, &cell, equal_size, &mut SplitMix64::new(seed))
}

fn run_cell(net: &MultiModalNetwork, cfg: &ExperimentConfig, cell: Cell) -> Result<Vec<ResultRow>> {
    let seed = cell.seed(cfg.seed);
    let mut rng = SplitMix64::new(seed);
    let inst = draw_instance(net, &cell, cfg.equal_size, &mut rng)?;
    // RPRM and RPCM share a seed so they visit the same PoIs
    let baseline_seed = derive_seed(seed, 1);
    cfg.methods
        .iter()
        .map(|&method| {
            let start = Instant::now();
            let plan = method.run(net, &inst, cfg.sharing, baseline_seed)?;
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            Ok(ResultRow {
                method,
                agents: cell.agents,
                k: cell.k,
                pois_per_category: cell.ppc,
                run: cell.run,
                total_cost: plan.total_cost,
                wall_time_ms,
                usage: medium_usage(net, &plan),
            })
        })
        .collect()
}

/// Runs every (agents, k, pois_per_category, run) cell and every method.
/// Rows come out in sweep order whether or not cells run in parallel.
pub fn run_experiment(net: &MultiModalNetwork, cfg: &ExperimentConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let needed = cfg
        .category_counts
        .iter()
        .flat_map(|k| cfg.pois_per_category.iter().map(move |p| k * p))
        .max()
        .unwrap_or(0);
    if needed > net.poi_count() {
        return Err(Error::Sizing(format!(
            "a sweep cell needs {needed} distinct category PoIs but the network has {}",
            net.poi_count()
        )));
    }
    let mut cells = Vec::new();
    for &agents in &cfg.agent_counts {
        for &k in &cfg.category_counts {
            for &ppc in &cfg.pois_per_category {
                for run in 0..cfg.runs {
                    cells.push(Cell { agents, k, ppc, run });
                }
            }
        }
    }
    log::info!("bench: {} cells x {} methods", cells.len(), cfg.methods.len());
    let per_cell: Vec<Result<Vec<ResultRow>>> = if cfg.parallel {
        cells.par_iter().map(|c| run_cell(net, cfg, *c)).collect()
    } else {
        cells.iter().map(|c| run_cell(net, cfg, *c)).collect()
    };
    let mut rows = Vec::with_capacity(cells.len() * cfg.methods.len());
    for r in per_cell {
        rows.extend(r?);
    }
    Ok(BenchReport {
        modes: net.fare_table().entries().map(|(_, e)| e.name.clone()).collect(),
        rows,
    })
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::io("<csv output>", e),
        other => Error::Config(format!("csv: {other:?}")),
    }
}

fn create(path: &Path) -> Result<std::fs::File> {
    std::fs::File::create(path).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub method: Method,
    pub agents: usize,
    pub k: usize,
    pub pois_per_category: usize,
    pub runs: usize,
    pub mean_cost_cents: f64,
    pub mean_wall_time_ms: f64,
}

impl BenchReport {
    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = CSV_FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
        h.extend(self.modes.iter().map(|m| format!("legs_{m}")));
        h.extend(self.modes.iter().map(|m| format!("cost_cents_{m}")));
        h
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.header()).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec = vec![
                r.method.to_string(),
                r.agents.to_string(),
                r.k.to_string(),
                r.pois_per_category.to_string(),
                r.run.to_string(),
                r.total_cost.0.to_string(),
                format!("{:.3}", r.wall_time_ms),
            ];
            rec.extend(r.usage.legs.iter().map(u64::to_string));
            rec.extend(r.usage.cost.iter().map(|c| c.0.to_string()));
            w.write_record(rec).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))
    }

    pub fn emit_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.write_csv(create(path)?).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    /// Mean over runs per (method, agents, k, pois_per_category), in
    /// first-appearance order.
    pub fn summary(&self) -> Vec<SummaryRow> {
        let mut out: Vec<(SummaryRow, i128, f64)> = Vec::new();
        for r in &self.rows {
            let key = (r.method, r.agents, r.k, r.pois_per_category);
            let slot = out
                .iter()
                .position(|(s, _, _)| (s.method, s.agents, s.k, s.pois_per_category) == key);
            let i = match slot {
                Some(i) => i,
                None => {
                    out.push((
                        SummaryRow {
                            method: r.method,
                            agents: r.agents,
                            k: r.k,
                            pois_per_category: r.pois_per_category,
                            runs: 0,
                            mean_cost_cents: 0.0,
                            mean_wall_time_ms: 0.0,
                        },
                        0,
                        0.0,
                    ));
                    out.len() - 1
                }
            };
            out[i].0.runs += 1;
            out[i].1 += i128::from(r.total_cost.0);
            out[i].2 += r.wall_time_ms;
        }
        out.into_iter()
            .map(|(mut s, cost, time)| {
                s.mean_cost_cents = cost as f64 / s.runs as f64;
                s.mean_wall_time_ms = time / s.runs as f64;
                s
            })
            .collect()
    }

    pub fn write_summary<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "method",
            "agents",
            "k",
            "pois_per_category",
            "runs",
            "mean_total_cost_cents",
            "mean_wall_time_ms",
        ])
        .map_err(csv_err)?;
        for s in self.summary() {
            w.write_record([
                s.method.to_string(),
                s.agents.to_string(),
                s.k.to_string(),
                s.pois_per_category.to_string(),
                s.runs.to_string(),
                format!("{:.3}", s.mean_cost_cents),
                format!("{:.3}", s.mean_wall_time_ms),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))
    }

    pub fn emit_summary(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.write_summary(create(path)?).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    /// Human-readable table of the summary.
    pub fn summary_text(&self) -> String {
        let mut s = String::from("method  agents    k  ppc  runs   mean_cost_cents  mean_ms\n");
        for r in self.summary() {
            s.push_str(&format!(
                "{:<6} {:>7} {:>4} {:>4} {:>5} {:>17.1} {:>8.3}\n",
                r.method.to_string(),
                r.agents,
                r.k,
                r.pois_per_category,
                r.runs,
                r.mean_cost_cents,
                r.mean_wall_time_ms
            ));
        }
        s.push_str(
            "note: costs depend on the network, fare draws and seeds; compare orderings and trends, not absolute values.\n",
        );
        s
    }
}
