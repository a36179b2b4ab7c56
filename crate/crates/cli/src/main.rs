use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use gtpmm::bench::{random_query, run_experiment, ExperimentConfig, Method};
use gtpmm::fare::{resolve_fares, FareSchedule, FareStrategy, FareTable};
use gtpmm::ingest::{
    categorize, load_edge_list, load_fare_schedule, load_query, CategoryConfig, CategoryStrategy, GtfsFeed,
};
use gtpmm::oracle::brute_force_optimal;
use gtpmm::planner::validate_timing;
use gtpmm::synthetic::{random_case, synthetic_city, CaseParams, CityParams};
use gtpmm::{MultiModalNetwork, QueryInstance, RepairConfig, SharingMode};

#[derive(Parser)]
#[command(name = "gtpmm", version, about = "Group trip planning over multimodal city networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan one group query and print the plan as JSON.
    Plan(PlanArgs),
    /// Compare the planner against the brute-force oracle.
    Verify(VerifyArgs),
    /// Run an experiment sweep and write one CSV row per method and run.
    Bench(BenchArgs),
    /// Load a GTFS feed or edge list and write the network as JSON.
    Ingest(IngestArgs),
}

#[derive(Args)]
struct NetworkArgs {
    /// Network JSON written by `ingest`.
    #[arg(long, conflicts_with_all = ["edges", "gtfs"])]
    network: Option<PathBuf>,
    /// Edge-list CSV (u,v,mode,distance_m,time_min).
    #[arg(long, conflicts_with = "gtfs")]
    edges: Option<PathBuf>,
    /// GTFS directory with stops, routes, trips and stop_times.
    #[arg(long)]
    gtfs: Option<PathBuf>,
    /// Fare schedule CSV; defaults to the built-in Switzerland ranges.
    #[arg(long)]
    fares: Option<PathBuf>,
    /// Use the built-in Helsinki ranges instead of Switzerland.
    #[arg(long, conflicts_with = "fares")]
    helsinki: bool,
    #[arg(long, default_value = "low")]
    fare_strategy: FareStrategy,
    /// PoI count of the synthetic city used when no input is given.
    #[arg(long, default_value_t = 200)]
    synthetic_pois: usize,
    /// Join disconnected components before planning.
    #[arg(long)]
    repair: bool,
}

impl NetworkArgs {
    fn fare_table(&self, seed: u64) -> Result<FareTable> {
        let schedule = match &self.fares {
            Some(path) => load_fare_schedule(path)?,
            None if self.helsinki => FareSchedule::helsinki(),
            None => FareSchedule::switzerland(),
        };
        Ok(resolve_fares(&schedule, self.fare_strategy, seed)?)
    }

    /// The network plus, for GTFS input, the feed it came from.
    fn load(&self, seed: u64) -> Result<(MultiModalNetwork, Option<GtfsFeed>)> {
        let (net, feed) = if let Some(path) = &self.network {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let net: MultiModalNetwork =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            (net, None)
        } else if let Some(path) = &self.edges {
            (load_edge_list(path, &self.fare_table(seed)?)?, None)
        } else if let Some(dir) = &self.gtfs {
            let feed = GtfsFeed::load(dir)?;
            (feed.to_network(&self.fare_table(seed)?)?, Some(feed))
        } else {
            let params = CityParams {
                pois: self.synthetic_pois,
                fares: self.fare_table(seed)?,
                ..CityParams::default()
            };
            (synthetic_city(&params, seed)?, None)
        };
        log::info!("network: {} PoIs, {} edges", net.poi_count(), net.edges().len());
        if self.repair && !net.is_connected() {
            let (fixed, added) = net.connect_components(&RepairConfig::default())?;
            log::info!("repair added {} edges", added.len());
            return Ok((fixed, feed));
        }
        Ok((net, feed))
    }
}

#[derive(Args)]
struct QueryArgs {
    /// Query TOML with `agents` and `categories`; drawn at random if absent.
    #[arg(long)]
    query: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    agents: usize,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 5)]
    pois_per_category: usize,
}

impl QueryArgs {
    fn load(&self, net: &MultiModalNetwork, seed: u64) -> Result<QueryInstance> {
        match &self.query {
            Some(path) => Ok(load_query(path, net)?),
            None => Ok(random_query(
                net,
                self.agents,
                self.k,
                self.pois_per_category,
                true,
                seed,
            )?),
        }
    }
}

#[derive(Args)]
struct PlanArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[command(flatten)]
    query: QueryArgs,
    #[arg(long, default_value = "ojpa")]
    method: Method,
    #[arg(long, default_value = "per-person")]
    sharing: SharingMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// With --gtfs, check the plan against the feed's trips departing at
    /// this many minutes after midnight.
    #[arg(long, requires = "gtfs")]
    depart: Option<f64>,
    /// Write the plan here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check a query on a given network instead of random small instances.
    #[arg(long)]
    query: Option<PathBuf>,
    #[command(flatten)]
    network: NetworkArgs,
    /// Number of random instances when no query is given.
    #[arg(long, default_value_t = 200)]
    instances: u64,
    #[arg(long, default_value = "per-person")]
    sharing: SharingMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 20, 50, 100])]
    agents: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 20])]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [5, 10, 15, 20])]
    pois_per_category: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    runs: usize,
    #[arg(long, value_delimiter = ',', default_values_t = Method::ALL)]
    method: Vec<Method>,
    #[arg(long, default_value = "per-person")]
    sharing: SharingMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draw category sizes from 1..=pois_per_category.
    #[arg(long)]
    unequal: bool,
    /// Run cells on all cores.
    #[arg(long)]
    parallel: bool,
    /// Per-run CSV; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-cell mean CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    network: NetworkArgs,
    /// Assign this many categories to the PoIs.
    #[arg(long)]
    categories: Option<usize>,
    /// keywords, round-robin, or random.
    #[arg(long, default_value = "keywords")]
    category_strategy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_plan(args: PlanArgs) -> Result<()> {
    let (net, feed) = args.network.load(args.seed)?;
    let inst = args.query.load(&net, args.seed)?;
    let plan = args.method.run(&net, &inst, args.sharing, args.seed)?;
    let mut doc = serde_json::to_value(plan.document(&net))?;
    if let (Some(depart), Some(feed)) = (args.depart, feed) {
        let report = validate_timing(&plan, &feed.timetable(&net)?, depart);
        doc["timing"] = serde_json::to_value(&report)?;
    }
    write_output(args.out.as_deref(), &(serde_json::to_string_pretty(&doc)? + "\n"))
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let cases: Vec<(MultiModalNetwork, QueryInstance)> = match &args.query {
        Some(path) => {
            let (net, _) = args.network.load(args.seed)?;
            let inst = load_query(path, &net)?;
            vec![(net, inst)]
        }
        None => (0..args.instances)
            .map(|i| random_case(args.seed.wrapping_add(i), &CaseParams::default()))
            .collect(),
    };
    let mut agree = 0;
    for (i, (net, inst)) in cases.iter().enumerate() {
        let planned = gtpmm::plan(net, inst, args.sharing)?;
        let (tuple, brute) = brute_force_optimal(net, inst, args.sharing)?;
        if planned.total_cost == brute {
            agree += 1;
        } else {
            println!(
                "instance {i}: planner {} via {:?}, oracle {} via {:?}",
                planned.total_cost, planned.common_pois, brute, tuple
            );
        }
    }
    println!("{agree}/{} instances agree ({})", cases.len(), args.sharing);
    if agree != cases.len() {
        bail!("planner and oracle disagree");
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let (net, _) = args.network.load(args.seed)?;
    let cfg = ExperimentConfig {
        agent_counts: args.agents,
        category_counts: args.k,
        pois_per_category: args.pois_per_category,
        runs: args.runs,
        seed: args.seed,
        methods: args.method,
        sharing: args.sharing,
        equal_size: !args.unequal,
        parallel: args.parallel,
    };
    let report = run_experiment(&net, &cfg)?;
    match &args.out {
        Some(path) => report.emit_csv(path)?,
        None => report.write_csv(io::stdout().lock())?,
    }
    if let Some(path) = &args.summary {
        report.emit_summary(path)?;
    }
    eprint!("{}", report.summary_text());
    Ok(())
}

fn cmd_ingest(args: IngestArgs) -> Result<()> {
    let (mut net, _) = args.network.load(args.seed)?;
    if let Some(k) = args.categories {
        let strategy = match args.category_strategy.as_str() {
            "keywords" => CategoryStrategy::default_keywords(),
            "round-robin" => CategoryStrategy::RoundRobin,
            "random" => CategoryStrategy::SeededRandom(args.seed),
            other => bail!("unknown category strategy `{other}`"),
        };
        let (labelled, sets) = categorize(&net, &CategoryConfig { k, strategy })?;
        log::info!("category sizes {:?}", sets.iter().map(Vec::len).collect::<Vec<_>>());
        net = labelled;
    }
    write_output(Some(&args.out), &serde_json::to_string(&net)?)
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GTPMM_LOG", "warn")).init();
    match Cli::parse().command {
        Command::Plan(a) => cmd_plan(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Ingest(a) => cmd_ingest(a),
    }
}
