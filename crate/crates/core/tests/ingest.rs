mod common;

use std::path::Path;

use common::{fixture, ten_poi, v};
use gtpmm::fare::{resolve_fares, FareStrategy, FareTable};
use gtpmm::ingest::{
    categorize, export_edge_list, load_edge_list, load_fare_schedule, load_gtfs, load_query, parse_query,
    read_edge_list, CategoryConfig, CategoryStrategy, GtfsFeed, EDGE_LIST_HEADER,
};
use gtpmm::{Error, PoiId};

fn gtfs_fares() -> FareTable {
    resolve_fares(
        &load_fare_schedule(fixture("gtfs_fares.csv")).unwrap(),
        FareStrategy::Low,
        0,
    )
    .unwrap()
}

fn parse_error(dir: &str) -> (String, u64) {
    match load_gtfs(fixture(dir), &gtfs_fares()) {
        Err(Error::Parse { file, line, .. }) => (file.file_name().unwrap().to_string_lossy().into_owned(), line),
        other => panic!("{dir}: expected a parse error, got {other:?}"),
    }
}

#[test]
fn ten_poi_fixture_loads_by_external_id() {
    let (net, inst) = ten_poi();
    assert_eq!(inst.agents()[0].source, v(&net, "v1"));
    assert_eq!(inst.agents()[1].destination, v(&net, "v9"));
    assert_eq!(inst.categories()[2], vec![v(&net, "v7"), v(&net, "v8")]);
}

#[test]
fn edge_list_round_trips() {
    let (net, _) = ten_poi();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edges.csv");
    export_edge_list(&net, &path).unwrap();
    let back = load_edge_list(&path, net.fare_table()).unwrap();
    assert_eq!(back.poi_count(), net.poi_count());
    assert_eq!(back.edges(), net.edges());
    for (i, _) in net.edges().iter().enumerate() {
        let id = gtpmm::network::EdgeId(i as u32);
        assert_eq!(back.edge_cost(id), net.edge_cost(id));
    }
}

#[test]
fn edge_list_errors_carry_line_numbers() {
    let (net, _) = ten_poi();
    let bad = format!("{}\na,b,Bus,10,1\na,c,Rocket,10,1\n", EDGE_LIST_HEADER.join(","));
    match read_edge_list(bad.as_bytes(), Path::new("mem.csv"), net.fare_table()) {
        Err(Error::Parse { line, message, .. }) => {
            assert_eq!(line, 3);
            assert!(message.contains("Rocket"), "{message}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        load_edge_list(fixture("no_such_file.csv"), net.fare_table()),
        Err(Error::MissingFile(_))
    ));
}

#[test]
fn three_stop_feed_has_two_edges() {
    let net = load_gtfs(fixture("gtfs_three_stop"), &gtfs_fares()).unwrap();
    assert_eq!(net.poi_count(), 3);
    assert_eq!(net.edges().len(), 2);
    let mut times: Vec<f64> = net.edges().iter().map(|e| e.time_min).collect();
    times.sort_by(f64::total_cmp);
    assert!(
        (times[0] - 5.0).abs() < 1e-9 && (times[1] - 7.0).abs() < 1e-9,
        "{times:?}"
    );
    for e in net.edges() {
        assert_eq!(net.fare_table().name(e.mode), "Bus");
        assert!(e.distance_m > 0.0);
    }
    assert_eq!(net.poi(v(&net, "A")).unwrap().name, "Alpha Hotel");
}

#[test]
fn parallel_trips_collapse_to_fastest() {
    let net = load_gtfs(fixture("gtfs_dedup"), &gtfs_fares()).unwrap();
    assert_eq!(net.edges().len(), 1);
    assert!((net.edges()[0].time_min - 4.0).abs() < 1e-9);
}

#[test]
fn feed_without_stop_times_has_no_edges() {
    let net = load_gtfs(fixture("gtfs_empty_times"), &gtfs_fares()).unwrap();
    assert_eq!((net.poi_count(), net.edges().len()), (3, 0));
}

#[test]
fn malformed_feeds_name_file_and_line() {
    assert_eq!(parse_error("gtfs_bad_sequence"), ("stop_times.txt".into(), 4));
    assert_eq!(parse_error("gtfs_bad_time_order"), ("stop_times.txt".into(), 4));
    assert_eq!(parse_error("gtfs_dangling_stop"), ("stop_times.txt".into(), 3));
    assert_eq!(parse_error("gtfs_dangling_route"), ("trips.txt".into(), 3));
    assert_eq!(parse_error("gtfs_bad_time"), ("stop_times.txt".into(), 3));
    match load_gtfs(fixture("gtfs_missing_file"), &gtfs_fares()) {
        Err(Error::MissingFile(p)) => assert!(p.ends_with("trips.txt")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unpriced_route_mode_is_reported() {
    let fares = FareTable::from_entries([(
        "Train".to_string(),
        gtpmm::FarePolicy::new(gtpmm::Cents(1), gtpmm::Rate(0), gtpmm::Rate(0)).unwrap(),
    )])
    .unwrap();
    match load_gtfs(fixture("gtfs_three_stop"), &fares) {
        Err(Error::Parse { file, line, .. }) => {
            assert!(file.ends_with("routes.txt"));
            assert_eq!(line, 2);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn feed_timetable_spans_each_trip() {
    let feed = GtfsFeed::load(fixture("gtfs_three_stop")).unwrap();
    let net = feed.to_network(&gtfs_fares()).unwrap();
    let tt = feed.timetable(&net).unwrap();
    assert_eq!(tt.trips().len(), 1);
    let t = &tt.trips()[0];
    assert_eq!(t.route, vec![v(&net, "A"), v(&net, "B"), v(&net, "C")]);
    assert_eq!((t.start_time, t.end_time), (540.0, 552.0));
}

#[test]
fn categorize_partitions_pois() {
    let (net, _) = ten_poi();
    for strategy in [CategoryStrategy::RoundRobin, CategoryStrategy::SeededRandom(9)] {
        let (labelled, sets) = categorize(&net, &CategoryConfig { k: 3, strategy }).unwrap();
        let mut all: Vec<PoiId> = sets.iter().flatten().copied().collect();
        all.sort();
        assert_eq!(all, net.poi_ids().collect::<Vec<_>>());
        for (c, set) in sets.iter().enumerate() {
            assert!(!set.is_empty());
            for &p in set {
                assert_eq!(labelled.poi(p).unwrap().category, Some(c));
            }
        }
    }
}

#[test]
fn categorize_by_stop_name() {
    let net = load_gtfs(fixture("gtfs_three_stop"), &gtfs_fares()).unwrap();
    let cfg = CategoryConfig {
        k: 2,
        strategy: CategoryStrategy::ByNameKeyword(vec![("hotel".into(), 0), ("park".into(), 1)]),
    };
    let (_, sets) = categorize(&net, &cfg).unwrap();
    assert_eq!(sets, vec![vec![v(&net, "A")], vec![v(&net, "B")]]);
    let cfg = CategoryConfig {
        k: 2,
        strategy: CategoryStrategy::ByNameKeyword(vec![("hotel".into(), 0)]),
    };
    assert!(matches!(categorize(&net, &cfg), Err(Error::EmptyCategory { index: 1 })));
}

#[test]
fn query_accepts_dense_ids_and_reports_bad_lines() {
    let (net, _) = ten_poi();
    let q = parse_query("agents = [[0, \"v10\"]]\ncategories = [[1, 3]]\n", Path::new("q.toml")).unwrap();
    let inst = q.resolve(&net).unwrap();
    assert_eq!(inst.agents()[0].destination, v(&net, "v10"));
    match parse_query("agents = [[0, 1]]\ncategories = oops\n", Path::new("q.toml")) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_query("agents = [[\"nowhere\", 0]]\ncategories = [[1]]\n", Path::new("q.toml"))
            .unwrap()
            .resolve(&net),
        Err(Error::UnknownExternalPoi(_))
    ));
    assert!(matches!(
        load_query(fixture("missing.toml"), &net),
        Err(Error::MissingFile(_))
    ));
}
