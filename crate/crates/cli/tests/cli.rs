use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn gtpmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtpmm"))
        .args(args)
        .env_remove("RUST_BACKTRACE")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn plan_prints_the_shared_optimum() {
    let (edges, fares, query) = (
        fixture("ten_poi_edges.csv"),
        fixture("ten_poi_fares.csv"),
        fixture("ten_poi_query.toml"),
    );
    let out = gtpmm(&[
        "plan",
        "--edges",
        edges.to_str().unwrap(),
        "--fares",
        fares.to_str().unwrap(),
        "--query",
        query.to_str().unwrap(),
        "--sharing",
        "shared",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["total_cost_cents"], 28);
    assert_eq!(doc["common_pois"], serde_json::json!(["v3", "v5", "v8"]));
}

#[test]
fn bench_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = gtpmm(&[
            "bench",
            "--synthetic-pois",
            "60",
            "--agents",
            "2,4",
            "--k",
            "3",
            "--pois-per-category",
            "3",
            "--runs",
            "2",
            "--seed",
            "9",
            "--out",
            path.to_str().unwrap(),
        ]);
        stdout(&out);
        let text = std::fs::read_to_string(path).unwrap();
        text.lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f.remove(6);
                f.join(",")
            })
            .collect::<Vec<_>>()
    };
    let a = run("a.csv");
    assert_eq!(a.len(), 1 + 2 * 2 * 4);
    assert!(a[0].starts_with("method,agents,k,pois_per_category,run,total_cost_cents,legs_"));
    assert_eq!(a, run("b.csv"));
}

#[test]
fn verify_reports_agreement() {
    let s = stdout(&gtpmm(&["verify", "--instances", "15", "--sharing", "shared"]));
    assert!(s.contains("15/15 instances agree"), "{s}");
}

#[test]
fn ingest_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    let (gtfs, fares) = (fixture("gtfs_three_stop"), fixture("gtfs_fares.csv"));
    stdout(&gtpmm(&[
        "ingest",
        "--gtfs",
        gtfs.to_str().unwrap(),
        "--fares",
        fares.to_str().unwrap(),
        "--out",
        net.to_str().unwrap(),
    ]));
    let out = gtpmm(&[
        "plan",
        "--network",
        net.to_str().unwrap(),
        "--agents",
        "2",
        "--k",
        "2",
        "--pois-per-category",
        "1",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["common_pois"].as_array().unwrap().len(), 2);
}

#[test]
fn malformed_feed_fails_with_file_and_line() {
    let out = gtpmm(&[
        "ingest",
        "--gtfs",
        fixture("gtfs_bad_time").to_str().unwrap(),
        "--out",
        "/dev/null",
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("stop_times.txt:3"), "{err}");
}
