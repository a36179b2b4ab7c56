//! Twenty hand-built timetable scenarios over a six-stop line.
//!
//! Legs and routes are written compactly: `"0B1T2"` is P0 -Bus-> P1
//! -Train-> P2, and `"3"` is an empty leg sitting at P3.

use gtpmm::fare::{FarePolicy, FareTable, ModeId};
use gtpmm::money::Rate;
use gtpmm::network::{Leg, PathResult};
use gtpmm::planner::{Timetable, Trip, ViolationKind};
use gtpmm::{Agent, Cents, JourneyPlan, MultiModalNetwork, NetworkBuilder, PoiId, SharingMode};

pub struct AgentSpec {
    pub source_leg: &'static str,
    pub dest_leg: &'static str,
}

pub struct TimingCase {
    pub name: &'static str,
    pub agents: Vec<AgentSpec>,
    pub common: &'static str,
    pub trips: Vec<(char, &'static str, f64, f64)>,
    pub start: f64,
    /// `None` when feasible, else (agent, hop index, kind) of the first violation.
    pub expect: Option<(usize, usize, ViolationKind)>,
}

fn mode(c: char) -> ModeId {
    match c {
        'B' => ModeId(0),
        'T' => ModeId(1),
        'R' => ModeId(2),
        other => panic!("unknown mode letter {other}"),
    }
}

/// P0..P5 in a line with Bus, Train and Tram on every link, plus a Bus
/// shortcut P0-P2.
pub fn line_network() -> MultiModalNetwork {
    let policy = FarePolicy::new(Cents(100), Rate::from_cents(1), Rate(0)).unwrap();
    let fares = FareTable::from_entries(["Bus", "Train", "Tram"].map(|m| (m.to_string(), policy))).unwrap();
    let mut b = NetworkBuilder::new(fares);
    for i in 0..6 {
        b.add_poi(format!("P{i}"), "", None).unwrap();
    }
    for i in 0..5u32 {
        for m in 0..3 {
            b.add_edge(PoiId(i), PoiId(i + 1), ModeId(m), 100.0, 2.0).unwrap();
        }
    }
    b.add_edge(PoiId(0), PoiId(2), ModeId(0), 150.0, 3.0).unwrap();
    b.build().unwrap()
}

fn parse_leg(net: &MultiModalNetwork, spec: &str) -> PathResult {
    let chars: Vec<char> = spec.chars().collect();
    let poi = |c: char| PoiId(c.to_digit(10).expect("stop digit"));
    let mut path = PathResult::empty(poi(chars[0]));
    for step in chars[1..].chunks(2) {
        let (m, to) = (mode(step[0]), poi(step[1]));
        let from = *path.poi_sequence.last().unwrap();
        let edge = net
            .parallel_edges(from, to)
            .into_iter()
            .find(|&e| net.edge(e).mode == m)
            .expect("edge exists in the line network");
        path.cost += net.edge_cost(edge);
        path.legs.push(Leg { edge, mode: m });
        path.poi_sequence.push(to);
    }
    path
}

pub fn build_plan(net: &MultiModalNetwork, case: &TimingCase) -> JourneyPlan {
    let common = parse_leg(net, case.common);
    let common_pois = if common.legs.is_empty() {
        vec![common.source()]
    } else {
        vec![common.source(), common.target()]
    };
    let source_legs: Vec<PathResult> = case.agents.iter().map(|a| parse_leg(net, a.source_leg)).collect();
    let dest_legs: Vec<PathResult> = case.agents.iter().map(|a| parse_leg(net, a.dest_leg)).collect();
    let mut plan = JourneyPlan {
        agents: source_legs
            .iter()
            .zip(&dest_legs)
            .map(|(s, d)| Agent {
                source: s.source(),
                destination: d.target(),
            })
            .collect(),
        common_pois,
        common_legs: if common.legs.is_empty() { vec![] } else { vec![common] },
        source_legs,
        dest_legs,
        sharing: SharingMode::SharedIntermediate,
        total_cost: Cents::ZERO,
    };
    plan.total_cost = plan.recompute_total();
    plan
}

pub fn build_timetable(case: &TimingCase) -> Timetable {
    Timetable::new(
        case.trips
            .iter()
            .map(|&(m, route, start, end)| Trip {
                route: route.chars().map(|c| PoiId(c.to_digit(10).unwrap())).collect(),
                mode: mode(m),
                start_time: start,
                end_time: end,
            })
            .collect(),
    )
    .unwrap()
}

fn one(source_leg: &'static str, dest_leg: &'static str) -> Vec<AgentSpec> {
    vec![AgentSpec { source_leg, dest_leg }]
}

pub fn cases() -> Vec<TimingCase> {
    use ViolationKind::{NoConnectingTrip as Late, NoCoveringTrip as Uncovered};
    vec![
        TimingCase {
            name: "empty plan",
            agents: one("2", "2"),
            common: "2",
            trips: vec![],
            start: 0.0,
            expect: None,
        },
        TimingCase {
            name: "single hop after start",
            agents: one("0B1", "1"),
            common: "1",
            trips: vec![('B', "01", 540.0, 550.0)],
            start: 500.0,
            expect: None,
        },
        TimingCase {
            name: "first trip exactly at start",
            agents: one("0B1", "1"),
            common: "1",
            trips: vec![('B', "01", 540.0, 550.0)],
            start: 540.0,
            expect: None,
        },
        TimingCase {
            name: "first trip before start",
            agents: one("0B1", "1"),
            common: "1",
            trips: vec![('B', "01", 530.0, 550.0)],
            start: 540.0,
            expect: Some((0, 0, Late)),
        },
        TimingCase {
            name: "no trip of the hop's mode",
            agents: one("0T1", "1"),
            common: "1",
            trips: vec![('B', "01", 540.0, 550.0)],
            start: 500.0,
            expect: Some((0, 0, Uncovered)),
        },
        TimingCase {
            name: "trip runs the other way",
            agents: one("1B0", "0"),
            common: "0",
            trips: vec![('B', "01", 540.0, 550.0)],
            start: 500.0,
            expect: Some((0, 0, Uncovered)),
        },
        TimingCase {
            name: "transfer exactly at arrival is infeasible",
            agents: one("0B1", "2"),
            common: "1T2",
            trips: vec![('B', "01", 540.0, 600.0), ('T', "12", 600.0, 620.0)],
            start: 500.0,
            expect: Some((0, 1, Late)),
        },
        TimingCase {
            name: "five minute transfer",
            agents: one("0B1", "2"),
            common: "1T2",
            trips: vec![('B', "01", 540.0, 600.0), ('T', "12", 605.0, 620.0)],
            start: 500.0,
            expect: None,
        },
        TimingCase {
            name: "stay on board for two hops",
            agents: one("0B1", "2"),
            common: "1B2",
            trips: vec![('B', "012", 540.0, 560.0)],
            start: 500.0,
            expect: None,
        },
        TimingCase {
            name: "same mode, two trips, zero gap",
            agents: one("0B1", "2"),
            common: "1B2",
            trips: vec![('B', "01", 540.0, 600.0), ('B', "12", 600.0, 620.0)],
            start: 500.0,
            expect: Some((0, 1, Late)),
        },
        TimingCase {
            name: "same mode, two trips, one minute gap",
            agents: one("0B1", "2"),
            common: "1B2",
            trips: vec![('B', "01", 540.0, 600.0), ('B', "12", 601.0, 620.0)],
            start: 500.0,
            expect: None,
        },
        TimingCase {
            name: "earliest arrival is kept",
            agents: one("0B1", "2"),
            common: "1T2",
            trips: vec![
                ('B', "01", 560.0, 650.0),
                ('B', "01", 540.0, 600.0),
                ('T', "12", 620.0, 640.0),
            ],
            start: 500.0,
            expect: None,
        },
        TimingCase {
            name: "route skips through an extra stop",
            agents: one("0B2", "2"),
            common: "2",
            trips: vec![('B', "012", 540.0, 560.0)],
            start: 500.0,
            expect: Some((0, 0, Uncovered)),
        },
        TimingCase {
            name: "third hop has no trip",
            agents: one("0B1", "2T3"),
            common: "1B2",
            trips: vec![('B', "012", 540.0, 560.0)],
            start: 500.0,
            expect: Some((0, 2, Uncovered)),
        },
        TimingCase {
            name: "third hop departs too early",
            agents: one("0B1", "2T3"),
            common: "1B2",
            trips: vec![('B', "012", 540.0, 560.0), ('T', "23", 555.0, 570.0)],
            start: 500.0,
            expect: Some((0, 2, Late)),
        },
        TimingCase {
            name: "ride the middle of a longer route",
            agents: one("1B2", "2B3"),
            common: "2",
            trips: vec![('B', "012345", 540.0, 600.0)],
            start: 500.0,
            expect: None,
        },
        TimingCase {
            name: "source, common and destination legs chained",
            agents: one("0B1", "3B4"),
            common: "1T2T3",
            trips: vec![
                ('B', "01", 540.0, 550.0),
                ('T', "123", 555.0, 570.0),
                ('B', "34", 575.0, 580.0),
            ],
            start: 500.0,
            expect: None,
        },
        TimingCase {
            name: "second agent misses a connection",
            agents: vec![
                AgentSpec {
                    source_leg: "1B2",
                    dest_leg: "3B4",
                },
                AgentSpec {
                    source_leg: "0B1B2",
                    dest_leg: "3B4",
                },
            ],
            common: "2T3",
            trips: vec![
                ('B', "12", 540.0, 550.0),
                ('T', "23", 555.0, 565.0),
                ('B', "34", 570.0, 575.0),
                ('B', "01", 530.0, 545.0),
            ],
            start: 500.0,
            expect: Some((1, 1, Late)),
        },
        TimingCase {
            name: "splitting a same-mode run beats one long trip",
            agents: one("0B1B2", "2T3"),
            common: "2",
            trips: vec![
                ('B', "012", 540.0, 700.0),
                ('B', "01", 540.0, 600.0),
                ('B', "12", 610.0, 620.0),
                ('T', "23", 650.0, 660.0),
            ],
            start: 500.0,
            expect: None,
        },
        TimingCase {
            name: "service past midnight",
            agents: one("0B1", "2"),
            common: "1T2",
            trips: vec![('B', "01", 1440.0, 1450.0), ('T', "12", 1505.0, 1510.0)],
            start: 1430.0,
            expect: None,
        },
    ]
}
