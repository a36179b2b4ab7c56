//! Timetable feasibility of a plan.
//!
//! A ride boards one trip and stays on it for one or more consecutive hops
//! of the agent's path; the trip's route must contain those PoIs
//! contiguously and in travel order, with the hop's mode. The first ride's
//! trip starts no earlier than the requested start time, and every later
//! ride's trip starts strictly after the previous trip ends.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fare::ModeId;
use crate::network::PoiId;
use crate::planner::JourneyPlan;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trip {
    pub route: Vec<PoiId>,
    pub mode: ModeId,
    /// Minutes since midnight; may exceed 1440 for after-midnight service.
    pub start_time: f64,
    pub end_time: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timetable {
    trips: Vec<Trip>,
}

impl Timetable {
    pub fn new(trips: Vec<Trip>) -> Result<Self> {
        for (i, t) in trips.iter().enumerate() {
            if t.route.len() < 2 {
                return Err(Error::Config(format!("trip {i} has fewer than two PoIs")));
            }
            if t.start_time > t.end_time || t.start_time.is_nan() || t.end_time.is_nan() {
                return Err(Error::Config(format!(
                    "trip {i} starts at {} after it ends at {}",
                    t.start_time, t.end_time
                )));
            }
        }
        Ok(Self { trips })
    }

    pub fn trips(&self) -> &[Trip] {
        &self.trips
    }

    /// Whether `trip` travels through `pois` contiguously, in order.
    fn covers(trip: &Trip, pois: &[PoiId]) -> bool {
        trip.route.windows(pois.len()).any(|w| w == pois)
    }
}

/// One hop of an agent's path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hop {
    pub from: PoiId,
    pub to: PoiId,
    pub mode: ModeId,
}

/// A boarded trip covering hops `first_hop..=last_hop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ride {
    pub trip: usize,
    pub first_hop: usize,
    pub last_hop: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// No trip of the hop's mode runs over the hop at all.
    NoCoveringTrip,
    /// Covering trips exist but none departs in time.
    NoConnectingTrip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub agent: usize,
    pub hop_index: usize,
    pub hop: Hop,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentTiming {
    pub rides: Vec<Ride>,
    /// First hop that no feasible ride sequence reaches, with its cause.
    pub violation: Option<(usize, Hop, ViolationKind)>,
}

impl AgentTiming {
    pub fn feasible(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub agents: Vec<AgentTiming>,
    pub first_violation: Option<Violation>,
}

/// Finds a ride assignment for `hops` that departs at or after `start_time`.
///
/// `best_end[i]` is the earliest time at which a feasible ride sequence can
/// finish hop `i` exactly at a ride boundary; an earlier arrival never
/// removes options downstream, so keeping only the minimum is exact.
pub fn validate_hops(hops: &[Hop], timetable: &Timetable, start_time: f64) -> AgentTiming {
    let n = hops.len();
    let mut best_end: Vec<Option<f64>> = vec![None; n];
    let mut choice: Vec<Option<Ride>> = vec![None; n];
    for last in 0..n {
        for first in 0..=last {
            let ready = if first == 0 {
                None
            } else {
                match best_end[first - 1] {
                    Some(t) => Some(t),
                    None => continue,
                }
            };
            let span = &hops[first..=last];
            let mode = span[0].mode;
            if span.iter().any(|h| h.mode != mode) {
                continue;
            }
            let mut pois: Vec<PoiId> = span.iter().map(|h| h.from).collect();
            pois.push(span[span.len() - 1].to);
            for (ti, trip) in timetable.trips.iter().enumerate() {
                if trip.mode != mode || !Timetable::covers(trip, &pois) {
                    continue;
                }
                let boards = match ready {
                    None => trip.start_time >= start_time,
                    Some(prev_end) => trip.start_time > prev_end,
                };
                if boards && best_end[last].is_none_or(|b| trip.end_time < b) {
                    best_end[last] = Some(trip.end_time);
                    choice[last] = Some(Ride {
                        trip: ti,
                        first_hop: first,
                        last_hop: last,
                    });
                }
            }
        }
    }

    if n == 0 || best_end[n - 1].is_some() {
        let mut rides = Vec::new();
        let mut at = n;
        while at > 0 {
            let ride = choice[at - 1].expect("reachable boundary has a ride");
            rides.push(ride);
            at = ride.first_hop;
        }
        rides.reverse();
        return AgentTiming { rides, violation: None };
    }

    let reached = best_end.iter().rposition(Option::is_some).map_or(0, |i| i + 1);
    let hop = hops[reached];
    let covered = timetable
        .trips
        .iter()
        .any(|t| t.mode == hop.mode && Timetable::covers(t, &[hop.from, hop.to]));
    let kind = if covered {
        ViolationKind::NoConnectingTrip
    } else {
        ViolationKind::NoCoveringTrip
    };
    AgentTiming {
        rides: Vec::new(),
        violation: Some((reached, hop, kind)),
    }
}

/// Checks every agent's full path of `plan` against `timetable`.
pub fn validate_timing(plan: &JourneyPlan, timetable: &Timetable, start_time: f64) -> FeasibilityReport {
    let mut agents = Vec::with_capacity(plan.agents.len());
    let mut first_violation = None;
    for agent in 0..plan.agents.len() {
        let hops: Vec<Hop> = plan
            .agent_path(agent)
            .into_iter()
            .flat_map(|p| p.hops())
            .map(|(from, to, leg)| Hop {
                from,
                to,
                mode: leg.mode,
            })
            .collect();
        let timing = validate_hops(&hops, timetable, start_time);
        if let (None, Some((hop_index, hop, kind))) = (&first_violation, timing.violation) {
            first_violation = Some(Violation {
                agent,
                hop_index,
                hop,
                kind,
            });
        }
        agents.push(timing);
    }
    FeasibilityReport {
        feasible: first_violation.is_none(),
        agents,
        first_violation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUS: ModeId = ModeId(0);
    const TRAIN: ModeId = ModeId(1);

    fn hop(from: u32, to: u32, mode: ModeId) -> Hop {
        Hop {
            from: PoiId(from),
            to: PoiId(to),
            mode,
        }
    }

    fn trip(route: &[u32], mode: ModeId, start: f64, end: f64) -> Trip {
        Trip {
            route: route.iter().map(|&p| PoiId(p)).collect(),
            mode,
            start_time: start,
            end_time: end,
        }
    }

    #[test]
    fn no_hops_is_feasible() {
        let t = validate_hops(&[], &Timetable::default(), 0.0);
        assert!(t.feasible());
        assert!(t.rides.is_empty());
    }

    #[test]
    fn boarding_exactly_at_previous_arrival_fails() {
        let tt = Timetable::new(vec![
            trip(&[0, 1], BUS, 540.0, 600.0),
            trip(&[1, 2], TRAIN, 600.0, 620.0),
        ])
        .unwrap();
        let t = validate_hops(&[hop(0, 1, BUS), hop(1, 2, TRAIN)], &tt, 500.0);
        assert_eq!(
            t.violation,
            Some((1, hop(1, 2, TRAIN), ViolationKind::NoConnectingTrip))
        );
    }

    #[test]
    fn five_minute_transfer_is_feasible() {
        let tt = Timetable::new(vec![
            trip(&[0, 1], BUS, 540.0, 600.0),
            trip(&[1, 2], TRAIN, 605.0, 620.0),
        ])
        .unwrap();
        let t = validate_hops(&[hop(0, 1, BUS), hop(1, 2, TRAIN)], &tt, 500.0);
        assert!(t.feasible());
        assert_eq!(t.rides.len(), 2);
    }

    #[test]
    fn staying_on_board_covers_several_hops() {
        let tt = Timetable::new(vec![trip(&[0, 1, 2], BUS, 540.0, 560.0)]).unwrap();
        let t = validate_hops(&[hop(0, 1, BUS), hop(1, 2, BUS)], &tt, 500.0);
        assert!(t.feasible());
        assert_eq!(
            t.rides,
            vec![Ride {
                trip: 0,
                first_hop: 0,
                last_hop: 1
            }]
        );
    }

    #[test]
    fn invalid_trips_rejected() {
        assert!(Timetable::new(vec![trip(&[0], BUS, 0.0, 1.0)]).is_err());
        assert!(Timetable::new(vec![trip(&[0, 1], BUS, 2.0, 1.0)]).is_err());
    }
}
