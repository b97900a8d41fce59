//! Per-vehicle time-expanded network. Vertices are stored in topological
//! order: for each trip its start and end vertex, followed by the charging
//! vertices of the gap after it sorted by station and period.

use std::collections::HashMap;
use std::fmt::Write;

use crate::model::{ChargeCurve, Instance, Period, TechParams, Vehicle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    TripStart { trip: usize },
    TripEnd { trip: usize },
    Charge { gap: usize, station: usize, period: Period },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub kind: VertexKind,
    /// Charging price of the vertex, applied when leaving it.
    pub price: f64,
}

impl Vertex {
    pub fn charges(&self) -> bool {
        matches!(self.kind, VertexKind::Charge { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcKind {
    Trip,
    Direct,
    ToCharger,
    FromCharger,
    Holdover,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub kind: ArcKind,
    pub range_cost: f64,
}

/// Branching restriction on one vehicle's gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GapRule {
    EnforceStation(usize),
    ForbidStation(usize),
    EnforceVertex(usize, Period),
    ForbidVertex(usize, Period),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapConstraint {
    pub gap: usize,
    pub rule: GapRule,
}

/// How a route spends one idle gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GapVisit {
    Direct,
    Charge { station: usize, first: Period, last: Period },
}

impl GapConstraint {
    /// Whether a route spending the gap as `visit` survives this constraint.
    pub fn admits(&self, visit: &GapVisit) -> bool {
        let at = |s: usize| matches!(visit, GapVisit::Charge { station, .. } if *station == s);
        let covers = |s: usize, t: Period| {
            matches!(visit, GapVisit::Charge { station, first, last } if *station == s && *first <= t && t <= *last)
        };
        match self.rule {
            GapRule::EnforceStation(s) => at(s),
            GapRule::ForbidStation(s) => !at(s),
            GapRule::EnforceVertex(s, t) => covers(s, t),
            GapRule::ForbidVertex(s, t) => !covers(s, t),
        }
    }
}

/// Charging prices per (station, period); absent entries are zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PriceTable {
    prices: HashMap<(usize, Period), f64>,
}

impl PriceTable {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn set(&mut self, station: usize, period: Period, price: f64) {
        if price == 0.0 {
            self.prices.remove(&(station, period));
        } else {
            self.prices.insert((station, period), price);
        }
    }

    pub fn get(&self, station: usize, period: Period) -> f64 {
        self.prices.get(&(station, period)).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone)]
pub struct ExpandedNetwork {
    pub vertices: Vec<Vertex>,
    pub arcs: Vec<Arc>,
    /// Outgoing arc indices per vertex, in arc order.
    pub out_arcs: Vec<Vec<usize>>,
    pub start: usize,
    pub end: usize,
    pub q_begin: f64,
    pub q_end: f64,
    pub q_min: f64,
    pub q_max: f64,
    pub curve: ChargeCurve,
}

impl ExpandedNetwork {
    pub fn count(&self, kind: ArcKind) -> usize {
        self.arcs.iter().filter(|a| a.kind == kind).count()
    }

    pub fn charging_vertices(&self) -> usize {
        self.vertices.iter().filter(|v| v.charges()).count()
    }

    /// Replaces every charging price from `prices`.
    pub fn set_prices(&mut self, prices: &PriceTable) {
        for v in &mut self.vertices {
            v.price = match v.kind {
                VertexKind::Charge { station, period, .. } => prices.get(station, period),
                _ => 0.0,
            };
        }
    }

    /// Gap visits of a vertex path from start to end.
    pub fn visits_of(&self, path: &[usize]) -> Vec<GapVisit> {
        let n_gaps = match self.vertices[self.end].kind {
            VertexKind::TripEnd { trip } => trip,
            _ => 0,
        };
        let mut visits = vec![GapVisit::Direct; n_gaps];
        for &i in path {
            if let VertexKind::Charge { gap, station, period } = self.vertices[i].kind {
                visits[gap] = match visits[gap] {
                    GapVisit::Direct => GapVisit::Charge { station, first: period, last: period },
                    GapVisit::Charge { station, first, .. } => GapVisit::Charge { station, first, last: period },
                };
            }
        }
        visits
    }

    /// Graphviz rendering, one node per vertex labeled (type, station, period).
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{name}\" {{\n  rankdir=LR;\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label = match v.kind {
                VertexKind::TripStart { trip } => format!("start c{trip}"),
                VertexKind::TripEnd { trip } => format!("end c{trip}"),
                VertexKind::Charge { station, period, .. } => format!("charge s{station} t{period}"),
            };
            let _ = writeln!(out, "  n{i} [label=\"{label}\"];");
        }
        for a in &self.arcs {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{:?} {:.3}\"];", a.tail, a.head, a.kind, a.range_cost);
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the time-expanded network of `vehicle` restricted to the stations
/// in `open`, priced by `prices`, with `rules` applied by arc deletion.
pub fn build_network(
    vehicle: &Vehicle,
    tech: &TechParams,
    period_minutes: u32,
    open: &[bool],
    prices: &PriceTable,
    rules: &[GapConstraint],
) -> ExpandedNetwork {
    let mut vertices = Vec::new();
    let mut arcs = Vec::new();
    let n_trips = vehicle.trips.len();
    let mut starts = Vec::with_capacity(n_trips);
    let mut ends = Vec::with_capacity(n_trips);
    // per gap: (station, first period, vertex index of first period, window length)
    let mut windows: Vec<Vec<(usize, Period, usize, usize)>> = Vec::with_capacity(n_trips.saturating_sub(1));

    for c in 0..n_trips {
        starts.push(vertices.len());
        vertices.push(Vertex { kind: VertexKind::TripStart { trip: c }, price: 0.0 });
        ends.push(vertices.len());
        vertices.push(Vertex { kind: VertexKind::TripEnd { trip: c }, price: 0.0 });
        if c + 1 == n_trips {
            break;
        }
        let mut opts: Vec<_> = vehicle.gaps[c]
            .options
            .iter()
            .filter(|o| open.get(o.station).copied().unwrap_or(false))
            .collect();
        opts.sort_by_key(|o| o.station);
        let mut gap_windows = Vec::new();
        for o in opts {
            if let Some((first, last)) = vehicle.charging_window(c, o) {
                let base = vertices.len();
                for t in first..=last {
                    vertices.push(Vertex {
                        kind: VertexKind::Charge { gap: c, station: o.station, period: t },
                        price: prices.get(o.station, t),
                    });
                }
                gap_windows.push((o.station, first, base, (last - first + 1) as usize));
            }
        }
        windows.push(gap_windows);
    }

    for c in 0..n_trips {
        arcs.push(Arc { tail: starts[c], head: ends[c], kind: ArcKind::Trip, range_cost: vehicle.trips[c].energy });
        if c + 1 == n_trips {
            break;
        }
        let gap = &vehicle.gaps[c];
        let gap_rules: Vec<GapRule> = rules.iter().filter(|r| r.gap == c).map(|r| r.rule).collect();
        let enforced_station = gap_rules.iter().find_map(|r| match r {
            GapRule::EnforceStation(s) | GapRule::EnforceVertex(s, _) => Some(*s),
            _ => None,
        });
        if enforced_station.is_none() {
            arcs.push(Arc { tail: ends[c], head: starts[c + 1], kind: ArcKind::Direct, range_cost: gap.direct_energy });
        }
        for &(station, first, base, len) in &windows[c] {
            let opt = gap.options.iter().find(|o| o.station == station).expect("window built from this gap");
            let station_ok = enforced_station.is_none_or(|s| s == station)
                && !gap_rules.contains(&GapRule::ForbidStation(station));
            for k in 0..len {
                let t = first + k as Period;
                let v = base + k;
                let mut enter = station_ok;
                let mut leave = true;
                let mut hold_in = k > 0;
                for r in &gap_rules {
                    match *r {
                        GapRule::EnforceVertex(s, te) if s == station => {
                            if t > te {
                                enter = false;
                            }
                            if t < te {
                                leave = false;
                            }
                        }
                        GapRule::ForbidVertex(s, tf) if s == station && tf == t => {
                            enter = false;
                            hold_in = false;
                        }
                        _ => {}
                    }
                }
                if enter {
                    arcs.push(Arc { tail: ends[c], head: v, kind: ArcKind::ToCharger, range_cost: opt.energy_in });
                }
                if hold_in {
                    arcs.push(Arc { tail: v - 1, head: v, kind: ArcKind::Holdover, range_cost: 0.0 });
                }
                if leave {
                    arcs.push(Arc { tail: v, head: starts[c + 1], kind: ArcKind::FromCharger, range_cost: opt.energy_out });
                }
            }
        }
    }

    let mut out_arcs = vec![Vec::new(); vertices.len()];
    for (k, a) in arcs.iter().enumerate() {
        out_arcs[a.tail].push(k);
    }
    ExpandedNetwork {
        vertices,
        arcs,
        out_arcs,
        start: starts[0],
        end: *ends.last().expect("vehicles have at least one trip"),
        q_begin: vehicle.q_begin,
        q_end: tech.effective_end_requirement(vehicle.q_end_required),
        q_min: tech.q_min,
        q_max: tech.q_max,
        curve: ChargeCurve::new(tech, period_minutes),
    }
}

/// Convenience wrapper taking the instance-level parameters.
pub fn build_for(inst: &Instance, vehicle: &Vehicle, open: &[bool], prices: &PriceTable, rules: &[GapConstraint]) -> ExpandedNetwork {
    build_network(vehicle, &inst.tech, inst.period_minutes, open, prices, rules)
}
