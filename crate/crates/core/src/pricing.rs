//! Label-setting pricing over an [`ExpandedNetwork`].
//!
//! Labels carry the accumulated charging price `C` (a sum of non-negative
//! prices) and the SOC `R`. Since vertex indices are topologically ordered,
//! one sweep over the vertices settles every label.

use crate::model::{Instance, Period, Vehicle};
use crate::network::{build_network, ExpandedNetwork, GapVisit, PriceTable, VertexKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label {
    pub vertex: usize,
    pub cost: f64,
    pub soc: f64,
    /// Index of the predecessor label in the pricing arena.
    pub pred: Option<usize>,
}

/// A completed vehicle schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub vehicle: usize,
    pub vertices: Vec<usize>,
    pub visits: Vec<GapVisit>,
    /// Sorted station-period pairs occupied by the route.
    pub footprint: Vec<(usize, Period)>,
    pub reduced_cost: f64,
    pub end_soc: f64,
}

/// Extends `label` along arc `arc` of `net`; `None` if the SOC floor is
/// violated on arrival.
pub fn extend(label: &Label, arc: usize, net: &ExpandedNetwork) -> Option<Label> {
    let a = &net.arcs[arc];
    let v = &net.vertices[label.vertex];
    let base = if v.charges() {
        (label.soc + net.curve.gamma(label.soc)).min(net.q_max)
    } else {
        label.soc
    };
    let soc = base - a.range_cost;
    if soc < net.q_min {
        return None;
    }
    Some(Label {
        vertex: a.head,
        cost: label.cost + v.price,
        soc,
        pred: None,
    })
}

/// Weak dominance: `a` is at least as cheap and at least as charged as `b`.
pub fn dominates(a: &Label, b: &Label) -> bool {
    a.cost <= b.cost && a.soc >= b.soc
}

#[derive(Debug, Clone)]
pub struct PricingOptions {
    pub max_routes: usize,
    pub rc_tolerance: f64,
}

impl Default for PricingOptions {
    fn default() -> Self {
        Self {
            max_routes: 10,
            rc_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PricingOutcome {
    /// Some end label meets the end-of-shift SOC requirement.
    pub feasible: bool,
    /// Non-dominated end labels meeting the requirement, by ascending cost.
    pub end_labels: Vec<Label>,
    /// Routes with reduced cost below `-rc_tolerance`, best first.
    pub routes: Vec<Route>,
    /// Smallest reduced cost over all feasible end labels.
    pub min_reduced_cost: Option<f64>,
    /// Route behind the first end label (the cheapest one), for callers that
    /// need any feasible schedule.
    pub best_route: Option<Route>,
    pub labels_created: usize,
}

struct Arena {
    labels: Vec<Label>,
    at: Vec<Vec<usize>>,
}

impl Arena {
    /// Inserts unless dominated; removes labels the newcomer dominates.
    fn insert(&mut self, l: Label) -> bool {
        let bucket = &self.at[l.vertex];
        if bucket.iter().any(|&k| dominates(&self.labels[k], &l)) {
            return false;
        }
        let labels = &self.labels;
        self.at[l.vertex].retain(|&k| !dominates(&l, &labels[k]));
        self.labels.push(l);
        let k = self.labels.len() - 1;
        self.at[l.vertex].push(k);
        true
    }

    fn backtrack(&self, mut k: usize) -> Vec<usize> {
        let mut path = vec![self.labels[k].vertex];
        while let Some(p) = self.labels[k].pred {
            path.push(self.labels[p].vertex);
            k = p;
        }
        path.reverse();
        path
    }
}

fn route_from(net: &ExpandedNetwork, vehicle: usize, path: Vec<usize>, rc: f64, end_soc: f64) -> Route {
    let footprint = path
        .iter()
        .filter_map(|&i| match net.vertices[i].kind {
            VertexKind::Charge { station, period, .. } => Some((station, period)),
            _ => None,
        })
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    Route {
        vehicle,
        visits: net.visits_of(&path),
        vertices: path,
        footprint,
        reduced_cost: rc,
        end_soc,
    }
}

/// Solves the pricing problem of one vehicle whose convexity dual is `rho`.
pub fn price_vehicle(net: &ExpandedNetwork, vehicle: usize, rho: f64, opts: &PricingOptions) -> PricingOutcome {
    let n = net.vertices.len();
    let mut arena = Arena {
        labels: Vec::new(),
        at: vec![Vec::new(); n],
    };
    if net.q_begin >= net.q_min {
        arena.insert(Label { vertex: net.start, cost: 0.0, soc: net.q_begin, pred: None });
    }
    for v in 0..n {
        if v == net.end {
            continue;
        }
        let here = arena.at[v].clone();
        for k in here {
            // a label may have been dominated after it was queued
            if !arena.at[v].contains(&k) {
                continue;
            }
            let label = arena.labels[k];
            for &a in &net.out_arcs[v] {
                if let Some(mut next) = extend(&label, a, net) {
                    next.pred = Some(k);
                    arena.insert(next);
                }
            }
        }
    }

    let mut ends: Vec<usize> = arena.at[net.end]
        .iter()
        .copied()
        .filter(|&k| arena.labels[k].soc >= net.q_end)
        .collect();
    ends.sort_by(|&a, &b| {
        let (la, lb) = (&arena.labels[a], &arena.labels[b]);
        la.cost.total_cmp(&lb.cost).then(lb.soc.total_cmp(&la.soc)).then(a.cmp(&b))
    });
    let end_labels: Vec<Label> = ends.iter().map(|&k| arena.labels[k]).collect();
    let min_rc = end_labels.first().map(|l| -rho + l.cost);
    let best_route = ends
        .first()
        .map(|&k| route_from(net, vehicle, arena.backtrack(k), -rho + arena.labels[k].cost, arena.labels[k].soc));
    let routes = ends
        .iter()
        .filter(|&&k| -rho + arena.labels[k].cost < -opts.rc_tolerance)
        .take(opts.max_routes)
        .map(|&k| route_from(net, vehicle, arena.backtrack(k), -rho + arena.labels[k].cost, arena.labels[k].soc))
        .collect();
    PricingOutcome {
        feasible: !end_labels.is_empty(),
        end_labels,
        routes,
        min_reduced_cost: min_rc,
        best_route,
        labels_created: arena.labels.len(),
    }
}

/// Whether `vehicle` can complete its shift with the stations in `open`,
/// ignoring charger capacities.
pub fn vehicle_feasible(inst: &Instance, vehicle: &Vehicle, open: &[bool]) -> bool {
    let net = build_network(vehicle, &inst.tech, inst.period_minutes, open, &PriceTable::zero(), &[]);
    price_vehicle(&net, 0, 0.0, &PricingOptions::default()).feasible
}
