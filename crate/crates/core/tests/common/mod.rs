//! Bridges from the production types to the independent oracles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chargenet::model::{Instance, Scenario, Vehicle};
use chargenet::network::ExpandedNetwork;
use chargenet_oracles::{
    fleet_max_feasible, OracleGap, OracleNetwork, OracleStationOption, OracleVehicle,
};

pub fn oracle_network(net: &ExpandedNetwork) -> OracleNetwork {
    OracleNetwork {
        vertices: net.vertices.iter().map(|v| (v.charges(), v.price)).collect(),
        arcs: net.arcs.iter().map(|a| (a.tail, a.head, a.range_cost)).collect(),
        start: net.start,
        end: net.end,
    }
}

pub fn oracle_vehicle(inst: &Instance, v: &Vehicle) -> OracleVehicle {
    OracleVehicle {
        q_begin: v.q_begin,
        q_end: inst.tech.effective_end_requirement(v.q_end_required),
        trip_energy: v.trips.iter().map(|t| t.energy).collect(),
        gaps: v
            .gaps
            .iter()
            .enumerate()
            .map(|(c, g)| OracleGap {
                prev_end: v.trips[c].end,
                next_start: v.trips[c + 1].start,
                direct_energy: g.direct_energy,
                options: g
                    .options
                    .iter()
                    .map(|o| OracleStationOption {
                        station: o.station,
                        // recomputed from minutes so the oracle does not trust
                        // the parser's rounding
                        travel_in_periods: o.travel_in_minutes.div_ceil(inst.period_minutes),
                        travel_out_periods: o.travel_out_minutes.div_ceil(inst.period_minutes),
                        energy_in: o.energy_in,
                        energy_out: o.energy_out,
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Maximum number of servable vehicles of `scenario` with stations `open`.
pub fn oracle_max_feasible(inst: &Instance, scenario: &Scenario, open: &BTreeSet<usize>) -> usize {
    let curve = inst.charge_curve();
    let gamma = move |q: f64| curve.gamma(q);
    let vehicles: Vec<OracleVehicle> = scenario.vehicles.iter().map(|v| oracle_vehicle(inst, v)).collect();
    let capacity: BTreeMap<usize, u32> =
        inst.stations.iter().enumerate().map(|(i, s)| (i, s.charge_points)).collect();
    fleet_max_feasible(&vehicles, open, &capacity, inst.tech.q_min, inst.tech.q_max, &gamma)
}

pub fn mask_to_set(mask: u32, n: usize) -> BTreeSet<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn set_to_mask(set: &BTreeSet<usize>, n: usize) -> Vec<bool> {
    (0..n).map(|i| set.contains(&i)).collect()
}

/// Cheapest station set accepted by `accept`, by exhaustive enumeration.
/// Returns the cost and every accepted set.
pub fn cheapest_accepted(
    inst: &Instance,
    mut accept: impl FnMut(&BTreeSet<usize>) -> bool,
) -> (Option<f64>, Vec<BTreeSet<usize>>) {
    let n = inst.stations.len();
    let mut best: Option<f64> = None;
    let mut accepted = Vec::new();
    for mask in 0u32..(1 << n) {
        let set = mask_to_set(mask, n);
        if accept(&set) {
            let cost: f64 = set.iter().map(|&s| inst.stations[s].cost).sum();
            if best.is_none_or(|b| cost < b) {
                best = Some(cost);
            }
            accepted.push(set);
        }
    }
    (best, accepted)
}

/// One random pricing case: a network with random vertex prices and gap
/// rules, plus a convexity dual. Prices are multiples of 1/4 so that path
/// costs are exact in floating point.
pub struct PricingCase {
    pub net: ExpandedNetwork,
    pub rho: f64,
}

pub fn pricing_case(seed: u64) -> PricingCase {
    use chargenet::network::{build_network, GapConstraint, GapRule, PriceTable};
    use chargenet::toys::{toy_instance, ToyConfig};
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let cfg = ToyConfig {
        seed,
        n_stations: 3,
        n_vehicles: 1,
        max_trips: 5,
        max_gap: 8,
        max_stations_per_gap: 3,
        ..Default::default()
    };
    let inst = toy_instance(&cfg);
    let v = &inst.scenarios[0].vehicles[0];
    let open: Vec<bool> = (0..3).map(|_| rng.random_bool(0.9)).collect();
    let mut prices = PriceTable::zero();
    for s in 0..3 {
        for t in 0..inst.horizon_periods {
            if rng.random_bool(0.5) {
                prices.set(s, t, rng.random_range(0..8) as f64 * 0.25);
            }
        }
    }
    let mut rules = Vec::new();
    if !v.gaps.is_empty() && rng.random_bool(0.3) {
        let gap = rng.random_range(0..v.gaps.len());
        let opt = &v.gaps[gap].options[rng.random_range(0..v.gaps[gap].options.len())];
        let rule = match rng.random_range(0..2) {
            0 => GapRule::ForbidStation(opt.station),
            _ => GapRule::EnforceStation(opt.station),
        };
        rules.push(GapConstraint { gap, rule });
    }
    let net = build_network(v, &inst.tech, inst.period_minutes, &open, &prices, &rules);
    PricingCase { net, rho: rng.random_range(0..12) as f64 * 0.25 }
}

/// Full-feasibility answer for every station mask and every scenario in
/// `scenarios`, by route enumeration and exhaustive assignment. Footprints
/// are enumerated once with every station open and filtered per mask, which
/// yields the same minimal sets as enumerating per mask. A mask with an
/// infeasible one-larger superset is infeasible without a search.
pub fn feasibility_table(inst: &Instance, scenarios: &[&Scenario]) -> Vec<Vec<bool>> {
    use chargenet_oracles::{all_assignable, enumerate_schedules, minimal_footprints, Footprint};
    let n = inst.stations.len();
    let curve = inst.charge_curve();
    let gamma = move |q: f64| curve.gamma(q);
    let all: BTreeSet<usize> = (0..n).collect();
    let capacity: BTreeMap<usize, u32> =
        inst.stations.iter().enumerate().map(|(i, s)| (i, s.charge_points)).collect();
    let per_scenario: Vec<Vec<Vec<Footprint>>> = scenarios
        .iter()
        .map(|z| {
            z.vehicles
                .iter()
                .map(|v| {
                    let ov = oracle_vehicle(inst, v);
                    minimal_footprints(enumerate_schedules(&ov, &all, inst.tech.q_min, inst.tech.q_max, &gamma))
                })
                .collect()
        })
        .collect();
    let full = (1u32 << n) - 1;
    let mut table = vec![vec![false; scenarios.len()]; 1 << n];
    let mut masks: Vec<u32> = (0..=full).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    for mask in masks {
        for (z, vehicles) in per_scenario.iter().enumerate() {
            let superset_fails = (0..n).any(|s| mask >> s & 1 == 0 && !table[(mask | 1 << s) as usize][z]);
            if superset_fails {
                continue;
            }
            let options: Vec<Vec<Footprint>> = vehicles
                .iter()
                .map(|fps| fps.iter().filter(|fp| fp.iter().all(|&(s, _)| mask >> s & 1 == 1)).cloned().collect())
                .collect();
            table[mask as usize][z] = all_assignable(&options, &capacity);
        }
    }
    table
}

pub fn mask_cost(inst: &Instance, mask: u32) -> f64 {
    (0..inst.stations.len()).filter(|&s| mask >> s & 1 == 1).map(|s| inst.stations[s].cost).sum()
}

pub fn set_mask(set: &BTreeSet<usize>) -> u32 {
    set.iter().map(|&s| 1u32 << s).sum()
}
