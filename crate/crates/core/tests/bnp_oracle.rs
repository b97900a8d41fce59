mod common;

use chargenet::bnp::{check_feasibility, solve_relaxation, BnpOptions, CheckMode, ColumnPool, EarlyExit};
use chargenet::toys::{toy_instance, ToyConfig};
use common::{mask_to_set, oracle_max_feasible};

fn cfg(seed: u64) -> ToyConfig {
    ToyConfig {
        seed,
        n_stations: 3 + (seed % 3) as usize,
        n_vehicles: 4 + (seed % 5) as usize,
        max_charge_points: 1 + (seed % 2) as u32,
        ..Default::default()
    }
}

/// Two stations, one charger each, nine vehicles: heavy contention.
fn contended(seed: u64) -> ToyConfig {
    ToyConfig {
        seed,
        n_stations: 2,
        n_vehicles: 9,
        max_stations_per_gap: 2,
        max_gap: 5,
        ..Default::default()
    }
}

#[test]
fn contended_counts_match_oracle() {
    let opts = BnpOptions::default();
    for seed in 0..30 {
        let inst = toy_instance(&contended(seed));
        let sc = &inst.scenarios[0];
        let expected = oracle_max_feasible(&inst, sc, &mask_to_set(0b11, 2));
        for mask in [0b11u32, 0b01, 0b10] {
            let open = common::set_to_mask(&mask_to_set(mask, 2), 2);
            let expected = oracle_max_feasible(&inst, sc, &mask_to_set(mask, 2));
            let got = check_feasibility(&inst, sc, &open, CheckMode::MaxFeasibleCount, None, &opts).unwrap();
            assert_eq!((got.exact, got.feasible_count), (true, expected), "seed {seed} mask {mask:b}");
        }
        let prove = check_feasibility(&inst, sc, &[true, true], CheckMode::ProveFeasible, None, &opts).unwrap();
        assert_eq!(prove.feasible, expected == sc.vehicles.len(), "seed {seed}");
    }
}

#[test]
fn max_count_matches_assignment_oracle() {
    let opts = BnpOptions::default();
    for seed in 0..25 {
        let inst = toy_instance(&cfg(seed));
        let n = inst.stations.len();
        let sc = &inst.scenarios[0];
        for mask in [(1u32 << n) - 1, 0b1, 0b11, 0b101, (1 << n) - 2] {
            let open = common::set_to_mask(&mask_to_set(mask, n), n);
            let expected = oracle_max_feasible(&inst, sc, &mask_to_set(mask, n));
            let got = check_feasibility(&inst, sc, &open, CheckMode::MaxFeasibleCount, None, &opts).unwrap();
            assert!(got.exact, "seed {seed} mask {mask:b}");
            assert_eq!(got.feasible_count, expected, "seed {seed} mask {mask:b}");
            assert_eq!(got.infeasible_vehicles.len(), sc.vehicles.len() - expected);
            assert_eq!(got.infeasible_lower_bound, sc.vehicles.len() - expected);

            let prove = check_feasibility(&inst, sc, &open, CheckMode::ProveFeasible, None, &opts).unwrap();
            assert_eq!(prove.feasible, expected == sc.vehicles.len(), "seed {seed} mask {mask:b}");
        }
    }
}

#[test]
fn relaxation_bounds_the_unserved_count() {
    let opts = BnpOptions::default();
    for seed in 0..25 {
        let inst = toy_instance(&cfg(seed));
        let n = inst.stations.len();
        let sc = &inst.scenarios[0];
        let open = vec![true; n];
        let unserved = sc.vehicles.len() - oracle_max_feasible(&inst, sc, &mask_to_set((1 << n) - 1, n));
        let mut pool = ColumnPool::new();
        let r = solve_relaxation(&inst, sc, &open, &opts, &mut pool).unwrap();
        let bound = r.objective + r.forced_infeasible.len() as f64;
        assert!(bound <= unserved as f64 + 1e-6, "seed {seed}: {bound} > {unserved}");
        assert!(r.objective >= -1e-9);
        // one unit of convexity per active vehicle
        let mut per_vehicle = std::collections::BTreeMap::new();
        for &(v, _, x) in &r.selection {
            *per_vehicle.entry(v).or_insert(0.0) += x;
        }
        for (v, total) in per_vehicle {
            assert!((total - 1.0f64).abs() < 1e-6, "vehicle {v} sums to {total}");
        }
    }
}

#[test]
fn threshold_exits_are_correct() {
    let opts = BnpOptions::default();
    for seed in 0..20 {
        let inst = toy_instance(&cfg(seed));
        let n = inst.stations.len();
        let sc = &inst.scenarios[0];
        let mask = 0b11;
        let open = common::set_to_mask(&mask_to_set(mask, n), n);
        let unserved = sc.vehicles.len() - oracle_max_feasible(&inst, sc, &mask_to_set(mask, n));
        for threshold in 0..=sc.vehicles.len() {
            let got = check_feasibility(&inst, sc, &open, CheckMode::MaxFeasibleCount, Some(threshold), &opts).unwrap();
            match got.early_exit {
                Some(EarlyExit::Violated) => assert!(unserved > threshold, "seed {seed} t {threshold}"),
                Some(EarlyExit::Satisfied) => assert!(unserved <= threshold, "seed {seed} t {threshold}"),
                None => assert_eq!(got.infeasible_vehicles.len(), unserved),
            }
            assert!(got.infeasible_lower_bound <= unserved);
            assert!(got.infeasible_vehicles.len() >= unserved);
        }
    }
}

fn assert_valid_assignment(inst: &chargenet::Instance, sc: &chargenet::Scenario, open: &[bool], got: &chargenet::bnp::FeasibilityResult) {
    let mut usage = std::collections::BTreeMap::new();
    for (v, sched) in got.schedules.iter().enumerate() {
        assert_eq!(sched.is_none(), got.infeasible_vehicles.contains(&v), "vehicle {v}");
        if let Some(r) = sched {
            assert_eq!(r.vehicle, v);
            for &(s, t) in &r.footprint {
                assert!(open[s]);
                *usage.entry((s, t)).or_insert(0u32) += 1;
            }
        }
    }
    for ((s, t), n) in usage {
        assert!(n <= inst.stations[s].charge_points, "station {s} period {t} used {n} times");
    }
    assert_eq!(got.schedules.len(), sc.vehicles.len());
}

#[test]
fn reported_assignments_respect_capacity() {
    let mut branched = 0;
    for seed in 0..50 {
        let inst = toy_instance(&if seed < 25 { cfg(seed) } else { contended(seed) });
        let sc = &inst.scenarios[0];
        let n = inst.stations.len();
        for mask in [(1u32 << n) - 1, 0b01] {
            let open = common::set_to_mask(&mask_to_set(mask, n), n);
            for (mode, greedy) in [
                (CheckMode::MaxFeasibleCount, true),
                (CheckMode::MaxFeasibleCount, false),
                (CheckMode::ProveFeasible, true),
            ] {
                let opts = BnpOptions { trace: true, greedy_incumbent: greedy, restore_every: 0, ..Default::default() };
                let got = check_feasibility(&inst, sc, &open, mode, None, &opts).unwrap();
                let expected = oracle_max_feasible(&inst, sc, &mask_to_set(mask, n));
                assert_eq!(got.exact, true);
                if mode == CheckMode::MaxFeasibleCount {
                    assert_eq!(got.feasible_count, expected, "seed {seed} greedy {greedy}");
                }
                assert_valid_assignment(&inst, sc, &open, &got);
                assert_eq!(got.trace.len(), got.nodes);
                if got.nodes > 0 {
                    assert_eq!(got.trace[0].parent, None);
                    assert!(got.trace[1..].iter().all(|r| r.parent.is_some() && r.depth > 0));
                    branched += usize::from(got.nodes > 1);
                    let lp_of: std::collections::HashMap<usize, Option<f64>> =
                        got.trace.iter().map(|r| (r.id, r.lp_value)).collect();
                    for r in &got.trace[1..] {
                        if let (Some(child), Some(parent)) = (r.lp_value, lp_of[&r.parent.unwrap()]) {
                            assert!(child >= parent - 1e-7, "seed {seed}: child {child} < parent {parent}");
                        }
                    }
                    if let Some(root) = got.root_lp {
                        assert!(root <= (sc.vehicles.len() - expected) as f64 + 1e-6);
                    }
                }
            }
        }
    }
    assert!(branched > 0, "no toy needed branching");
}

/// Root LP against the LP over every minimal route footprint of every
/// vehicle, built directly.
#[test]
fn relaxation_equals_explicit_route_lp() {
    use chargenet_kernel::{solve_lp, LinearProgram, LpStatus, Sense};
    use chargenet_oracles::{enumerate_schedules, minimal_footprints};
    use std::collections::BTreeMap;

    for seed in 0..15 {
        let inst = toy_instance(&ToyConfig { seed: 100 + seed, n_vehicles: 5, n_stations: 3, ..Default::default() });
        let sc = &inst.scenarios[0];
        let all = mask_to_set(0b111, 3);
        let curve = inst.charge_curve();
        let gamma = |q: f64| curve.gamma(q);
        let mut lp = LinearProgram::new();
        let mut cap: BTreeMap<(usize, u32), Vec<(usize, f64)>> = BTreeMap::new();
        for (v, veh) in sc.vehicles.iter().enumerate() {
            let ov = common::oracle_vehicle(&inst, veh);
            let fps = minimal_footprints(enumerate_schedules(&ov, &all, inst.tech.q_min, inst.tech.q_max, &gamma));
            let mut conv = vec![(lp.add_var(format!("d{v}"), 1.0, 0.0, 1.0), 1.0)];
            for (k, fp) in fps.iter().enumerate() {
                let j = lp.add_var(format!("y{v}_{k}"), 0.0, 0.0, 1.0);
                conv.push((j, 1.0));
                for &cell in fp {
                    cap.entry(cell).or_default().push((j, 1.0));
                }
            }
            lp.add_row(format!("c{v}"), conv, Sense::Eq, 1.0);
        }
        for ((s, t), e) in cap {
            lp.add_row(format!("k{s}_{t}"), e, Sense::Le, inst.stations[s].charge_points as f64);
        }
        let explicit = solve_lp(&lp).unwrap();
        assert_eq!(explicit.status, LpStatus::Optimal);

        let r = solve_relaxation(&inst, sc, &[true; 3], &BnpOptions::default(), &mut ColumnPool::new()).unwrap();
        let ours = r.objective + r.forced_infeasible.len() as f64;
        assert!((ours - explicit.objective).abs() < 1e-6, "seed {seed}: {ours} vs {}", explicit.objective);
        assert!(r.lambda.iter().all(|&(_, y)| y <= 1e-9));
    }
}

#[test]
fn contended_single_charger_has_positive_lp() {
    use chargenet::model::{Gap, Point, StationOption, Trip, Vehicle};
    let mut inst = chargenet::schema::parse_instance(&chargenet::schema::instance_to_json(&toy_instance(&ToyConfig {
        seed: 1,
        n_stations: 1,
        n_vehicles: 1,
        ..Default::default()
    })))
    .unwrap();
    inst.stations[0].charge_points = 1;
    // both vehicles must charge at station 0 during period 3, its only window
    let veh = |id: &str| {
        let trip = |s, e, energy| Trip { pickup: Point::new(0.0, 0.0), dropoff: Point::new(0.0, 0.0), start: s, end: e, energy };
        Vehicle {
            id: id.into(),
            trips: vec![trip(0, 2, 10.0), trip(5, 6, 1.0)],
            q_begin: 12.0,
            q_end_required: 8.0,
            gaps: vec![Gap {
                direct_energy: 0.5,
                options: vec![StationOption {
                    station: 0,
                    travel_in_minutes: 10,
                    travel_out_minutes: 10,
                    travel_in: 1,
                    travel_out: 1,
                    energy_in: 0.5,
                    energy_out: 0.5,
                }],
            }],
        }
    };
    inst.scenarios[0].vehicles = vec![veh("a"), veh("b")];
    let sc = &inst.scenarios[0];
    let r = solve_relaxation(&inst, sc, &[true], &BnpOptions::default(), &mut ColumnPool::new()).unwrap();
    assert!(r.objective >= 1.0 - 1e-9, "{}", r.objective);
    let got = check_feasibility(&inst, sc, &[true], CheckMode::MaxFeasibleCount, None, &BnpOptions::default()).unwrap();
    assert_eq!(got.feasible_count, 1);
    assert_eq!(common::oracle_max_feasible(&inst, sc, &mask_to_set(1, 1)), 1);
}
