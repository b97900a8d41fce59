mod common;

use std::collections::BTreeSet;

use chargenet::generator::{
    derive_parameter_instance, generate, generate_set, inflated, sample_scenarios, select_station_sites,
    station_cost, GeneratorConfig, PoolShift,
};
use chargenet::schema::instance_to_json;
use chargenet::toys::{toy_instance, ToyConfig};
use chargenet::{GeneratorError, Instance, Point, TechParams, Vehicle};
use chargenet_oracles::{enumerate_schedules, max_soc_feasible};
use common::oracle_vehicle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        rng_seed: seed,
        n_vehicles: 30,
        n_candidate_stations: 8,
        n_scenarios: 3,
        ..Default::default()
    }
}

fn oracle_feasible(inst: &Instance, v: &Vehicle) -> bool {
    let curve = inst.charge_curve();
    let open: BTreeSet<usize> = (0..inst.stations.len()).collect();
    max_soc_feasible(&oracle_vehicle(inst, v), &open, inst.tech.q_min, inst.tech.q_max, &|q| curve.gamma(q))
}

#[test]
fn max_soc_oracle_agrees_with_schedule_enumeration() {
    for seed in 0..40 {
        let inst = toy_instance(&ToyConfig { seed, n_vehicles: 3, ..Default::default() });
        let curve = inst.charge_curve();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in &inst.scenarios[0].vehicles {
            let open: BTreeSet<usize> = (0..inst.stations.len()).filter(|_| rng.random_bool(0.6)).collect();
            for q_end in [v.q_end_required, v.q_end_required + 6.0, 30.0] {
                let mut ov = oracle_vehicle(&inst, v);
                ov.q_end = q_end;
                let gamma = |q: f64| curve.gamma(q);
                let enumerated = !enumerate_schedules(&ov, &open, 0.0, inst.tech.q_max, &gamma).is_empty();
                assert_eq!(max_soc_feasible(&ov, &open, 0.0, inst.tech.q_max, &gamma), enumerated, "seed {seed}");
            }
        }
    }
}

#[test]
fn identical_configs_give_identical_files() {
    let cfg = small(4);
    let a = generate(&cfg).unwrap();
    let b = generate(&cfg).unwrap();
    assert_eq!(instance_to_json(&a.instance), instance_to_json(&b.instance));
    assert_eq!(serde_json::to_string(&a.provenance).unwrap(), serde_json::to_string(&b.provenance).unwrap());
    let other = generate(&small(5)).unwrap();
    assert_ne!(instance_to_json(&a.instance), instance_to_json(&other.instance));
}

#[test]
fn default_scenario_count_and_round_trip() {
    let cfg = GeneratorConfig { n_vehicles: 10, n_candidate_stations: 6, ..Default::default() };
    let g = generate(&cfg).unwrap();
    assert_eq!(g.instance.scenarios.len(), 28);
    assert!(g.instance.scenarios.iter().all(|s| s.vehicles.len() == 10));
    let text = instance_to_json(&g.instance);
    assert_eq!(chargenet::schema::parse_instance(&text).unwrap(), g.instance);
}

#[test]
fn every_vehicle_is_individually_feasible() {
    for seed in 0..3 {
        let g = generate(&small(seed)).unwrap();
        let inst = &g.instance;
        for sc in &inst.scenarios {
            for v in &sc.vehicles {
                assert!(oracle_feasible(inst, v), "seed {seed}: {}/{}", sc.id, v.id);
                assert!(v.trips.windows(2).all(|w| w[0].end <= w[1].start));
                assert!(v.trips.last().unwrap().end <= inst.horizon_periods);
            }
        }
    }
}

#[test]
fn out_of_sample_sets_share_stations_only() {
    let cfg = small(2);
    let base = generate(&cfg).unwrap().instance;
    let oos = generate_set(&cfg, 1).unwrap().instance;
    assert_eq!(base.stations, oos.stations);
    assert_ne!(base.scenarios, oos.scenarios);
    assert_eq!(oos.scenarios.len(), base.scenarios.len());
}

#[test]
fn shift_statistics_match_fleet_targets() {
    let cfg = GeneratorConfig { n_scenarios: 7, ..Default::default() };
    let g = generate(&cfg).unwrap();
    let minutes = g.instance.period_minutes as f64;
    for sc in &g.instance.scenarios {
        let mut hours: Vec<f64> = sc
            .vehicles
            .iter()
            .map(|v| (v.trips.last().unwrap().end - v.trips[0].start) as f64 * minutes / 60.0)
            .collect();
        hours.sort_by(f64::total_cmp);
        let median = (hours[(hours.len() - 1) / 2] + hours[hours.len() / 2]) / 2.0;
        let trips = sc.vehicles.iter().map(|v| v.trips.len()).sum::<usize>() as f64 / sc.vehicles.len() as f64;
        assert!((median - 8.0).abs() <= 1.0, "{}: median {median}", sc.id);
        assert!((trips - 10.9).abs() <= 2.0, "{}: trips {trips}", sc.id);
        assert!(hours[0] >= 5.0 - minutes / 60.0);
    }
}

#[test]
fn kmeans_single_centroid_picks_site_nearest_the_mean() {
    let square = [Point::new(1.0, 1.0), Point::new(-1.0, 1.0), Point::new(-1.0, -1.0), Point::new(1.0, -1.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let st = select_station_sites(&square, 1, Point::new(0.0, 0.0), 2.0, 4, &mut rng).unwrap();
    assert_eq!(st[0].location, square[0]);

    for seed in 0..30 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sites: Vec<Point> =
            (0..rng.random_range(2..40)).map(|_| Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0))).collect();
        let mean = Point::new(
            sites.iter().map(|p| p.x).sum::<f64>() / sites.len() as f64,
            sites.iter().map(|p| p.y).sum::<f64>() / sites.len() as f64,
        );
        let expect = sites.iter().min_by(|a, b| a.dist(&mean).total_cmp(&b.dist(&mean))).unwrap();
        let st = select_station_sites(&sites, 1, Point::new(0.0, 0.0), 10.0, 4, &mut rng).unwrap();
        assert!(st[0].location.dist(expect) < 1e-12 || (st[0].location.dist(&mean) - expect.dist(&mean)).abs() < 1e-9);
    }
}

#[test]
fn five_of_many_sites_are_distinct_and_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let sites: Vec<Point> = (0..215).map(|_| Point::new(rng.random_range(-8.0..8.0), rng.random_range(-8.0..8.0))).collect();
    let pick = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        select_station_sites(&sites, 5, Point::new(0.0, 0.0), 12.0, 4, &mut rng).unwrap()
    };
    let a = pick(1);
    assert_eq!(a, pick(1));
    let distinct: BTreeSet<(u64, u64)> = a.iter().map(|s| (s.location.x.to_bits(), s.location.y.to_bits())).collect();
    assert_eq!(distinct.len(), 5);
    let ids: Vec<&str> = a.iter().map(|s| s.id.as_str()).collect();
    assert_eq!(ids, ["s0", "s1", "s2", "s3", "s4"]);
    for s in &a {
        assert!(s.cost > 10.0 && s.cost <= 50.0);
        assert!((s.cost - station_cost(s.location.dist(&Point::new(0.0, 0.0)) / 12.0).unwrap()).abs() < 1e-12);
    }
    assert!(matches!(
        select_station_sites(&sites[..3], 5, Point::new(0.0, 0.0), 12.0, 4, &mut ChaCha8Rng::seed_from_u64(0)),
        Err(GeneratorError::TooFewSites { k: 5, available: 3 })
    ));
}

#[test]
fn full_quota_scenario_equals_pool() {
    let inst = toy_instance(&ToyConfig { seed: 3, n_vehicles: 12, ..Default::default() });
    let pool: Vec<PoolShift> = inst.scenarios[0]
        .vehicles
        .iter()
        .enumerate()
        .map(|(i, v)| PoolShift { vehicle: v.clone(), start_bin: i % 6, day_group: 0 })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let sc = sample_scenarios(&pool, pool.len(), 1, &mut rng).unwrap();
    assert_eq!(sc[0].vehicles, inst.scenarios[0].vehicles);

    // a stratum that is too small for its quota is an error
    let lopsided: Vec<PoolShift> = pool.iter().cloned().map(|p| PoolShift { start_bin: 0, ..p }).collect();
    let err = sample_scenarios(&lopsided[..5], 6, 1, &mut rng).unwrap_err();
    assert!(matches!(err, GeneratorError::EmptyStratum { bin: 0, day: 0, available: 5, quota: 6 }));
}

#[test]
fn scenarios_follow_stratum_proportions() {
    let g = generate(&small(8)).unwrap();
    let n = g.instance.scenarios[0].vehicles.len();
    assert_eq!(n, 30);
    let ids: BTreeSet<&str> = g.instance.scenarios[0].vehicles.iter().map(|v| v.id.as_str()).collect();
    assert_eq!(ids.len(), n);
    assert!(ids.iter().all(|id| id.starts_with("d0-")));
    assert!(g.instance.scenarios[1].vehicles.iter().all(|v| v.id.starts_with("d1-")));
}

#[test]
fn derive_with_master_tech_removes_nothing() {
    let mut cfg = small(6);
    cfg.tech = inflated(&TechParams::default());
    let master = generate(&cfg).unwrap().instance;
    let (derived, removed) = derive_parameter_instance(&master, &cfg.tech);
    assert!(removed.is_empty());
    assert_eq!(derived, master);
}

#[test]
fn derive_with_empty_battery_removes_all_consumers() {
    let master = generate(&small(6)).unwrap().instance;
    let tech = TechParams { q_max: 1e-9, ..master.tech.clone() };
    let (derived, removed) = derive_parameter_instance(&master, &tech);
    let consumers: Vec<String> = master
        .scenarios
        .iter()
        .flat_map(|s| s.vehicles.iter().filter(|v| v.trips.iter().any(|t| t.energy > 0.0)).map(move |v| format!("{}/{}", s.id, v.id)))
        .collect();
    assert_eq!(removed, consumers);
    assert!(derived.scenarios.is_empty());
}

#[test]
fn derived_removal_matches_single_vehicle_oracle() {
    let mut cfg = GeneratorConfig { rng_seed: 11, n_vehicles: 50, n_candidate_stations: 10, n_scenarios: 1, ..Default::default() };
    cfg.tech = inflated(&TechParams::default());
    let master = generate(&cfg).unwrap().instance;
    for tech in [
        TechParams { q_max: master.tech.q_max / 2.0, ..master.tech.clone() },
        TechParams::default(),
        TechParams { q_max: master.tech.q_max / 4.0, ..master.tech.clone() },
    ] {
        let (derived, removed) = derive_parameter_instance(&master, &tech);
        let probe = Instance { tech: tech.clone(), ..master.clone() };
        let mut expect = Vec::new();
        for sc in &master.scenarios {
            for v in &sc.vehicles {
                let mut w = v.clone();
                w.q_begin *= tech.q_max / master.tech.q_max;
                w.q_end_required *= tech.q_max / master.tech.q_max;
                if !oracle_feasible(&probe, &w) {
                    expect.push(format!("{}/{}", sc.id, v.id));
                }
            }
        }
        assert_eq!(removed, expect, "q_max {}", tech.q_max);
        let kept: usize = derived.scenarios.iter().map(|s| s.vehicles.len()).sum();
        assert_eq!(kept + removed.len(), 50);
        if tech.q_max < 20.0 {
            assert!(!removed.is_empty());
        }
    }
}

#[test]
fn invalid_configs_are_rejected() {
    for cfg in [
        GeneratorConfig { n_scenarios: 0, ..Default::default() },
        GeneratorConfig { n_vehicles: 0, ..Default::default() },
        GeneratorConfig { detour_factor: 0.5, ..Default::default() },
        GeneratorConfig { shift_hours_max: 30.0, ..Default::default() },
    ] {
        assert!(matches!(cfg.validate(), Err(GeneratorError::Config(_))), "{cfg:?}");
        assert!(generate(&cfg).is_err());
    }
}

proptest! {
    #[test]
    fn station_cost_strictly_decreasing(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        prop_assume!(a < b);
        prop_assert!(station_cost(a).unwrap() > station_cost(b).unwrap());
    }

    #[test]
    fn station_cost_stays_in_band(d in 0.0f64..=1.0) {
        let c = station_cost(d).unwrap();
        prop_assert!((10.0..=50.0).contains(&c));
    }
}
