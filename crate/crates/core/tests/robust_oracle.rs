mod common;

use chargenet::bnp::BnpOptions;
use chargenet::robust::{
    accepted_by_mode, allowed_failures, evaluate_feasibility, solve, RobustMode, RobustOptions, SeedStrategy,
};
use chargenet::toys::{toy_instance, ToyConfig};
use chargenet::Instance;
use common::{feasibility_table, mask_cost, oracle_max_feasible, set_mask};

fn cfg(seed: u64) -> ToyConfig {
    ToyConfig {
        seed,
        n_stations: 5 + (seed % 2) as usize,
        n_vehicles: 10,
        n_scenarios: 3 + (seed % 2) as usize,
        max_charge_points: 1 + (seed % 2) as u32,
        ..Default::default()
    }
}

/// The first six toys whose all-open configuration serves every scenario,
/// with their feasibility tables.
fn instances() -> Vec<(u64, Instance, Vec<Vec<bool>>)> {
    (0..)
        .map(|seed| {
            let inst = toy_instance(&cfg(seed));
            let refs: Vec<_> = inst.scenarios.iter().collect();
            let table = feasibility_table(&inst, &refs);
            (seed, inst, table)
        })
        .filter(|(_, _, table)| table.last().unwrap().iter().all(|&ok| ok))
        .take(6)
        .collect()
}

fn cheapest(inst: &Instance, table: &[Vec<bool>], accept: impl Fn(&[bool]) -> bool) -> f64 {
    (0..table.len() as u32)
        .filter(|&m| accept(&table[m as usize]))
        .map(|m| mask_cost(inst, m))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn scenario_level_modes_match_enumeration() {
    for (seed, inst, table) in instances() {
        let opts = RobustOptions::default();

        let fsa = solve(&inst, &RobustMode::Fsa, &opts).unwrap();
        let expect = cheapest(&inst, &table, |row| row.iter().all(|&ok| ok));
        assert!((fsa.configuration.total_cost - expect).abs() < 1e-9, "seed {seed}: fsa");
        assert!(table[set_mask(&fsa.configuration.opened) as usize].iter().all(|&ok| ok));

        for alpha in [0.5, 0.75, 1.0] {
            let asa = solve(&inst, &RobustMode::Asa { alpha }, &opts).unwrap();
            let budget = allowed_failures(alpha, inst.scenarios.len());
            let expect = cheapest(&inst, &table, |row| row.iter().filter(|&&ok| !ok).count() <= budget);
            assert!((asa.configuration.total_cost - expect).abs() < 1e-9, "seed {seed}: asa {alpha}");
        }

        // every cut of the final pool is valid for the all-scenario predicate
        for cut in fsa.pool.covers() {
            for m in 0..table.len() as u32 {
                if table[m as usize].iter().all(|&ok| ok) {
                    assert!(cut.iter().any(|&s| m >> s & 1 == 1));
                }
            }
        }
    }
}

#[test]
fn vehicle_level_modes_meet_alpha_and_keep_order() {
    let bnp = BnpOptions::default();
    for (seed, inst, _) in instances() {
        let opts = RobustOptions::default();
        let n = inst.stations.len();
        let cost = |mode: &RobustMode| {
            let out = solve(&inst, mode, &opts).unwrap();
            let open = out.configuration.mask(n);
            let report = evaluate_feasibility(&inst, &open, &bnp).unwrap();
            assert!(accepted_by_mode(&inst, &out, &report), "seed {seed}: {mode:?}");
            for (z, sc) in inst.scenarios.iter().enumerate() {
                let oracle = oracle_max_feasible(&inst, sc, &out.configuration.opened);
                assert_eq!(report.scenarios[z].feasible_vehicles, oracle, "seed {seed} {mode:?} scenario {z}");
            }
            if let RobustMode::Ava { alpha, .. } = mode {
                assert!(report.min_vehicle_feasibility >= *alpha - 1e-12);
                assert_eq!(out.omega.len(), out.outer_iterations + 1);
            }
            out.configuration.total_cost
        };
        let isa = cost(&RobustMode::Isa { seed: SeedStrategy::Lowest });
        let va75 = cost(&RobustMode::Ava { alpha: 0.75, seed: SeedStrategy::Lowest });
        let va90 = cost(&RobustMode::Ava { alpha: 0.9, seed: SeedStrategy::Lowest });
        let va100 = cost(&RobustMode::Ava { alpha: 1.0, seed: SeedStrategy::Lowest });
        let fsa = cost(&RobustMode::Fsa);
        let isa_m = cost(&RobustMode::Isa { seed: SeedStrategy::Median });
        assert!(isa <= va75 + 1e-9 && isa <= isa_m + 1e-9, "seed {seed}");
        assert!(va90 <= fsa + 1e-9 && va75 <= fsa + 1e-9, "seed {seed}");
        assert!((va100 - fsa).abs() < 1e-9, "seed {seed}: {va100} vs {fsa}");
    }
}

#[test]
fn single_scenario_fsa_equals_deterministic() {
    for seed in 0..4 {
        let inst = toy_instance(&ToyConfig { seed, n_scenarios: 1, ..Default::default() });
        let opts = RobustOptions::default();
        let fsa = solve(&inst, &RobustMode::Fsa, &opts).unwrap();
        let det = solve(&inst, &RobustMode::Deterministic { scenario: 0 }, &opts).unwrap();
        assert_eq!(fsa.configuration, det.configuration);
    }
}
