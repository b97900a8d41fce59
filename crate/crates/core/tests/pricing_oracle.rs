mod common;

use chargenet::pricing::{price_vehicle, PricingOptions};
use chargenet_oracles::{enumerate_paths, pareto_front};
use common::{oracle_network, pricing_case};

const CASES: u64 = 200;

fn check(seed: u64) -> Result<(), String> {
    let case = pricing_case(seed);
    let net = &case.net;
    let gamma = |q: f64| net.curve.gamma(q);
    let paths = enumerate_paths(&oracle_network(net), net.q_begin, net.q_min, net.q_max, net.q_end, &gamma);
    let front = pareto_front(&paths.iter().map(|p| (p.cost, p.soc)).collect::<Vec<_>>());

    let opts = PricingOptions { max_routes: usize::MAX, rc_tolerance: 1e-6 };
    let out = price_vehicle(net, 0, case.rho, &opts);
    let labels: Vec<(f64, f64)> = out.end_labels.iter().map(|l| (l.cost, l.soc)).collect();
    if labels.len() != front.len() {
        return Err(format!("seed {seed}: {} labels vs {} front points", labels.len(), front.len()));
    }
    for (a, b) in labels.iter().zip(&front) {
        if a.0 != b.0 || (a.1 - b.1).abs() > 1e-9 {
            return Err(format!("seed {seed}: label {a:?} vs oracle {b:?}"));
        }
    }
    if out.feasible != !paths.is_empty() {
        return Err(format!("seed {seed}: feasibility mismatch"));
    }

    let expected: Vec<(f64, f64)> = front.iter().copied().filter(|p| -case.rho + p.0 < -1e-6).collect();
    if out.routes.len() != expected.len() {
        return Err(format!("seed {seed}: {} routes vs {} expected", out.routes.len(), expected.len()));
    }
    for (r, e) in out.routes.iter().zip(&expected) {
        if r.reduced_cost != -case.rho + e.0 || (r.end_soc - e.1).abs() > 1e-9 {
            return Err(format!("seed {seed}: route ({}, {}) vs {e:?}", r.reduced_cost, r.end_soc));
        }
        // the backtracked path must itself be one of the enumerated paths
        if !paths.iter().any(|p| p.vertices == r.vertices && p.cost == e.0 && (p.soc - e.1).abs() <= 1e-9) {
            return Err(format!("seed {seed}: route path not found by the oracle"));
        }
    }
    Ok(())
}

#[test]
fn pricing_matches_path_enumeration() {
    let failures: Vec<String> = (0..CASES).filter_map(|s| check(s).err()).collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn pricing_cases_are_nontrivial() {
    let mut with_routes = 0;
    let mut infeasible = 0;
    for s in 0..CASES {
        let case = pricing_case(s);
        let out = price_vehicle(&case.net, 0, case.rho, &PricingOptions::default());
        with_routes += usize::from(!out.routes.is_empty());
        infeasible += usize::from(!out.feasible);
        assert!(case.net.vertices.len() <= 2 * 5 + 3 * 4 * 48);
    }
    assert!(with_routes > 20, "{with_routes}");
    assert!(infeasible < CASES as usize);
}
