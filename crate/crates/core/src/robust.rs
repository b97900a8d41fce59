//! Scenario-robust station selection: all-scenario, α-scenario and
//! α-vehicle acceptance, the independent-scenario benchmark and feasibility
//! metrics over scenario sets.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bnp::{check_feasibility, BnpOptions, CheckMode, EarlyExit};
use crate::ccp::{
    cutting_plane, deterministic_with, require_individually_feasible, CutPool, CuttingPlaneOptions,
    DeterministicResult, Predicate,
};
use crate::checker::Checker;
use crate::error::SolveError;
use crate::model::{Instance, Scenario, StationConfiguration};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedStrategy {
    #[serde(rename = "l")]
    Lowest,
    #[serde(rename = "m")]
    Median,
}

impl SeedStrategy {
    pub fn letter(self) -> &'static str {
        match self {
            SeedStrategy::Lowest => "L",
            SeedStrategy::Median => "M",
        }
    }

    /// Position in a cost-ascending ranking of `n` entries; lower median for
    /// even `n`.
    pub fn position(self, n: usize) -> usize {
        match self {
            SeedStrategy::Lowest => 0,
            SeedStrategy::Median => n.saturating_sub(1) / 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RobustMode {
    Deterministic { scenario: usize },
    Fsa,
    Asa { alpha: f64 },
    Ava { alpha: f64, seed: SeedStrategy },
    Isa { seed: SeedStrategy },
}

fn percent(alpha: f64) -> String {
    let p = alpha * 100.0;
    if (p - p.round()).abs() < 1e-9 {
        format!("{}", p.round() as i64)
    } else {
        format!("{p}")
    }
}

impl RobustMode {
    /// Short run name such as `95-VA-L`, `50-SA`, `ISA-M` or `FSA`.
    pub fn run_name(&self, inst: &Instance) -> String {
        match self {
            RobustMode::Deterministic { scenario } => format!("DET-{}", inst.scenarios[*scenario].id),
            RobustMode::Fsa => "FSA".into(),
            RobustMode::Asa { alpha } => format!("{}-SA", percent(*alpha)),
            RobustMode::Ava { alpha, seed } => format!("{}-VA-{}", percent(*alpha), seed.letter()),
            RobustMode::Isa { seed } => format!("ISA-{}", seed.letter()),
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            RobustMode::Deterministic { .. } => "det",
            RobustMode::Fsa => "fsa",
            RobustMode::Asa { .. } => "asa",
            RobustMode::Ava { .. } => "ava",
            RobustMode::Isa { .. } => "isa",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            RobustMode::Asa { alpha } | RobustMode::Ava { alpha, .. } => Some(*alpha),
            _ => None,
        }
    }
}

/// Number of failures (scenarios or vehicles) tolerated out of `n` at level
/// `alpha`, rounded down.
pub fn allowed_failures(alpha: f64, n: usize) -> usize {
    ((1.0 - alpha) * n as f64 + 1e-9).floor().max(0.0) as usize
}

#[derive(Debug, Clone)]
pub struct RobustOptions {
    pub bnp: BnpOptions,
    pub cp: CuttingPlaneOptions,
    /// Cap on α-VA outer iterations.
    pub max_outer: usize,
}

impl Default for RobustOptions {
    fn default() -> Self {
        Self {
            bnp: BnpOptions::default(),
            cp: CuttingPlaneOptions::default(),
            max_outer: 1_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedScenario {
    pub scenario: String,
    pub cost: f64,
    pub opened: Vec<String>,
}

/// One member of the α-VA full-feasibility set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaMember {
    pub source: String,
    /// `full`, `partial` (sampled unserved vehicles) or `reduced` (the source
    /// minus its tolerated failures).
    pub kind: String,
    pub vehicles: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RobustOutcome {
    pub mode: RobustMode,
    pub configuration: StationConfiguration,
    pub pool: CutPool,
    pub ranking: Vec<RankedScenario>,
    pub omega: Vec<OmegaMember>,
    pub outer_iterations: usize,
    pub cutting_plane_iterations: usize,
    pub oracle_calls: usize,
    /// Wall time per phase, in order.
    pub phases: Vec<(String, Duration)>,
}

fn mask_of(opened: &BTreeSet<usize>, n: usize) -> Vec<bool> {
    (0..n).map(|s| opened.contains(&s)).collect()
}

fn with_seed(cp: &CuttingPlaneOptions, salt: u64) -> CuttingPlaneOptions {
    CuttingPlaneOptions {
        seed: cp.seed.wrapping_add(salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        ..cp.clone()
    }
}

pub fn solve(inst: &Instance, mode: &RobustMode, opts: &RobustOptions) -> Result<RobustOutcome, SolveError> {
    match mode {
        RobustMode::Deterministic { scenario } => solve_deterministic(inst, *scenario, opts),
        RobustMode::Fsa => solve_fsa(inst, opts),
        RobustMode::Asa { alpha } => solve_asa(inst, *alpha, opts),
        RobustMode::Ava { alpha, seed } => solve_ava(inst, *alpha, *seed, opts),
        RobustMode::Isa { seed } => solve_isa(inst, *seed, opts),
    }
}

pub fn solve_deterministic(inst: &Instance, z: usize, opts: &RobustOptions) -> Result<RobustOutcome, SolveError> {
    let started = Instant::now();
    require_individually_feasible(inst, &[z])?;
    let checker = Checker::new(inst, opts.bnp.clone());
    let res = deterministic_with(&checker, z, &opts.cp, None)?;
    Ok(RobustOutcome {
        mode: RobustMode::Deterministic { scenario: z },
        cutting_plane_iterations: res.outcome.iterations.len(),
        configuration: res.configuration,
        pool: res.pool,
        ranking: Vec::new(),
        omega: Vec::new(),
        outer_iterations: 0,
        oracle_calls: checker.calls(),
        phases: vec![("cutting plane".into(), started.elapsed())],
    })
}

/// Cheapest configuration under which every vehicle of every scenario can be
/// served. Scenarios are checked in order and the check stops at the first
/// failure.
pub fn solve_fsa(inst: &Instance, opts: &RobustOptions) -> Result<RobustOutcome, SolveError> {
    let started = Instant::now();
    let all: Vec<usize> = (0..inst.scenarios.len()).collect();
    require_individually_feasible(inst, &all)?;
    let checker = Checker::new(inst, opts.bnp.clone());
    let refs: Vec<&Scenario> = inst.scenarios.iter().collect();
    let mut pool = CutPool::new();
    let mut pred = Predicate::new(|open: &[bool]| Ok(checker.first_infeasible(&refs, open)?.is_none()));
    let out = cutting_plane(&inst.stations, &mut pool, &mut pred, &opts.cp)?;
    drop(pred);
    Ok(RobustOutcome {
        mode: RobustMode::Fsa,
        configuration: StationConfiguration::new(out.opened, inst)?,
        pool,
        ranking: Vec::new(),
        omega: Vec::new(),
        outer_iterations: 0,
        cutting_plane_iterations: out.iterations.len(),
        oracle_calls: checker.calls(),
        phases: vec![("cutting plane".into(), started.elapsed())],
    })
}

/// Cheapest configuration under which at most `⌊(1−α)|Z|⌋` scenarios have an
/// unservable vehicle.
pub fn solve_asa(inst: &Instance, alpha: f64, opts: &RobustOptions) -> Result<RobustOutcome, SolveError> {
    let started = Instant::now();
    let budget = allowed_failures(alpha, inst.scenarios.len());
    let checker = Checker::new(inst, opts.bnp.clone());
    let mut pool = CutPool::new();
    let mut pred = Predicate::new(|open: &[bool]| {
        let mut failed = 0;
        for z in &inst.scenarios {
            if !checker.prove(z, open)? {
                failed += 1;
                if failed > budget {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    });
    let out = cutting_plane(&inst.stations, &mut pool, &mut pred, &opts.cp)?;
    drop(pred);
    Ok(RobustOutcome {
        mode: RobustMode::Asa { alpha },
        configuration: StationConfiguration::new(out.opened, inst)?,
        pool,
        ranking: Vec::new(),
        omega: Vec::new(),
        outer_iterations: 0,
        cutting_plane_iterations: out.iterations.len(),
        oracle_calls: checker.calls(),
        phases: vec![("cutting plane".into(), started.elapsed())],
    })
}

/// Deterministic solve of every scenario, cost ascending with ties by
/// scenario order. Scenarios with a vehicle that is infeasible even with all
/// stations open are left out.
fn rank_scenarios(checker: &Checker<'_>, opts: &RobustOptions) -> Result<Vec<(usize, DeterministicResult)>, SolveError> {
    let inst = checker.inst;
    let solved: Vec<Result<Option<(usize, DeterministicResult)>, SolveError>> = (0..inst.scenarios.len())
        .into_par_iter()
        .map(|z| {
            if let Err(e) = require_individually_feasible(inst, &[z]) {
                log::warn!("{e}; scenario left out of the ranking");
                return Ok(None);
            }
            Ok(Some((z, deterministic_with(checker, z, &with_seed(&opts.cp, z as u64), None)?)))
        })
        .collect();
    let mut ranking = Vec::new();
    for r in solved {
        if let Some(entry) = r? {
            ranking.push(entry);
        }
    }
    if ranking.is_empty() {
        return Err(SolveError::Precondition("no scenario is individually feasible".into()));
    }
    ranking.sort_by(|a, b| {
        a.1.configuration
            .total_cost
            .total_cmp(&b.1.configuration.total_cost)
            .then(a.0.cmp(&b.0))
    });
    Ok(ranking)
}

fn ranking_report(inst: &Instance, ranking: &[(usize, DeterministicResult)]) -> Vec<RankedScenario> {
    ranking
        .iter()
        .map(|(z, r)| RankedScenario {
            scenario: inst.scenarios[*z].id.clone(),
            cost: r.configuration.total_cost,
            opened: r.configuration.ids(inst).into_iter().map(String::from).collect(),
        })
        .collect()
}

/// Independent-scenario benchmark: the deterministic solution of the lowest
/// or median cost scenario.
pub fn solve_isa(inst: &Instance, seed: SeedStrategy, opts: &RobustOptions) -> Result<RobustOutcome, SolveError> {
    let started = Instant::now();
    let checker = Checker::new(inst, opts.bnp.clone());
    let ranking = rank_scenarios(&checker, opts)?;
    let (_, picked) = &ranking[seed.position(ranking.len())];
    Ok(RobustOutcome {
        mode: RobustMode::Isa { seed },
        configuration: picked.configuration.clone(),
        pool: picked.pool.clone(),
        ranking: ranking_report(inst, &ranking),
        omega: Vec::new(),
        outer_iterations: 0,
        cutting_plane_iterations: ranking.iter().map(|(_, r)| r.outcome.iterations.len()).sum(),
        oracle_calls: checker.calls(),
        phases: vec![("scenario ranking".into(), started.elapsed())],
    })
}

struct Violation {
    z: usize,
    /// Share of the scenario's vehicles provably unservable.
    level: f64,
}

/// α-vehicle adversarial sampling. Starts from the seed scenario's
/// deterministic solution and its cuts, then repeatedly adds (part of) the
/// least violated scenario to the full-feasibility set until every scenario
/// serves at least an α share of its vehicles.
pub fn solve_ava(
    inst: &Instance,
    alpha: f64,
    seed: SeedStrategy,
    opts: &RobustOptions,
) -> Result<RobustOutcome, SolveError> {
    let started = Instant::now();
    let n = inst.stations.len();
    let checker = Checker::new(inst, opts.bnp.clone());
    let ranking = rank_scenarios(&checker, opts)?;
    let (z0, seed_res) = &ranking[seed.position(ranking.len())];
    let mut phases = vec![("scenario ranking".to_string(), started.elapsed())];

    let mut pool = seed_res.pool.clone();
    let mut opened = seed_res.configuration.opened.clone();
    let mut omega: Vec<Scenario> = vec![inst.scenarios[*z0].clone()];
    let mut members = vec![OmegaMember {
        source: inst.scenarios[*z0].id.clone(),
        kind: "full".into(),
        vehicles: inst.scenarios[*z0].vehicles.iter().map(|v| v.id.clone()).collect(),
    }];
    let mut rng = ChaCha8Rng::seed_from_u64(opts.cp.seed ^ 0x5A17_0000_0000_0001);
    let mut cp_iterations = seed_res.outcome.iterations.len();
    let mut outer = 0;
    let adversarial = Instant::now();
    loop {
        if outer > 0 {
            let refs: Vec<&Scenario> = omega.iter().collect();
            let mut pred = Predicate::new(|open: &[bool]| Ok(checker.first_infeasible(&refs, open)?.is_none()));
            let out = cutting_plane(&inst.stations, &mut pool, &mut pred, &with_seed(&opts.cp, 1_000 + outer as u64))?;
            cp_iterations += out.iterations.len();
            opened = out.opened;
        }
        let open = mask_of(&opened, n);

        let sweep: Vec<Result<Option<Violation>, SolveError>> = (0..inst.scenarios.len())
            .into_par_iter()
            .map(|z| {
                let sc = &inst.scenarios[z];
                let budget = allowed_failures(alpha, sc.vehicles.len());
                let r = checker.check(sc, &open, CheckMode::MaxFeasibleCount, Some(budget))?;
                let within = match r.early_exit {
                    Some(EarlyExit::Satisfied) => true,
                    Some(EarlyExit::Violated) => false,
                    None => r.infeasible_vehicles.len() <= budget,
                };
                Ok((!within).then(|| Violation {
                    z,
                    level: r.infeasible_lower_bound.max(budget + 1) as f64 / sc.vehicles.len() as f64,
                }))
            })
            .collect();
        let mut violations = Vec::new();
        for v in sweep {
            if let Some(v) = v? {
                violations.push(v);
            }
        }
        let Some(worst) = violations.iter().min_by(|a, b| a.level.total_cmp(&b.level).then(a.z.cmp(&b.z))) else {
            break;
        };
        outer += 1;
        if outer > opts.max_outer {
            return Err(SolveError::IterationLimit(opts.max_outer));
        }
        if opts.cp.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SolveError::TimeLimit);
        }

        let zs = &inst.scenarios[worst.z];
        let budget = allowed_failures(alpha, zs.vehicles.len());
        let exact = checker.check(zs, &open, CheckMode::MaxFeasibleCount, None)?;
        let unserved = exact.infeasible_vehicles.clone();
        if unserved.len() <= budget {
            return Err(SolveError::Internal(format!(
                "scenario {} flagged as violated but serves all but {} vehicles",
                zs.id,
                unserved.len()
            )));
        }
        let sample: BTreeSet<usize> = unserved
            .choose_multiple(&mut rng, unserved.len() - budget)
            .copied()
            .collect();
        let build = |keep: &BTreeSet<usize>, kind: &str| {
            let sc = Scenario {
                // column pools are keyed by id and index vehicles by position
                id: format!("{}~{outer}{}", zs.id, &kind[..1]),
                vehicles: keep.iter().map(|&v| zs.vehicles[v].clone()).collect(),
                weight: 0.0,
            };
            let m = OmegaMember {
                source: zs.id.clone(),
                kind: kind.into(),
                vehicles: sc.vehicles.iter().map(|v| v.id.clone()).collect(),
            };
            (sc, m)
        };
        let duplicate = |m: &OmegaMember| members.iter().any(|x| x.source == m.source && x.vehicles == m.vehicles);

        let (mut sc, mut member) = build(&sample, "partial");
        if duplicate(&member) || checker.prove(&sc, &open)? {
            // the sampled vehicles fit on their own, so the sample would not
            // cut off the current configuration; keep every vehicle except
            // the tolerated number of unserved ones instead
            let dropped: BTreeSet<usize> = unserved.iter().copied().filter(|v| !sample.contains(v)).collect();
            let keep: BTreeSet<usize> = (0..zs.vehicles.len()).filter(|v| !dropped.contains(v)).collect();
            (sc, member) = build(&keep, "reduced");
            if duplicate(&member) || checker.prove(&sc, &open)? {
                (sc, member) = build(&(0..zs.vehicles.len()).collect(), "full");
                sc.id = zs.id.clone();
                if duplicate(&member) {
                    return Err(SolveError::Internal(format!("scenario {} already required in full", zs.id)));
                }
            }
        }
        log::debug!(
            "adversarial iteration {outer}: scenario {} at level {:.4}, adding {} member with {} vehicles",
            zs.id,
            worst.level,
            member.kind,
            member.vehicles.len()
        );
        omega.push(sc);
        members.push(member);
    }
    phases.push(("adversarial loop".into(), adversarial.elapsed()));
    Ok(RobustOutcome {
        mode: RobustMode::Ava { alpha, seed },
        configuration: StationConfiguration::new(opened, inst)?,
        pool,
        ranking: ranking_report(inst, &ranking),
        omega: members,
        outer_iterations: outer,
        cutting_plane_iterations: cp_iterations,
        oracle_calls: checker.calls(),
        phases,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFeasibility {
    pub scenario: String,
    pub vehicles: usize,
    pub feasible_vehicles: usize,
    /// The count is proven optimal; otherwise it is a lower bound.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub scenarios: Vec<ScenarioFeasibility>,
    pub mean_vehicle_feasibility: f64,
    pub min_vehicle_feasibility: f64,
    pub scenario_feasibility: f64,
}

impl FeasibilityReport {
    pub fn from_counts(scenarios: Vec<ScenarioFeasibility>) -> Self {
        let ratio = |s: &ScenarioFeasibility| {
            if s.vehicles == 0 {
                1.0
            } else {
                s.feasible_vehicles as f64 / s.vehicles as f64
            }
        };
        let k = scenarios.len().max(1) as f64;
        let mean = scenarios.iter().map(ratio).sum::<f64>() / k;
        let min = scenarios.iter().map(ratio).fold(1.0, f64::min);
        let full = scenarios.iter().filter(|s| s.feasible_vehicles == s.vehicles).count() as f64 / k;
        Self {
            scenarios,
            mean_vehicle_feasibility: mean,
            min_vehicle_feasibility: min,
            scenario_feasibility: full,
        }
    }

    pub fn feasible_scenarios(&self) -> usize {
        self.scenarios.iter().filter(|s| s.feasible_vehicles == s.vehicles).count()
    }

    /// Every scenario serves at least `alpha` of its vehicles, in counts.
    pub fn meets_vehicle_level(&self, alpha: f64) -> bool {
        self.scenarios
            .iter()
            .all(|s| s.vehicles - s.feasible_vehicles <= allowed_failures(alpha, s.vehicles))
    }

    /// At most `⌊(1−α)|Z|⌋` scenarios have an unserved vehicle.
    pub fn meets_scenario_level(&self, alpha: f64) -> bool {
        self.scenarios.len() - self.feasible_scenarios() <= allowed_failures(alpha, self.scenarios.len())
    }
}

/// Maximum servable vehicle count of every scenario of `inst` under `open`.
pub fn evaluate_feasibility(inst: &Instance, open: &[bool], bnp: &BnpOptions) -> Result<FeasibilityReport, SolveError> {
    let counts: Vec<Result<ScenarioFeasibility, SolveError>> = inst
        .scenarios
        .par_iter()
        .map(|sc| {
            let r = check_feasibility(inst, sc, open, CheckMode::MaxFeasibleCount, None, bnp)?;
            Ok(ScenarioFeasibility {
                scenario: sc.id.clone(),
                vehicles: sc.vehicles.len(),
                feasible_vehicles: r.feasible_count,
                exact: r.exact,
            })
        })
        .collect();
    Ok(FeasibilityReport::from_counts(counts.into_iter().collect::<Result<_, _>>()?))
}

/// Whether `report` (on the optimization set) satisfies the acceptance rule
/// of the mode that produced `outcome`.
pub fn accepted_by_mode(inst: &Instance, outcome: &RobustOutcome, report: &FeasibilityReport) -> bool {
    let by_id = |id: &str| report.scenarios.iter().find(|s| s.scenario == id);
    let full = |id: &str| by_id(id).is_some_and(|s| s.feasible_vehicles == s.vehicles);
    match &outcome.mode {
        RobustMode::Deterministic { scenario } => full(&inst.scenarios[*scenario].id),
        RobustMode::Fsa => report.feasible_scenarios() == report.scenarios.len(),
        RobustMode::Asa { alpha } => report.meets_scenario_level(*alpha),
        RobustMode::Ava { alpha, .. } => report.meets_vehicle_level(*alpha),
        RobustMode::Isa { seed } => {
            let pos = seed.position(outcome.ranking.len());
            outcome.ranking.get(pos).is_some_and(|r| full(&r.scenario))
        }
    }
}

/// Validation rule on out-of-sample sets: the vehicle level for α-VA, the
/// scenario level for α-SA and full feasibility otherwise.
pub fn meets_recorded_level(mode_keyword: &str, alpha: Option<f64>, report: &FeasibilityReport) -> bool {
    match (mode_keyword, alpha) {
        ("ava", Some(a)) => report.meets_vehicle_level(a),
        ("asa", Some(a)) => report.meets_scenario_level(a),
        _ => report.feasible_scenarios() == report.scenarios.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(id: &str, n: usize, f: usize) -> ScenarioFeasibility {
        ScenarioFeasibility { scenario: id.into(), vehicles: n, feasible_vehicles: f, exact: true }
    }

    #[test]
    fn budgets_round_down() {
        assert_eq!(allowed_failures(0.95, 100), 5);
        assert_eq!(allowed_failures(0.9, 10), 1);
        assert_eq!(allowed_failures(0.95, 19), 0);
        assert_eq!(allowed_failures(0.99, 100), 1);
        assert_eq!(allowed_failures(1.0, 7), 0);
        assert_eq!(allowed_failures(0.5, 3), 1);
    }

    #[test]
    fn report_arithmetic() {
        let r = FeasibilityReport::from_counts(vec![count("a", 100, 95), count("b", 100, 95)]);
        assert!((r.mean_vehicle_feasibility - 0.95).abs() < 1e-12);
        assert!((r.min_vehicle_feasibility - 0.95).abs() < 1e-12);
        assert_eq!(r.scenario_feasibility, 0.0);
        assert!(r.meets_vehicle_level(0.95));
        assert!(!r.meets_vehicle_level(0.96));
        let r = FeasibilityReport::from_counts(vec![count("a", 4, 4), count("b", 5, 3), count("c", 2, 2)]);
        assert!(r.min_vehicle_feasibility <= r.mean_vehicle_feasibility);
        assert!((r.scenario_feasibility - 2.0 / 3.0).abs() < 1e-12);
        assert!(r.meets_scenario_level(0.6));
        assert!(!r.meets_scenario_level(0.7));
    }

    #[test]
    fn seed_positions() {
        assert_eq!(SeedStrategy::Median.position(3), 1);
        assert_eq!(SeedStrategy::Median.position(4), 1);
        assert_eq!(SeedStrategy::Median.position(1), 0);
        assert_eq!(SeedStrategy::Lowest.position(5), 0);
    }

    #[test]
    fn run_names() {
        let inst = crate::schema::tests::two_station_instance();
        assert_eq!(RobustMode::Ava { alpha: 0.95, seed: SeedStrategy::Lowest }.run_name(&inst), "95-VA-L");
        assert_eq!(RobustMode::Ava { alpha: 0.975, seed: SeedStrategy::Median }.run_name(&inst), "97.5-VA-M");
        assert_eq!(RobustMode::Asa { alpha: 0.5 }.run_name(&inst), "50-SA");
        assert_eq!(RobustMode::Isa { seed: SeedStrategy::Median }.run_name(&inst), "ISA-M");
        assert_eq!(RobustMode::Fsa.run_name(&inst), "FSA");
    }
}
