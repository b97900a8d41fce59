//! Station-opening master with cover cuts, the cutting-plane loop and cover
//! strengthening.
//!
//! A cover is a set of stations such that closing all of them (and opening
//! everything else) fails the acceptance predicate. Its cut requires at least
//! one member to be open. The predicate is assumed monotone: opening more
//! stations never breaks acceptance.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::time::{Duration, Instant};

use chargenet_kernel::{solve_binary, BinaryOptions, BinaryStatus, LinearProgram, Sense};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bnp::BnpOptions;
use crate::checker::Checker;
use crate::error::{ModelError, SolveError};
use crate::model::{Instance, Station, StationConfiguration};
use crate::pricing::vehicle_feasible;

pub type Cover = BTreeSet<usize>;

/// Active covers, none a superset of another.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CutPool {
    covers: Vec<Cover>,
}

impl CutPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `cover` unless an existing cover is a subset of it; drops
    /// existing supersets. Returns whether the cover was added.
    pub fn add(&mut self, cover: Cover) -> bool {
        assert!(!cover.is_empty(), "empty cover");
        if self.covers.iter().any(|c| c.is_subset(&cover)) {
            return false;
        }
        self.covers.retain(|c| !cover.is_subset(c));
        self.covers.push(cover);
        true
    }

    pub fn covers(&self) -> &[Cover] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    /// Covers with no open member.
    pub fn violated_by<'a>(&'a self, open: &'a [bool]) -> impl Iterator<Item = &'a Cover> + 'a {
        self.covers.iter().filter(move |c| c.iter().all(|&s| !open[s]))
    }

    pub fn admits(&self, open: &[bool]) -> bool {
        self.violated_by(open).next().is_none()
    }

    pub fn to_checkpoint(&self, inst: &Instance) -> CutCheckpoint {
        CutCheckpoint {
            schema_version: 1,
            covers: self
                .covers
                .iter()
                .map(|c| c.iter().map(|&s| inst.stations[s].id.clone()).collect())
                .collect(),
        }
    }

    pub fn from_checkpoint(cp: &CutCheckpoint, inst: &Instance) -> Result<Self, ModelError> {
        let mut pool = Self::new();
        for ids in &cp.covers {
            let mut cover = Cover::new();
            for id in ids {
                cover.insert(inst.station_index(id).ok_or_else(|| ModelError::UnknownStation(id.clone()))?);
            }
            if !cover.is_empty() {
                pool.add(cover);
            }
        }
        Ok(pool)
    }
}

/// Serialized cut pool, stations by id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutCheckpoint {
    pub schema_version: u32,
    pub covers: Vec<Vec<String>>,
}

impl CutCheckpoint {
    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Cheapest station set meeting every cut.
pub fn solve_ccp(stations: &[Station], cuts: &CutPool) -> Result<BTreeSet<usize>, SolveError> {
    if cuts.is_empty() {
        return Ok(BTreeSet::new());
    }
    let mut lp = LinearProgram::new();
    for s in stations {
        lp.add_binary(format!("x_{}", s.id), s.cost);
    }
    for (k, c) in cuts.covers().iter().enumerate() {
        lp.add_row(format!("cut_{k}"), c.iter().map(|&s| (s, 1.0)).collect(), Sense::Ge, 1.0);
    }
    let sol = solve_binary(&lp, &BinaryOptions::default())?;
    match (sol.status, sol.incumbent) {
        (BinaryStatus::Optimal, Some(x)) => Ok((0..stations.len()).filter(|&s| x[s]).collect()),
        (status, _) => Err(SolveError::Internal(format!("station master ended with {status:?}"))),
    }
}

/// How much effort one cover strengthening may spend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StrengthenBudget {
    /// Fixed number of candidate evaluations; reproducible.
    Attempts(usize),
    /// Wall time proportional to the last master solve plus its oracle check.
    Proportional { factor: f64, floor: Duration },
}

#[derive(Debug, Clone)]
pub struct CuttingPlaneOptions {
    pub seed: u64,
    pub budget: StrengthenBudget,
    pub max_iterations: usize,
    /// Give up with [`SolveError::TimeLimit`] once this instant has passed.
    pub deadline: Option<Instant>,
}

impl Default for CuttingPlaneOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: StrengthenBudget::Attempts(24),
            max_iterations: 10_000,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub opened: BTreeSet<usize>,
    pub cost: f64,
    pub accepted: bool,
    pub new_cuts: Vec<Cover>,
    pub strengthen_attempts: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct CuttingPlaneOutcome {
    pub opened: BTreeSet<usize>,
    pub cost: f64,
    pub iterations: Vec<IterationRecord>,
    /// Every station set the predicate has been asked about, with its answer.
    pub evaluated: HashMap<BTreeSet<usize>, bool>,
}

/// Memoized acceptance predicate over open-station masks.
pub struct Predicate<'f> {
    f: Box<dyn FnMut(&[bool]) -> Result<bool, SolveError> + 'f>,
    memo: HashMap<Vec<bool>, bool>,
    pub evaluations: usize,
}

impl<'f> Predicate<'f> {
    pub fn new(f: impl FnMut(&[bool]) -> Result<bool, SolveError> + 'f) -> Self {
        Self {
            f: Box::new(f),
            memo: HashMap::new(),
            evaluations: 0,
        }
    }

    pub fn accepts(&mut self, open: &[bool]) -> Result<bool, SolveError> {
        if let Some(&v) = self.memo.get(open) {
            return Ok(v);
        }
        self.evaluations += 1;
        let v = (self.f)(open)?;
        self.memo.insert(open.to_vec(), v);
        Ok(v)
    }

    /// Whether closing exactly `cover` fails the predicate.
    pub fn is_cover(&mut self, n: usize, cover: &Cover) -> Result<bool, SolveError> {
        let open: Vec<bool> = (0..n).map(|s| !cover.contains(&s)).collect();
        Ok(!self.accepts(&open)?)
    }

    fn evaluated(&self) -> HashMap<BTreeSet<usize>, bool> {
        self.memo
            .iter()
            .map(|(m, &v)| ((0..m.len()).filter(|&s| m[s]).collect(), v))
            .collect()
    }
}

/// Shrinks a verified cover by random sampling. Returns verified covers,
/// subsets of `cover`, none a superset of another; `cover` itself is kept
/// unless a subset of it was found.
///
/// A rejected candidate sends the search back to the last verified cover; once
/// that cover has failed as many times as it has members (or has a single
/// member) the search restarts from `cover`.
pub fn strengthen_cover(
    n: usize,
    cover: &Cover,
    pred: &mut Predicate<'_>,
    budget: StrengthenBudget,
    reference: Duration,
    rng: &mut impl Rng,
) -> Result<(Vec<Cover>, usize), SolveError> {
    let mut found = CutPool::new();
    found.add(cover.clone());
    let deadline = match budget {
        StrengthenBudget::Attempts(_) => None,
        StrengthenBudget::Proportional { factor, floor } => {
            Some(Instant::now() + reference.mul_f64(factor).max(floor))
        }
    };
    let max_attempts = match budget {
        StrengthenBudget::Attempts(k) => k,
        StrengthenBudget::Proportional { .. } => usize::MAX,
    };
    let mut attempts = 0;
    if cover.len() <= 1 {
        return Ok((vec![cover.clone()], 0));
    }
    let mut current = cover.clone();
    let mut failures = 0;
    while attempts < max_attempts && deadline.is_none_or(|d| Instant::now() < d) {
        if current.len() <= 1 || failures >= current.len() {
            current = cover.clone();
            failures = 0;
        }
        let members: Vec<usize> = current.iter().copied().collect();
        let size = rng.random_range(members.len().div_ceil(2)..members.len());
        let candidate: Cover = members.choose_multiple(rng, size).copied().collect();
        attempts += 1;
        if pred.is_cover(n, &candidate)? {
            found.add(candidate.clone());
            current = candidate;
            failures = 0;
        } else {
            failures += 1;
        }
    }
    let mut out: Vec<Cover> = found.covers().to_vec();
    out.sort();
    Ok((out, attempts))
}

/// Cutting-plane loop: solve the station master, test its configuration, cut
/// off rejected ones with strengthened covers of the closed stations.
pub fn cutting_plane(
    stations: &[Station],
    pool: &mut CutPool,
    pred: &mut Predicate<'_>,
    opts: &CuttingPlaneOptions,
) -> Result<CuttingPlaneOutcome, SolveError> {
    let n = stations.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut iterations = Vec::new();
    loop {
        if iterations.len() >= opts.max_iterations {
            return Err(SolveError::IterationLimit(opts.max_iterations));
        }
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SolveError::TimeLimit);
        }
        let started = Instant::now();
        let opened = solve_ccp(stations, pool)?;
        let cost: f64 = opened.iter().map(|&s| stations[s].cost).sum();
        let mask: Vec<bool> = (0..n).map(|s| opened.contains(&s)).collect();
        let accepted = pred.accepts(&mask)?;
        if accepted {
            iterations.push(IterationRecord {
                opened: opened.clone(),
                cost,
                accepted,
                new_cuts: Vec::new(),
                strengthen_attempts: 0,
                elapsed: started.elapsed(),
            });
            return Ok(CuttingPlaneOutcome {
                opened,
                cost,
                iterations,
                evaluated: pred.evaluated(),
            });
        }
        let closed: Cover = (0..n).filter(|s| !mask[*s]).collect();
        if closed.is_empty() {
            return Err(SolveError::Precondition(
                "no feasible configuration even with all stations open".into(),
            ));
        }
        let reference = started.elapsed();
        let (covers, attempts) = strengthen_cover(n, &closed, pred, opts.budget, reference, &mut rng)?;
        let mut new_cuts = Vec::new();
        for c in covers {
            if pool.add(c.clone()) {
                new_cuts.push(c);
            }
        }
        log::debug!(
            "cutting plane iteration {}: cost {cost}, {} new cuts, {} cuts total",
            iterations.len(),
            new_cuts.len(),
            pool.len()
        );
        iterations.push(IterationRecord {
            opened,
            cost,
            accepted,
            new_cuts,
            strengthen_attempts: attempts,
            elapsed: started.elapsed(),
        });
    }
}

/// Fails unless every vehicle of every listed scenario can complete its
/// shift with all stations open, ignoring capacities.
pub fn require_individually_feasible(inst: &Instance, scenarios: &[usize]) -> Result<(), SolveError> {
    let all = inst.all_open();
    for &z in scenarios {
        let sc = &inst.scenarios[z];
        if let Some(v) = sc.vehicles.iter().find(|v| !vehicle_feasible(inst, v, &all)) {
            return Err(SolveError::Precondition(format!(
                "vehicle {} of scenario {} is infeasible even with all stations open",
                v.id, sc.id
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct DeterministicResult {
    pub configuration: StationConfiguration,
    pub outcome: CuttingPlaneOutcome,
    pub pool: CutPool,
}

/// Cheapest configuration under which every vehicle of scenario `z` can be
/// served, optionally warm-started from `pool`.
pub fn deterministic_solve(
    inst: &Instance,
    z: usize,
    bnp: &BnpOptions,
    opts: &CuttingPlaneOptions,
    pool: Option<CutPool>,
) -> Result<DeterministicResult, SolveError> {
    require_individually_feasible(inst, &[z])?;
    let checker = Checker::new(inst, bnp.clone());
    deterministic_with(&checker, z, opts, pool)
}

pub fn deterministic_with(
    checker: &Checker<'_>,
    z: usize,
    opts: &CuttingPlaneOptions,
    pool: Option<CutPool>,
) -> Result<DeterministicResult, SolveError> {
    let inst = checker.inst;
    let scenario = &inst.scenarios[z];
    let mut pool = pool.unwrap_or_default();
    let mut pred = Predicate::new(|open: &[bool]| checker.prove(scenario, open));
    let outcome = cutting_plane(&inst.stations, &mut pool, &mut pred, opts)?;
    let configuration = StationConfiguration::new(outcome.opened.clone(), inst)?;
    Ok(DeterministicResult {
        configuration,
        outcome,
        pool,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Point;
    use proptest::prelude::*;

    fn stations(costs: &[f64]) -> Vec<Station> {
        costs
            .iter()
            .enumerate()
            .map(|(i, &cost)| Station {
                id: format!("s{i}"),
                location: Point::new(0.0, 0.0),
                cost,
                charge_points: 1,
            })
            .collect()
    }

    fn cover(items: &[usize]) -> Cover {
        items.iter().copied().collect()
    }

    #[test]
    fn empty_pool_opens_nothing() {
        assert!(solve_ccp(&stations(&[3.0, 4.0]), &CutPool::new()).unwrap().is_empty());
    }

    #[test]
    fn single_cut_picks_cheaper_member() {
        let mut pool = CutPool::new();
        pool.add(cover(&[0, 1]));
        assert_eq!(solve_ccp(&stations(&[10.0, 20.0]), &pool).unwrap(), cover(&[0]));
    }

    #[test]
    fn pool_keeps_minimal_covers() {
        let mut pool = CutPool::new();
        assert!(pool.add(cover(&[1, 2, 3])));
        assert!(pool.add(cover(&[4])));
        assert!(!pool.add(cover(&[1, 2, 3, 5])));
        assert!(pool.add(cover(&[2, 3])));
        assert_eq!(pool.covers(), &[cover(&[4]), cover(&[2, 3])]);
        assert!(pool.admits(&[false, false, true, false, true, false]));
        assert!(!pool.admits(&[true, true, false, false, true, false]));
    }

    #[test]
    fn strengthening_keeps_input_when_nothing_smaller_works() {
        let full = cover(&[0, 1, 2, 3]);
        let mut pred = Predicate::new(|open: &[bool]| Ok(open.iter().any(|&o| o)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (out, attempts) =
            strengthen_cover(4, &full, &mut pred, StrengthenBudget::Attempts(20), Duration::ZERO, &mut rng).unwrap();
        assert_eq!(out, vec![full]);
        assert_eq!(attempts, 20);
    }

    #[test]
    fn strengthening_converges_on_planted_station() {
        // acceptance needs station 5 open
        let full: Cover = (0..8).collect();
        let mut pred = Predicate::new(|open: &[bool]| Ok(open[5]));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (out, _) =
            strengthen_cover(8, &full, &mut pred, StrengthenBudget::Attempts(40), Duration::ZERO, &mut rng).unwrap();
        assert!(out.iter().all(|c| c.contains(&5)));
        assert!(out.contains(&cover(&[5])), "{out:?}");
    }

    #[test]
    fn loop_records_cuts_that_remove_each_rejected_configuration() {
        // accepted iff {0 or 1} and {2 or 3} open
        let st = stations(&[5.0, 3.0, 4.0, 8.0]);
        let mut pred = Predicate::new(|o: &[bool]| Ok((o[0] || o[1]) && (o[2] || o[3])));
        let mut pool = CutPool::new();
        let out = cutting_plane(&st, &mut pool, &mut pred, &CuttingPlaneOptions::default()).unwrap();
        assert_eq!(out.opened, cover(&[1, 2]));
        assert_eq!(out.cost, 7.0);
        for w in out.iterations.windows(2) {
            assert!(w[1].cost >= w[0].cost);
        }
        for it in out.iterations.iter().filter(|it| !it.accepted) {
            assert!(it.new_cuts.iter().any(|c| c.is_disjoint(&it.opened)));
        }
    }

    #[test]
    fn all_open_rejection_is_a_precondition_error() {
        let st = stations(&[1.0, 1.0]);
        let mut pred = Predicate::new(|_: &[bool]| Ok(false));
        let err = cutting_plane(&st, &mut CutPool::new(), &mut pred, &CuttingPlaneOptions::default()).unwrap_err();
        assert!(matches!(err, SolveError::Precondition(_)));
    }

    #[test]
    fn checkpoint_round_trip() {
        let inst = crate::schema::tests::two_station_instance();
        let mut pool = CutPool::new();
        pool.add(cover(&[1]));
        pool.add(cover(&[0]));
        let cp = pool.to_checkpoint(&inst);
        assert_eq!(cp.covers, vec![vec!["s2".to_string()], vec!["s1".to_string()]]);
        let text = serde_json::to_string(&cp).unwrap();
        let back: CutCheckpoint = serde_json::from_str(&text).unwrap();
        assert_eq!(CutPool::from_checkpoint(&back, &inst).unwrap(), pool);
    }

    fn brute_force(costs: &[f64], cuts: &[Cover]) -> f64 {
        let n = costs.len();
        (0u32..1 << n)
            .filter(|m| cuts.iter().all(|c| c.iter().any(|&s| m >> s & 1 == 1)))
            .map(|m| (0..n).filter(|&s| m >> s & 1 == 1).map(|s| costs[s]).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ccp_matches_enumeration(
            costs in proptest::collection::vec(1u32..100, 12),
            raw in proptest::collection::vec(proptest::collection::btree_set(0usize..12, 1..5), 8),
        ) {
            let costs: Vec<f64> = costs.into_iter().map(f64::from).collect();
            let mut pool = CutPool::new();
            for c in &raw {
                pool.add(c.clone());
            }
            let opened = solve_ccp(&stations(&costs), &pool).unwrap();
            let cost: f64 = opened.iter().map(|&s| costs[s]).sum();
            prop_assert!(raw.iter().all(|c| c.iter().any(|s| opened.contains(s))));
            prop_assert!((cost - brute_force(&costs, &raw)).abs() < 1e-9);
        }

        #[test]
        fn pool_never_holds_nested_covers(raw in proptest::collection::vec(proptest::collection::btree_set(0usize..6, 1..4), 1..20)) {
            let mut pool = CutPool::new();
            for c in raw {
                pool.add(c);
            }
            for a in pool.covers() {
                for b in pool.covers() {
                    prop_assert!(a == b || !a.is_subset(b));
                }
            }
        }
    }
}
