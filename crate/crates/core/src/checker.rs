//! Operational feasibility checks with one warm column pool per scenario.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use crate::bnp::{check_feasibility_with_pool, BnpOptions, CheckMode, ColumnPool, FeasibilityResult};
use crate::error::SolveError;
use crate::model::{Instance, Scenario};

pub struct Checker<'a> {
    pub inst: &'a Instance,
    pub opts: BnpOptions,
    pools: Mutex<HashMap<String, Arc<Mutex<ColumnPool>>>>,
    calls: AtomicUsize,
}

impl<'a> Checker<'a> {
    pub fn new(inst: &'a Instance, opts: BnpOptions) -> Self {
        Self {
            inst,
            opts,
            pools: Mutex::new(HashMap::new()),
            calls: AtomicUsize::new(0),
        }
    }

    /// Number of branch-and-price runs so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    fn pool(&self, scenario: &Scenario) -> Arc<Mutex<ColumnPool>> {
        let mut pools = self.pools.lock().expect("pool map poisoned");
        pools.entry(scenario.id.clone()).or_default().clone()
    }

    /// Pools are keyed by scenario id, so distinct scenarios must carry
    /// distinct ids.
    pub fn check(
        &self,
        scenario: &Scenario,
        open: &[bool],
        mode: CheckMode,
        threshold: Option<usize>,
    ) -> Result<FeasibilityResult, SolveError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let pool = self.pool(scenario);
        let mut pool = pool.lock().expect("column pool poisoned");
        check_feasibility_with_pool(self.inst, scenario, open, mode, threshold, &self.opts, &mut pool)
    }

    pub fn prove(&self, scenario: &Scenario, open: &[bool]) -> Result<bool, SolveError> {
        Ok(self.check(scenario, open, CheckMode::ProveFeasible, None)?.feasible)
    }

    /// Every scenario of `set` is fully feasible; stops at the first failure,
    /// whose index is returned.
    pub fn first_infeasible(&self, set: &[&Scenario], open: &[bool]) -> Result<Option<usize>, SolveError> {
        for (i, z) in set.iter().enumerate() {
            if !self.prove(z, open)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}
