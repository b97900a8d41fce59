//! Branch-and-price over the route master problem.
//!
//! The master selects one route (or the dummy route) per vehicle subject to
//! charge-point capacities per station and period. Its optimum counts the
//! vehicles that cannot be served. Column generation prices routes on the
//! time-expanded networks; branching restricts single vehicles' gaps.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::Duration;

use chargenet_kernel::{
    solve_binary, solve_lp_with, Basis, BinaryOptions, BinaryStatus, LinearProgram, LpSolution, LpStatus, Sense,
    SimplexOptions,
};
use rayon::prelude::*;

use crate::error::SolveError;
use crate::model::{Instance, Period, Scenario};
use crate::network::{build_network, ExpandedNetwork, GapConstraint, GapRule, GapVisit, PriceTable};
use crate::pricing::{price_vehicle, PricingOptions, Route};

const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Decide whether every vehicle can be served.
    ProveFeasible,
    /// Compute the maximum number of simultaneously servable vehicles.
    MaxFeasibleCount,
}

#[derive(Debug, Clone)]
pub struct BnpOptions {
    pub node_cap: usize,
    pub restore_every: usize,
    pub restore_time_limit: Duration,
    pub pricing: PricingOptions,
    pub max_cg_rounds: usize,
    pub trace: bool,
    /// Start max-count searches from the greedy assignment. Turning this off
    /// only makes sense for exercising the tree.
    pub greedy_incumbent: bool,
}

impl Default for BnpOptions {
    fn default() -> Self {
        Self {
            node_cap: 10_000,
            restore_every: 5,
            restore_time_limit: Duration::from_secs(60),
            pricing: PricingOptions::default(),
            max_cg_rounds: 5_000,
            trace: false,
            greedy_incumbent: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EarlyExit {
    /// The infeasible count is provably above the threshold.
    Violated,
    /// An assignment within the threshold was found.
    Satisfied,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub lp_value: Option<f64>,
    pub constraint: String,
    pub outcome: String,
    pub columns: usize,
}

#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    /// Every vehicle can be served.
    pub feasible: bool,
    pub total: usize,
    /// Vehicles served by the best assignment found. Exact when `exact`.
    pub feasible_count: usize,
    /// Scenario indices of the vehicles left unserved by that assignment.
    pub infeasible_vehicles: Vec<usize>,
    /// Route of each served vehicle in that assignment, by scenario index.
    pub schedules: Vec<Option<Route>>,
    /// Lower bound on the number of unservable vehicles.
    pub infeasible_lower_bound: usize,
    /// The answer asked for is proven: the feasibility decision in prove
    /// mode, the count in max-count mode.
    pub exact: bool,
    pub early_exit: Option<EarlyExit>,
    pub nodes: usize,
    pub root_lp: Option<f64>,
    pub trace: Vec<NodeRecord>,
}

impl FeasibilityResult {
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.feasible_count as f64 / self.total as f64
        }
    }
}

/// Routes discovered so far, per scenario vehicle. Reusable across calls on
/// the same scenario; routes through closed stations are skipped on use.
#[derive(Debug, Clone, Default)]
pub struct ColumnPool {
    routes: HashMap<usize, Vec<Route>>,
    keys: HashMap<(usize, Vec<GapVisit>), usize>,
}

impl ColumnPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a route; returns false for a duplicate (vehicle, visits) pair.
    pub fn insert(&mut self, r: Route) -> bool {
        let key = (r.vehicle, r.visits.clone());
        if self.keys.contains_key(&key) {
            return false;
        }
        let list = self.routes.entry(r.vehicle).or_default();
        self.keys.insert(key, list.len());
        list.push(r);
        true
    }

    pub fn contains(&self, vehicle: usize, visits: &[GapVisit]) -> bool {
        self.keys.contains_key(&(vehicle, visits.to_vec()))
    }

    /// Position of a route within `routes_of(vehicle)`.
    pub fn index_of(&self, vehicle: usize, visits: &[GapVisit]) -> Option<usize> {
        self.keys.get(&(vehicle, visits.to_vec())).copied()
    }

    pub fn routes_of(&self, vehicle: usize) -> &[Route] {
        self.routes.get(&vehicle).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
struct NodeState {
    id: usize,
    parent: Option<usize>,
    depth: usize,
    rules: HashMap<usize, Vec<GapConstraint>>,
    served: BTreeSet<usize>,
    dropped: BTreeSet<usize>,
    label: String,
}

impl NodeState {
    fn admits(&self, r: &Route) -> bool {
        self.rules
            .get(&r.vehicle)
            .is_none_or(|rs| rs.iter().all(|c| c.admits(&r.visits[c.gap])))
    }
}

/// An integral assignment: unserved vehicles and (vehicle, pool index) of
/// every served one.
#[derive(Debug, Clone, Default)]
struct Incumbent {
    unserved: Vec<usize>,
    routes: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy)]
enum Col {
    Dummy(usize),
    Route(usize, usize),
}

/// Restricted master of one node.
struct Master {
    lp: LinearProgram,
    /// Scenario vehicle index per master position.
    vehicles: Vec<usize>,
    conv_row: Vec<usize>,
    cap_row: HashMap<(usize, Period), usize>,
    cols: Vec<Col>,
    basis: Option<Basis>,
}

impl Master {
    fn new(vehicles: Vec<usize>, served: &BTreeSet<usize>) -> Self {
        let mut lp = LinearProgram::new();
        let big_m = vehicles.len() as f64 + 1.0;
        let mut conv_row = Vec::with_capacity(vehicles.len());
        let mut cols = Vec::new();
        for (pos, &v) in vehicles.iter().enumerate() {
            let cost = if served.contains(&v) { big_m } else { 1.0 };
            let j = lp.add_var(format!("dummy_{v}"), cost, 0.0, 1.0);
            conv_row.push(lp.add_row(format!("conv_{v}"), vec![(j, 1.0)], Sense::Eq, 1.0));
            cols.push(Col::Dummy(pos));
        }
        Self {
            lp,
            vehicles,
            conv_row,
            cap_row: HashMap::new(),
            cols,
            basis: None,
        }
    }

    fn add_route(&mut self, pos: usize, pool_idx: usize, r: &Route, inst: &Instance) {
        let mut entries = vec![(self.conv_row[pos], 1.0)];
        for &(s, t) in &r.footprint {
            let row = match self.cap_row.get(&(s, t)) {
                Some(&row) => row,
                None => {
                    let rhs = inst.stations[s].charge_points as f64;
                    let row = self.lp.add_row(format!("cap_{s}_{t}"), Vec::new(), Sense::Le, rhs);
                    self.cap_row.insert((s, t), row);
                    row
                }
            };
            entries.push((row, 1.0));
        }
        self.lp.add_column(format!("r{}_{}", r.vehicle, pool_idx), 0.0, 0.0, 1.0, &entries);
        self.cols.push(Col::Route(pos, pool_idx));
    }
}

struct Search<'a> {
    inst: &'a Instance,
    scenario: &'a Scenario,
    open: &'a [bool],
    opts: &'a BnpOptions,
    simplex: SimplexOptions,
    pool: &'a mut ColumnPool,
    trace: Vec<NodeRecord>,
}

enum NodeOutcome {
    Pruned(f64),
    Infeasible,
    Integral { lp: f64, inc: Incumbent },
    Branch { lp: f64, children: Vec<NodeState> },
}

impl<'a> Search<'a> {
    fn networks(&self, node: &NodeState, vehicles: &[usize]) -> Vec<ExpandedNetwork> {
        vehicles
            .par_iter()
            .map(|&v| {
                let rules = node.rules.get(&v).map(Vec::as_slice).unwrap_or(&[]);
                build_network(
                    &self.scenario.vehicles[v],
                    &self.inst.tech,
                    self.inst.period_minutes,
                    self.open,
                    &PriceTable::zero(),
                    rules,
                )
            })
            .collect()
    }

    fn usable(&self, r: &Route) -> bool {
        r.footprint.iter().all(|&(s, _)| self.open.get(s).copied().unwrap_or(false))
    }

    /// Column generation at one node followed by the pruning and branching
    /// decision. `cutoff` is the incumbent's unserved count.
    fn evaluate(&mut self, node: &NodeState, active: &[usize], cutoff: usize) -> Result<(NodeOutcome, Option<(Master, LpSolution)>), SolveError> {
        let vehicles: Vec<usize> = active.iter().copied().filter(|v| !node.dropped.contains(v)).collect();
        let dropped = node.dropped.len();
        if vehicles.is_empty() {
            let inc = Incumbent { unserved: node.dropped.iter().copied().collect(), routes: Vec::new() };
            return Ok((NodeOutcome::Integral { lp: dropped as f64, inc }, None));
        }
        let mut master = Master::new(vehicles.clone(), &node.served);
        for (pos, &v) in vehicles.iter().enumerate() {
            for (k, r) in self.pool.routes_of(v).iter().enumerate() {
                if self.usable(r) && node.admits(r) {
                    master.add_route(pos, k, r, self.inst);
                }
            }
        }
        let mut nets = self.networks(node, &vehicles);
        let mut rounds = 0;
        let sol = loop {
            let sol = solve_lp_with(&master.lp, master.basis.as_ref(), &self.simplex)?;
            match sol.status {
                LpStatus::Optimal => {}
                other => {
                    return Err(SolveError::Internal(format!("restricted master returned {other:?}")));
                }
            }
            master.basis = sol.basis.clone();
            rounds += 1;
            if rounds > self.opts.max_cg_rounds {
                return Err(SolveError::Internal("column generation did not converge".into()));
            }
            let mut prices = PriceTable::zero();
            for (&(s, t), &row) in &master.cap_row {
                prices.set(s, t, (-sol.duals[row]).max(0.0));
            }
            let rhos: Vec<f64> = master.conv_row.iter().map(|&r| sol.duals[r]).collect();
            let popts = &self.opts.pricing;
            let found: Vec<Vec<Route>> = nets
                .par_iter_mut()
                .enumerate()
                .map(|(pos, net)| {
                    net.set_prices(&prices);
                    price_vehicle(net, vehicles[pos], rhos[pos], popts).routes
                })
                .collect();
            let mut added = 0;
            for (pos, routes) in found.into_iter().enumerate() {
                for r in routes {
                    if self.pool.contains(r.vehicle, &r.visits) {
                        continue;
                    }
                    let k = self.pool.routes_of(r.vehicle).len();
                    master.add_route(pos, k, &r, self.inst);
                    self.pool.insert(r);
                    added += 1;
                }
            }
            if added == 0 {
                break sol;
            }
        };

        // node value counts the vehicles dropped on the way down
        let lp = sol.objective + dropped as f64;
        let bound = (lp - INT_TOL).ceil().max(0.0) as usize;
        if bound >= cutoff {
            return Ok((NodeOutcome::Pruned(lp), Some((master, sol))));
        }

        // per master position: (value, column index) of positive columns
        let mut chosen: Vec<Vec<(f64, usize)>> = vec![Vec::new(); vehicles.len()];
        for (j, col) in master.cols.iter().enumerate() {
            let x = sol.x[j];
            if x > INT_TOL {
                let pos = match *col {
                    Col::Dummy(p) | Col::Route(p, _) => p,
                };
                chosen[pos].push((x, j));
            }
        }
        let fractional = chosen
            .iter()
            .position(|c| c.iter().any(|&(x, _)| x < 1.0 - INT_TOL));
        let Some(pos) = fractional else {
            let mut inc = Incumbent { unserved: node.dropped.iter().copied().collect(), routes: Vec::new() };
            for (p, c) in chosen.iter().enumerate() {
                for &(_, j) in c {
                    match master.cols[j] {
                        Col::Dummy(_) => {
                            if node.served.contains(&vehicles[p]) {
                                return Ok((NodeOutcome::Infeasible, None));
                            }
                            inc.unserved.push(vehicles[p]);
                        }
                        Col::Route(_, k) => inc.routes.push((vehicles[p], k)),
                    }
                }
            }
            inc.unserved.sort_unstable();
            return Ok((NodeOutcome::Integral { lp, inc }, Some((master, sol))));
        };

        let v = vehicles[pos];
        let mut reals: Vec<(f64, usize)> = chosen[pos]
            .iter()
            .filter_map(|&(x, j)| match master.cols[j] {
                Col::Route(_, k) => Some((x, k)),
                Col::Dummy(_) => None,
            })
            .collect();
        reals.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let children = if reals.len() >= 2 {
            let p = &self.pool.routes_of(v)[reals[0].1];
            let q = &self.pool.routes_of(v)[reals[1].1];
            let (gap, enforce, forbid) = deviation(&p.visits, &q.visits)
                .ok_or_else(|| SolveError::Internal(format!("vehicle {v}: fractional routes without deviation")))?;
            vec![
                child(node, v, GapConstraint { gap, rule: enforce }),
                child(node, v, GapConstraint { gap, rule: forbid }),
            ]
        } else if !node.served.contains(&v) {
            let mut served = node.clone();
            served.served.insert(v);
            served.label = format!("serve v{v}");
            let mut drop = node.clone();
            drop.dropped.insert(v);
            drop.label = format!("drop v{v}");
            vec![served, drop]
        } else {
            // served vehicle still leaning on its dummy: the M-weighted
            // objective already bounds the subtree, split on the route itself
            let p = &self.pool.routes_of(v)[reals[0].1];
            let (gap, enforce, forbid) = deviation(&p.visits, &vec![GapVisit::Direct; p.visits.len()])
                .ok_or_else(|| SolveError::Internal(format!("vehicle {v}: served with a direct-only route")))?;
            vec![
                child(node, v, GapConstraint { gap, rule: enforce }),
                child(node, v, GapConstraint { gap, rule: forbid }),
            ]
        };
        Ok((NodeOutcome::Branch { lp, children }, Some((master, sol))))
    }

    /// Binary solve over the node's columns.
    fn restore(&self, master: &Master, node: &NodeState, floor: usize) -> Result<Option<Incumbent>, SolveError> {
        let opts = BinaryOptions {
            time_limit: Some(self.opts.restore_time_limit),
            integral_objective: true,
            objective_floor: Some(floor as f64),
            ..Default::default()
        };
        let sol = solve_binary(&master.lp, &opts)?;
        if matches!(sol.status, BinaryStatus::Infeasible) {
            return Ok(None);
        }
        let Some(point) = sol.incumbent else { return Ok(None) };
        let mut inc = Incumbent { unserved: node.dropped.iter().copied().collect(), routes: Vec::new() };
        for (j, col) in master.cols.iter().enumerate() {
            if !point[j] {
                continue;
            }
            match *col {
                Col::Dummy(pos) => {
                    if node.served.contains(&master.vehicles[pos]) {
                        return Ok(None);
                    }
                    inc.unserved.push(master.vehicles[pos]);
                }
                Col::Route(pos, k) => inc.routes.push((master.vehicles[pos], k)),
            }
        }
        inc.unserved.sort_unstable();
        Ok(Some(inc))
    }
}

fn child(node: &NodeState, v: usize, c: GapConstraint) -> NodeState {
    let mut n = node.clone();
    n.rules.entry(v).or_default().push(c);
    n.label = format!("v{v} gap{} {:?}", c.gap, c.rule);
    n
}

/// First deviation between two routes of the same vehicle, as the pair of
/// complementary rules (enforce, forbid) that separates them.
pub fn deviation(p: &[GapVisit], q: &[GapVisit]) -> Option<(usize, GapRule, GapRule)> {
    for (g, (a, b)) in p.iter().zip(q).enumerate() {
        if a == b {
            continue;
        }
        return Some(match (*a, *b) {
            (GapVisit::Charge { station, .. }, GapVisit::Direct)
            | (GapVisit::Direct, GapVisit::Charge { station, .. }) => {
                (g, GapRule::EnforceStation(station), GapRule::ForbidStation(station))
            }
            (GapVisit::Charge { station: sa, first: fa, last: la }, GapVisit::Charge { station: sb, first: fb, last: lb }) => {
                if sa != sb {
                    (g, GapRule::EnforceStation(sa), GapRule::ForbidStation(sa))
                } else {
                    let in_a = |t: Period| fa <= t && t <= la;
                    let in_b = |t: Period| fb <= t && t <= lb;
                    let t = (fa.min(fb)..=la.max(lb)).find(|&t| in_a(t) != in_b(t))?;
                    (g, GapRule::EnforceVertex(sa, t), GapRule::ForbidVertex(sa, t))
                }
            }
            (GapVisit::Direct, GapVisit::Direct) => unreachable!("equal visits skipped"),
        });
    }
    None
}

/// Sequential greedy: each vehicle takes its cheapest route avoiding
/// already-full station periods, preferring short charging stops.
fn greedy(
    inst: &Instance,
    scenario: &Scenario,
    open: &[bool],
    pool: &mut ColumnPool,
) -> (Vec<usize>, Incumbent) {
    const FULL: f64 = 1e6;
    const STEP: f64 = 1e-3;
    let mut usage: HashMap<(usize, Period), u32> = HashMap::new();
    let mut forced = Vec::new();
    let mut inc = Incumbent::default();
    let popts = PricingOptions { max_routes: 0, ..Default::default() };
    for (v, vehicle) in scenario.vehicles.iter().enumerate() {
        let mut net = build_network(vehicle, &inst.tech, inst.period_minutes, open, &PriceTable::zero(), &[]);
        let mut prices = PriceTable::zero();
        for vx in &net.vertices {
            if let crate::network::VertexKind::Charge { station, period, .. } = vx.kind {
                let used = usage.get(&(station, period)).copied().unwrap_or(0);
                let full = used >= inst.stations[station].charge_points;
                prices.set(station, period, if full { FULL } else { STEP });
            }
        }
        net.set_prices(&prices);
        let out = price_vehicle(&net, v, 0.0, &popts);
        let Some(best) = out.best_route else {
            forced.push(v);
            continue;
        };
        let fits = out.end_labels[0].cost < FULL;
        if fits {
            for &cell in &best.footprint {
                *usage.entry(cell).or_insert(0) += 1;
            }
        } else {
            inc.unserved.push(v);
        }
        let mut r = best;
        r.reduced_cost = 0.0;
        let visits = r.visits.clone();
        pool.insert(r);
        if fits {
            inc.routes.push((v, pool.index_of(v, &visits).expect("route just pooled")));
        }
    }
    (forced, inc)
}

/// Operational feasibility of `scenario` under the stations in `open`.
///
/// `threshold` (max-count mode) is the number of unserved vehicles that is
/// still acceptable; the search stops as soon as the answer relative to it is
/// known and reports that through `early_exit`.
pub fn check_feasibility(
    inst: &Instance,
    scenario: &Scenario,
    open: &[bool],
    mode: CheckMode,
    threshold: Option<usize>,
    opts: &BnpOptions,
) -> Result<FeasibilityResult, SolveError> {
    let mut pool = ColumnPool::new();
    check_feasibility_with_pool(inst, scenario, open, mode, threshold, opts, &mut pool)
}

pub fn check_feasibility_with_pool(
    inst: &Instance,
    scenario: &Scenario,
    open: &[bool],
    mode: CheckMode,
    threshold: Option<usize>,
    opts: &BnpOptions,
    pool: &mut ColumnPool,
) -> Result<FeasibilityResult, SolveError> {
    let total = scenario.vehicles.len();
    let (forced, greedy_inc) = greedy(inst, scenario, open, pool);
    let n_forced = forced.len();
    let mut result = FeasibilityResult {
        feasible: false,
        total,
        feasible_count: 0,
        infeasible_vehicles: Vec::new(),
        schedules: Vec::new(),
        infeasible_lower_bound: n_forced,
        exact: false,
        early_exit: None,
        nodes: 0,
        root_lp: None,
        trace: Vec::new(),
    };
    let finish = |mut r: FeasibilityResult, inc: Incumbent, pool: &ColumnPool| {
        let mut all: Vec<usize> = forced.iter().copied().chain(inc.unserved).collect();
        all.sort_unstable();
        r.feasible_count = total - all.len();
        r.feasible = all.is_empty();
        r.infeasible_vehicles = all;
        r.schedules = vec![None; total];
        for (v, k) in inc.routes {
            r.schedules[v] = Some(pool.routes_of(v)[k].clone());
        }
        r
    };

    if greedy_inc.unserved.is_empty() && opts.greedy_incumbent {
        result.exact = true;
        if n_forced > 0 && mode == CheckMode::ProveFeasible {
            result.early_exit = Some(EarlyExit::Violated);
        }
        return Ok(finish(result, greedy_inc, pool));
    }
    if mode == CheckMode::ProveFeasible && n_forced > 0 {
        result.exact = true;
        result.early_exit = Some(EarlyExit::Violated);
        return Ok(finish(result, greedy_inc, pool));
    }
    if let Some(b) = threshold {
        if n_forced > b {
            result.early_exit = Some(EarlyExit::Violated);
            return Ok(finish(result, greedy_inc, pool));
        }
        if opts.greedy_incumbent && n_forced + greedy_inc.unserved.len() <= b {
            result.early_exit = Some(EarlyExit::Satisfied);
            return Ok(finish(result, greedy_inc, pool));
        }
    }

    let forced_set: HashSet<usize> = forced.iter().copied().collect();
    let active: Vec<usize> = (0..total).filter(|v| !forced_set.contains(v)).collect();
    // Counts below exclude forced vehicles. In prove mode only a zero count
    // matters, so the cutoff starts at 1 while the greedy assignment is kept
    // for reporting.
    let use_greedy = mode == CheckMode::MaxFeasibleCount && opts.greedy_incumbent;
    let mut best = match mode {
        CheckMode::ProveFeasible => 1,
        CheckMode::MaxFeasibleCount if use_greedy => greedy_inc.unserved.len(),
        CheckMode::MaxFeasibleCount => active.len() + 1,
    };
    let mut best_inc = greedy_inc;
    let mut found = use_greedy;
    let target = threshold.map(|b| b - n_forced);

    let mut search = Search {
        inst,
        scenario,
        open,
        opts,
        simplex: SimplexOptions::default(),
        pool,
        trace: Vec::new(),
    };
    let mut stack = vec![NodeState { label: "root".into(), ..Default::default() }];
    let mut next_id = 1;
    let mut root_bound = 0usize;
    let mut stopped = false;
    let accept = |inc: Incumbent, best: &mut usize, best_inc: &mut Incumbent, found: &mut bool| {
        if inc.unserved.len() < *best {
            *best = inc.unserved.len();
            *best_inc = inc;
            *found = true;
        }
    };
    while let Some(node) = stack.pop() {
        if result.nodes >= opts.node_cap {
            stopped = true;
            break;
        }
        result.nodes += 1;
        let (outcome, master) = search.evaluate(&node, &active, best)?;
        let lp = match &outcome {
            NodeOutcome::Pruned(lp) | NodeOutcome::Integral { lp, .. } | NodeOutcome::Branch { lp, .. } => Some(*lp),
            NodeOutcome::Infeasible => None,
        };
        if opts.trace {
            let text = match &outcome {
                NodeOutcome::Pruned(_) => "pruned by bound".to_string(),
                NodeOutcome::Infeasible => "infeasible".to_string(),
                NodeOutcome::Integral { inc, .. } => format!("integral, {} unserved", inc.unserved.len()),
                NodeOutcome::Branch { children, .. } => format!("branched into {}", children.len()),
            };
            search.trace.push(NodeRecord {
                id: node.id,
                parent: node.parent,
                depth: node.depth,
                lp_value: lp,
                constraint: node.label.clone(),
                outcome: text,
                columns: master.as_ref().map(|m| m.0.cols.len()).unwrap_or(0),
            });
        }
        if node.id == 0 {
            result.root_lp = lp;
            root_bound = lp.map(|v| (v - INT_TOL).ceil().max(0.0) as usize).unwrap_or(0);
            result.infeasible_lower_bound = n_forced + root_bound;
            if target.is_some_and(|t| root_bound > t) {
                result.early_exit = Some(EarlyExit::Violated);
                stopped = true;
                break;
            }
        }
        match outcome {
            NodeOutcome::Pruned(_) | NodeOutcome::Infeasible => {}
            NodeOutcome::Integral { inc, .. } => accept(inc, &mut best, &mut best_inc, &mut found),
            NodeOutcome::Branch { lp, children } => {
                let (m, _) = master.expect("branching nodes keep their master");
                if opts.restore_every > 0 && (result.nodes - 1) % opts.restore_every == 0 {
                    let floor = (lp - node.dropped.len() as f64 - INT_TOL).ceil().max(0.0) as usize;
                    if let Some(inc) = search.restore(&m, &node, floor)? {
                        accept(inc, &mut best, &mut best_inc, &mut found);
                    }
                }
                let depth = node.depth + 1;
                for mut c in children.into_iter().rev() {
                    c.id = next_id;
                    c.parent = Some(node.id);
                    c.depth = depth;
                    next_id += 1;
                    stack.push(c);
                }
            }
        }
        if found && best <= root_bound {
            break;
        }
        if let Some(t) = target {
            if found && best <= t {
                result.early_exit = Some(EarlyExit::Satisfied);
                stopped = true;
                break;
            }
        }
    }
    result.trace = std::mem::take(&mut search.trace);
    let proven_optimal = found && best <= root_bound;
    if proven_optimal {
        result.early_exit = None;
    }
    let exhausted = !stopped || proven_optimal;
    result.exact = exhausted;
    match mode {
        CheckMode::ProveFeasible => {
            if !(found && best == 0) {
                result.infeasible_lower_bound = result.infeasible_lower_bound.max(n_forced + 1);
                // a capped search cannot prove feasibility and is reported as
                // infeasible
                if result.early_exit.is_none() && !exhausted {
                    result.early_exit = Some(EarlyExit::Violated);
                }
            } else {
                result.infeasible_lower_bound = 0;
            }
        }
        CheckMode::MaxFeasibleCount => {
            if exhausted {
                result.infeasible_lower_bound = n_forced + best;
            }
        }
    }
    Ok(finish(result, best_inc, pool))
}

/// LP relaxation of the root master, with columns generated to convergence.
/// Exposed for tests and diagnostics.
pub fn solve_relaxation(
    inst: &Instance,
    scenario: &Scenario,
    open: &[bool],
    opts: &BnpOptions,
    pool: &mut ColumnPool,
) -> Result<RelaxationResult, SolveError> {
    let (forced, _) = greedy(inst, scenario, open, pool);
    let forced_set: HashSet<usize> = forced.iter().copied().collect();
    let active: Vec<usize> = (0..scenario.vehicles.len()).filter(|v| !forced_set.contains(v)).collect();
    let mut search = Search {
        inst,
        scenario,
        open,
        opts,
        simplex: SimplexOptions::default(),
        pool,
        trace: Vec::new(),
    };
    let root = NodeState::default();
    let (outcome, master) = search.evaluate(&root, &active, usize::MAX)?;
    let objective = match outcome {
        NodeOutcome::Pruned(lp) | NodeOutcome::Integral { lp, .. } | NodeOutcome::Branch { lp, .. } => lp,
        NodeOutcome::Infeasible => return Err(SolveError::Internal("root master infeasible".into())),
    };
    let mut selection = Vec::new();
    let mut rho = Vec::new();
    let mut lambda = Vec::new();
    if let Some((m, sol)) = master {
        for (j, col) in m.cols.iter().enumerate() {
            if sol.x[j] > INT_TOL {
                match *col {
                    Col::Dummy(p) => selection.push((m.vehicles[p], None, sol.x[j])),
                    Col::Route(p, k) => selection.push((m.vehicles[p], Some(k), sol.x[j])),
                }
            }
        }
        rho = m.vehicles.iter().zip(&m.conv_row).map(|(&v, &r)| (v, sol.duals[r])).collect();
        lambda = m.cap_row.iter().map(|(&cell, &r)| (cell, sol.duals[r])).collect();
        lambda.sort_by(|a: &((usize, Period), f64), b| a.0.cmp(&b.0));
    }
    Ok(RelaxationResult {
        objective,
        forced_infeasible: forced,
        selection,
        rho,
        lambda,
    })
}

#[derive(Debug, Clone)]
pub struct RelaxationResult {
    /// LP optimum over the vehicles that are individually feasible.
    pub objective: f64,
    pub forced_infeasible: Vec<usize>,
    /// (vehicle, pool route index or `None` for the dummy, value)
    pub selection: Vec<(usize, Option<usize>, f64)>,
    /// Convexity duals per active vehicle.
    pub rho: Vec<(usize, f64)>,
    /// Capacity duals per instantiated (station, period) row; non-positive.
    pub lambda: Vec<((usize, Period), f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::tests::two_station_instance;

    fn visit(station: usize, first: Period, last: Period) -> GapVisit {
        GapVisit::Charge { station, first, last }
    }

    #[test]
    fn station_deviation() {
        let p = [GapVisit::Direct, visit(0, 3, 4)];
        let q = [GapVisit::Direct, visit(1, 3, 4)];
        assert_eq!(
            deviation(&p, &q),
            Some((1, GapRule::EnforceStation(0), GapRule::ForbidStation(0)))
        );
    }

    #[test]
    fn time_deviation_picks_first_differing_period() {
        let p = [visit(1, 3, 5)];
        let q = [visit(1, 4, 6)];
        assert_eq!(
            deviation(&p, &q),
            Some((0, GapRule::EnforceVertex(1, 3), GapRule::ForbidVertex(1, 3)))
        );
        let p = [visit(1, 3, 5)];
        let q = [visit(1, 3, 4)];
        assert_eq!(deviation(&p, &q).map(|d| d.1), Some(GapRule::EnforceVertex(1, 5)));
    }

    #[test]
    fn direct_versus_charge_is_a_station_deviation() {
        let d = deviation(&[GapVisit::Direct], &[visit(1, 2, 2)]).unwrap();
        assert_eq!(d, (0, GapRule::EnforceStation(1), GapRule::ForbidStation(1)));
        assert_eq!(deviation(&[visit(0, 1, 2)], &[visit(0, 1, 2)]), None);
    }

    fn planted(vehicle: usize, tag: Period, footprint: Vec<(usize, Period)>) -> Route {
        Route {
            vehicle,
            vertices: Vec::new(),
            visits: vec![visit(0, tag, tag)],
            footprint,
            reduced_cost: 0.0,
            end_soc: 0.0,
        }
    }

    fn restore_on(routes: Vec<Route>, vehicles: usize) -> Option<Incumbent> {
        let inst = two_station_instance();
        let scenario = inst.scenarios[0].clone();
        let mut pool = ColumnPool::new();
        for r in routes {
            assert!(pool.insert(r));
        }
        let opts = BnpOptions::default();
        let search = Search {
            inst: &inst,
            scenario: &scenario,
            open: &[true, true],
            opts: &opts,
            simplex: SimplexOptions::default(),
            pool: &mut ColumnPool::new(),
            trace: Vec::new(),
        };
        let mut master = Master::new((0..vehicles).collect(), &BTreeSet::new());
        for v in 0..vehicles {
            for (k, r) in pool.routes_of(v).iter().enumerate() {
                master.add_route(v, k, r, &inst);
            }
        }
        search.restore(&master, &NodeState::default(), 0).unwrap()
    }

    #[test]
    fn restore_finds_planted_conflict_free_combination() {
        // station 0 has a single charge point
        let inc = restore_on(
            vec![planted(0, 1, vec![(0, 3)]), planted(0, 2, vec![(0, 4)]), planted(1, 1, vec![(0, 3)])],
            2,
        )
        .unwrap();
        assert!(inc.unserved.is_empty());
        let mut routes = inc.routes.clone();
        routes.sort_unstable();
        assert_eq!(routes, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn restore_returns_best_incumbent_when_conflicts_remain() {
        let inc = restore_on(vec![planted(0, 1, vec![(0, 3)]), planted(1, 1, vec![(0, 3), (0, 4)])], 2).unwrap();
        assert_eq!(inc.unserved.len(), 1);
        assert_eq!(inc.routes.len(), 1);
    }

    #[test]
    fn pool_rejects_duplicates() {
        let mut pool = ColumnPool::new();
        assert!(pool.insert(planted(0, 1, vec![(0, 3)])));
        assert!(!pool.insert(planted(0, 1, vec![(0, 9)])));
        assert!(pool.insert(planted(1, 1, vec![(0, 3)])));
        assert_eq!(pool.len(), 2);
        assert_eq!(pool.index_of(1, &[visit(0, 1, 1)]), Some(0));
    }

    #[test]
    fn sample_scenario_is_feasible_with_everything_open() {
        let inst = two_station_instance();
        let r = check_feasibility(&inst, &inst.scenarios[0], &[true, true], CheckMode::ProveFeasible, None, &BnpOptions::default())
            .unwrap();
        assert!(r.feasible && r.exact);
        assert_eq!(r.ratio(), 1.0);
    }
}
