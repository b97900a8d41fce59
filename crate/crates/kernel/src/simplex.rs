//! Bounded-variable revised primal simplex with a dense explicit basis inverse.
//!
//! Every row `i` gets a slack `s_i` so that `A x + s = b`; the slack bounds
//! encode the sense (`<=`: `s >= 0`, `>=`: `s <= 0`, `=`: `s = 0`). Rows whose
//! initial residual violates the slack bounds receive an artificial column and
//! are driven feasible in phase 1. Phase 2 then optimizes the true costs with
//! artificials fixed at zero.

use crate::problem::{LinearProgram, Sense};
use crate::KernelError;

/// Status of a structural or slack variable in a basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisStatus {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic free variable resting at zero.
    Free,
}

/// A simplex basis usable as a warm start: one status per structural
/// variable followed by one per row slack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub vars: Vec<BasisStatus>,
    pub rows: Vec<BasisStatus>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective: f64,
    pub x: Vec<f64>,
    /// One dual value per row (`y = c_B B^-1`).
    pub duals: Vec<f64>,
    /// Reduced cost of every structural variable.
    pub reduced_costs: Vec<f64>,
    pub basis: Option<Basis>,
    pub iterations: usize,
}

impl LpSolution {
    /// Objective of the dual problem implied by `duals` and the reduced costs
    /// of variables resting at finite bounds.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        let mut obj: f64 = lp.rows.iter().zip(&self.duals).map(|(r, y)| r.rhs * y).sum();
        for (j, v) in lp.vars.iter().enumerate() {
            let d = self.reduced_costs[j];
            if d > 0.0 && v.lower.is_finite() {
                obj += d * v.lower;
            } else if d < 0.0 && v.upper.is_finite() {
                obj += d * v.upper;
            }
        }
        obj
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub pivot_tol: f64,
    pub max_iterations: Option<usize>,
    pub refactor_every: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub degenerate_limit: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-9,
            pivot_tol: 1e-9,
            max_iterations: None,
            refactor_every: 64,
            degenerate_limit: 60,
        }
    }
}

const MAX_BLAND_RESTARTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Basic,
    Lower,
    Upper,
    Zero,
}

struct Tableau<'a> {
    opts: &'a SimplexOptions,
    m: usize,
    n: usize,
    cols: Vec<Vec<(usize, f64)>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    status: Vec<Status>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    rhs: Vec<f64>,
    since_refactor: usize,
    iterations: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl<'a> Tableau<'a> {
    fn new(lp: &LinearProgram, opts: &'a SimplexOptions) -> Self {
        let m = lp.rows.len();
        let n = lp.vars.len();
        let total = n + 2 * m;
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); total];
        for (i, row) in lp.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                if a == 0.0 {
                    continue;
                }
                match cols[j].last_mut() {
                    Some(last) if last.0 == i => last.1 += a,
                    _ => cols[j].push((i, a)),
                }
            }
        }
        let mut lower = Vec::with_capacity(total);
        let mut upper = Vec::with_capacity(total);
        for v in &lp.vars {
            lower.push(v.lower);
            upper.push(v.upper);
        }
        for (i, row) in lp.rows.iter().enumerate() {
            cols[n + i].push((i, 1.0));
            let (l, u) = match row.sense {
                Sense::Le => (0.0, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, 0.0),
                Sense::Eq => (0.0, 0.0),
            };
            lower.push(l);
            upper.push(u);
        }
        for _ in 0..m {
            lower.push(0.0);
            upper.push(0.0);
        }
        Self {
            opts,
            m,
            n,
            cols,
            lower,
            upper,
            cost: vec![0.0; total],
            x: vec![0.0; total],
            status: vec![Status::Lower; total],
            basis: Vec::with_capacity(m),
            binv: vec![0.0; m * m],
            rhs: lp.rows.iter().map(|r| r.rhs).collect(),
            since_refactor: 0,
            iterations: 0,
        }
    }

    fn rest_at_bound(&mut self, j: usize) {
        let (l, u) = (self.lower[j], self.upper[j]);
        if l.is_finite() {
            self.status[j] = Status::Lower;
            self.x[j] = l;
        } else if u.is_finite() {
            self.status[j] = Status::Upper;
            self.x[j] = u;
        } else {
            self.status[j] = Status::Zero;
            self.x[j] = 0.0;
        }
    }

    /// Slack basis plus artificials on violated rows. Returns whether any
    /// artificial is basic (phase 1 required).
    fn cold_start(&mut self) -> bool {
        let (n, m) = (self.n, self.m);
        for j in 0..n {
            self.rest_at_bound(j);
        }
        let mut residual = self.rhs.clone();
        for j in 0..n {
            let xj = self.x[j];
            if xj != 0.0 {
                for &(i, a) in &self.cols[j] {
                    residual[i] -= a * xj;
                }
            }
        }
        self.basis.clear();
        let mut need_phase1 = false;
        for (i, &r) in residual.iter().enumerate() {
            let s = n + i;
            let art = n + m + i;
            let tol = self.opts.feasibility_tol;
            if r >= self.lower[s] - tol && r <= self.upper[s] + tol {
                self.status[s] = Status::Basic;
                self.x[s] = r;
                self.basis.push(s);
                self.status[art] = Status::Lower;
                self.x[art] = 0.0;
                self.cols[art] = vec![(i, 1.0)];
            } else {
                need_phase1 = true;
                // slack rests at 0, which lies inside every slack range
                self.status[s] = if self.lower[s] == 0.0 { Status::Lower } else { Status::Upper };
                self.x[s] = 0.0;
                let sign = if r >= 0.0 { 1.0 } else { -1.0 };
                self.cols[art] = vec![(i, sign)];
                self.upper[art] = f64::INFINITY;
                self.status[art] = Status::Basic;
                self.x[art] = r.abs();
                self.basis.push(art);
            }
        }
        // B is diagonal with entries +-1
        self.binv.iter_mut().for_each(|v| *v = 0.0);
        for (i, &var) in self.basis.iter().enumerate() {
            let a = self.cols[var][0].1;
            self.binv[i * m + i] = 1.0 / a;
        }
        self.since_refactor = 0;
        need_phase1
    }

    fn warm_start(&mut self, hint: &Basis) -> bool {
        let (n, m) = (self.n, self.m);
        let mut basic = Vec::with_capacity(m);
        for j in 0..n {
            let st = hint.vars.get(j).copied().unwrap_or(BasisStatus::AtLower);
            self.apply_hint(j, st, &mut basic);
        }
        for i in 0..m {
            let st = hint.rows.get(i).copied().unwrap_or(BasisStatus::Basic);
            self.apply_hint(n + i, st, &mut basic);
        }
        for i in 0..m {
            let art = n + m + i;
            self.cols[art] = vec![(i, 1.0)];
            self.status[art] = Status::Lower;
            self.x[art] = 0.0;
        }
        if basic.len() != m {
            return false;
        }
        self.basis = basic;
        if self.refactor().is_err() {
            return false;
        }
        self.compute_basic_values();
        let tol = self.opts.feasibility_tol;
        self.basis
            .iter()
            .all(|&b| self.x[b] >= self.lower[b] - tol && self.x[b] <= self.upper[b] + tol)
    }

    fn apply_hint(&mut self, j: usize, st: BasisStatus, basic: &mut Vec<usize>) {
        match st {
            BasisStatus::Basic => {
                self.status[j] = Status::Basic;
                basic.push(j);
            }
            BasisStatus::AtUpper if self.upper[j].is_finite() => {
                self.status[j] = Status::Upper;
                self.x[j] = self.upper[j];
            }
            BasisStatus::AtLower if self.lower[j].is_finite() => {
                self.status[j] = Status::Lower;
                self.x[j] = self.lower[j];
            }
            _ => self.rest_at_bound(j),
        }
    }

    /// Gauss-Jordan inversion of the current basis matrix.
    fn refactor(&mut self) -> Result<(), KernelError> {
        let m = self.m;
        let mut mat = vec![0.0; m * m];
        for (k, &var) in self.basis.iter().enumerate() {
            for &(i, a) in &self.cols[var] {
                mat[i * m + k] = a;
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = mat[col * m + col].abs();
            for r in col + 1..m {
                let v = mat[r * m + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-12 {
                return Err(KernelError::NumericalStall(format!(
                    "singular basis at column {col}"
                )));
            }
            if piv != col {
                for c in 0..m {
                    mat.swap(piv * m + c, col * m + c);
                    inv.swap(piv * m + c, col * m + c);
                }
            }
            let p = mat[col * m + col];
            for c in 0..m {
                mat[col * m + c] /= p;
                inv[col * m + c] /= p;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let f = mat[r * m + col];
                if f != 0.0 {
                    for c in 0..m {
                        mat[r * m + c] -= f * mat[col * m + c];
                        inv[r * m + c] -= f * inv[col * m + c];
                    }
                }
            }
        }
        self.binv = inv;
        self.since_refactor = 0;
        Ok(())
    }

    fn compute_basic_values(&mut self) {
        let m = self.m;
        let mut r = self.rhs.clone();
        for (j, st) in self.status.iter().enumerate() {
            if *st != Status::Basic && self.x[j] != 0.0 {
                for &(i, a) in &self.cols[j] {
                    r[i] -= a * self.x[j];
                }
            }
        }
        for k in 0..m {
            let row = &self.binv[k * m..(k + 1) * m];
            let v: f64 = row.iter().zip(&r).map(|(a, b)| a * b).sum();
            self.x[self.basis[k]] = v;
        }
    }

    fn duals(&self) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (k, &var) in self.basis.iter().enumerate() {
            let c = self.cost[var];
            if c != 0.0 {
                let row = &self.binv[k * m..(k + 1) * m];
                for (yi, b) in y.iter_mut().zip(row) {
                    *yi += c * b;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, y: &[f64]) -> f64 {
        self.cost[j] - self.cols[j].iter().map(|&(i, a)| a * y[i]).sum::<f64>()
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut w = vec![0.0; m];
        for &(k, a) in &self.cols[j] {
            for (i, wi) in w.iter_mut().enumerate() {
                *wi += a * self.binv[i * m + k];
            }
        }
        w
    }

    fn pivot(&mut self, r: usize, w: &[f64]) {
        let m = self.m;
        let p = w[r];
        for c in 0..m {
            self.binv[r * m + c] /= p;
        }
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (prow, after) = rest.split_at_mut(m);
        for (i, &wi) in w.iter().enumerate() {
            if i == r || wi == 0.0 {
                continue;
            }
            let row = if i < r {
                &mut before[i * m..(i + 1) * m]
            } else {
                let off = (i - r - 1) * m;
                &mut after[off..off + m]
            };
            for (v, pv) in row.iter_mut().zip(prow.iter()) {
                *v -= wi * pv;
            }
        }
        self.since_refactor += 1;
    }

    fn run_phase(&mut self, iteration_cap: usize) -> Result<PhaseEnd, KernelError> {
        let mut degenerate = 0usize;
        let mut bland = false;
        let mut bland_restarts = 0usize;
        let total = self.cols.len();
        loop {
            if self.iterations >= iteration_cap {
                return Ok(PhaseEnd::IterationLimit);
            }
            if self.since_refactor >= self.opts.refactor_every {
                self.refactor()?;
                self.compute_basic_values();
            }
            let y = self.duals();
            let tol = self.opts.optimality_tol;
            let mut entering: Option<(usize, f64, f64)> = None;
            for j in 0..total {
                let st = self.status[j];
                if st == Status::Basic || self.lower[j] == self.upper[j] {
                    continue;
                }
                let d = self.reduced_cost(j, &y);
                let dir = match st {
                    Status::Lower if d < -tol => 1.0,
                    Status::Upper if d > tol => -1.0,
                    Status::Zero if d.abs() > tol => -d.signum(),
                    _ => continue,
                };
                if bland {
                    entering = Some((j, dir, d));
                    break;
                }
                let score = d.abs() / (1.0 + self.cols[j].len() as f64).sqrt();
                if entering.is_none_or(|(_, _, s)| score > s) {
                    entering = Some((j, dir, score));
                }
            }
            let Some((q, dir, _)) = entering else {
                if self.since_refactor > 0 {
                    // confirm optimality on a fresh factorization
                    self.refactor()?;
                    self.compute_basic_values();
                    let y = self.duals();
                    let still_optimal = (0..total).all(|j| {
                        let st = self.status[j];
                        if st == Status::Basic || self.lower[j] == self.upper[j] {
                            return true;
                        }
                        let d = self.reduced_cost(j, &y);
                        match st {
                            Status::Lower => d >= -tol,
                            Status::Upper => d <= tol,
                            Status::Zero => d.abs() <= tol,
                            Status::Basic => true,
                        }
                    });
                    if !still_optimal {
                        continue;
                    }
                }
                return Ok(PhaseEnd::Optimal);
            };

            let w = self.ftran(q);
            let ptol = self.opts.pivot_tol;
            let ftol = self.opts.feasibility_tol;
            // Harris two-pass ratio test (plain min-ratio with index ties under Bland)
            let mut theta_max = f64::INFINITY;
            for (k, &wk) in w.iter().enumerate() {
                let rate = -dir * wk;
                let var = self.basis[k];
                if rate < -ptol && self.lower[var].is_finite() {
                    let slack = if bland { 0.0 } else { ftol };
                    theta_max = theta_max.min((self.x[var] - self.lower[var] + slack) / -rate);
                } else if rate > ptol && self.upper[var].is_finite() {
                    let slack = if bland { 0.0 } else { ftol };
                    theta_max = theta_max.min((self.upper[var] - self.x[var] + slack) / rate);
                }
            }
            let mut leave: Option<(usize, f64, bool)> = None;
            let mut best_mag = 0.0;
            if theta_max.is_finite() {
                for (k, &wk) in w.iter().enumerate() {
                    let rate = -dir * wk;
                    let var = self.basis[k];
                    let (ratio, to_upper) = if rate < -ptol && self.lower[var].is_finite() {
                        ((self.x[var] - self.lower[var]) / -rate, false)
                    } else if rate > ptol && self.upper[var].is_finite() {
                        ((self.upper[var] - self.x[var]) / rate, true)
                    } else {
                        continue;
                    };
                    if ratio <= theta_max + 1e-15 {
                        let better = if bland {
                            leave.is_none_or(|(lk, _, _)| var < self.basis[lk])
                        } else {
                            rate.abs() > best_mag
                        };
                        if better {
                            best_mag = rate.abs();
                            leave = Some((k, ratio.max(0.0), to_upper));
                        }
                    }
                }
            }
            let flip_range = self.upper[q] - self.lower[q];
            let theta_leave = leave.map(|(_, t, _)| t).unwrap_or(f64::INFINITY);
            let flip = flip_range.is_finite() && flip_range <= theta_leave;
            if !flip && leave.is_none() {
                return Ok(PhaseEnd::Unbounded);
            }
            let theta = if flip { flip_range } else { theta_leave };

            self.iterations += 1;
            if theta <= 1e-12 {
                degenerate += 1;
                if !bland && degenerate > self.opts.degenerate_limit {
                    bland_restarts += 1;
                    if bland_restarts > MAX_BLAND_RESTARTS {
                        return Err(KernelError::NumericalStall(format!(
                            "cycling persisted after {MAX_BLAND_RESTARTS} Bland restarts"
                        )));
                    }
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }

            self.x[q] += dir * theta;
            for (k, &wk) in w.iter().enumerate() {
                let var = self.basis[k];
                self.x[var] -= dir * theta * wk;
            }
            if flip {
                self.status[q] = if dir > 0.0 { Status::Upper } else { Status::Lower };
                self.x[q] = if dir > 0.0 { self.upper[q] } else { self.lower[q] };
                continue;
            }
            let (r, _, to_upper) = leave.expect("leaving row");
            let out = self.basis[r];
            if to_upper {
                self.status[out] = Status::Upper;
                self.x[out] = self.upper[out];
            } else {
                self.status[out] = Status::Lower;
                self.x[out] = self.lower[out];
            }
            self.status[q] = Status::Basic;
            self.basis[r] = q;
            self.pivot(r, &w);
        }
    }

    fn export_basis(&self) -> Basis {
        let conv = |st: Status| match st {
            Status::Basic => BasisStatus::Basic,
            Status::Lower => BasisStatus::AtLower,
            Status::Upper => BasisStatus::AtUpper,
            Status::Zero => BasisStatus::Free,
        };
        Basis {
            vars: self.status[..self.n].iter().map(|&s| conv(s)).collect(),
            rows: self.status[self.n..self.n + self.m].iter().map(|&s| conv(s)).collect(),
        }
    }

    /// Swaps basic artificials (all at zero) for slacks or structurals so the
    /// exported basis only mentions real columns.
    fn purge_artificials(&mut self) -> Result<(), KernelError> {
        let (n, m) = (self.n, self.m);
        for r in 0..m {
            let var = self.basis[r];
            if var < n + m {
                continue;
            }
            // row r of B^-1 times candidate column gives the pivot element
            let row: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
            let mut pick = None;
            let mut best = 1e-7;
            for j in (n..n + m).chain(0..n) {
                if self.status[j] == Status::Basic {
                    continue;
                }
                let v: f64 = self.cols[j].iter().map(|&(i, a)| a * row[i]).sum();
                if v.abs() > best {
                    best = v.abs();
                    pick = Some(j);
                    if j >= n {
                        break;
                    }
                }
            }
            if let Some(j) = pick {
                let w = self.ftran(j);
                self.status[var] = Status::Lower;
                self.x[var] = 0.0;
                self.status[j] = Status::Basic;
                self.basis[r] = j;
                self.pivot(r, &w);
            }
        }
        self.refactor()?;
        self.compute_basic_values();
        Ok(())
    }
}

/// Solves `lp` from a slack basis.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, KernelError> {
    solve_lp_with(lp, None, &SimplexOptions::default())
}

/// Solves `lp` starting from `warm` when it is a valid primal-feasible basis
/// (new columns rest at a bound, new rows get a basic slack); otherwise falls
/// back to a cold start.
pub fn solve_lp_warm(lp: &LinearProgram, warm: &Basis) -> Result<LpSolution, KernelError> {
    solve_lp_with(lp, Some(warm), &SimplexOptions::default())
}

pub fn solve_lp_with(
    lp: &LinearProgram,
    warm: Option<&Basis>,
    opts: &SimplexOptions,
) -> Result<LpSolution, KernelError> {
    lp.validate()?;
    let (n, m) = (lp.num_vars(), lp.num_rows());
    let cap = opts.max_iterations.unwrap_or(10_000 + 50 * (n + m));
    let mut t = Tableau::new(lp, opts);

    let warm_ok = warm.is_some_and(|b| t.warm_start(b));
    if !warm_ok {
        let need_phase1 = t.cold_start();
        if need_phase1 {
            for j in 0..t.cols.len() {
                t.cost[j] = if j >= n + m { 1.0 } else { 0.0 };
            }
            match t.run_phase(cap)? {
                PhaseEnd::IterationLimit => return Ok(unfinished(&t, LpStatus::IterationLimit)),
                PhaseEnd::Unbounded => {
                    return Err(KernelError::NumericalStall("phase 1 reported unbounded".into()))
                }
                PhaseEnd::Optimal => {}
            }
            let infeas: f64 = (n + m..n + 2 * m).map(|j| t.x[j].max(0.0)).sum();
            let scale = 1.0 + lp.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
            if infeas > opts.feasibility_tol * scale {
                return Ok(unfinished(&t, LpStatus::Infeasible));
            }
            for j in n + m..n + 2 * m {
                t.upper[j] = 0.0;
                if t.status[j] != Status::Basic {
                    t.status[j] = Status::Lower;
                    t.x[j] = 0.0;
                }
            }
            t.purge_artificials()?;
        }
    }
    for (j, v) in lp.vars.iter().enumerate() {
        t.cost[j] = v.cost;
    }
    for j in n..t.cols.len() {
        t.cost[j] = 0.0;
    }
    let end = t.run_phase(cap)?;
    let status = match end {
        PhaseEnd::Optimal => LpStatus::Optimal,
        PhaseEnd::Unbounded => LpStatus::Unbounded,
        PhaseEnd::IterationLimit => LpStatus::IterationLimit,
    };
    let mut sol = unfinished(&t, status);
    if status == LpStatus::Optimal {
        let y = t.duals();
        sol.reduced_costs = (0..n).map(|j| t.reduced_cost(j, &y)).collect();
        sol.duals = y;
        sol.basis = Some(t.export_basis());
    }
    Ok(sol)
}

fn unfinished(t: &Tableau<'_>, status: LpStatus) -> LpSolution {
    let x: Vec<f64> = (0..t.n)
        .map(|j| {
            let v = t.x[j];
            if v < t.lower[j] && v > t.lower[j] - 1e-7 {
                t.lower[j]
            } else if v > t.upper[j] && v < t.upper[j] + 1e-7 {
                t.upper[j]
            } else {
                v
            }
        })
        .collect();
    let objective = (0..t.n).map(|j| t.cost[j] * x[j]).sum();
    LpSolution {
        status,
        objective,
        x,
        duals: vec![0.0; t.m],
        reduced_costs: vec![0.0; t.n],
        basis: None,
        iterations: t.iterations,
    }
}
