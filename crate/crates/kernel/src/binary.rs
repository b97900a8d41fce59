//! Depth-first LP-based branch and bound for pure binary programs.

use std::time::{Duration, Instant};

use crate::problem::LinearProgram;
use crate::simplex::{solve_lp_with, Basis, LpStatus, SimplexOptions};
use crate::KernelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryStatus {
    /// Incumbent proven optimal.
    Optimal,
    /// No binary point satisfies the constraints.
    Infeasible,
    /// Time limit hit; incumbent (if any) and bound are what was known then.
    TimeLimit,
    NodeLimit,
}

#[derive(Debug, Clone)]
pub struct BinarySolution {
    pub status: BinaryStatus,
    /// 0/1 values of the best solution found.
    pub incumbent: Option<Vec<bool>>,
    pub objective: Option<f64>,
    /// Valid lower bound on the optimum (minimization).
    pub bound: f64,
    pub nodes: usize,
}

impl BinarySolution {
    pub fn is_optimal(&self) -> bool {
        self.status == BinaryStatus::Optimal
    }
}

#[derive(Debug, Clone)]
pub struct BinaryOptions {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
    pub integrality_tol: f64,
    /// All objective coefficients are integers, so node bounds may be rounded up.
    pub integral_objective: bool,
    /// A known lower bound on the optimum; the search stops as soon as an
    /// incumbent reaches it.
    pub objective_floor: Option<f64>,
}

impl Default for BinaryOptions {
    fn default() -> Self {
        Self {
            time_limit: None,
            node_limit: None,
            integrality_tol: 1e-6,
            integral_objective: false,
            objective_floor: None,
        }
    }
}

struct Node {
    lower: Vec<f64>,
    upper: Vec<f64>,
    parent_bound: f64,
    warm: Option<Basis>,
}

/// Solves `lp` with every variable restricted to {0, 1}.
///
/// Variables must carry bounds inside `[0, 1]`; fixed variables are allowed.
pub fn solve_binary(lp: &LinearProgram, opts: &BinaryOptions) -> Result<BinarySolution, KernelError> {
    lp.validate()?;
    for (j, v) in lp.vars.iter().enumerate() {
        if v.lower < 0.0 || v.upper > 1.0 {
            return Err(KernelError::Malformed(format!(
                "variable {j} ({}) is not binary: bounds [{}, {}]",
                v.name, v.lower, v.upper
            )));
        }
    }
    let start = Instant::now();
    let simplex = SimplexOptions::default();
    let tol = opts.integrality_tol;
    let prune_gap = |bound: f64, best: f64| -> bool {
        if opts.integral_objective {
            (bound - 1e-6).ceil() >= best - 1e-9
        } else {
            bound >= best - 1e-9
        }
    };

    let mut work = lp.clone();
    let mut best: Option<(f64, Vec<bool>)> = None;
    let mut nodes = 0usize;
    let mut stack = vec![Node {
        lower: lp.vars.iter().map(|v| v.lower.ceil()).collect(),
        upper: lp.vars.iter().map(|v| v.upper.floor()).collect(),
        parent_bound: f64::NEG_INFINITY,
        warm: None,
    }];
    let mut root_bound = f64::NEG_INFINITY;

    while let Some(node) = stack.pop() {
        let limit_hit = if opts.time_limit.is_some_and(|lim| start.elapsed() >= lim) {
            Some(BinaryStatus::TimeLimit)
        } else if opts.node_limit.is_some_and(|lim| nodes >= lim) {
            Some(BinaryStatus::NodeLimit)
        } else {
            None
        };
        if let Some(status) = limit_hit {
            let open_bound = stack
                .iter()
                .map(|n| n.parent_bound)
                .fold(node.parent_bound, f64::min);
            let bound = match &best {
                Some((obj, _)) => open_bound.min(*obj),
                None => open_bound,
            };
            return Ok(finish(status, best, bound.max(root_bound), nodes));
        }
        if let Some((obj, _)) = &best {
            if prune_gap(node.parent_bound, *obj) {
                continue;
            }
        }
        nodes += 1;
        for (j, v) in work.vars.iter_mut().enumerate() {
            v.lower = node.lower[j];
            v.upper = node.upper[j];
        }
        if node.lower.iter().zip(&node.upper).any(|(l, u)| l > u) {
            continue;
        }
        let sol = solve_lp_with(&work, node.warm.as_ref(), &simplex)?;
        match sol.status {
            LpStatus::Infeasible => continue,
            LpStatus::Optimal => {}
            LpStatus::Unbounded => {
                return Err(KernelError::Malformed("bounded binary relaxation reported unbounded".into()))
            }
            LpStatus::IterationLimit => {
                return Err(KernelError::NumericalStall("LP iteration limit inside branch and bound".into()))
            }
        }
        if nodes == 1 {
            root_bound = sol.objective;
        }
        if let Some((obj, _)) = &best {
            if prune_gap(sol.objective, *obj) {
                continue;
            }
        }

        // most fractional variable
        let mut branch_var = None;
        let mut best_frac = tol;
        for (j, &xj) in sol.x.iter().enumerate() {
            let frac = (xj - xj.round()).abs();
            if frac > best_frac {
                best_frac = frac;
                branch_var = Some(j);
            }
        }
        let Some(j) = branch_var else {
            let point: Vec<bool> = sol.x.iter().map(|&v| v > 0.5).collect();
            let obj = lp.objective_value(&as_f64(&point));
            if best.as_ref().is_none_or(|(b, _)| obj < *b - 1e-12) {
                best = Some((obj, point));
            }
            if opts.objective_floor.is_some_and(|t| obj <= t + 1e-9) {
                break;
            }
            continue;
        };

        // rounding heuristic: round up every fractional value
        let rounded: Vec<bool> = sol.x.iter().map(|&v| v > tol).collect();
        let rx = as_f64(&rounded);
        if lp.max_violation(&rx) <= 1e-9 {
            let obj = lp.objective_value(&rx);
            if best.as_ref().is_none_or(|(b, _)| obj < *b - 1e-12) {
                best = Some((obj, rounded));
                if opts.objective_floor.is_some_and(|t| obj <= t + 1e-9) {
                    break;
                }
            }
        }

        let mut down = Node {
            lower: node.lower.clone(),
            upper: node.upper.clone(),
            parent_bound: sol.objective,
            warm: sol.basis.clone(),
        };
        down.upper[j] = 0.0;
        let mut up = Node {
            lower: node.lower,
            upper: node.upper,
            parent_bound: sol.objective,
            warm: sol.basis,
        };
        up.lower[j] = 1.0;
        stack.push(down);
        stack.push(up);
    }

    let status = if best.is_some() {
        BinaryStatus::Optimal
    } else {
        BinaryStatus::Infeasible
    };
    let bound = best.as_ref().map(|(o, _)| *o).unwrap_or(f64::INFINITY);
    Ok(finish(status, best, bound, nodes))
}

fn as_f64(point: &[bool]) -> Vec<f64> {
    point.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
}

fn finish(status: BinaryStatus, best: Option<(f64, Vec<bool>)>, bound: f64, nodes: usize) -> BinarySolution {
    let (objective, incumbent) = match best {
        Some((o, p)) => (Some(o), Some(p)),
        None => (None, None),
    };
    BinarySolution {
        status,
        incumbent,
        objective,
        bound,
        nodes,
    }
}
