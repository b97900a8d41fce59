//! Brute-force reference implementations. Everything here is deliberately
//! naive and shares no code with the production crates, so tests can use it
//! as an independent check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

// ---------------------------------------------------------------------------
// Linear and binary programs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Ge,
    Eq,
}

/// `min c'x s.t. rows, x >= 0` with dense rows.
#[derive(Debug, Clone)]
pub struct DenseLp {
    pub cost: Vec<f64>,
    pub rows: Vec<(Vec<f64>, RowSense, f64)>,
}

fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(piv, col);
        b.swap(piv, col);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..n {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Optimal objective by enumerating every vertex of the feasible polyhedron.
/// Equalities enter as pairs of inequalities, so redundant rows are harmless.
/// Assumes the LP is bounded; returns `None` when no vertex is feasible.
pub fn lp_vertex_enumeration(lp: &DenseLp) -> Option<f64> {
    let n = lp.cost.len();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for (a, s, b) in &lp.rows {
        if a.iter().all(|v| *v == 0.0) {
            continue;
        }
        planes.push((a.clone(), *b));
        if *s == RowSense::Eq {
            planes.push((a.iter().map(|v| -v).collect(), -b));
        }
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        planes.push((e, 0.0));
    }
    let feasible = |x: &[f64]| {
        let tol = 1e-7;
        x.iter().all(|&v| v >= -tol)
            && lp.rows.iter().all(|(a, s, b)| {
                let act: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
                match s {
                    RowSense::Le => act <= b + tol,
                    RowSense::Ge => act >= b - tol,
                    RowSense::Eq => (act - b).abs() <= tol,
                }
            })
    };
    let mut best: Option<f64> = None;
    combinations(planes.len(), n, &mut |idx| {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let obj: f64 = lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
                if best.is_none_or(|b| obj < b) {
                    best = Some(obj);
                }
            }
        }
    });
    best
}

/// Exhaustive `2^n` search over binary points; returns the cheapest feasible
/// point (ties resolved towards the lexicographically first mask).
pub fn binary_enumeration(lp: &DenseLp) -> Option<(f64, Vec<bool>)> {
    let n = lp.cost.len();
    assert!(n <= 24, "enumeration limited to 24 variables");
    let mut best: Option<(f64, Vec<bool>)> = None;
    for mask in 0u32..(1u32 << n) {
        let x: Vec<f64> = (0..n).map(|j| ((mask >> j) & 1) as f64).collect();
        let ok = lp.rows.iter().all(|(a, s, b)| {
            let act: f64 = a.iter().zip(&x).map(|(p, q)| p * q).sum();
            match s {
                RowSense::Le => act <= b + 1e-9,
                RowSense::Ge => act >= b - 1e-9,
                RowSense::Eq => (act - b).abs() <= 1e-9,
            }
        });
        if ok {
            let obj: f64 = lp.cost.iter().zip(&x).map(|(c, v)| c * v).sum();
            if best.as_ref().is_none_or(|(b, _)| obj < *b - 1e-12) {
                best = Some((obj, x.iter().map(|&v| v > 0.5).collect()));
            }
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Charging curve
// ---------------------------------------------------------------------------

/// Power drawn at a given SOC: full power below the knee, falling linearly to
/// zero at full capacity.
pub fn cc_cv_power(soc: f64, q_max: f64, knee: f64, power_kw: f64) -> f64 {
    let knee_q = knee * q_max;
    if soc < knee_q {
        power_kw
    } else if soc >= q_max {
        0.0
    } else {
        power_kw * (q_max - soc) / (q_max - knee_q)
    }
}

/// Energy charged over `seconds`, integrated with explicit 1-second Euler steps.
pub fn integrate_cc_cv(soc: f64, q_max: f64, knee: f64, power_kw: f64, seconds: u32) -> f64 {
    let mut q = soc;
    for _ in 0..seconds {
        q = (q + cc_cv_power(q, q_max, knee, power_kw) / 3600.0).min(q_max);
    }
    q - soc
}

// ---------------------------------------------------------------------------
// Path enumeration on a time-expanded network
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct OracleNetwork {
    /// Per vertex: (charges here, charging price).
    pub vertices: Vec<(bool, f64)>,
    /// (tail, head, range cost)
    pub arcs: Vec<(usize, usize, f64)>,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone)]
pub struct EnumeratedPath {
    pub vertices: Vec<usize>,
    pub cost: f64,
    pub soc: f64,
}

/// Every start-to-end path whose simulated SOC never drops below `q_min` and
/// ends at least at `q_end`.
pub fn enumerate_paths(
    net: &OracleNetwork,
    q_begin: f64,
    q_min: f64,
    q_max: f64,
    q_end: f64,
    gamma: &dyn Fn(f64) -> f64,
) -> Vec<EnumeratedPath> {
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); net.vertices.len()];
    for (k, a) in net.arcs.iter().enumerate() {
        out_arcs[a.0].push(k);
    }
    let mut found = Vec::new();
    let mut stack = vec![(net.start, 0.0, q_begin, vec![net.start])];
    while let Some((v, cost, soc, path)) = stack.pop() {
        if v == net.end {
            if soc >= q_end {
                found.push(EnumeratedPath { vertices: path.clone(), cost, soc });
            }
            continue;
        }
        let (charges, price) = net.vertices[v];
        for &k in &out_arcs[v] {
            let (_, head, range) = net.arcs[k];
            let base = if charges { (soc + gamma(soc)).min(q_max) } else { soc };
            let next = base - range;
            if next < q_min {
                continue;
            }
            let mut p = path.clone();
            p.push(head);
            stack.push((head, cost + price, next, p));
        }
    }
    found
}

/// Pareto filter on (cost ascending, SOC descending); duplicates collapse.
pub fn pareto_front(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut front: Vec<(f64, f64)> = Vec::new();
    for (i, &(c, r)) in points.iter().enumerate() {
        let dominated = points
            .iter()
            .enumerate()
            .any(|(j, &(c2, r2))| j != i && c2 <= c && r2 >= r && (c2 < c || r2 > r));
        if !dominated && !front.iter().any(|&(fc, fr)| fc == c && fr == r) {
            front.push((c, r));
        }
    }
    front.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    front
}

// ---------------------------------------------------------------------------
// Fleet schedules straight from trip data
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct OracleStationOption {
    pub station: usize,
    pub travel_in_periods: u32,
    pub travel_out_periods: u32,
    pub energy_in: f64,
    pub energy_out: f64,
}

#[derive(Debug, Clone)]
pub struct OracleGap {
    /// Drop-off period of the trip before the gap.
    pub prev_end: u32,
    /// Pickup period of the trip after the gap.
    pub next_start: u32,
    pub direct_energy: f64,
    pub options: Vec<OracleStationOption>,
}

#[derive(Debug, Clone)]
pub struct OracleVehicle {
    pub q_begin: f64,
    pub q_end: f64,
    pub trip_energy: Vec<f64>,
    pub gaps: Vec<OracleGap>,
}

pub type Footprint = BTreeSet<(usize, u32)>;

/// All feasible charging schedules of one vehicle as station-period
/// footprints, using only stations in `open`.
pub fn enumerate_schedules(
    v: &OracleVehicle,
    open: &BTreeSet<usize>,
    q_min: f64,
    q_max: f64,
    gamma: &dyn Fn(f64) -> f64,
) -> Vec<Footprint> {
    fn rec(
        v: &OracleVehicle,
        open: &BTreeSet<usize>,
        q: (f64, f64),
        gamma: &dyn Fn(f64) -> f64,
        trip: usize,
        soc: f64,
        fp: &mut Vec<(usize, u32)>,
        out: &mut Vec<Footprint>,
    ) {
        let (q_min, q_max) = q;
        let soc = soc - v.trip_energy[trip];
        if soc < q_min {
            return;
        }
        if trip == v.trip_energy.len() - 1 {
            if soc >= v.q_end {
                out.push(fp.iter().copied().collect());
            }
            return;
        }
        let gap = &v.gaps[trip];
        let direct = soc - gap.direct_energy;
        if direct >= q_min {
            rec(v, open, q, gamma, trip + 1, direct, fp, out);
        }
        for opt in &gap.options {
            if !open.contains(&opt.station) {
                continue;
            }
            let first = gap.prev_end + opt.travel_in_periods;
            let Some(last) = gap.next_start.checked_sub(opt.travel_out_periods + 1) else {
                continue;
            };
            let arrive = soc - opt.energy_in;
            if arrive < q_min {
                continue;
            }
            for a in first..=last {
                if a > last {
                    break;
                }
                let mut r = arrive;
                for b in a..=last {
                    r = (r + gamma(r)).min(q_max);
                    let leave = r - opt.energy_out;
                    if leave >= q_min {
                        let n = fp.len();
                        fp.extend((a..=b).map(|t| (opt.station, t)));
                        rec(v, open, q, gamma, trip + 1, leave, fp, out);
                        fp.truncate(n);
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    if v.trip_energy.is_empty() {
        return out;
    }
    rec(v, open, (q_min, q_max), gamma, 0, v.q_begin, &mut Vec::new(), &mut out);
    out
}

/// Single-vehicle feasibility ignoring charger capacities. Arriving fuller
/// and charging longer never hurts, so it suffices to track the highest
/// reachable SOC and to charge through each whole window.
pub fn max_soc_feasible(
    v: &OracleVehicle,
    open: &BTreeSet<usize>,
    q_min: f64,
    q_max: f64,
    gamma: &dyn Fn(f64) -> f64,
) -> bool {
    if v.trip_energy.is_empty() {
        return false;
    }
    let mut soc = v.q_begin;
    for (c, e) in v.trip_energy.iter().enumerate() {
        soc -= e;
        if soc < q_min {
            return false;
        }
        let Some(gap) = v.gaps.get(c) else { break };
        let mut best = f64::NEG_INFINITY;
        if soc - gap.direct_energy >= q_min {
            best = soc - gap.direct_energy;
        }
        for opt in gap.options.iter().filter(|o| open.contains(&o.station)) {
            let first = gap.prev_end + opt.travel_in_periods;
            let Some(last) = gap.next_start.checked_sub(opt.travel_out_periods + 1) else {
                continue;
            };
            let mut r = soc - opt.energy_in;
            if r < q_min || last < first {
                continue;
            }
            for _ in first..=last {
                r = (r + gamma(r)).min(q_max);
            }
            if r - opt.energy_out >= q_min {
                best = best.max(r - opt.energy_out);
            }
        }
        if best == f64::NEG_INFINITY {
            return false;
        }
        soc = best;
    }
    soc >= v.q_end
}

/// Keeps only inclusion-minimal footprints (a smaller footprint is never
/// harder to fit under capacities).
pub fn minimal_footprints(mut fps: Vec<Footprint>) -> Vec<Footprint> {
    fps.sort_by_key(|f| f.len());
    fps.dedup();
    let mut kept: Vec<Footprint> = Vec::new();
    for f in fps {
        if !kept.iter().any(|k| k.is_subset(&f)) {
            kept.push(f);
        }
    }
    kept
}

/// Maximum number of vehicles that can be given one of their footprints
/// simultaneously without exceeding any station's capacity.
pub fn max_assignable(options: &[Vec<Footprint>], capacity: &BTreeMap<usize, u32>) -> usize {
    type Usage = BTreeMap<(usize, u32), u32>;
    fn rec(
        i: usize,
        options: &[&Vec<Footprint>],
        capacity: &BTreeMap<usize, u32>,
        usage: &mut Usage,
        memo: &mut HashMap<(usize, Vec<((usize, u32), u32)>), usize>,
    ) -> usize {
        if i == options.len() {
            return 0;
        }
        let key = (i, usage.iter().filter(|(_, &c)| c > 0).map(|(&k, &c)| (k, c)).collect::<Vec<_>>());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let left = options.len() - i;
        let mut best = 0;
        for fp in options[i].iter() {
            if fp.iter().all(|&(s, t)| usage.get(&(s, t)).copied().unwrap_or(0) < capacity[&s]) {
                for &k in fp {
                    *usage.entry(k).or_insert(0) += 1;
                }
                best = best.max(1 + rec(i + 1, options, capacity, usage, memo));
                for k in fp {
                    *usage.get_mut(k).unwrap() -= 1;
                }
                if best == left {
                    break;
                }
            }
        }
        if best < left - 1 {
            best = best.max(rec(i + 1, options, capacity, usage, memo));
        }
        memo.insert(key, best);
        best
    }
    // vehicles that can go without charging never compete for capacity
    let free = options.iter().filter(|o| o.iter().any(|f| f.is_empty())).count();
    let mut order: Vec<&Vec<Footprint>> =
        options.iter().filter(|o| !o.is_empty() && !o.iter().any(|f| f.is_empty())).collect();
    order.sort_by_key(|o| o.len());
    free + rec(0, &order, capacity, &mut BTreeMap::new(), &mut HashMap::new())
}

/// Whether every vehicle can get one of its footprints at once. Vehicles
/// with the fewest options are placed first.
pub fn all_assignable(options: &[Vec<Footprint>], capacity: &BTreeMap<usize, u32>) -> bool {
    fn rec(
        order: &[&Vec<Footprint>],
        capacity: &BTreeMap<usize, u32>,
        usage: &mut BTreeMap<(usize, u32), u32>,
    ) -> bool {
        let Some((first, rest)) = order.split_first() else {
            return true;
        };
        for fp in first.iter() {
            if fp.iter().all(|&(s, t)| usage.get(&(s, t)).copied().unwrap_or(0) < capacity[&s]) {
                for &k in fp {
                    *usage.entry(k).or_insert(0) += 1;
                }
                let ok = rec(rest, capacity, usage);
                for k in fp {
                    *usage.get_mut(k).unwrap() -= 1;
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
    if options.iter().any(|o| o.is_empty()) {
        return false;
    }
    // a vehicle that can go without charging never competes for capacity
    let mut order: Vec<&Vec<Footprint>> = options.iter().filter(|o| !o.iter().any(|f| f.is_empty())).collect();
    order.sort_by_key(|o| o.len());
    rec(&order, capacity, &mut BTreeMap::new())
}

/// Fleet-level feasibility: max number of simultaneously servable vehicles
/// under `open` stations and their capacities.
pub fn fleet_max_feasible(
    vehicles: &[OracleVehicle],
    open: &BTreeSet<usize>,
    capacity: &BTreeMap<usize, u32>,
    q_min: f64,
    q_max: f64,
    gamma: &dyn Fn(f64) -> f64,
) -> usize {
    let options: Vec<Vec<Footprint>> = vehicles
        .iter()
        .map(|v| minimal_footprints(enumerate_schedules(v, open, q_min, q_max, gamma)))
        .collect();
    max_assignable(&options, capacity)
}


// ---------------------------------------------------------------------------
// Random test programs
// ---------------------------------------------------------------------------

pub mod gen {
    use super::{DenseLp, RowSense};
    use rand::Rng;

    /// Random LP over `x >= 0` with `m` rows (the last one `sum x <= B`, which
    /// keeps it bounded). With `feasible` the rows are built around a random
    /// nonnegative point so the program is guaranteed feasible.
    pub fn random_lp<R: Rng>(rng: &mut R, m: usize, n: usize, feasible: bool) -> DenseLp {
        let cost: Vec<f64> = (0..n).map(|_| rng.random_range(-10..=10) as f64).collect();
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0..=4) as f64).collect();
        let mut rows = Vec::with_capacity(m);
        for _ in 0..m.saturating_sub(1) {
            let a: Vec<f64> = (0..n)
                .map(|_| if rng.random_bool(0.7) { rng.random_range(-6..=6) as f64 } else { 0.0 })
                .collect();
            let act: f64 = a.iter().zip(&x0).map(|(p, q)| p * q).sum();
            let sense = match rng.random_range(0..10) {
                0 => RowSense::Eq,
                1..=5 => RowSense::Le,
                _ => RowSense::Ge,
            };
            let slack = rng.random_range(0..=5) as f64;
            let rhs = if feasible {
                match sense {
                    RowSense::Le => act + slack,
                    RowSense::Ge => act - slack,
                    RowSense::Eq => act,
                }
            } else {
                rng.random_range(-20..=20) as f64
            };
            rows.push((a, sense, rhs));
        }
        let total: f64 = x0.iter().sum();
        let budget = if feasible { total + rng.random_range(0..=6) as f64 } else { rng.random_range(1..=20) as f64 };
        rows.push((vec![1.0; n], RowSense::Le, budget));
        DenseLp { cost, rows }
    }

    /// Random covering / packing style binary program.
    pub fn random_binary<R: Rng>(rng: &mut R, m: usize, n: usize) -> DenseLp {
        let cost: Vec<f64> = (0..n).map(|_| rng.random_range(-5..=15) as f64).collect();
        let rows = (0..m)
            .map(|_| {
                let a: Vec<f64> = (0..n)
                    .map(|_| if rng.random_bool(0.5) { rng.random_range(-3..=5) as f64 } else { 0.0 })
                    .collect();
                let pos: f64 = a.iter().filter(|v| **v > 0.0).sum();
                let sense = if rng.random_bool(0.6) { RowSense::Ge } else { RowSense::Le };
                let rhs = match sense {
                    RowSense::Ge => rng.random_range(0..=(pos as i64 / 2).max(1)) as f64,
                    _ => rng.random_range(0..=(pos as i64).max(1)) as f64,
                };
                (a, sense, rhs)
            })
            .collect();
        DenseLp { cost, rows }
    }
}
