//! Seeded synthetic city: candidate sites in a disc, k-means station siting,
//! taxi shifts with trips, stratified scenario sampling and derived
//! instances for other technology parameters.

use serde::{Deserialize, Serialize};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, LogNormal, Normal};

use crate::error::GeneratorError;
use crate::model::{Gap, Instance, Point, Scenario, Station, StationOption, TechParams, Trip, Vehicle};
use crate::pricing::vehicle_feasible;

pub const START_BINS: usize = 6;
pub const DAY_GROUPS: usize = 7;
const BIN_HOURS: f64 = 24.0 / START_BINS as f64;

/// Share of shifts starting in each four-hour bin, per day group (Monday
/// first). Rows need not be normalized.
pub const DEFAULT_START_WEIGHTS: [[f64; START_BINS]; DAY_GROUPS] = [
    [0.04, 0.22, 0.26, 0.22, 0.18, 0.08],
    [0.04, 0.22, 0.26, 0.22, 0.18, 0.08],
    [0.04, 0.22, 0.26, 0.22, 0.18, 0.08],
    [0.04, 0.21, 0.25, 0.22, 0.19, 0.09],
    [0.05, 0.20, 0.24, 0.21, 0.19, 0.11],
    [0.10, 0.12, 0.22, 0.22, 0.20, 0.14],
    [0.12, 0.10, 0.22, 0.22, 0.20, 0.14],
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    pub rng_seed: u64,
    pub n_vehicles: usize,
    /// Number of stations k selected from the raw sites.
    pub n_candidate_stations: usize,
    pub n_raw_sites: usize,
    pub n_scenarios: usize,
    pub city_radius_km: f64,
    pub charge_points: u32,
    pub horizon_periods: u32,
    pub period_minutes: u32,
    pub shift_hours_mean: f64,
    pub shift_hours_sd: f64,
    pub shift_hours_max: f64,
    /// Shorter shifts are discarded and redrawn.
    pub shift_hours_min: f64,
    pub trips_mean: f64,
    pub trips_sd: f64,
    pub trips_min: usize,
    pub trips_max: usize,
    /// Occupied road distance per trip, log-normal.
    pub trip_km_mean: f64,
    pub trip_km_sd: f64,
    /// Standard deviation of the offset between a drop-off and the next
    /// pickup, per axis.
    pub reposition_km_sd: f64,
    pub speed_kmh: f64,
    /// Road distance over straight-line distance.
    pub detour_factor: f64,
    pub q_begin_fraction: f64,
    pub q_end_fraction: f64,
    /// Pool size per day group, as a multiple of `n_vehicles`.
    pub pool_factor: f64,
    pub start_weights: [[f64; START_BINS]; DAY_GROUPS],
    pub tech: TechParams,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            rng_seed: 1,
            n_vehicles: 100,
            n_candidate_stations: 15,
            n_raw_sites: 215,
            n_scenarios: 28,
            city_radius_km: 10.0,
            charge_points: 4,
            horizon_periods: 144,
            period_minutes: 10,
            shift_hours_mean: 8.0,
            shift_hours_sd: 0.9,
            shift_hours_max: 9.0,
            shift_hours_min: 5.0,
            trips_mean: 10.92,
            trips_sd: 2.73,
            trips_min: 4,
            trips_max: 19,
            trip_km_mean: 6.5,
            trip_km_sd: 5.0,
            reposition_km_sd: 2.2,
            speed_kmh: 25.0,
            detour_factor: 1.3,
            q_begin_fraction: 0.5,
            q_end_fraction: 0.5,
            pool_factor: 3.0,
            start_weights: DEFAULT_START_WEIGHTS,
            tech: TechParams::default(),
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        let bad = |msg: &str| Err(GeneratorError::Config(msg.to_string()));
        if self.n_vehicles == 0 {
            return bad("n_vehicles must be positive");
        }
        if self.n_candidate_stations == 0 {
            return bad("n_candidate_stations must be positive");
        }
        if self.n_candidate_stations > self.n_raw_sites {
            return Err(GeneratorError::TooFewSites {
                k: self.n_candidate_stations,
                available: self.n_raw_sites,
            });
        }
        if self.n_scenarios == 0 {
            return bad("n_scenarios must be at least 1");
        }
        if !(self.city_radius_km > 0.0) {
            return bad("city_radius_km must be positive");
        }
        if self.charge_points == 0 {
            return bad("charge_points must be at least 1");
        }
        if self.period_minutes == 0 || self.horizon_periods == 0 {
            return bad("horizon must be non-empty");
        }
        if !(self.shift_hours_min > 0.0 && self.shift_hours_min <= self.shift_hours_max) {
            return bad("need 0 < shift_hours_min <= shift_hours_max");
        }
        if self.shift_hours_max * 60.0 > (self.horizon_periods * self.period_minutes) as f64 {
            return bad("shift_hours_max exceeds the horizon");
        }
        if !(self.shift_hours_sd >= 0.0 && self.trips_sd >= 0.0) {
            return bad("standard deviations must be non-negative");
        }
        if self.trips_min < 2 || self.trips_min > self.trips_max {
            return bad("need 2 <= trips_min <= trips_max");
        }
        if !(self.trip_km_mean > 0.0 && self.trip_km_sd > 0.0 && self.reposition_km_sd >= 0.0) {
            return bad("trip distance parameters must be positive");
        }
        if !(self.speed_kmh > 0.0 && self.detour_factor >= 1.0) {
            return bad("need speed_kmh > 0 and detour_factor >= 1");
        }
        for f in [self.q_begin_fraction, self.q_end_fraction] {
            if !(0.0..=1.0).contains(&f) {
                return bad("SOC fractions must lie in [0, 1]");
            }
        }
        if !(self.pool_factor >= 1.0) {
            return bad("pool_factor must be at least 1");
        }
        for row in &self.start_weights {
            if row.iter().any(|w| !(*w >= 0.0)) || row.iter().sum::<f64>() <= 0.0 {
                return bad("start_weights rows must be non-negative with a positive sum");
            }
        }
        let t = &self.tech;
        if !(0.0 <= t.q_min && t.q_min < t.q_max && t.charge_power > 0.0 && t.consumption_rate >= 0.0) {
            return bad("invalid technology parameters");
        }
        if !(t.cc_cv_knee > 0.0 && t.cc_cv_knee <= 1.0 && (0.0..=1.0).contains(&t.depot_charge)) {
            return bad("invalid technology parameters");
        }
        Ok(())
    }
}

/// Opening cost as a function of the normalized distance to the center.
pub fn station_cost(d: f64) -> Result<f64, GeneratorError> {
    if !(0.0..=1.0).contains(&d) {
        return Err(GeneratorError::DistanceOutOfRange(d));
    }
    Ok(30.0 * (-10.0 * d).exp() - 10.0 * d + 20.0)
}

fn nearest(p: &Point, centers: &[Point]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centers.iter().enumerate() {
        let d = p.dist(c);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// k-means++ seeding followed by Lloyd iterations.
pub fn kmeans<R: Rng>(points: &[Point], k: usize, rng: &mut R) -> Vec<Point> {
    let mut centers = vec![points[rng.random_range(0..points.len())]];
    while centers.len() < k {
        let d2: Vec<f64> = points.iter().map(|p| p.dist(&centers[nearest(p, &centers)]).powi(2)).collect();
        let total: f64 = d2.iter().sum();
        if total <= 0.0 {
            // fewer distinct points than k; repeat one
            centers.push(points[rng.random_range(0..points.len())]);
            continue;
        }
        let mut r = rng.random_range(0.0..total);
        let mut pick = points.len() - 1;
        for (i, w) in d2.iter().enumerate() {
            if r < *w {
                pick = i;
                break;
            }
            r -= w;
        }
        centers.push(points[pick]);
    }
    let mut assign = vec![usize::MAX; points.len()];
    for _ in 0..300 {
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
        if next == assign {
            break;
        }
        assign = next;
        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (p, &a) in points.iter().zip(&assign) {
            sums[a].0 += p.x;
            sums[a].1 += p.y;
            sums[a].2 += 1;
        }
        for (c, (sx, sy, n)) in centers.iter_mut().zip(sums) {
            if n > 0 {
                *c = Point::new(sx / n as f64, sy / n as f64);
            }
        }
    }
    centers
}

/// Runs k-means over `raw_sites` and opens a station at the unused raw site
/// nearest to each centroid. Costs follow [`station_cost`] of the distance
/// to `center` divided by `radius`.
pub fn select_station_sites<R: Rng>(
    raw_sites: &[Point],
    k: usize,
    center: Point,
    radius: f64,
    charge_points: u32,
    rng: &mut R,
) -> Result<Vec<Station>, GeneratorError> {
    if k > raw_sites.len() {
        return Err(GeneratorError::TooFewSites { k, available: raw_sites.len() });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let centers = kmeans(raw_sites, k, rng);
    let mut used = vec![false; raw_sites.len()];
    let mut stations = Vec::with_capacity(k);
    for (i, c) in centers.iter().enumerate() {
        let site = (0..raw_sites.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| raw_sites[a].dist(c).total_cmp(&raw_sites[b].dist(c)))
            .expect("k <= number of sites");
        used[site] = true;
        let loc = raw_sites[site];
        let d = (loc.dist(&center) / radius).min(1.0);
        stations.push(Station {
            id: format!("s{i}"),
            location: loc,
            cost: station_cost(d)?,
            charge_points,
        });
    }
    Ok(stations)
}

/// A point in the disc, denser toward the center.
fn city_point<R: Rng>(rng: &mut R, radius: f64) -> Point {
    let r = radius * rng.random::<f64>().powf(0.75);
    let a = rng.random_range(0.0..std::f64::consts::TAU);
    Point::new(r * a.cos(), r * a.sin())
}

fn clamp_to_disc(p: Point, radius: f64) -> Point {
    let n = (p.x * p.x + p.y * p.y).sqrt();
    if n <= radius {
        p
    } else {
        Point::new(p.x * radius / n, p.y * radius / n)
    }
}

/// A generated shift and the stratum it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolShift {
    pub vehicle: Vehicle,
    pub start_bin: usize,
    pub day_group: usize,
}

struct ShiftSampler<'a> {
    cfg: &'a GeneratorConfig,
    stations: &'a [Station],
    shift_hours: Normal<f64>,
    trips: Normal<f64>,
    trip_km: LogNormal<f64>,
    offset: Normal<f64>,
}

impl<'a> ShiftSampler<'a> {
    fn new(cfg: &'a GeneratorConfig, stations: &'a [Station]) -> Self {
        Self {
            cfg,
            stations,
            shift_hours: Normal::new(cfg.shift_hours_mean, cfg.shift_hours_sd).expect("validated"),
            trips: Normal::new(cfg.trips_mean, cfg.trips_sd).expect("validated"),
            trip_km: LogNormal::from_mean_cv(cfg.trip_km_mean, cfg.trip_km_sd / cfg.trip_km_mean).expect("validated"),
            offset: Normal::new(0.0, cfg.reposition_km_sd.max(1e-9)).expect("validated"),
        }
    }

    fn road_km(&self, a: &Point, b: &Point) -> f64 {
        a.dist(b) * self.cfg.detour_factor
    }

    fn minutes(&self, km: f64) -> u32 {
        (km / self.cfg.speed_kmh * 60.0).ceil() as u32
    }

    fn periods(&self, km: f64) -> u32 {
        self.minutes(km).div_ceil(self.cfg.period_minutes)
    }

    fn energy(&self, km: f64) -> f64 {
        km * self.cfg.tech.consumption_rate
    }

    /// One shift starting in `bin`. May return `None` when the drawn trips do
    /// not fit; the caller redraws.
    fn sample<R: Rng>(&self, rng: &mut R, bin: usize, id: String) -> Option<Vehicle> {
        let cfg = self.cfg;
        let radius = cfg.city_radius_km;
        let hours = loop {
            let h = self.shift_hours.sample(rng).min(cfg.shift_hours_max);
            if h >= cfg.shift_hours_min {
                break h;
            }
        };
        let n_trips = (self.trips.sample(rng).round().max(0.0) as usize).clamp(cfg.trips_min, cfg.trips_max);

        // geometry first, then timing
        let mut legs: Vec<(Point, Point, f64)> = Vec::with_capacity(n_trips);
        let mut here = city_point(rng, radius);
        for _ in 0..n_trips {
            let pickup = clamp_to_disc(
                Point::new(here.x + self.offset.sample(rng), here.y + self.offset.sample(rng)),
                radius,
            );
            let straight = (self.trip_km.sample(rng) / cfg.detour_factor).min(1.8 * radius);
            let mut dropoff = None;
            for _ in 0..16 {
                let a = rng.random_range(0.0..std::f64::consts::TAU);
                let p = Point::new(pickup.x + straight * a.cos(), pickup.y + straight * a.sin());
                if p.x * p.x + p.y * p.y <= radius * radius {
                    dropoff = Some(p);
                    break;
                }
            }
            let dropoff = dropoff.unwrap_or_else(|| clamp_to_disc(Point::new(-pickup.x, -pickup.y), radius));
            let km = self.road_km(&pickup, &dropoff);
            legs.push((pickup, dropoff, km));
            here = dropoff;
        }

        let shift_periods = ((hours * 60.0) / cfg.period_minutes as f64).round() as u32;
        let trip_periods: Vec<u32> = legs.iter().map(|l| self.periods(l.2).max(1)).collect();
        let reposition: Vec<u32> =
            legs.windows(2).map(|w| self.periods(self.road_km(&w[0].1, &w[1].0))).collect();
        let busy: u32 = trip_periods.iter().sum::<u32>() + reposition.iter().sum::<u32>();
        if busy > shift_periods {
            return None;
        }
        // heavy-tailed split of the idle time over the gaps
        let slack = shift_periods - busy;
        let weights: Vec<f64> = (0..reposition.len())
            .map(|_| {
                let e: f64 = Exp1.sample(rng);
                e * e
            })
            .collect();
        let total: f64 = weights.iter().sum::<f64>().max(1e-12);
        let mut extra: Vec<u32> = weights.iter().map(|w| (slack as f64 * w / total).floor() as u32).collect();
        let mut rest = slack - extra.iter().sum::<u32>();
        while rest > 0 && !extra.is_empty() {
            let i = rng.random_range(0..extra.len());
            extra[i] += 1;
            rest -= 1;
        }

        let bin_start = (bin as f64 * BIN_HOURS * 60.0) as u32;
        let bin_len = (BIN_HOURS * 60.0) as u32;
        let mut start = (bin_start + rng.random_range(0..bin_len)) / cfg.period_minutes;
        if start + shift_periods > cfg.horizon_periods {
            // late shifts are pulled back into the day
            start = cfg.horizon_periods - shift_periods;
        }

        let mut trips = Vec::with_capacity(legs.len());
        let mut t = start;
        for (c, (pickup, dropoff, km)) in legs.iter().enumerate() {
            let end = t + trip_periods[c];
            trips.push(Trip {
                pickup: *pickup,
                dropoff: *dropoff,
                start: t,
                end,
                energy: self.energy(*km),
            });
            if c + 1 < legs.len() {
                t = end + reposition[c] + extra[c];
            }
        }

        let gaps = (0..trips.len() - 1)
            .map(|c| {
                let from = trips[c].dropoff;
                let to = trips[c + 1].pickup;
                let options = self
                    .stations
                    .iter()
                    .enumerate()
                    .filter_map(|(s, st)| {
                        let km_in = self.road_km(&from, &st.location);
                        let km_out = self.road_km(&st.location, &to);
                        let tin = self.minutes(km_in);
                        let tout = self.minutes(km_out);
                        let opt = StationOption {
                            station: s,
                            travel_in_minutes: tin,
                            travel_out_minutes: tout,
                            travel_in: tin.div_ceil(cfg.period_minutes),
                            travel_out: tout.div_ceil(cfg.period_minutes),
                            energy_in: self.energy(km_in),
                            energy_out: self.energy(km_out),
                        };
                        let window = trips[c].end + opt.travel_in + opt.travel_out < trips[c + 1].start;
                        window.then_some(opt)
                    })
                    .collect();
                Gap {
                    direct_energy: self.energy(self.road_km(&from, &to)),
                    options,
                }
            })
            .collect();

        let q_max = cfg.tech.q_max;
        Some(Vehicle {
            id,
            trips,
            q_begin: cfg.q_begin_fraction * q_max,
            q_end_required: cfg.q_end_fraction * q_max,
            gaps,
        })
    }
}

fn pick_weighted<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut r = rng.random_range(0.0..total);
    for (i, w) in weights.iter().enumerate() {
        if r < *w {
            return i;
        }
        r -= w;
    }
    weights.len() - 1
}

/// Day group of scenario `z`: scenarios cycle through the week.
pub fn day_group_of(z: usize) -> usize {
    z % DAY_GROUPS
}

/// Largest-remainder apportionment of `total` by `shares`; ties go to the
/// lower index.
pub fn apportion(shares: &[usize], total: usize) -> Vec<usize> {
    let sum: usize = shares.iter().sum();
    if sum == 0 {
        return vec![0; shares.len()];
    }
    let mut quota: Vec<usize> = shares.iter().map(|&s| s * total / sum).collect();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    // remainder numerators are exact in integers
    order.sort_by_key(|&i| (std::cmp::Reverse(shares[i] * total % sum), i));
    let mut left = total - quota.iter().sum::<usize>();
    for &i in &order {
        if left == 0 {
            break;
        }
        quota[i] += 1;
        left -= 1;
    }
    quota
}

/// Proportional stratified sampling. Scenario `z` draws `n_vehicles` shifts
/// from the pool entries of day group [`day_group_of`]`(z)`, with per-bin
/// quotas proportional to that group's pool.
pub fn sample_scenarios<R: Rng>(
    pool: &[PoolShift],
    n_vehicles: usize,
    n_scenarios: usize,
    rng: &mut R,
) -> Result<Vec<Scenario>, GeneratorError> {
    let weight = 1.0 / n_scenarios as f64;
    let mut out = Vec::with_capacity(n_scenarios);
    for z in 0..n_scenarios {
        let day = day_group_of(z);
        let mut strata: Vec<Vec<usize>> = vec![Vec::new(); START_BINS];
        for (i, p) in pool.iter().enumerate() {
            if p.day_group == day {
                strata[p.start_bin].push(i);
            }
        }
        let sizes: Vec<usize> = strata.iter().map(Vec::len).collect();
        let quota = apportion(&sizes, n_vehicles);
        let mut chosen = Vec::with_capacity(n_vehicles);
        for (bin, (members, &q)) in strata.iter().zip(&quota).enumerate() {
            if q > members.len() || (q > 0 && members.is_empty()) {
                return Err(GeneratorError::EmptyStratum { bin, day, available: members.len(), quota: q });
            }
            chosen.extend(members.choose_multiple(rng, q).copied());
        }
        chosen.sort_unstable();
        out.push(Scenario {
            id: format!("z{z}"),
            vehicles: chosen.into_iter().map(|i| pool[i].vehicle.clone()).collect(),
            weight,
        });
    }
    Ok(out)
}

/// Seed, set index and rejection counts of a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub schema_version: u32,
    pub generator: String,
    pub rng_seed: u64,
    /// 0 for the optimization set, 1.. for out-of-sample sets.
    pub scenario_set: u32,
    pub pool_sizes: Vec<usize>,
    /// Shifts discarded because they were individually infeasible.
    pub rejected_infeasible: usize,
    /// Shifts discarded because their trips did not fit the duration.
    pub rejected_overfull: usize,
    /// Vehicles removed when deriving for other technology parameters, as
    /// `scenario/vehicle`.
    pub removed_vehicles: Vec<String>,
    pub config: GeneratorConfig,
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    pub provenance: Provenance,
}

fn station_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    rng
}

fn pool_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

fn sampling_rng(seed: u64, set: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 + set as u64);
    rng
}

/// Stations depend only on the seed, so every scenario set of one seed shares
/// the same station universe.
pub fn generate_stations(cfg: &GeneratorConfig) -> Result<Vec<Station>, GeneratorError> {
    cfg.validate()?;
    let mut rng = station_rng(cfg.rng_seed);
    let raw: Vec<Point> = (0..cfg.n_raw_sites).map(|_| city_point(&mut rng, cfg.city_radius_km)).collect();
    select_station_sites(&raw, cfg.n_candidate_stations, Point::new(0.0, 0.0), cfg.city_radius_km, cfg.charge_points, &mut rng)
}

/// The optimization instance (set 0) or out-of-sample set `set`. The shift
/// pool plays the part of the fleet's recorded history and depends only on
/// the seed; sets differ in which days are drawn from it.
pub fn generate_set(cfg: &GeneratorConfig, set: u32) -> Result<Generated, GeneratorError> {
    let stations = generate_stations(cfg)?;
    let mut inst = Instance {
        stations,
        scenarios: Vec::new(),
        horizon_periods: cfg.horizon_periods,
        period_minutes: cfg.period_minutes,
        tech: cfg.tech.clone(),
    };
    let open = inst.all_open();
    let sampler = ShiftSampler::new(cfg, &inst.stations);
    let mut rng = pool_rng(cfg.rng_seed);

    let per_group = ((cfg.n_vehicles as f64) * cfg.pool_factor).ceil() as usize;
    let groups_used = cfg.n_scenarios.min(DAY_GROUPS);
    let attempts_cap = 200 * per_group.max(10);
    let mut pool = Vec::with_capacity(per_group * groups_used);
    let mut pool_sizes = Vec::with_capacity(groups_used);
    let (mut infeasible, mut overfull) = (0, 0);
    for day in 0..groups_used {
        let mut attempts = 0;
        let mut kept = 0;
        while kept < per_group {
            attempts += 1;
            if attempts > attempts_cap {
                return Err(GeneratorError::PoolExhausted(attempts_cap));
            }
            let bin = pick_weighted(&mut rng, &cfg.start_weights[day]);
            let Some(v) = sampler.sample(&mut rng, bin, format!("d{day}-{kept}")) else {
                overfull += 1;
                continue;
            };
            if !vehicle_feasible(&inst, &v, &open) {
                infeasible += 1;
                continue;
            }
            pool.push(PoolShift { vehicle: v, start_bin: bin, day_group: day });
            kept += 1;
        }
        pool_sizes.push(kept);
    }
    let mut rng = sampling_rng(cfg.rng_seed, set);
    inst.scenarios = sample_scenarios(&pool, cfg.n_vehicles, cfg.n_scenarios, &mut rng)?;
    Ok(Generated {
        instance: inst,
        provenance: Provenance {
            schema_version: crate::schema::SCHEMA_VERSION,
            generator: format!("chargenet {}", env!("CARGO_PKG_VERSION")),
            rng_seed: cfg.rng_seed,
            scenario_set: set,
            pool_sizes,
            rejected_infeasible: infeasible,
            rejected_overfull: overfull,
            removed_vehicles: Vec::new(),
            config: cfg.clone(),
        },
    })
}

pub fn generate(cfg: &GeneratorConfig) -> Result<Generated, GeneratorError> {
    generate_set(cfg, 0)
}

/// Re-targets `master` to `tech`. SOC levels and energies scale with the
/// battery size and consumption rate; vehicles that cannot complete their
/// shift with every station open and unlimited chargers are removed, and
/// scenarios left empty are dropped. Removed vehicles are listed as
/// `scenario/vehicle`.
pub fn derive_parameter_instance(master: &Instance, tech: &TechParams) -> (Instance, Vec<String>) {
    let soc_scale = if master.tech.q_max > 0.0 { tech.q_max / master.tech.q_max } else { 0.0 };
    let e_scale = if master.tech.consumption_rate > 0.0 {
        tech.consumption_rate / master.tech.consumption_rate
    } else {
        1.0
    };
    let mut inst = Instance {
        stations: master.stations.clone(),
        scenarios: Vec::new(),
        horizon_periods: master.horizon_periods,
        period_minutes: master.period_minutes,
        tech: tech.clone(),
    };
    let open = inst.all_open();
    let mut removed = Vec::new();
    let mut scenarios = Vec::new();
    for sc in &master.scenarios {
        let mut vehicles = Vec::new();
        for v in &sc.vehicles {
            let mut w = v.clone();
            w.q_begin = (v.q_begin * soc_scale).min(tech.q_max);
            w.q_end_required = (v.q_end_required * soc_scale).min(tech.q_max);
            for t in &mut w.trips {
                t.energy *= e_scale;
            }
            for g in &mut w.gaps {
                g.direct_energy *= e_scale;
                for o in &mut g.options {
                    o.energy_in *= e_scale;
                    o.energy_out *= e_scale;
                }
            }
            if vehicle_feasible(&inst, &w, &open) {
                vehicles.push(w);
            } else {
                removed.push(format!("{}/{}", sc.id, v.id));
            }
        }
        if !vehicles.is_empty() {
            scenarios.push(Scenario { id: sc.id.clone(), vehicles, weight: sc.weight });
        }
    }
    let total: f64 = scenarios.iter().map(|s| s.weight).sum();
    if total > 0.0 {
        for s in &mut scenarios {
            s.weight /= total;
        }
    }
    inst.scenarios = scenarios;
    (inst, removed)
}

/// Master technology for derived instances: charging speed and battery size
/// doubled.
pub fn inflated(tech: &TechParams) -> TechParams {
    TechParams {
        q_max: tech.q_max * 2.0,
        charge_power: tech.charge_power * 2.0,
        ..tech.clone()
    }
}
