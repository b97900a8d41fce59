//! Small seeded random instances with short horizons and tight chargers.
//! Sized so that brute-force enumeration stays cheap; used by tests, the
//! acceptance suite and `chargenet generate --toy`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Gap, Instance, Point, Scenario, Station, StationOption, TechParams, Trip, Vehicle};
use crate::pricing::vehicle_feasible;

#[derive(Debug, Clone)]
pub struct ToyConfig {
    pub seed: u64,
    pub n_stations: usize,
    pub n_vehicles: usize,
    pub n_scenarios: usize,
    pub horizon: u32,
    pub max_trips: usize,
    /// Longest idle gap between consecutive trips, in periods.
    pub max_gap: u32,
    pub max_stations_per_gap: usize,
    pub max_charge_points: u32,
}

impl Default for ToyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_stations: 5,
            n_vehicles: 6,
            n_scenarios: 1,
            horizon: 48,
            max_trips: 4,
            max_gap: 7,
            max_stations_per_gap: 3,
            max_charge_points: 1,
        }
    }
}

fn toy_vehicle(rng: &mut ChaCha8Rng, cfg: &ToyConfig, id: String) -> Vehicle {
    let n_trips = rng.random_range(2..=cfg.max_trips.max(2));
    let mut trips = Vec::new();
    let mut t = rng.random_range(0..4u32);
    for _ in 0..n_trips {
        let len = rng.random_range(1..=3u32);
        if t + len > cfg.horizon {
            break;
        }
        trips.push(Trip {
            pickup: Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
            dropoff: Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
            start: t,
            end: t + len,
            energy: rng.random_range(2.0..8.0),
        });
        t += len + rng.random_range(2..=cfg.max_gap.max(2));
    }
    if trips.is_empty() {
        trips.push(Trip {
            pickup: Point::new(0.0, 0.0),
            dropoff: Point::new(1.0, 0.0),
            start: 0,
            end: 1,
            energy: 1.0,
        });
    }
    let gaps = (1..trips.len())
        .map(|_| {
            let k = rng.random_range(1..=cfg.max_stations_per_gap.min(cfg.n_stations).max(1));
            let mut ids: Vec<usize> = (0..cfg.n_stations).collect();
            for i in 0..k {
                let j = rng.random_range(i..ids.len());
                ids.swap(i, j);
            }
            let mut chosen: Vec<usize> = ids[..k].to_vec();
            chosen.sort_unstable();
            Gap {
                direct_energy: rng.random_range(0.5..2.0),
                options: chosen
                    .into_iter()
                    .map(|station| {
                        let tin = rng.random_range(3..=20u32);
                        let tout = rng.random_range(3..=20u32);
                        StationOption {
                            station,
                            travel_in_minutes: tin,
                            travel_out_minutes: tout,
                            travel_in: tin.div_ceil(10),
                            travel_out: tout.div_ceil(10),
                            energy_in: rng.random_range(0.3..1.5),
                            energy_out: rng.random_range(0.3..1.5),
                        }
                    })
                    .collect(),
            }
        })
        .collect();
    Vehicle {
        id,
        trips,
        q_begin: rng.random_range(8.0..14.0),
        q_end_required: 8.0,
        gaps,
    }
}

/// A random instance whose vehicles are each feasible with every station
/// open and no capacity limits.
pub fn toy_instance(cfg: &ToyConfig) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let stations = (0..cfg.n_stations)
        .map(|i| Station {
            id: format!("s{i}"),
            location: Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
            cost: rng.random_range(10..=50) as f64,
            charge_points: rng.random_range(1..=cfg.max_charge_points.max(1)),
        })
        .collect();
    let mut inst = Instance {
        stations,
        scenarios: Vec::new(),
        horizon_periods: cfg.horizon,
        period_minutes: 10,
        tech: TechParams::default(),
    };
    let open = inst.all_open();
    let weight = 1.0 / cfg.n_scenarios.max(1) as f64;
    for z in 0..cfg.n_scenarios.max(1) {
        let mut vehicles = Vec::with_capacity(cfg.n_vehicles);
        while vehicles.len() < cfg.n_vehicles {
            let v = toy_vehicle(&mut rng, cfg, format!("v{}", vehicles.len()));
            if vehicle_feasible(&inst, &v, &open) {
                vehicles.push(v);
            }
        }
        inst.scenarios.push(Scenario { id: format!("z{z}"), vehicles, weight });
    }
    inst
}
