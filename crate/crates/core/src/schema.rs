//! On-disk instance format and its validator. Documents are parsed into the
//! raw `*Doc` structs first; [`validate_instance`] turns them into a typed
//! [`Instance`] or reports every violation it finds.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::{Gap, Instance, Point, Scenario, Station, StationOption, TechParams, Trip, Vehicle};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub schema_version: u32,
    pub horizon: HorizonDoc,
    pub tech: TechDoc,
    pub stations: Vec<StationDoc>,
    pub scenarios: Vec<ScenarioDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorizonDoc {
    pub periods: u32,
    pub period_minutes: u32,
}

fn default_knee() -> f64 {
    0.8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechDoc {
    pub q_max_kwh: f64,
    #[serde(default)]
    pub q_min_kwh: f64,
    pub charge_power_kw: f64,
    pub consumption_kwh_per_km: f64,
    #[serde(default = "default_knee")]
    pub cc_cv_knee: f64,
    #[serde(default)]
    pub depot_charge: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationDoc {
    pub id: String,
    pub x_km: f64,
    pub y_km: f64,
    pub cost: f64,
    pub charge_points: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    pub vehicles: Vec<VehicleDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleDoc {
    pub id: String,
    pub q_begin_kwh: f64,
    pub q_end_kwh: f64,
    pub trips: Vec<TripDoc>,
    #[serde(default)]
    pub gaps: Vec<GapDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripDoc {
    pub pickup: [f64; 2],
    pub dropoff: [f64; 2],
    pub start: u32,
    pub end: u32,
    pub energy_kwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapDoc {
    pub direct_energy_kwh: f64,
    pub stations: Vec<GapStationDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapStationDoc {
    pub station: String,
    pub tau_in_min: u32,
    pub tau_out_min: u32,
    pub e_in_kwh: f64,
    pub e_out_kwh: f64,
}

/// One broken invariant, located by a JSON-path-like field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

struct Collector(Vec<Violation>);

impl Collector {
    fn check(&mut self, ok: bool, path: impl FnOnce() -> String, message: &str) {
        if !ok {
            self.0.push(Violation {
                path: path(),
                message: message.to_string(),
            });
        }
    }
}

fn finite_nonneg(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

fn periods_up(minutes: u32, period_minutes: u32) -> u32 {
    minutes.div_ceil(period_minutes.max(1))
}

/// Checks every invariant of `doc` and builds the typed instance. Nothing is
/// returned unless the whole document is valid.
pub fn validate_instance(doc: &InstanceDoc) -> Result<Instance, Vec<Violation>> {
    let mut c = Collector(Vec::new());
    c.check(doc.schema_version == SCHEMA_VERSION, || "schema_version".into(), "unsupported schema version");
    let t_max = doc.horizon.periods;
    let pm = doc.horizon.period_minutes;
    c.check(t_max > 0, || "horizon.periods".into(), "horizon must be positive");
    c.check(pm > 0, || "horizon.period_minutes".into(), "period length must be positive");

    let t = &doc.tech;
    c.check(t.q_max_kwh.is_finite() && t.q_max_kwh > 0.0, || "tech.q_max_kwh".into(), "battery capacity must be positive");
    c.check(
        finite_nonneg(t.q_min_kwh) && t.q_min_kwh < t.q_max_kwh,
        || "tech.q_min_kwh".into(),
        "minimum SOC must lie in [0, q_max)",
    );
    c.check(t.charge_power_kw.is_finite() && t.charge_power_kw > 0.0, || "tech.charge_power_kw".into(), "charging power must be positive");
    c.check(finite_nonneg(t.consumption_kwh_per_km), || "tech.consumption_kwh_per_km".into(), "consumption must be non-negative");
    c.check(t.cc_cv_knee > 0.0 && t.cc_cv_knee <= 1.0, || "tech.cc_cv_knee".into(), "knee must lie in (0, 1]");
    c.check((0.0..=1.0).contains(&t.depot_charge), || "tech.depot_charge".into(), "depot charge must lie in [0, 1]");
    let q_max = t.q_max_kwh;

    let mut station_ids: HashSet<&str> = HashSet::new();
    for (i, s) in doc.stations.iter().enumerate() {
        c.check(station_ids.insert(s.id.as_str()), || format!("stations[{i}].id"), "duplicate station id");
        c.check(s.cost.is_finite() && s.cost > 0.0, || format!("stations[{i}].cost"), "station cost must be positive");
        c.check(s.charge_points >= 1, || format!("stations[{i}].charge_points"), "station needs at least one charge point");
        c.check(s.x_km.is_finite() && s.y_km.is_finite(), || format!("stations[{i}]"), "station location must be finite");
    }
    let station_index = |id: &str| doc.stations.iter().position(|s| s.id == id);

    c.check(!doc.scenarios.is_empty(), || "scenarios".into(), "at least one scenario is required");
    let mut scenario_ids: HashSet<&str> = HashSet::new();
    let n_scen = doc.scenarios.len().max(1) as f64;
    let mut scenarios = Vec::with_capacity(doc.scenarios.len());
    for (zi, z) in doc.scenarios.iter().enumerate() {
        let zp = format!("scenarios[{zi}]");
        c.check(scenario_ids.insert(z.id.as_str()), || format!("{zp}.id"), "duplicate scenario id");
        c.check(!z.vehicles.is_empty(), || format!("{zp}.vehicles"), "scenario has no vehicles");
        if let Some(w) = z.weight {
            c.check(finite_nonneg(w), || format!("{zp}.weight"), "weight must be non-negative");
        }
        let mut vehicle_ids: HashSet<&str> = HashSet::new();
        let mut vehicles = Vec::with_capacity(z.vehicles.len());
        for (vi, v) in z.vehicles.iter().enumerate() {
            let vp = format!("{zp}.vehicles[{vi}]");
            c.check(vehicle_ids.insert(v.id.as_str()), || format!("{vp}.id"), "duplicate vehicle id in scenario");
            c.check(v.q_begin_kwh >= 0.0, || format!("{vp}.q_begin_kwh"), "initial SOC is negative");
            c.check(v.q_begin_kwh <= q_max, || format!("{vp}.q_begin_kwh"), "initial SOC exceeds capacity");
            c.check(
                (0.0..=q_max).contains(&v.q_end_kwh),
                || format!("{vp}.q_end_kwh"),
                "end-of-shift SOC requirement outside [0, q_max]",
            );
            c.check(!v.trips.is_empty(), || format!("{vp}.trips"), "vehicle has no trips");
            for (ti, tr) in v.trips.iter().enumerate() {
                let tp = format!("{vp}.trips[{ti}]");
                c.check(tr.start < tr.end, || tp.clone(), "trip times reversed");
                c.check(tr.end <= t_max, || format!("{tp}.end"), "trip ends after the horizon");
                c.check(finite_nonneg(tr.energy_kwh), || format!("{tp}.energy_kwh"), "trip energy must be non-negative");
                c.check(
                    tr.pickup.iter().chain(&tr.dropoff).all(|x| x.is_finite()),
                    || tp.clone(),
                    "trip coordinates must be finite",
                );
                if ti > 0 {
                    c.check(v.trips[ti - 1].end <= tr.start, || format!("{tp}.start"), "trip starts before the previous one ends");
                }
            }
            let want_gaps = v.trips.len().saturating_sub(1);
            c.check(v.gaps.len() == want_gaps, || format!("{vp}.gaps"), "need exactly one gap entry between consecutive trips");
            let mut gaps = Vec::with_capacity(v.gaps.len());
            for (gi, g) in v.gaps.iter().enumerate() {
                let gp = format!("{vp}.gaps[{gi}]");
                c.check(finite_nonneg(g.direct_energy_kwh), || format!("{gp}.direct_energy_kwh"), "energy must be non-negative");
                let mut seen: HashSet<&str> = HashSet::new();
                let mut options = Vec::with_capacity(g.stations.len());
                for (oi, o) in g.stations.iter().enumerate() {
                    let op = format!("{gp}.stations[{oi}]");
                    c.check(seen.insert(o.station.as_str()), || format!("{op}.station"), "station listed twice in one gap");
                    let idx = station_index(&o.station);
                    c.check(idx.is_some(), || format!("{op}.station"), "unknown station id");
                    c.check(finite_nonneg(o.e_in_kwh), || format!("{op}.e_in_kwh"), "energy must be non-negative");
                    c.check(finite_nonneg(o.e_out_kwh), || format!("{op}.e_out_kwh"), "energy must be non-negative");
                    let tin = periods_up(o.tau_in_min, pm);
                    let tout = periods_up(o.tau_out_min, pm);
                    c.check(tin <= t_max && tout <= t_max, || op.clone(), "travel time exceeds the horizon");
                    if let Some(station) = idx {
                        options.push(StationOption {
                            station,
                            travel_in_minutes: o.tau_in_min,
                            travel_out_minutes: o.tau_out_min,
                            travel_in: tin,
                            travel_out: tout,
                            energy_in: o.e_in_kwh,
                            energy_out: o.e_out_kwh,
                        });
                    }
                }
                gaps.push(Gap {
                    direct_energy: g.direct_energy_kwh,
                    options,
                });
            }
            vehicles.push(Vehicle {
                id: v.id.clone(),
                trips: v
                    .trips
                    .iter()
                    .map(|tr| Trip {
                        pickup: Point::new(tr.pickup[0], tr.pickup[1]),
                        dropoff: Point::new(tr.dropoff[0], tr.dropoff[1]),
                        start: tr.start,
                        end: tr.end,
                        energy: tr.energy_kwh,
                    })
                    .collect(),
                q_begin: v.q_begin_kwh,
                q_end_required: v.q_end_kwh,
                gaps,
            });
        }
        scenarios.push(Scenario {
            id: z.id.clone(),
            vehicles,
            weight: z.weight.unwrap_or(1.0 / n_scen),
        });
    }

    if !c.0.is_empty() {
        return Err(c.0);
    }
    Ok(Instance {
        stations: doc
            .stations
            .iter()
            .map(|s| Station {
                id: s.id.clone(),
                location: Point::new(s.x_km, s.y_km),
                cost: s.cost,
                charge_points: s.charge_points,
            })
            .collect(),
        scenarios,
        horizon_periods: t_max,
        period_minutes: pm,
        tech: TechParams {
            q_max: t.q_max_kwh,
            q_min: t.q_min_kwh,
            charge_power: t.charge_power_kw,
            consumption_rate: t.consumption_kwh_per_km,
            cc_cv_knee: t.cc_cv_knee,
            depot_charge: t.depot_charge,
        },
    })
}

pub fn vehicle_to_doc(v: &Vehicle, inst: &Instance) -> VehicleDoc {
    VehicleDoc {
        id: v.id.clone(),
        q_begin_kwh: v.q_begin,
        q_end_kwh: v.q_end_required,
        trips: v
            .trips
            .iter()
            .map(|t| TripDoc {
                pickup: [t.pickup.x, t.pickup.y],
                dropoff: [t.dropoff.x, t.dropoff.y],
                start: t.start,
                end: t.end,
                energy_kwh: t.energy,
            })
            .collect(),
        gaps: v
            .gaps
            .iter()
            .map(|g| GapDoc {
                direct_energy_kwh: g.direct_energy,
                stations: g
                    .options
                    .iter()
                    .map(|o| GapStationDoc {
                        station: inst.stations[o.station].id.clone(),
                        tau_in_min: o.travel_in_minutes,
                        tau_out_min: o.travel_out_minutes,
                        e_in_kwh: o.energy_in,
                        e_out_kwh: o.energy_out,
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn to_document(inst: &Instance) -> InstanceDoc {
    InstanceDoc {
        schema_version: SCHEMA_VERSION,
        horizon: HorizonDoc {
            periods: inst.horizon_periods,
            period_minutes: inst.period_minutes,
        },
        tech: TechDoc {
            q_max_kwh: inst.tech.q_max,
            q_min_kwh: inst.tech.q_min,
            charge_power_kw: inst.tech.charge_power,
            consumption_kwh_per_km: inst.tech.consumption_rate,
            cc_cv_knee: inst.tech.cc_cv_knee,
            depot_charge: inst.tech.depot_charge,
        },
        stations: inst
            .stations
            .iter()
            .map(|s| StationDoc {
                id: s.id.clone(),
                x_km: s.location.x,
                y_km: s.location.y,
                cost: s.cost,
                charge_points: s.charge_points,
            })
            .collect(),
        scenarios: inst
            .scenarios
            .iter()
            .map(|z| ScenarioDoc {
                id: z.id.clone(),
                weight: Some(z.weight),
                vehicles: z.vehicles.iter().map(|v| vehicle_to_doc(v, inst)).collect(),
            })
            .collect(),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ModelError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    validate_instance(&doc).map_err(ModelError::Invalid)
}

pub fn instance_to_json(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&to_document(inst)).expect("instance documents always serialize");
    s.push('\n');
    s
}

pub fn load_instance(path: &Path) -> Result<Instance, ModelError> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn save_instance(inst: &Instance, path: &Path) -> Result<(), ModelError> {
    std::fs::write(path, instance_to_json(inst))?;
    Ok(())
}
