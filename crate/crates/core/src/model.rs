//! Domain types shared by every layer. Instances are immutable once validated.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Index into the discretized horizon.
pub type Period = u32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Station {
    pub id: String,
    pub location: Point,
    pub cost: f64,
    pub charge_points: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trip {
    pub pickup: Point,
    pub dropoff: Point,
    pub start: Period,
    pub end: Period,
    /// kWh
    pub energy: f64,
}

/// A station reachable from the idle gap after some trip.
#[derive(Debug, Clone, PartialEq)]
pub struct StationOption {
    pub station: usize,
    pub travel_in_minutes: u32,
    pub travel_out_minutes: u32,
    /// Travel times rounded up to whole periods.
    pub travel_in: Period,
    pub travel_out: Period,
    pub energy_in: f64,
    pub energy_out: f64,
}

/// The idle time between trip `c` and trip `c + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gap {
    pub direct_energy: f64,
    pub options: Vec<StationOption>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vehicle {
    pub id: String,
    pub trips: Vec<Trip>,
    pub q_begin: f64,
    pub q_end_required: f64,
    /// `trips.len() - 1` entries.
    pub gaps: Vec<Gap>,
}

impl Vehicle {
    /// Inclusive range of periods during which the vehicle can charge at
    /// `opt` in gap `c`, or `None` when the window is empty.
    pub fn charging_window(&self, c: usize, opt: &StationOption) -> Option<(Period, Period)> {
        let first = self.trips[c].end + opt.travel_in;
        let last = (self.trips[c + 1].start as i64) - opt.travel_out as i64 - 1;
        if last < first as i64 {
            None
        } else {
            Some((first, last as Period))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub vehicles: Vec<Vehicle>,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechParams {
    pub q_max: f64,
    pub q_min: f64,
    pub charge_power: f64,
    pub consumption_rate: f64,
    pub cc_cv_knee: f64,
    pub depot_charge: f64,
}

impl Default for TechParams {
    fn default() -> Self {
        Self {
            q_max: 40.0,
            q_min: 0.0,
            charge_power: 50.0,
            consumption_rate: 0.16,
            cc_cv_knee: 0.8,
            depot_charge: 0.0,
        }
    }
}

impl TechParams {
    /// End-of-shift SOC the vehicle must actually reach, after crediting
    /// depot charging.
    pub fn effective_end_requirement(&self, q_end_required: f64) -> f64 {
        (q_end_required - self.depot_charge * self.q_max).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub stations: Vec<Station>,
    pub scenarios: Vec<Scenario>,
    pub horizon_periods: Period,
    pub period_minutes: u32,
    pub tech: TechParams,
}

impl Instance {
    pub fn station_index(&self, id: &str) -> Option<usize> {
        self.stations.iter().position(|s| s.id == id)
    }

    pub fn scenario_index(&self, id: &str) -> Option<usize> {
        self.scenarios.iter().position(|s| s.id == id)
    }

    pub fn charge_curve(&self) -> ChargeCurve {
        ChargeCurve::new(&self.tech, self.period_minutes)
    }

    pub fn all_open(&self) -> Vec<bool> {
        vec![true; self.stations.len()]
    }
}

/// First-stage decision: which stations are opened.
#[derive(Debug, Clone, PartialEq)]
pub struct StationConfiguration {
    pub opened: BTreeSet<usize>,
    pub total_cost: f64,
}

impl StationConfiguration {
    pub fn new(opened: BTreeSet<usize>, inst: &Instance) -> Result<Self, ModelError> {
        let cost = configuration_cost(&opened, inst)?;
        Ok(Self {
            opened,
            total_cost: cost,
        })
    }

    pub fn from_mask(mask: &[bool], inst: &Instance) -> Result<Self, ModelError> {
        let opened = mask.iter().enumerate().filter(|(_, o)| **o).map(|(i, _)| i).collect();
        Self::new(opened, inst)
    }

    pub fn from_ids<S: AsRef<str>>(ids: &[S], inst: &Instance) -> Result<Self, ModelError> {
        let mut opened = BTreeSet::new();
        for id in ids {
            let idx = inst
                .station_index(id.as_ref())
                .ok_or_else(|| ModelError::UnknownStation(id.as_ref().to_string()))?;
            opened.insert(idx);
        }
        Self::new(opened, inst)
    }

    pub fn mask(&self, n_stations: usize) -> Vec<bool> {
        let mut m = vec![false; n_stations];
        for &s in &self.opened {
            m[s] = true;
        }
        m
    }

    pub fn ids<'a>(&self, inst: &'a Instance) -> Vec<&'a str> {
        self.opened.iter().map(|&s| inst.stations[s].id.as_str()).collect()
    }
}

/// Sum of opening costs over `opened`.
pub fn configuration_cost(opened: &BTreeSet<usize>, inst: &Instance) -> Result<f64, ModelError> {
    let mut total = 0.0;
    for &s in opened {
        let st = inst
            .stations
            .get(s)
            .ok_or_else(|| ModelError::UnknownStation(format!("#{s}")))?;
        total += st.cost;
    }
    Ok(total)
}

/// Per-period charging under the CC-CV model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeCurve {
    pub q_max: f64,
    pub knee: f64,
    pub power: f64,
    pub period_hours: f64,
}

impl ChargeCurve {
    pub fn new(tech: &TechParams, period_minutes: u32) -> Self {
        Self {
            q_max: tech.q_max,
            knee: tech.cc_cv_knee,
            power: tech.charge_power,
            period_hours: period_minutes as f64 / 60.0,
        }
    }

    /// Energy added during one period starting at `soc`.
    pub fn gamma(&self, soc: f64) -> f64 {
        self.charge_for_hours(soc, self.period_hours)
    }

    /// Closed-form CC-CV integration over `hours`. Below the knee power is
    /// constant; above it the power falls linearly with SOC, so the gap to
    /// full capacity decays exponentially in time.
    pub fn charge_for_hours(&self, soc: f64, hours: f64) -> f64 {
        let q_max = self.q_max;
        if soc >= q_max || hours <= 0.0 {
            return 0.0;
        }
        let knee_q = self.knee * q_max;
        let mut q = soc;
        let mut left = hours;
        if q < knee_q {
            let to_knee = (knee_q - q) / self.power;
            if left <= to_knee {
                return (q + self.power * left).min(q_max) - soc;
            }
            q = knee_q;
            left -= to_knee;
        }
        let span = q_max - knee_q;
        if span <= 0.0 {
            return q_max - soc;
        }
        let after = q_max - (q_max - q) * (-self.power * left / span).exp();
        (after.min(q_max) - soc).max(0.0)
    }
}

/// Energy charged from `soc` over `periods` consecutive periods.
pub fn charge_amount(soc: f64, tech: &TechParams, period_minutes: u32, periods: u32) -> f64 {
    ChargeCurve::new(tech, period_minutes).charge_for_hours(soc, periods as f64 * period_minutes as f64 / 60.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tech() -> TechParams {
        TechParams::default()
    }

    #[test]
    fn full_battery_charges_nothing() {
        assert_eq!(charge_amount(40.0, &tech(), 10, 1), 0.0);
    }

    #[test]
    fn constant_segment_is_power_times_duration() {
        // 50 kW for 1/6 h, far below the 32 kWh knee
        let got = charge_amount(0.0, &tech(), 10, 1);
        assert!((got - 50.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn taper_near_full_matches_fine_integration() {
        let got = charge_amount(39.0, &tech(), 10, 1);
        let oracle = chargenet_oracles::integrate_cc_cv(39.0, 40.0, 0.8, 50.0, 600);
        assert!((got - oracle).abs() < 1e-3, "{got} vs {oracle}");
        assert!(39.0 + got <= 40.0);
    }

    #[test]
    fn knee_at_one_is_pure_constant_current() {
        let t = TechParams { cc_cv_knee: 1.0, ..tech() };
        assert!((charge_amount(36.0, &t, 10, 1) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_the_knee_splits_the_period() {
        // 31 kWh: 1 kWh at full power takes 72 s, the remaining 528 s taper
        let got = charge_amount(31.0, &tech(), 10, 1);
        let oracle = chargenet_oracles::integrate_cc_cv(31.0, 40.0, 0.8, 50.0, 600);
        assert!((got - oracle).abs() < 1e-2);
    }

    #[test]
    fn configuration_cost_sums() {
        let inst = crate::schema::tests::two_station_instance();
        assert_eq!(configuration_cost(&BTreeSet::new(), &inst).unwrap(), 0.0);
        let both = StationConfiguration::from_ids(&["s1", "s2"], &inst).unwrap();
        assert_eq!(both.total_cost, 60.0);
        assert!(matches!(
            StationConfiguration::from_ids(&["nope"], &inst),
            Err(ModelError::UnknownStation(_))
        ));
        assert!(configuration_cost(&BTreeSet::from([7]), &inst).is_err());
    }

    proptest! {
        #[test]
        fn gamma_monotone_and_capped(a in 0.0f64..40.0, b in 0.0f64..40.0, periods in 1u32..6) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let g_lo = charge_amount(lo, &tech(), 10, periods);
            let g_hi = charge_amount(hi, &tech(), 10, periods);
            prop_assert!(g_lo >= 0.0 && g_hi >= 0.0);
            prop_assert!(g_hi <= g_lo + 1e-12);
            prop_assert!(lo + g_lo <= 40.0 + 1e-12);
        }

        #[test]
        fn gamma_chains_over_periods(soc in 0.0f64..40.0, a in 1u32..5, b in 1u32..5) {
            let t = tech();
            let whole = charge_amount(soc, &t, 10, a + b);
            let first = charge_amount(soc, &t, 10, a);
            let second = charge_amount(soc + first, &t, 10, b);
            prop_assert!((whole - (first + second)).abs() < 1e-9);
        }

        #[test]
        fn cost_is_permutation_invariant(mut ids in proptest::collection::vec(0usize..2, 0..4)) {
            let inst = crate::schema::tests::two_station_instance();
            let forward: BTreeSet<usize> = ids.iter().copied().collect();
            ids.reverse();
            let backward: BTreeSet<usize> = ids.iter().copied().collect();
            prop_assert_eq!(configuration_cost(&forward, &inst).unwrap(), configuration_cost(&backward, &inst).unwrap());
        }
    }
}
