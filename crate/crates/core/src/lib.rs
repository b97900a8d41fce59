//! Charging-station network design for electric taxi fleets: instance model,
//! synthetic instance generation, branch-and-price feasibility checks, the
//! cutting-plane station selection loop and its robust variants.

pub mod bnp;
pub mod ccp;
pub mod checker;
pub mod error;
pub mod generator;
pub mod model;
pub mod network;
pub mod pricing;
pub mod robust;
pub mod schema;
pub mod toys;

pub use error::{GeneratorError, ModelError, SolveError};
pub use model::{
    charge_amount, configuration_cost, ChargeCurve, Gap, Instance, Period, Point, Scenario, Station,
    StationConfiguration, StationOption, TechParams, Trip, Vehicle,
};
