//! Structured files written by the CLI. All of them carry a schema version
//! and contain no wall-clock data, so reruns reproduce them byte for byte.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use chargenet::robust::{FeasibilityReport, OmegaMember, RankedScenario, SeedStrategy};
use chargenet::schema::to_document;
use chargenet::Instance;

use crate::CliError;

pub const ARTIFACT_SCHEMA_VERSION: u32 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn file_sha256(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(sha256_hex(&bytes))
}

/// Hash of the station list alone; solutions only transfer between instances
/// that agree on it.
pub fn station_universe_hash(inst: &Instance) -> String {
    let stations = to_document(inst).stations;
    sha256_hex(serde_json::to_string(&stations).expect("stations serialize").as_bytes())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("artifacts serialize");
    text.push('\n');
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub schema_version: u32,
    pub run: String,
    pub mode: String,
    pub alpha: Option<f64>,
    pub seed_strategy: Option<SeedStrategy>,
    pub scenario: Option<String>,
    pub seed: u64,
    pub instance_sha256: String,
    pub station_universe_sha256: String,
    pub opened: Vec<String>,
    pub total_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveCounters {
    pub outer_iterations: usize,
    pub cutting_plane_iterations: usize,
    pub oracle_calls: usize,
    pub cuts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema_version: u32,
    pub run: String,
    pub opened: Vec<String>,
    pub total_cost: f64,
    pub counters: SolveCounters,
    pub ranking: Vec<RankedScenario>,
    pub omega: Vec<OmegaMember>,
    /// Cover cuts in the final pool, as station ids.
    pub cuts: Vec<Vec<String>>,
    /// Re-evaluation on the optimization scenarios.
    pub in_sample: FeasibilityReport,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidatedSet {
    pub path: String,
    pub instance_sha256: String,
    pub report: FeasibilityReport,
    pub meets_level: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub schema_version: u32,
    pub run: String,
    pub mode: String,
    pub alpha: Option<f64>,
    pub opened: Vec<String>,
    pub sets: Vec<ValidatedSet>,
    pub all_meet: bool,
}
