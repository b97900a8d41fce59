//! Run manifests: what was run, on which inputs, producing which outputs.
//! Timing lives here and nowhere else.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::artifacts::{file_sha256, write_json, ARTIFACT_SCHEMA_VERSION};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileRecord {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTime {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: String,
    pub command: String,
    /// Arguments after the binary name; `chargenet replay` re-executes them.
    pub args: Vec<String>,
    pub config: Option<String>,
    pub seed: Option<u64>,
    pub jobs: usize,
    pub inputs: Vec<FileRecord>,
    pub outputs: Vec<FileRecord>,
    pub started: String,
    pub finished: String,
    pub phases: Vec<PhaseTime>,
}

pub struct ManifestBuilder {
    manifest: RunManifest,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn record(role: &str, path: &Path) -> Result<FileRecord, CliError> {
    Ok(FileRecord {
        role: role.to_string(),
        path: path.display().to_string(),
        sha256: file_sha256(path)?,
    })
}

impl ManifestBuilder {
    pub fn start(command: &str, args: &[String], jobs: usize) -> Self {
        Self {
            manifest: RunManifest {
                schema_version: ARTIFACT_SCHEMA_VERSION,
                tool: format!("chargenet {}", env!("CARGO_PKG_VERSION")),
                command: command.to_string(),
                args: args.to_vec(),
                config: None,
                seed: None,
                jobs,
                inputs: Vec::new(),
                outputs: Vec::new(),
                started: now(),
                finished: String::new(),
                phases: Vec::new(),
            },
        }
    }

    pub fn config(&mut self, path: &Path) {
        self.manifest.config = Some(path.display().to_string());
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    pub fn input(&mut self, role: &str, path: &Path) -> Result<(), CliError> {
        self.manifest.inputs.push(record(role, path)?);
        Ok(())
    }

    pub fn output(&mut self, role: &str, path: &Path) -> Result<(), CliError> {
        self.manifest.outputs.push(record(role, path)?);
        Ok(())
    }

    pub fn phase(&mut self, phase: &str, seconds: f64) {
        self.manifest.phases.push(PhaseTime { phase: phase.to_string(), seconds });
    }

    pub fn finish(mut self, path: &Path) -> Result<RunManifest, CliError> {
        self.manifest.finished = now();
        write_json(path, &self.manifest)?;
        Ok(self.manifest)
    }
}

/// `dir/name.manifest.json` next to `output`.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.manifest.json"))
}
