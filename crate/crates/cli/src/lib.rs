//! The `chargenet` command line: generate instances, solve them in one of
//! the robust modes, validate solutions on other scenario sets and replay
//! recorded runs.
//!
//! Exit codes: 0 success, 1 internal or output failure, 2 bad or unreadable
//! input or flags, 3 violated solver precondition, 4 time limit without an
//! accepted solution, 5 validation level missed, 6 replay mismatch.

pub mod artifacts;
pub mod manifest;

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use chargenet::bnp::BnpOptions;
use chargenet::generator::{derive_parameter_instance, generate_set, GeneratorConfig};
use chargenet::robust::{
    accepted_by_mode, evaluate_feasibility, meets_recorded_level, solve, FeasibilityReport, RobustMode,
    RobustOptions, SeedStrategy,
};
use chargenet::schema::{load_instance, save_instance};
use chargenet::{GeneratorError, Instance, SolveError, StationConfiguration, TechParams};

use artifacts::{
    file_sha256, read_json, station_universe_hash, write_json, SolutionFile, SolveCounters, SolveReport,
    ValidatedSet, ValidationReport, ARTIFACT_SCHEMA_VERSION,
};
use manifest::{manifest_path_for, ManifestBuilder, RunManifest};

pub const JOBS_ENV: &str = "CHARGENET_JOBS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("time limit reached without an accepted configuration")]
    TimeLimit,
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Io { .. } | CliError::Internal(_) => 1,
            CliError::Precondition(_) => 3,
            CliError::TimeLimit => 4,
            CliError::ReplayMismatch(_) => 6,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Precondition(m) => CliError::Precondition(m),
            SolveError::TimeLimit => CliError::TimeLimit,
            SolveError::Model(m) => CliError::Input(m.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn load(path: &Path) -> Result<Instance, CliError> {
    load_instance(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Debug, Parser)]
#[command(name = "chargenet", version, about = "Robust charging-station network design for taxi fleets")]
pub struct Cli {
    /// Worker threads for scenario-parallel phases [default: all cores].
    #[arg(long, global = true, env = JOBS_ENV)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic instance from a generator config.
    Generate(GenerateArgs),
    /// Re-target an instance to other technology parameters.
    Derive(DeriveArgs),
    /// Choose stations for an instance.
    Solve(SolveArgs),
    /// Check a solution against one or more scenario sets.
    Validate(ValidateArgs),
    /// Re-run a recorded command and compare its outputs.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Scenario set: 0 is the optimization set, 1.. are out-of-sample sets.
    #[arg(long, default_value_t = 0)]
    pub set: u32,
    /// Provenance sidecar [default: <out stem>.provenance.json].
    #[arg(long)]
    pub provenance: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[arg(long)]
    pub master: PathBuf,
    /// Technology parameters as JSON.
    #[arg(long)]
    pub tech: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Det,
    Fsa,
    Asa,
    Ava,
    Isa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeedArg {
    L,
    M,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub seed_strategy: Option<SeedArg>,
    /// Scenario id, for `--mode det`.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long, default_value = "run")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub solution: PathBuf,
    /// Report file [default: validation.json next to the solution].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Instance files holding the scenario sets.
    #[arg(required = true)]
    pub sets: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Parses `argv` (without the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("chargenet".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli, argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn init_jobs(jobs: Option<usize>) -> usize {
    let n = jobs
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    n
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<i32, CliError> {
    let jobs = init_jobs(cli.jobs);
    match &cli.command {
        Command::Generate(a) => cmd_generate(a, argv, jobs),
        Command::Derive(a) => cmd_derive(a, argv, jobs),
        Command::Solve(a) => cmd_solve(a, argv, jobs),
        Command::Validate(a) => cmd_validate(a, argv, jobs),
        Command::Replay(a) => cmd_replay(a),
    }
}

fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}.json"))
}

fn cmd_generate(a: &GenerateArgs, argv: &[String], jobs: usize) -> Result<i32, CliError> {
    let mut m = ManifestBuilder::start("generate", argv, jobs);
    m.config(&a.config);
    m.input("config", &a.config)?;
    let cfg: GeneratorConfig = read_json(&a.config)?;
    cfg.validate()?;
    m.seed(cfg.rng_seed);
    let t = Instant::now();
    let g = generate_set(&cfg, a.set)?;
    m.phase("generate", t.elapsed().as_secs_f64());
    save_instance(&g.instance, &a.out).map_err(|e| CliError::Internal(e.to_string()))?;
    let prov = a.provenance.clone().unwrap_or_else(|| sidecar(&a.out, "provenance"));
    write_json(&prov, &g.provenance)?;
    m.output("instance", &a.out)?;
    m.output("provenance", &prov)?;
    m.finish(&manifest_path_for(&a.out))?;
    let vehicles: usize = g.instance.scenarios.iter().map(|s| s.vehicles.len()).sum();
    println!(
        "generated {} stations, {} scenarios, {} vehicles (seed {}, set {}) -> {}",
        g.instance.stations.len(),
        g.instance.scenarios.len(),
        vehicles,
        cfg.rng_seed,
        a.set,
        a.out.display()
    );
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedProvenance {
    pub schema_version: u32,
    pub master_sha256: String,
    pub tech: TechParams,
    /// `scenario/vehicle`; these count as infeasible in evaluations.
    pub removed_vehicles: Vec<String>,
}

fn cmd_derive(a: &DeriveArgs, argv: &[String], jobs: usize) -> Result<i32, CliError> {
    let mut m = ManifestBuilder::start("derive", argv, jobs);
    m.input("master", &a.master)?;
    m.input("tech", &a.tech)?;
    let master = load(&a.master)?;
    let tech: TechParams = read_json(&a.tech)?;
    let (derived, removed) = derive_parameter_instance(&master, &tech);
    if derived.scenarios.is_empty() {
        return Err(CliError::Input("no vehicle remains feasible under the given technology".into()));
    }
    save_instance(&derived, &a.out).map_err(|e| CliError::Internal(e.to_string()))?;
    let prov = sidecar(&a.out, "provenance");
    write_json(
        &prov,
        &DerivedProvenance {
            schema_version: ARTIFACT_SCHEMA_VERSION,
            master_sha256: file_sha256(&a.master)?,
            tech,
            removed_vehicles: removed.clone(),
        },
    )?;
    m.output("instance", &a.out)?;
    m.output("provenance", &prov)?;
    m.finish(&manifest_path_for(&a.out))?;
    println!("derived instance keeps {} scenarios; removed {} vehicles", derived.scenarios.len(), removed.len());
    Ok(0)
}

/// Checks flag combinations and builds the mode.
pub fn mode_from_args(a: &SolveArgs, inst: &Instance) -> Result<RobustMode, CliError> {
    let usage = |m: &str| Err(CliError::Usage(m.to_string()));
    let seed = a.seed_strategy.map(|s| match s {
        SeedArg::L => SeedStrategy::Lowest,
        SeedArg::M => SeedStrategy::Median,
    });
    if let Some(alpha) = a.alpha {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return usage("--alpha must lie in (0, 1]");
        }
    }
    if a.scenario.is_some() && a.mode != ModeArg::Det {
        return usage("--scenario only applies to --mode det");
    }
    if a.alpha.is_some() && !matches!(a.mode, ModeArg::Asa | ModeArg::Ava) {
        return usage("--alpha only applies to --mode asa and --mode ava");
    }
    if seed.is_some() && !matches!(a.mode, ModeArg::Ava | ModeArg::Isa) {
        return usage("--seed-strategy only applies to --mode ava and --mode isa");
    }
    Ok(match a.mode {
        ModeArg::Det => {
            let Some(id) = &a.scenario else {
                return usage("--mode det needs --scenario");
            };
            let scenario = inst
                .scenario_index(id)
                .ok_or_else(|| CliError::Usage(format!("unknown scenario {id}")))?;
            RobustMode::Deterministic { scenario }
        }
        ModeArg::Fsa => RobustMode::Fsa,
        ModeArg::Asa => match a.alpha {
            Some(alpha) => RobustMode::Asa { alpha },
            None => return usage("--mode asa needs --alpha"),
        },
        ModeArg::Ava => match a.alpha {
            Some(alpha) => RobustMode::Ava { alpha, seed: seed.unwrap_or(SeedStrategy::Lowest) },
            None => return usage("--mode ava needs --alpha"),
        },
        ModeArg::Isa => RobustMode::Isa { seed: seed.unwrap_or(SeedStrategy::Lowest) },
    })
}

fn cmd_solve(a: &SolveArgs, argv: &[String], jobs: usize) -> Result<i32, CliError> {
    let mut m = ManifestBuilder::start("solve", argv, jobs);
    m.seed(a.seed);
    m.input("instance", &a.instance)?;
    let t = Instant::now();
    let inst = load(&a.instance)?;
    m.phase("load", t.elapsed().as_secs_f64());
    let mode = mode_from_args(a, &inst)?;

    let mut opts = RobustOptions::default();
    opts.cp.seed = a.seed;
    if let Some(limit) = a.time_limit {
        if !(limit > 0.0 && limit.is_finite()) {
            return Err(CliError::Usage("--time-limit must be a positive number of seconds".into()));
        }
        opts.cp.deadline = Some(Instant::now() + Duration::from_secs_f64(limit));
    }
    let outcome = solve(&inst, &mode, &opts)?;
    for (phase, d) in &outcome.phases {
        m.phase(phase, d.as_secs_f64());
    }
    let run_name = mode.run_name(&inst);
    let opened: Vec<String> = outcome.configuration.ids(&inst).into_iter().map(String::from).collect();

    let t = Instant::now();
    let in_sample = evaluate_feasibility(&inst, &outcome.configuration.mask(inst.stations.len()), &opts.bnp)?;
    m.phase("evaluate", t.elapsed().as_secs_f64());
    let accepted = accepted_by_mode(&inst, &outcome, &in_sample);

    let solution = SolutionFile {
        schema_version: ARTIFACT_SCHEMA_VERSION,
        run: run_name.clone(),
        mode: mode.keyword().to_string(),
        alpha: mode.alpha(),
        seed_strategy: match mode {
            RobustMode::Ava { seed, .. } | RobustMode::Isa { seed } => Some(seed),
            _ => None,
        },
        scenario: match mode {
            RobustMode::Deterministic { scenario } => Some(inst.scenarios[scenario].id.clone()),
            _ => None,
        },
        seed: a.seed,
        instance_sha256: file_sha256(&a.instance)?,
        station_universe_sha256: station_universe_hash(&inst),
        opened: opened.clone(),
        total_cost: outcome.configuration.total_cost,
    };
    let report = SolveReport {
        schema_version: ARTIFACT_SCHEMA_VERSION,
        run: run_name.clone(),
        opened: opened.clone(),
        total_cost: outcome.configuration.total_cost,
        counters: SolveCounters {
            outer_iterations: outcome.outer_iterations,
            cutting_plane_iterations: outcome.cutting_plane_iterations,
            oracle_calls: outcome.oracle_calls,
            cuts: outcome.pool.len(),
        },
        ranking: outcome.ranking.clone(),
        omega: outcome.omega.clone(),
        cuts: outcome.pool.to_checkpoint(&inst).covers,
        in_sample: in_sample.clone(),
        accepted,
    };
    let sol_path = a.out_dir.join("solution.json");
    let rep_path = a.out_dir.join("report.json");
    write_json(&sol_path, &solution)?;
    write_json(&rep_path, &report)?;
    m.output("solution", &sol_path)?;
    m.output("report", &rep_path)?;
    m.finish(&a.out_dir.join("manifest.json"))?;

    println!("{run_name}: cost {:.4} with {} of {} stations open", solution.total_cost, opened.len(), inst.stations.len());
    println!("  opened: {}", opened.join(" "));
    println!(
        "  in-sample: mean vehicle feasibility {:.2}%, min {:.2}%, scenario feasibility {:.2}%",
        100.0 * in_sample.mean_vehicle_feasibility,
        100.0 * in_sample.min_vehicle_feasibility,
        100.0 * in_sample.scenario_feasibility
    );
    if !accepted {
        return Err(CliError::Internal("returned configuration fails its own acceptance rule".into()));
    }
    Ok(0)
}

pub fn format_validation_table(report: &ValidationReport) -> String {
    let mut out = format!(
        "{} ({} stations open)\n{:<32} {:>9} {:>11} {:>11}  {}\n",
        report.run,
        report.opened.len(),
        "set",
        "V_mean %",
        "V_min %",
        "S_feas %",
        "level"
    );
    for s in &report.sets {
        let r: &FeasibilityReport = &s.report;
        out.push_str(&format!(
            "{:<32} {:>9.2} {:>11.2} {:>11.2}  {}\n",
            s.path,
            100.0 * r.mean_vehicle_feasibility,
            100.0 * r.min_vehicle_feasibility,
            100.0 * r.scenario_feasibility,
            if s.meets_level { "met" } else { "MISSED" }
        ));
    }
    out
}

fn cmd_validate(a: &ValidateArgs, argv: &[String], jobs: usize) -> Result<i32, CliError> {
    let mut m = ManifestBuilder::start("validate", argv, jobs);
    m.input("solution", &a.solution)?;
    let sol: SolutionFile = read_json(&a.solution)?;
    if sol.schema_version != ARTIFACT_SCHEMA_VERSION {
        return Err(CliError::Input(format!("unsupported solution schema version {}", sol.schema_version)));
    }
    let bnp = BnpOptions::default();
    let mut sets = Vec::with_capacity(a.sets.len());
    for path in &a.sets {
        m.input("scenario-set", path)?;
        let inst = load(path)?;
        if station_universe_hash(&inst) != sol.station_universe_sha256 {
            return Err(CliError::Input(format!(
                "{}: station universe differs from the one the solution was computed on",
                path.display()
            )));
        }
        let config = StationConfiguration::from_ids(&sol.opened, &inst).map_err(|e| CliError::Input(e.to_string()))?;
        let t = Instant::now();
        let report = evaluate_feasibility(&inst, &config.mask(inst.stations.len()), &bnp)?;
        m.phase(&format!("evaluate {}", path.display()), t.elapsed().as_secs_f64());
        sets.push(ValidatedSet {
            path: path.display().to_string(),
            instance_sha256: file_sha256(path)?,
            meets_level: meets_recorded_level(&sol.mode, sol.alpha, &report),
            report,
        });
    }
    let report = ValidationReport {
        schema_version: ARTIFACT_SCHEMA_VERSION,
        run: sol.run.clone(),
        mode: sol.mode.clone(),
        alpha: sol.alpha,
        opened: sol.opened.clone(),
        all_meet: sets.iter().all(|s| s.meets_level),
        sets,
    };
    let out = a
        .out
        .clone()
        .unwrap_or_else(|| a.solution.with_file_name("validation.json"));
    write_json(&out, &report)?;
    m.output("report", &out)?;
    m.finish(&manifest_path_for(&out))?;
    print!("{}", format_validation_table(&report));
    Ok(if report.all_meet { 0 } else { 5 })
}

fn cmd_replay(a: &ReplayArgs) -> Result<i32, CliError> {
    let recorded: RunManifest = read_json(&a.manifest)?;
    if recorded.command == "replay" {
        return Err(CliError::Usage("cannot replay a replay".into()));
    }
    for input in &recorded.inputs {
        let now = file_sha256(Path::new(&input.path))?;
        if now != input.sha256 {
            return Err(CliError::ReplayMismatch(format!("input {} changed since the recorded run", input.path)));
        }
    }
    let code = main_with_args(&recorded.args);
    if code != 0 && code != 5 {
        return Err(CliError::ReplayMismatch(format!("replayed command exited with {code}")));
    }
    let mut mismatched = Vec::new();
    for out in &recorded.outputs {
        if file_sha256(Path::new(&out.path))? != out.sha256 {
            mismatched.push(out.path.clone());
        }
    }
    if !mismatched.is_empty() {
        return Err(CliError::ReplayMismatch(format!("outputs differ: {}", mismatched.join(", "))));
    }
    println!("replay reproduced {} output(s) byte for byte", recorded.outputs.len());
    Ok(code)
}
