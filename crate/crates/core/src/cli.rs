//! Command-line frontend: `check | bounds | solve | verify`.
//!
//! Each command reads a JSON [`ExperimentConfig`] (unknown keys rejected),
//! applies `--override KEY=VALUE` edits addressed by dot paths, and writes
//! its artifacts atomically into the output directory. Data files carry no
//! timestamps; those go to `run.log` only. Exit codes: 0 success or pass,
//! 1 domain failure, 2 usage or configuration error.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bounds::{bounds, chi_indicator, BoundsResult, Weights};
use crate::geometry::Region;
use crate::hypotheses::{verify_hypotheses, HypothesisOptions, HypothesisReport};
use crate::model::{
    classify_boundary_state, BoundaryState, ReactionSystem, Speed, SystemSpec, WaveProblem, DEFAULT_GRID_POINTS,
    DEFAULT_HALF_LENGTH, DEFAULT_STATE_TOL,
};
use crate::solver::{
    solve_bvp, solve_bvp_free_speed, solve_bvp_pinned, End, FreeSpeedOptions, InitialGuess, NewtonOptions,
    PinOptions, WaveSolution,
};
use crate::verify::{sweep_solution, weight_grid, VerificationReport, DEFAULT_GRID_VALUES, TOL_BVP};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
        }
    }
}

/// The system, inline or as a path relative to the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSource {
    File { file: PathBuf },
    Inline(SystemSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// Dirichlet data at both ends; speed fixed or free.
    #[default]
    Dirichlet,
    /// Fixed speed, phase species free at `free_end`.
    Pinned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub e_minus: Vec<f64>,
    pub e_plus: Vec<f64>,
    pub theta: Speed,
    #[serde(default = "default_half_length")]
    pub half_length: f64,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default)]
    pub mode: SolveMode,
    #[serde(default = "default_anchor")]
    pub phase_anchor: f64,
    #[serde(default)]
    pub phase_position: f64,
    #[serde(default)]
    pub theta_guess: f64,
    #[serde(default = "default_free_end")]
    pub free_end: End,
    #[serde(default)]
    pub initial_guess: InitialGuess,
}

fn default_half_length() -> f64 {
    DEFAULT_HALF_LENGTH
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

fn default_anchor() -> f64 {
    0.5
}

fn default_free_end() -> End {
    End::Minus
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    /// Per-species values whose Cartesian power forms the grid.
    pub values: Vec<f64>,
    /// Explicit tuples; replaces `values` when present.
    pub tuples: Option<Vec<Weights>>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { values: DEFAULT_GRID_VALUES.to_vec(), tuples: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemSource,
    #[serde(default)]
    pub problem: Option<ProblemConfig>,
    #[serde(default)]
    pub geometry: HypothesisOptions,
    /// Weights for `bounds` and for the `p`, `q` columns of `wave.csv`; default all ones.
    #[serde(default)]
    pub weights: Option<Weights>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default = "default_tol_verify")]
    pub tol_verify: f64,
    #[serde(default = "default_state_tol")]
    pub state_tol: f64,
    #[serde(default)]
    pub newton: NewtonOptions,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn default_tol_verify() -> f64 {
    TOL_BVP
}

fn default_state_tol() -> f64 {
    DEFAULT_STATE_TOL
}

/// A parsed config together with the directory its relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    pub fn system(&self) -> Result<ReactionSystem, CliError> {
        let spec = match &self.config.system {
            SystemSource::Inline(spec) => spec.clone(),
            SystemSource::File { file } => {
                let path = self.base_dir.join(file);
                let text = fs::read_to_string(&path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
        };
        spec.build().map_err(|e| CliError::Config(e.to_string()))
    }

    fn weights(&self, species: usize) -> Result<Weights, CliError> {
        let w = match &self.config.weights {
            Some(w) => w.clone(),
            None => Weights::new(vec![1.0; species]).map_err(|e| CliError::Config(e.to_string()))?,
        };
        if w.len() != species {
            return Err(CliError::Config(format!("weights have {} entries, system has {species} species", w.len())));
        }
        Ok(w)
    }

    fn sweep_grid(&self, species: usize) -> Result<Vec<Weights>, CliError> {
        let grid = match &self.config.sweep.tuples {
            Some(t) => t.clone(),
            None => weight_grid(&self.config.sweep.values, species).map_err(|e| CliError::Config(e.to_string()))?,
        };
        if grid.is_empty() || grid.iter().any(|w| w.len() != species) {
            return Err(CliError::Config(format!("sweep tuples must be nonempty with {species} entries each")));
        }
        Ok(grid)
    }

    fn problem_config(&self) -> Result<&ProblemConfig, CliError> {
        self.config.problem.as_ref().ok_or_else(|| CliError::Config("missing `problem` section".into()))
    }

    fn endpoints(&self, system: &ReactionSystem) -> Result<(BoundaryState, BoundaryState), CliError> {
        let pc = self.problem_config()?;
        let classify = |p: &[f64]| {
            classify_boundary_state(system, p, self.config.state_tol).map_err(|e| CliError::Config(e.to_string()))
        };
        Ok((classify(&pc.e_minus)?, classify(&pc.e_plus)?))
    }

    pub fn problem(&self, system: &ReactionSystem) -> Result<WaveProblem, CliError> {
        let pc = self.problem_config()?;
        let (e_minus, e_plus) = self.endpoints(system)?;
        WaveProblem::new(system.clone(), e_minus, e_plus, pc.theta, pc.half_length, pc.grid_points)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Reads a config file and applies dot-path overrides before validation.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<LoadedConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    for item in overrides {
        apply_override(&mut value, item)?;
    }
    let config: ExperimentConfig =
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    validate(&config)?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(LoadedConfig { config, base_dir })
}

fn validate(config: &ExperimentConfig) -> Result<(), CliError> {
    if !(config.tol_verify.is_finite() && config.tol_verify >= 0.0) {
        return Err(CliError::Config(format!("tol_verify {} must be nonnegative", config.tol_verify)));
    }
    if !(config.state_tol.is_finite() && config.state_tol > 0.0) {
        return Err(CliError::Config(format!("state_tol {} must be positive", config.state_tol)));
    }
    let g = &config.geometry;
    if !(g.margin.is_finite() && g.margin >= 0.0 && g.margin < 1.0) {
        return Err(CliError::Config(format!("geometry.margin {} must lie in [0, 1)", g.margin)));
    }
    if !(g.band_tol.is_finite() && g.band_tol > 0.0) {
        return Err(CliError::Config(format!("geometry.band_tol {} must be positive", g.band_tol)));
    }
    if let Some(r) = g.resolution {
        if r < 3 {
            return Err(CliError::Config(format!("geometry.resolution {r} must be at least 3")));
        }
    }
    let n = &config.newton;
    if !(n.tol.is_finite() && n.tol > 0.0 && n.fd_step > 0.0 && n.min_damping > 0.0 && n.min_damping <= 1.0) {
        return Err(CliError::Config("newton options out of range".into()));
    }
    Ok(())
}

/// Sets `path` (dot-separated, numeric segments index arrays) to `value`,
/// parsed as JSON when possible and as a string otherwise.
pub fn apply_override(root: &mut Value, item: &str) -> Result<(), CliError> {
    let (key, raw) =
        item.split_once('=').ok_or_else(|| CliError::Config(format!("override `{item}` is not KEY=VALUE")))?;
    if key.is_empty() {
        return Err(CliError::Config(format!("override `{item}` has an empty key")));
    }
    let parsed = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let segments: Vec<&str> = key.split('.').collect();
    for (i, seg) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        node = match node {
            Value::Array(items) => {
                let idx: usize = seg
                    .parse()
                    .map_err(|_| CliError::Config(format!("override `{key}`: `{seg}` is not an array index")))?;
                let len = items.len();
                items
                    .get_mut(idx)
                    .ok_or_else(|| CliError::Config(format!("override `{key}`: index {idx} out of range {len}")))?
            }
            other => {
                if other.is_null() {
                    *other = Value::Object(Default::default());
                }
                let map = other
                    .as_object_mut()
                    .ok_or_else(|| CliError::Config(format!("override `{key}`: `{seg}` is not inside an object")))?;
                map.entry(seg.to_string()).or_insert(Value::Null)
            }
        };
        if last {
            *node = parsed;
            return Ok(());
        }
    }
    Ok(())
}

/// Writes `contents` to `dir/name` via a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp).map_err(io(&tmp))?;
        f.write_all(contents.as_bytes()).map_err(io(&tmp))?;
        f.sync_all().map_err(io(&tmp))?;
    }
    fs::rename(&tmp, &target).map_err(io(&target))?;
    Ok(target)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types always serialise");
    s.push('\n');
    s
}

fn append_log(dir: &Path, command: &str, outcome: &str) {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    if fs::create_dir_all(dir).is_ok() {
        if let Ok(mut f) = fs::OpenOptions::new().create(true).append(true).open(dir.join("run.log")) {
            let _ = writeln!(f, "unix_time={secs} command={command} outcome={outcome}");
        }
    }
}

/// Result of one command: whether it passed and a human-readable summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub summary: String,
    pub artifacts: Vec<PathBuf>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Runs the hypothesis checks; writes `hypotheses.json`.
pub fn cmd_check(cfg: &LoadedConfig, out: &Path) -> Result<Outcome, CliError> {
    let system = cfg.system()?;
    let report = verify_hypotheses(&system, &cfg.config.geometry);
    let path = write_atomic(out, "hypotheses.json", &to_json(&report))?;
    Ok(Outcome { passed: report.all_pass(), summary: report.to_table(), artifacts: vec![path] })
}

fn fitted_region(system: &ReactionSystem, cfg: &LoadedConfig) -> Result<(HypothesisReport, Region), CliError> {
    let report = verify_hypotheses(system, &cfg.config.geometry);
    let region = match (&report.region, report.all_pass()) {
        (Some(region), true) => region.clone(),
        _ => return Err(CliError::Domain(format!("hypothesis checks failed\n{}", report.to_table()))),
    };
    Ok((report, region))
}

/// Bounds artifact: the formula result plus the endpoints that fixed `chi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsArtifact {
    pub system: String,
    pub e_minus: BoundaryState,
    pub e_plus: BoundaryState,
    #[serde(flatten)]
    pub result: BoundsResult,
}

/// Fits the region and evaluates the bounds for the configured weights; writes `bounds.json`.
pub fn cmd_bounds(cfg: &LoadedConfig, out: &Path) -> Result<Outcome, CliError> {
    let system = cfg.system()?;
    let weights = cfg.weights(system.species())?;
    let (e_minus, e_plus) = cfg.endpoints(&system)?;
    let (_, region) = fitted_region(&system, cfg)?;
    let chi = chi_indicator(&e_minus, &e_plus);
    let result = bounds(&weights, system.diffusion(), &region, chi).map_err(|e| CliError::Domain(e.to_string()))?;
    let summary = format!(
        "bound   value\np_lower {}\np_upper {}\n(chi = {chi}, weights = {:?})",
        result.p_lower,
        result.p_upper,
        weights.as_slice()
    );
    let artifact = BoundsArtifact { system: system.name().to_string(), e_minus, e_plus, result };
    let path = write_atomic(out, "bounds.json", &to_json(&artifact))?;
    Ok(Outcome { passed: true, summary, artifacts: vec![path] })
}

/// Solves the configured problem in the configured mode.
pub fn solve_configured(cfg: &LoadedConfig, system: &ReactionSystem) -> Result<WaveSolution, CliError> {
    let pc = cfg.problem_config()?;
    let problem = cfg.problem(system)?;
    let newton = &cfg.config.newton;
    let result = match (pc.mode, problem.theta) {
        (SolveMode::Dirichlet, Speed::Fixed(_)) => solve_bvp(&problem, &pc.initial_guess, newton),
        (SolveMode::Dirichlet, Speed::Free(_)) => {
            let free = FreeSpeedOptions {
                phase_anchor: pc.phase_anchor,
                phase_position: pc.phase_position,
                theta_guess: pc.theta_guess,
            };
            solve_bvp_free_speed(&problem, &pc.initial_guess, &free, newton)
        }
        (SolveMode::Pinned, Speed::Fixed(_)) => {
            let pin = PinOptions { free_end: pc.free_end, phase_anchor: pc.phase_anchor, phase_position: pc.phase_position };
            solve_bvp_pinned(&problem, &pc.initial_guess, &pin, newton)
        }
        (SolveMode::Pinned, Speed::Free(_)) => {
            return Err(CliError::Config("pinned mode needs a fixed theta".into()));
        }
    };
    result.map_err(|e| CliError::Domain(format!("solver failed: {e}")))
}

/// Solves for the wave; writes `wave.csv` and `wave.json`.
pub fn cmd_solve(cfg: &LoadedConfig, out: &Path) -> Result<Outcome, CliError> {
    let system = cfg.system()?;
    let weights = cfg.weights(system.species())?;
    let sol = solve_configured(cfg, &system)?;
    let meta = sol.metadata();
    let csv = write_atomic(out, "wave.csv", &sol.to_csv(weights.as_slice()))?;
    let json = write_atomic(out, "wave.json", &to_json(&meta))?;
    let summary = format!(
        "theta = {:e}\nresidual = {:e}\niterations = {}\nmin = {}, max = {}",
        meta.theta, meta.residual_norm, meta.iterations, meta.min_value, meta.max_value
    );
    Ok(Outcome { passed: true, summary, artifacts: vec![csv, json] })
}

/// Fits the region, solves the wave and sweeps the weight grid; writes
/// `verification.json` and `verification.csv`.
pub fn cmd_verify(cfg: &LoadedConfig, out: &Path) -> Result<Outcome, CliError> {
    let system = cfg.system()?;
    let grid = cfg.sweep_grid(system.species())?;
    let (_, region) = fitted_region(&system, cfg)?;
    let sol = solve_configured(cfg, &system)?;
    let report = sweep_solution(&sol, &region, &grid, cfg.config.tol_verify)
        .map_err(|e| CliError::Domain(e.to_string()))?;
    let json = write_atomic(out, "verification.json", &report.to_json())?;
    let csv = write_atomic(out, "verification.csv", &report.to_csv())?;
    Ok(Outcome { passed: report.passed(), summary: verify_summary(&report), artifacts: vec![json, csv] })
}

fn verify_summary(report: &VerificationReport) -> String {
    let failed = report.records.iter().filter(|r| r.status == crate::verify::RecordStatus::Fail).count();
    let mut s = format!(
        "{} of {} weight tuples pass at tol {} (chi = {})",
        report.records.len() - failed,
        report.records.len(),
        report.tol_verify,
        report.chi
    );
    if let Some(t) = report.tightest() {
        s.push_str(&format!(
            "\ntightest: weights {:?}, margin_lo {:e}, margin_hi {:e}",
            t.weights.as_slice(),
            t.margin_lo,
            t.margin_hi
        ));
    }
    s
}

#[derive(Debug, Parser)]
#[command(name = "nbarrier", version, about = "A-priori bounds for competition-diffusion traveling waves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the structural hypotheses and fit the enclosing region.
    Check(CommonArgs),
    /// Evaluate the bounds for the configured weights.
    Bounds(CommonArgs),
    /// Solve for the traveling wave.
    Solve(CommonArgs),
    /// Solve and verify the bounds over the weight sweep.
    Verify(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (defaults to the config's `output_dir`, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Dot-path override, e.g. `geometry.margin=0.01`; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (name, common): (&str, &CommonArgs) = match &cli.command {
        Command::Check(a) => ("check", a),
        Command::Bounds(a) => ("bounds", a),
        Command::Solve(a) => ("solve", a),
        Command::Verify(a) => ("verify", a),
    };
    let cfg = match load_config(&common.config, &common.overrides) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("nbarrier {name}: {e}");
            return e.exit_code();
        }
    };
    let out = common.out.clone().or_else(|| cfg.config.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let result = match name {
        "check" => cmd_check(&cfg, &out),
        "bounds" => cmd_bounds(&cfg, &out),
        "solve" => cmd_solve(&cfg, &out),
        _ => cmd_verify(&cfg, &out),
    };
    match result {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for a in &outcome.artifacts {
                println!("wrote {}", a.display());
            }
            append_log(&out, name, if outcome.passed { "pass" } else { "fail" });
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("nbarrier {name}: {e}");
            append_log(&out, name, &format!("error({})", e.exit_code()));
            e.exit_code()
        }
    }
}
