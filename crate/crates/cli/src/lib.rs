//! Batch front end for the `nvqaoa` simulator.
//!
//! [`run`] parses arguments, executes one command and returns the process exit
//! code, so the binary is a thin wrapper and tests drive the same path.

pub mod angle;
pub mod manifest;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nvqaoa_core::experiment::format_sig;
use nvqaoa_core::graph::basis_label;
use nvqaoa_core::readout::{parse_labelled_values, DEFAULT_CHECKPOINT_EVERY};
use nvqaoa_core::{
    brute_force, convergence, landscape_error, optimize, reconstruct, run_scan, AxisRange, CalibrationSource,
    CalibrationTable, Graph, Mode, NoiseConfig, QaoaParams, ScanConfig, Strategy,
};

use crate::angle::{parse_angle, parse_range};
use crate::manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Fraction of valid landscape points below which the run fails.
pub const MIN_VALID_FRACTION: f64 = 0.99;

pub const DEFAULT_BETA: &str = "0.1pi:0.6pi:0.025pi";
pub const DEFAULT_GAMMA: &str = "0.1pi:2.1pi:0.05pi";
pub const DEFAULT_POINT_BETA: &str = "0.15pi";
pub const DEFAULT_POINT_GAMMA: &str = "1.5pi";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<nvqaoa_core::Error> for CliError {
    fn from(e: nvqaoa_core::Error) -> Self {
        match e {
            nvqaoa_core::Error::DegenerateCalibration { .. } => CliError::Degenerate(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read_input(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {what} {}: {e}", path.display())))
}

#[derive(Debug, Parser)]
#[command(name = "nvqaoa", version, about = "QAOA MAX-CUT simulator with fluorescence readout")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan the cost landscape over a (beta, gamma) grid.
    Landscape(LandscapeArgs),
    /// Minimize the cost with a grid search followed by local refinement.
    Optimize(OptimizeArgs),
    /// Reconstruct populations from a calibration table and flip-pattern means.
    Reconstruct(ReconstructArgs),
    /// Track reconstructed populations against accumulated shots at one point.
    Convergence(ConvergenceArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Ideal,
    Sampled,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ideal => Mode::Ideal,
            ModeArg::Sampled => Mode::Sampled,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    GridRefine,
    Simplex,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Graph file: `n <count>` then `u v [weight]` lines.
    #[arg(long)]
    pub graph: PathBuf,
    /// QAOA layers; every layer uses the same (beta, gamma).
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Sampled)]
    pub mode: ModeArg,
    /// Shots per sub-circuit.
    #[arg(long, default_value_t = 300_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 4)]
    pub realizations: usize,
    #[arg(long, env = "NVQAOA_SEED")]
    pub seed: Option<u64>,
    /// Calibration file of `<bitstring> <intensity>` lines. Defaults to
    /// (5, 3, 2, 1) for two-vertex graphs.
    #[arg(long)]
    pub cal: Option<PathBuf>,
    /// TOML noise configuration.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    /// Use the calibration table directly instead of measuring it.
    #[arg(long)]
    pub exact_calibration: bool,
    #[arg(long, default_value_t = DEFAULT_CHECKPOINT_EVERY)]
    pub checkpoint_every: u64,
    /// Worker threads (default: machine parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Overwrite existing outputs.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Args)]
pub struct LandscapeArgs {
    #[command(flatten)]
    pub exp: ExperimentArgs,
    #[arg(long, default_value = DEFAULT_BETA, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, default_value = DEFAULT_GAMMA, allow_hyphen_values = true)]
    pub gamma: String,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Also write a grayscale heatmap of the mean measured cost.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub exp: ExperimentArgs,
    /// Coarse grid searched before refinement.
    #[arg(long, default_value = DEFAULT_BETA, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, default_value = DEFAULT_GAMMA, allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long, value_enum, default_value_t = StrategyArg::GridRefine)]
    pub strategy: StrategyArg,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub cal: PathBuf,
    /// Means file of `<flip pattern> <mean>` lines.
    #[arg(long)]
    pub means: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub exp: ExperimentArgs,
    #[arg(long, default_value = DEFAULT_POINT_BETA, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, default_value = DEFAULT_POINT_GAMMA, allow_hyphen_values = true)]
    pub gamma: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write to this directory instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Landscape(a) => cmd_landscape(&a, stdout),
        Command::Optimize(a) => cmd_optimize(&a, stdout),
        Command::Reconstruct(a) => cmd_reconstruct(&a, stdout),
        Command::Convergence(a) => cmd_convergence(&a, stdout),
        Command::Replay(a) => cmd_replay(&a, stdout),
    }
}

fn absolute(path: &Path) -> Result<PathBuf, CliError> {
    std::path::absolute(path).map_err(|e| io_error(path, e))
}

/// Loads every input and assembles the scan configuration without touching
/// the output directory.
pub fn load_config(exp: &ExperimentArgs, beta: AxisRange, gamma: AxisRange) -> Result<ScanConfig, CliError> {
    let graph = Graph::parse(&read_input(&exp.graph, "graph file")?)?;
    let n = graph.num_vertices();
    let mode = Mode::from(exp.mode);
    let calibration = match &exp.cal {
        Some(path) => CalibrationTable::parse(&read_input(path, "calibration file")?)?,
        None if n == 2 => CalibrationTable::default_two_qubit(),
        None if mode == Mode::Sampled => {
            return Err(CliError::Usage(format!(
                "--cal is required in sampled mode for a {n}-vertex graph"
            )))
        }
        None => CalibrationTable::new(vec![1.0; 1 << n])?,
    };
    let master_seed = exp.seed.unwrap_or(0);
    let noise = match &exp.noise {
        Some(path) => parse_noise(&read_input(path, "noise file")?, master_seed)?,
        None => NoiseConfig {
            seed: master_seed,
            ..NoiseConfig::default()
        },
    };
    let cfg = ScanConfig {
        graph,
        p: exp.p,
        beta,
        gamma,
        shots: exp.shots,
        realizations: exp.realizations,
        mode,
        noise,
        calibration,
        calibration_source: if exp.exact_calibration {
            CalibrationSource::Exact
        } else {
            CalibrationSource::Empirical
        },
        checkpoint_every: exp.checkpoint_every,
        master_seed,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Reads a TOML noise table. Without an explicit `seed` key the noise stream
/// follows the master seed.
pub fn parse_noise(text: &str, master_seed: u64) -> Result<NoiseConfig, CliError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| CliError::Usage(format!("noise file: {e}")))?;
    let has_seed = table.contains_key("seed");
    let mut cfg: NoiseConfig = table
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Usage(format!("noise file: {e}")))?;
    if !has_seed {
        cfg.seed = master_seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--threads must be >= 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Refuses to clobber existing outputs unless forced, then creates the directory.
fn prepare_out(out: &Path, files: &[&str], force: bool) -> Result<(), CliError> {
    if !force {
        if let Some(existing) = files.iter().map(|f| out.join(f)).find(|p| p.exists()) {
            return Err(CliError::Usage(format!(
                "{} exists; pass --force to overwrite",
                existing.display()
            )));
        }
    }
    fs::create_dir_all(out).map_err(|e| io_error(out, e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn parse_range_arg(flag: &str, text: &str) -> Result<AxisRange, CliError> {
    parse_range(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn parse_angle_arg(flag: &str, text: &str) -> Result<f64, CliError> {
    parse_angle(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Ideal => "ideal",
        Mode::Sampled => "sampled",
    }
}

/// Flags that fully determine an experiment's output, with defaults and
/// the seed resolved and paths made absolute.
fn resolved_experiment_args(exp: &ExperimentArgs, cfg: &ScanConfig) -> Result<Vec<String>, CliError> {
    let mut args = vec![
        "--graph".into(),
        absolute(&exp.graph)?.display().to_string(),
        "--p".into(),
        exp.p.to_string(),
        "--mode".into(),
        mode_name(cfg.mode).into(),
        "--shots".into(),
        exp.shots.to_string(),
        "--realizations".into(),
        exp.realizations.to_string(),
        "--seed".into(),
        cfg.master_seed.to_string(),
        "--checkpoint-every".into(),
        exp.checkpoint_every.to_string(),
    ];
    if let Some(cal) = &exp.cal {
        args.extend(["--cal".into(), absolute(cal)?.display().to_string()]);
    }
    if let Some(noise) = &exp.noise {
        args.extend(["--noise".into(), absolute(noise)?.display().to_string()]);
    }
    if exp.exact_calibration {
        args.push("--exact-calibration".into());
    }
    Ok(args)
}

fn config_entries(cfg: &ScanConfig) -> Vec<(String, String)> {
    let mut entries = vec![
        ("vertices".to_string(), cfg.graph.num_vertices().to_string()),
        ("edges".to_string(), format!("{:?}", cfg.graph.edges())),
        ("p".to_string(), cfg.p.to_string()),
        (
            "beta".to_string(),
            format!("{:?}:{:?}:{:?}", cfg.beta.start, cfg.beta.stop, cfg.beta.step),
        ),
        (
            "gamma".to_string(),
            format!("{:?}:{:?}:{:?}", cfg.gamma.start, cfg.gamma.stop, cfg.gamma.step),
        ),
        ("mode".to_string(), mode_name(cfg.mode).to_string()),
        ("shots".to_string(), cfg.shots.to_string()),
        ("realizations".to_string(), cfg.effective_realizations().to_string()),
        ("checkpoint_every".to_string(), cfg.checkpoint_every.to_string()),
        (
            "calibration".to_string(),
            format!("{:?}", cfg.calibration.intensities()),
        ),
        (
            "calibration_source".to_string(),
            format!("{:?}", cfg.calibration_source).to_lowercase(),
        ),
    ];
    let n = &cfg.noise;
    entries.extend([
        (
            "noise.depolarizing_prob".to_string(),
            format!("{:?}", n.depolarizing_prob),
        ),
        (
            "noise.overrotation_frac".to_string(),
            format!("{:?}", n.overrotation_frac),
        ),
        ("noise.phase_offset".to_string(), format!("{:?}", n.phase_offset)),
        (
            "noise.calibration_sigma".to_string(),
            format!("{:?}", n.calibration_sigma),
        ),
        ("noise.seed".to_string(), n.seed.to_string()),
        ("noise.trajectories".to_string(), n.trajectories.to_string()),
    ]);
    entries
}

pub fn cmd_landscape(a: &LandscapeArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let beta = parse_range_arg("beta", &a.beta)?;
    let gamma = parse_range_arg("gamma", &a.gamma)?;
    let cfg = load_config(&a.exp, beta, gamma)?;
    let mut files = vec!["landscape.csv", "summary.txt", "manifest.txt"];
    if a.svg {
        files.push("landscape.svg");
    }
    prepare_out(&a.output.out, &files, a.output.force)?;

    let grid = with_pool(a.exp.threads, || run_scan(&cfg))??;
    let out = absolute(&a.output.out)?;
    let csv_path = out.join("landscape.csv");
    write_file(&csv_path, &grid.to_csv())?;
    let mut artifacts = vec![csv_path];
    let means = grid.mean_measured();
    if a.svg {
        let svg_path = out.join("landscape.svg");
        write_file(&svg_path, &svg::heatmap(&means, grid.n_beta, grid.n_gamma))?;
        artifacts.push(svg_path);
    }

    let total = grid.points.len();
    let invalid = grid.invalid_count();
    let valid_fraction = (total - invalid) as f64 / total as f64;
    let mut summary = String::new();
    summary += &format!("command = landscape\nmode = {}\n", mode_name(cfg.mode));
    summary += &format!(
        "grid = {} x {} (beta x gamma)\nrealizations = {}\npoints = {total}\ninvalid_points = {invalid}\nvalid_fraction = {valid_fraction:.6}\n",
        grid.n_beta, grid.n_gamma, grid.realizations
    );
    match landscape_error(&grid) {
        Ok(err) => summary += &format!("landscape_error = {}\n", format_sig(err)),
        Err(e) => summary += &format!("landscape_error = nan ({e})\n"),
    }
    let best = means
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_nan())
        .min_by(|x, y| x.1.total_cmp(y.1));
    if let Some((k, v)) = best {
        let point = &grid.points[k * grid.realizations];
        summary += &format!(
            "min_mean_measured = {} at beta = {}, gamma = {}\n",
            format_sig(*v),
            format_sig(point.beta),
            format_sig(point.gamma)
        );
    }
    for p in grid.points.iter().filter(|p| !p.is_valid()) {
        summary += &format!(
            "failed_point = beta {} gamma {} realization {}: {}\n",
            format_sig(p.beta),
            format_sig(p.gamma),
            p.realization,
            p.error.as_deref().unwrap_or("invalid")
        );
    }
    let summary_path = out.join("summary.txt");
    write_file(&summary_path, &summary)?;
    artifacts.push(summary_path);

    let mut args = vec!["landscape".to_string()];
    args.extend(resolved_experiment_args(&a.exp, &cfg)?);
    args.extend(["--beta".into(), a.beta.clone(), "--gamma".into(), a.gamma.clone()]);
    args.extend(["--out".into(), out.display().to_string()]);
    if a.svg {
        args.push("--svg".into());
    }
    finish_manifest(&out, "landscape", &cfg, artifacts, args, start)?;

    let _ = writeln!(
        stdout,
        "wrote {} points to {}",
        total,
        out.join("landscape.csv").display()
    );
    if valid_fraction < MIN_VALID_FRACTION {
        return Err(CliError::Degenerate(format!(
            "{invalid} of {total} points invalid (see summary.txt)"
        )));
    }
    Ok(EXIT_OK)
}

fn finish_manifest(
    out: &Path,
    command: &str,
    cfg: &ScanConfig,
    mut artifacts: Vec<PathBuf>,
    args: Vec<String>,
    start: Instant,
) -> Result<(), CliError> {
    let path = out.join("manifest.txt");
    artifacts.push(path.clone());
    let manifest = RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed: cfg.master_seed,
        config: config_entries(cfg),
        artifacts: artifacts.iter().map(|p| p.display().to_string()).collect(),
        duration_secs: start.elapsed().as_secs_f64(),
        args,
    };
    write_file(&path, &manifest.to_text())
}

pub fn cmd_convergence(a: &ConvergenceArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    if Mode::from(a.exp.mode) != Mode::Sampled {
        return Err(CliError::Usage("convergence requires sampled mode".into()));
    }
    let beta = parse_angle_arg("beta", &a.beta)?;
    let gamma = parse_angle_arg("gamma", &a.gamma)?;
    let cfg = load_config(&a.exp, AxisRange::point(beta), AxisRange::point(gamma))?;
    let params = QaoaParams::shared(cfg.p, beta, gamma)?;
    prepare_out(
        &a.output.out,
        &["convergence.csv", "summary.txt", "manifest.txt"],
        a.output.force,
    )?;

    let trace = with_pool(a.exp.threads, || convergence(&cfg, &params))??;
    let out = absolute(&a.output.out)?;
    let csv_path = out.join("convergence.csv");
    write_file(&csv_path, &trace.to_csv())?;

    let norms = &trace.final_norms;
    let valid: Vec<f64> = norms.iter().copied().filter(|v| !v.is_nan()).collect();
    let mean = valid.iter().sum::<f64>() / valid.len().max(1) as f64;
    let mut summary = format!(
        "command = convergence\nbeta = {}\ngamma = {}\nshots = {}\ncheckpoints = {}\nrealizations = {}\n",
        format_sig(beta),
        format_sig(gamma),
        cfg.shots,
        trace.rows.len(),
        cfg.realizations
    );
    summary += &format!("final_norm_mean = {}\n", format_sig(mean));
    if let Some(last) = trace.rows.last() {
        summary += &format!("final_norm_std = {}\n", format_sig(last.std_norm));
    }
    let summary_path = out.join("summary.txt");
    write_file(&summary_path, &summary)?;

    let mut args = vec!["convergence".to_string()];
    args.extend(resolved_experiment_args(&a.exp, &cfg)?);
    args.extend(["--beta".into(), a.beta.clone(), "--gamma".into(), a.gamma.clone()]);
    args.extend(["--out".into(), out.display().to_string()]);
    finish_manifest(&out, "convergence", &cfg, vec![csv_path, summary_path], args, start)?;

    let _ = writeln!(
        stdout,
        "wrote {} checkpoints to {}; final norm {}",
        trace.rows.len(),
        out.join("convergence.csv").display(),
        format_sig(mean)
    );
    Ok(EXIT_OK)
}

/// Prints a float with six decimals, without a sign on zero.
fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn in_pi(v: f64) -> String {
    format!("{}pi", fixed6(v / std::f64::consts::PI))
}

pub fn cmd_optimize(a: &OptimizeArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let beta = parse_range_arg("beta", &a.beta)?;
    let gamma = parse_range_arg("gamma", &a.gamma)?;
    let cfg = load_config(&a.exp, beta, gamma)?;
    let strategy = match a.strategy {
        StrategyArg::GridRefine => Strategy::GridThenRefine,
        StrategyArg::Simplex => Strategy::Simplex,
    };
    let result = with_pool(a.exp.threads, || optimize(&cfg, strategy))??;
    let report = brute_force(&cfg.graph)?;

    let mut text = String::new();
    let list = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{} ({})", fixed6(*x), in_pi(*x)))
            .collect::<Vec<_>>()
            .join(", ")
    };
    text += &format!("best_beta = {}\n", list(result.best_params.betas()));
    text += &format!("best_gamma = {}\n", list(result.best_params.gammas()));
    text += &format!("best_F = {}\n", fixed6(result.best_f));
    text += &format!("evaluations = {}\n", result.trace.len());
    let cuts: Vec<String> = report.best_strings.iter().map(|b| b.to_string()).collect();
    text += &format!("optimal_cuts = {}\n", cuts.join(","));
    text += &format!("best_cost = {}\n", fixed6(report.best_cost));
    if report.best_cost == 0.0 {
        text += "approximation_ratio = undefined\n";
        text += "note = degenerate problem: every cut has cost 0\n";
    } else {
        text += &format!("approximation_ratio = {}\n", fixed6(result.best_f / report.best_cost));
    }
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(EXIT_OK)
}

pub fn cmd_reconstruct(a: &ReconstructArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let cal = CalibrationTable::parse(&read_input(&a.cal, "calibration file")?)?;
    let means = parse_labelled_values(&read_input(&a.means, "means file")?)?;
    let est = reconstruct(&cal, &means)?;
    let n = cal.num_qubits();
    let mut text = String::new();
    for (s, p) in est.pops.iter().enumerate() {
        text += &format!("p{} = {}\n", basis_label(s, n), format_sig(*p));
    }
    for (t, z) in est.correlators.iter().enumerate() {
        text += &format!("z{} = {}\n", basis_label(t, n), format_sig(*z));
    }
    text += &format!("norm = {}\n", format_sig(est.norm));
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(EXIT_OK)
}

pub fn cmd_replay(a: &ReplayArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let text = read_input(&a.manifest, "manifest")?;
    let manifest = RunManifest::parse(&text).map_err(CliError::Usage)?;
    let mut args = vec!["nvqaoa".to_string()];
    let mut recorded = manifest.args.iter();
    while let Some(arg) = recorded.next() {
        match arg.as_str() {
            "--out" if a.out.is_some() => {
                recorded.next();
            }
            "--force" => {}
            _ => args.push(arg.clone()),
        }
    }
    if let Some(out) = &a.out {
        args.extend(["--out".into(), out.display().to_string()]);
    }
    if a.force {
        args.push("--force".into());
    }
    if let Some(t) = a.threads {
        args.extend(["--threads".into(), t.to_string()]);
    }
    let cli = Cli::try_parse_from(&args).map_err(|e| CliError::Usage(format!("manifest arguments: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::Usage("manifest records a replay".into()));
    }
    execute(cli.command, stdout)
}
