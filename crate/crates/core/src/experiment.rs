//! Landscape scans and the calibrate-then-reconstruct measurement protocol.
//!
//! A sampled point runs `2^n` calibration preparations and `2^n` flip-pattern
//! variants of the ansatz, interleaved round-robin in blocks of
//! `checkpoint_every` shots, then inverts the flip-pattern means against the
//! empirically measured calibration.
//!
//! Every (point, realization) task draws from its own RNG substream keyed by
//! `(master_seed, point_index, realization)`, so results do not depend on how
//! tasks are scheduled.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::circuit::{build_ansatz, QaoaParams};
use crate::error::{Error, Result};
use crate::graph::{basis_label, diagonal_costs, Graph};
use crate::noise::{noisy_populations, perturb_calibration, NoiseConfig};
use crate::optimize::{better, coordinate_descent, nelder_mead, Evaluation, NelderMeadOptions};
use crate::readout::{CalibrationTable, ShotSampler, DEFAULT_CHECKPOINT_EVERY};
use crate::reconstruction::reconstruct;
use crate::seed::{substream, substream_seed};

/// Inclusive arithmetic range `start, start + step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AxisRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let r = Self { start, stop, step };
        r.validate()?;
        Ok(r)
    }

    /// Single value.
    pub fn point(value: f64) -> Self {
        Self {
            start: value,
            stop: value,
            step: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if ![self.start, self.stop, self.step].iter().all(|v| v.is_finite()) {
            return Err(Error::Config("range bounds must be finite".into()));
        }
        if self.step <= 0.0 {
            return Err(Error::Config(format!("range step {} must be positive", self.step)));
        }
        if self.stop < self.start {
            return Err(Error::Config(format!(
                "range stop {} is below start {}",
                self.stop, self.start
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Exact populations of the simulated state; no shots, no reconstruction.
    Ideal,
    /// Shot-sampled fluorescence followed by population reconstruction.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalibrationSource {
    /// Intensities are measured from the calibration circuits at every point.
    Empirical,
    /// The configured table (after any perturbation) is used directly.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub graph: Graph,
    /// Layers; every layer shares the scanned `(beta, gamma)`.
    pub p: usize,
    pub beta: AxisRange,
    pub gamma: AxisRange,
    /// Shots per sub-circuit.
    pub shots: u64,
    pub realizations: usize,
    pub mode: Mode,
    pub noise: NoiseConfig,
    pub calibration: CalibrationTable,
    pub calibration_source: CalibrationSource,
    pub checkpoint_every: u64,
    pub master_seed: u64,
}

/// Offset of the scan grid from the period boundaries, in units of pi.
pub const GRID_OFFSET: f64 = 0.1;

impl ScanConfig {
    /// Grid `beta in [0.1pi, 0.6pi]` step `0.025pi`, `gamma in [0.1pi, 2.1pi]`
    /// step `0.05pi`, 300 000 shots, four realizations, sampled mode.
    pub fn paper_grid(graph: Graph, calibration: CalibrationTable) -> Self {
        Self {
            graph,
            p: 1,
            beta: AxisRange {
                start: GRID_OFFSET * PI,
                stop: (0.5 + GRID_OFFSET) * PI,
                step: 0.025 * PI,
            },
            gamma: AxisRange {
                start: GRID_OFFSET * PI,
                stop: (2.0 + GRID_OFFSET) * PI,
                step: 0.05 * PI,
            },
            shots: 300_000,
            realizations: 4,
            mode: Mode::Sampled,
            noise: NoiseConfig::default(),
            calibration,
            calibration_source: CalibrationSource::Empirical,
            checkpoint_every: DEFAULT_CHECKPOINT_EVERY,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::Config("p must be >= 1".into()));
        }
        self.beta.validate()?;
        self.gamma.validate()?;
        if self.realizations == 0 {
            return Err(Error::Config("realizations must be >= 1".into()));
        }
        self.noise.validate()?;
        if self.mode == Mode::Sampled {
            if self.shots == 0 {
                return Err(Error::Config("shots must be >= 1".into()));
            }
            if self.checkpoint_every == 0 {
                return Err(Error::Config("checkpoint_every must be >= 1".into()));
            }
            if self.calibration.num_qubits() != self.graph.num_vertices() {
                return Err(Error::Config(format!(
                    "calibration covers {} qubits but the graph has {} vertices",
                    self.calibration.num_qubits(),
                    self.graph.num_vertices()
                )));
            }
        }
        Ok(())
    }

    pub fn grid_len(&self) -> usize {
        self.beta.len() * self.gamma.len()
    }

    /// Realizations actually evaluated. A deterministic ideal run would only
    /// repeat itself, so it has one.
    pub fn effective_realizations(&self) -> usize {
        if self.mode == Mode::Ideal && !self.noise.is_stochastic() {
            1
        } else {
            self.realizations
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub beta: f64,
    pub gamma: f64,
    pub realization: usize,
    pub pops: Vec<f64>,
    pub norm: f64,
    pub f_measured: f64,
    pub f_ideal: f64,
    pub abs_diff: f64,
    /// Set when the point could not be evaluated, e.g. a degenerate calibration.
    pub error: Option<String>,
}

impl PointRecord {
    pub fn is_valid(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeGrid {
    pub n_beta: usize,
    pub n_gamma: usize,
    pub realizations: usize,
    /// `max - min` of the cost diagonal; 1 for an edgeless graph.
    pub cost_range: f64,
    /// Ordered by beta, then gamma, then realization.
    pub points: Vec<PointRecord>,
}

impl LandscapeGrid {
    pub fn invalid_count(&self) -> usize {
        self.points.iter().filter(|p| !p.is_valid()).count()
    }

    /// CSV with header `beta,gamma,realization,F_measured,F_ideal,abs_diff,norm,pops`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,gamma,realization,F_measured,F_ideal,abs_diff,norm,pops\n");
        for p in &self.points {
            let pops: Vec<String> = p.pops.iter().map(|&v| format_sig(v)).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                format_sig(p.beta),
                format_sig(p.gamma),
                p.realization,
                format_sig(p.f_measured),
                format_sig(p.f_ideal),
                format_sig(p.abs_diff),
                format_sig(p.norm),
                pops.join("|")
            );
        }
        out
    }

    /// Realization-averaged measured cost per `(beta, gamma)`, beta-major;
    /// `NaN` where no realization is valid.
    pub fn mean_measured(&self) -> Vec<f64> {
        self.points
            .chunks(self.realizations)
            .map(|chunk| {
                let valid: Vec<f64> = chunk.iter().filter(|p| p.is_valid()).map(|p| p.f_measured).collect();
                if valid.is_empty() {
                    f64::NAN
                } else {
                    valid.iter().sum::<f64>() / valid.len() as f64
                }
            })
            .collect()
    }
}

/// Formats a real with 10 significant digits; fixed notation for moderate
/// magnitudes, scientific otherwise.
pub fn format_sig(v: f64) -> String {
    const SIG: usize = 10;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return format!("{:.*}", SIG - 1, 0.0);
    }
    let sci = format!("{:.*e}", SIG - 1, v);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..SIG as i32).contains(&exp) {
        format!("{:.*}", (SIG as i32 - 1 - exp) as usize, v)
    } else {
        sci
    }
}

/// Exact expected cost of the ansatz state.
pub fn ideal_cost(g: &Graph, params: &QaoaParams) -> Result<f64> {
    let diag = diagonal_costs(g)?;
    build_ansatz(g, params)?.simulate()?.expectation_diagonal(&diag)
}

/// `F = -1/2 + 1/2 sin(4 beta) sin(gamma)` for the single-edge graph at depth one.
pub fn closed_form_cost_k2(beta: f64, gamma: f64) -> f64 {
    -0.5 + 0.5 * (4.0 * beta).sin() * gamma.sin()
}

fn cost_range(diag: &[f64]) -> f64 {
    let max = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = diag.iter().copied().fold(f64::INFINITY, f64::min);
    if max > min {
        max - min
    } else {
        1.0
    }
}

/// Population estimate at one checkpoint of a sampled run.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckpointEstimate {
    pub shots: u64,
    /// `None` if the calibration measured so far is degenerate.
    pub pops: Option<Vec<f64>>,
    pub norm: f64,
}

struct ProtocolOutcome {
    pops: Vec<f64>,
    norm: f64,
    checkpoints: Vec<CheckpointEstimate>,
}

const TAG_TRAJECTORIES: u64 = 0;
const TAG_PERTURBATION: u64 = 1;

/// Populations of the (possibly noisy) ansatz state for one task.
fn state_populations(cfg: &ScanConfig, params: &QaoaParams, path: [u64; 2]) -> Result<Vec<f64>> {
    let circuit = build_ansatz(&cfg.graph, params)?;
    let seed = substream_seed(cfg.noise.seed, &[path[0], path[1], TAG_TRAJECTORIES]);
    noisy_populations(&circuit, &cfg.noise, seed, cfg.noise.trajectories)
}

/// Sampled protocol for one task. Noise acts on the ansatz; calibration
/// preparations and the trailing X layer are ideal, so flip pattern `x` sees
/// the ansatz populations relabelled by `s -> s xor x`.
fn sampled_protocol(
    cfg: &ScanConfig,
    params: &QaoaParams,
    path: [u64; 2],
    keep_checkpoints: bool,
) -> Result<ProtocolOutcome> {
    let dim = cfg.calibration.len();
    let pops = state_populations(cfg, params, path)?;
    let drifted = perturb_calibration(
        &cfg.calibration,
        cfg.noise.calibration_sigma,
        substream_seed(cfg.noise.seed, &[path[0], path[1], TAG_PERTURBATION]),
    )?;

    let mut samplers = Vec::with_capacity(2 * dim);
    if cfg.calibration_source == CalibrationSource::Empirical {
        for s in 0..dim {
            let mut basis = vec![0.0; dim];
            basis[s] = 1.0;
            samplers.push(ShotSampler::new(&drifted, &basis, cfg.checkpoint_every, false)?);
        }
    }
    let n_cal = samplers.len();
    for x in 0..dim {
        let mut flipped = vec![0.0; dim];
        for (s, p) in pops.iter().enumerate() {
            flipped[s ^ x] = *p;
        }
        samplers.push(ShotSampler::new(
            &cfg.calibration,
            &flipped,
            cfg.checkpoint_every,
            false,
        )?);
    }

    let estimate = |samplers: &[ShotSampler]| -> Result<(Vec<f64>, f64)> {
        let table = if n_cal > 0 {
            CalibrationTable::new(samplers[..n_cal].iter().map(ShotSampler::mean).collect())?
        } else {
            drifted.clone()
        };
        let means: Vec<f64> = samplers[n_cal..].iter().map(ShotSampler::mean).collect();
        let est = reconstruct(&table, &means)?;
        Ok((est.pops, est.norm))
    };

    let mut rng = substream(cfg.master_seed, &path);
    let mut checkpoints = Vec::new();
    let mut done = 0;
    while done < cfg.shots {
        let block = cfg.checkpoint_every.min(cfg.shots - done);
        for sampler in samplers.iter_mut() {
            sampler.sample(&mut rng, block);
        }
        done += block;
        if keep_checkpoints && block == cfg.checkpoint_every {
            let cp = match estimate(&samplers) {
                Ok((pops, norm)) => CheckpointEstimate {
                    shots: done,
                    pops: Some(pops),
                    norm,
                },
                Err(Error::DegenerateCalibration { .. }) => CheckpointEstimate {
                    shots: done,
                    pops: None,
                    norm: f64::NAN,
                },
                Err(e) => return Err(e),
            };
            checkpoints.push(cp);
        }
    }
    let (pops, norm) = estimate(&samplers)?;
    Ok(ProtocolOutcome {
        pops,
        norm,
        checkpoints,
    })
}

/// Evaluates one `(params, realization)` task at grid position `point_index`.
///
/// A degenerate calibration is recorded on the returned point instead of
/// being raised; other errors propagate.
pub fn measure_point(
    cfg: &ScanConfig,
    params: &QaoaParams,
    point_index: u64,
    realization: usize,
) -> Result<PointRecord> {
    let diag = diagonal_costs(&cfg.graph)?;
    let f_ideal = build_ansatz(&cfg.graph, params)?
        .simulate()?
        .expectation_diagonal(&diag)?;
    let path = [point_index, realization as u64];
    let outcome = match cfg.mode {
        Mode::Ideal => state_populations(cfg, params, path).map(|pops| (pops.iter().sum(), pops)),
        Mode::Sampled => sampled_protocol(cfg, params, path, false).map(|o| (o.norm, o.pops)),
    };
    let (beta, gamma) = (params.betas()[0], params.gammas()[0]);
    match outcome {
        Ok((norm, pops)) => {
            let f_measured: f64 = pops.iter().zip(&diag).map(|(p, c)| p * c).sum();
            Ok(PointRecord {
                beta,
                gamma,
                realization,
                pops,
                norm,
                f_measured,
                f_ideal,
                abs_diff: (f_measured - f_ideal).abs(),
                error: None,
            })
        }
        Err(e @ Error::DegenerateCalibration { .. }) => Ok(PointRecord {
            beta,
            gamma,
            realization,
            pops: vec![f64::NAN; diag.len()],
            norm: f64::NAN,
            f_measured: f64::NAN,
            f_ideal,
            abs_diff: f64::NAN,
            error: Some(e.to_string()),
        }),
        Err(e) => Err(e),
    }
}

/// Evaluates every grid point and realization.
///
/// Runs on the current rayon pool; output order and values are independent
/// of the pool size.
pub fn run_scan(cfg: &ScanConfig) -> Result<LandscapeGrid> {
    cfg.validate()?;
    let diag = diagonal_costs(&cfg.graph)?;
    let (betas, gammas) = (cfg.beta.values(), cfg.gamma.values());
    let realizations = cfg.effective_realizations();
    let tasks: Vec<(usize, usize, usize)> = (0..betas.len())
        .flat_map(|ib| (0..gammas.len()).flat_map(move |ig| (0..realizations).map(move |r| (ib, ig, r))))
        .collect();
    let points = tasks
        .into_par_iter()
        .map(|(ib, ig, r)| {
            let params = QaoaParams::shared(cfg.p, betas[ib], gammas[ig])?;
            measure_point(cfg, &params, (ib * gammas.len() + ig) as u64, r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LandscapeGrid {
        n_beta: betas.len(),
        n_gamma: gammas.len(),
        realizations,
        cost_range: cost_range(&diag),
        points,
    })
}

/// Mean over grid points of `|mean_r F_measured - F_ideal|`, divided by the
/// ideal cost range. Realizations are averaged per point first and points
/// without any valid realization are skipped.
pub fn landscape_error(grid: &LandscapeGrid) -> Result<f64> {
    if grid.points.is_empty() {
        return Err(Error::Domain("landscape error of an empty grid".into()));
    }
    let diffs: Vec<f64> = grid
        .mean_measured()
        .into_iter()
        .zip(grid.points.chunks(grid.realizations))
        .filter(|(m, _)| !m.is_nan())
        .map(|(m, chunk)| (m - chunk[0].f_ideal).abs())
        .collect();
    if diffs.is_empty() {
        return Err(Error::Domain("no valid points in grid".into()));
    }
    Ok(diffs.iter().sum::<f64>() / diffs.len() as f64 / grid.cost_range)
}

/// Per-checkpoint statistics across realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub shots: u64,
    pub mean_pops: Vec<f64>,
    pub std_pops: Vec<f64>,
    pub mean_norm: f64,
    pub std_norm: f64,
    /// Realizations whose calibration was usable at this checkpoint.
    pub valid: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub num_qubits: usize,
    pub rows: Vec<ConvergenceRow>,
    /// Final estimates per realization.
    pub final_norms: Vec<f64>,
}

impl ConvergenceTrace {
    /// CSV with columns `shots,p<s>...,norm,std_p<s>...,std_norm`.
    pub fn to_csv(&self) -> String {
        let labels: Vec<String> = (0..1usize << self.num_qubits)
            .map(|s| basis_label(s, self.num_qubits))
            .collect();
        let mut out = String::from("shots");
        for l in &labels {
            let _ = write!(out, ",p{l}");
        }
        out.push_str(",norm");
        for l in &labels {
            let _ = write!(out, ",std_p{l}");
        }
        out.push_str(",std_norm\n");
        for row in &self.rows {
            let _ = write!(out, "{}", row.shots);
            for v in &row.mean_pops {
                let _ = write!(out, ",{}", format_sig(*v));
            }
            let _ = write!(out, ",{}", format_sig(row.mean_norm));
            for v in &row.std_pops {
                let _ = write!(out, ",{}", format_sig(*v));
            }
            let _ = writeln!(out, ",{}", format_sig(row.std_norm));
        }
        out
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Reconstructed populations versus accumulated shots at a single parameter
/// point, one row per `checkpoint_every` shots.
pub fn convergence(cfg: &ScanConfig, params: &QaoaParams) -> Result<ConvergenceTrace> {
    cfg.validate()?;
    if cfg.mode != Mode::Sampled {
        return Err(Error::Config("convergence requires sampled mode".into()));
    }
    let runs = (0..cfg.realizations)
        .into_par_iter()
        .map(|r| sampled_protocol(cfg, params, [0, r as u64], true))
        .collect::<Result<Vec<_>>>()?;
    let dim = cfg.calibration.len();
    let n_rows = runs[0].checkpoints.len();
    let rows = (0..n_rows)
        .map(|k| {
            let at_k: Vec<&CheckpointEstimate> = runs.iter().map(|r| &r.checkpoints[k]).collect();
            let valid: Vec<&CheckpointEstimate> = at_k.iter().copied().filter(|c| c.pops.is_some()).collect();
            let (mean_pops, std_pops) = (0..dim)
                .map(|s| {
                    let v: Vec<f64> = valid.iter().map(|c| c.pops.as_ref().unwrap()[s]).collect();
                    mean_std(&v)
                })
                .unzip();
            let norms: Vec<f64> = valid.iter().map(|c| c.norm).collect();
            let (mean_norm, std_norm) = mean_std(&norms);
            ConvergenceRow {
                shots: at_k[0].shots,
                mean_pops,
                std_pops,
                mean_norm,
                std_norm,
                valid: valid.len(),
            }
        })
        .collect();
    Ok(ConvergenceTrace {
        num_qubits: cfg.graph.num_vertices(),
        rows,
        final_norms: runs.iter().map(|r| r.norm).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Coarse grid, then coordinate descent with halving steps.
    GridThenRefine,
    /// Coarse grid, then Nelder-Mead from the best grid point.
    Simplex,
}

/// Refinement stops once every coordinate step is below this (radians).
pub const REFINE_MIN_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_params: QaoaParams,
    pub best_f: f64,
    pub trace: Vec<Evaluation>,
}

/// Minimizes the configured cost. The objective is the realization-averaged
/// measured cost, so ideal mode optimizes the exact landscape and sampled
/// mode a noisy estimate of it.
pub fn optimize(cfg: &ScanConfig, strategy: Strategy) -> Result<OptimizationResult> {
    cfg.validate()?;
    let p = cfg.p;
    let mut counter = 0u64;
    let mut failure: Option<Error> = None;
    let mut objective = |x: &[f64]| -> f64 {
        let index = counter;
        counter += 1;
        let eval = || -> Result<f64> {
            let params = QaoaParams::from_vec(x)?;
            let mut total = 0.0;
            let mut valid = 0;
            for r in 0..cfg.effective_realizations() {
                let point = measure_point(cfg, &params, index, r)?;
                if point.is_valid() {
                    total += point.f_measured;
                    valid += 1;
                }
            }
            Ok(if valid == 0 {
                f64::INFINITY
            } else {
                total / valid as f64
            })
        };
        match eval() {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        }
    };

    let mut trace = Vec::new();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for beta in cfg.beta.values() {
        for gamma in cfg.gamma.values() {
            let x: Vec<f64> = std::iter::repeat_n(beta, p)
                .chain(std::iter::repeat_n(gamma, p))
                .collect();
            let v = objective(&x);
            trace.push(Evaluation { x: x.clone(), value: v });
            if best.as_ref().is_none_or(|(bx, bv)| better((&x, v), (bx, *bv))) {
                best = Some((x, v));
            }
        }
    }
    let (start, start_value) = best.expect("grid has at least one point");

    let refined = match strategy {
        Strategy::GridThenRefine => {
            let steps: Vec<f64> = std::iter::repeat_n(cfg.beta.step.min(PI), p)
                .chain(std::iter::repeat_n(cfg.gamma.step.min(PI), p))
                .collect();
            coordinate_descent(&mut objective, &start, &steps, REFINE_MIN_STEP, 100_000, &mut trace)
        }
        Strategy::Simplex => {
            let opts = NelderMeadOptions {
                initial_step: cfg.beta.step.min(cfg.gamma.step).min(PI),
                ..Default::default()
            };
            nelder_mead(&mut objective, &start, &opts, &mut trace)
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    let (x, value) = if better((&refined.x, refined.value), (&start, start_value)) {
        (refined.x, refined.value)
    } else {
        (start, start_value)
    };
    Ok(OptimizationResult {
        best_params: QaoaParams::from_vec(&x)?,
        best_f: value,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2_ideal_grid() -> ScanConfig {
        let mut cfg = ScanConfig::paper_grid(Graph::complete(2).unwrap(), CalibrationTable::default_two_qubit());
        cfg.mode = Mode::Ideal;
        cfg.realizations = 1;
        cfg
    }

    #[test]
    fn paper_grid_shape() {
        let cfg = k2_ideal_grid();
        assert_eq!(cfg.beta.len(), 21);
        assert_eq!(cfg.gamma.len(), 41);
        assert_eq!(cfg.grid_len(), 861);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_cost_k2(0.0, 1.3), -0.5);
        assert!((closed_form_cost_k2(PI / 4.0, 1.3) + 0.5).abs() < 1e-15);
        assert!(closed_form_cost_k2(PI / 8.0, PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn ideal_cost_examples() {
        let k2 = Graph::complete(2).unwrap();
        let f = |b: f64, g: f64| ideal_cost(&k2, &QaoaParams::single(b, g).unwrap()).unwrap();
        for gamma in [0.0, 0.7, 2.0, 4.5] {
            assert!((f(0.1 * PI, gamma) - (-0.5 + 0.5 * (0.4 * PI).sin() * gamma.sin())).abs() < 1e-12);
        }
        assert!((f(PI / 8.0, 1.5 * PI) + 1.0).abs() < 1e-12);
        assert!(f(PI / 8.0, PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_scan_is_exact() {
        let grid = run_scan(&k2_ideal_grid()).unwrap();
        assert_eq!(grid.points.len(), 861);
        for p in &grid.points {
            assert!((p.f_measured - closed_form_cost_k2(p.beta, p.gamma)).abs() < 1e-9);
            assert_eq!(p.abs_diff, (p.f_measured - p.f_ideal).abs());
        }
        assert!(landscape_error(&grid).unwrap() < 1e-12);
    }

    #[test]
    fn grid_point_counts() {
        let mut cfg = ScanConfig::paper_grid(Graph::complete(2).unwrap(), CalibrationTable::default_two_qubit());
        cfg.mode = Mode::Ideal;
        assert_eq!(cfg.effective_realizations(), 1);
        assert_eq!(run_scan(&cfg).unwrap().points.len(), 861);
        cfg.mode = Mode::Sampled;
        let grid = run_scan(&cfg).unwrap();
        assert_eq!(grid.points.len(), 3444);
        assert_eq!(grid.invalid_count(), 0);
        cfg.mode = Mode::Ideal;
        cfg.noise.depolarizing_prob = 0.1;
        cfg.noise.trajectories = 2;
        assert_eq!(cfg.effective_realizations(), 4);
    }

    #[test]
    fn ideal_argmin_sits_on_analytic_minima() {
        let grid = run_scan(&k2_ideal_grid()).unwrap();
        let min = grid.points.iter().map(|p| p.f_measured).fold(f64::INFINITY, f64::min);
        let argmins: Vec<(f64, f64)> = grid
            .points
            .iter()
            .filter(|p| p.f_measured - min < 1e-12)
            .map(|p| (p.beta / PI, p.gamma / PI))
            .collect();
        assert_eq!(argmins.len(), 2);
        for ((b, g), (eb, eg)) in argmins.iter().zip([(0.125, 1.5), (0.375, 0.5)]) {
            assert!((b - eb).abs() < 1e-12 && (g - eg).abs() < 1e-12, "{argmins:?}");
        }
        let r = optimize(&k2_ideal_grid(), Strategy::GridThenRefine).unwrap();
        assert!((r.best_params.betas()[0] / PI - 0.125).abs() < 1e-9);
        assert!((r.best_params.gammas()[0] / PI - 1.5).abs() < 1e-9);
    }

    #[test]
    fn single_point_scan_matches_measure_point() {
        let mut cfg = k2_ideal_grid();
        cfg.mode = Mode::Sampled;
        cfg.shots = 20_000;
        cfg.beta = AxisRange::point(0.15 * PI);
        cfg.gamma = AxisRange::point(1.5 * PI);
        let grid = run_scan(&cfg).unwrap();
        assert_eq!(grid.points.len(), 1);
        let direct = measure_point(&cfg, &QaoaParams::single(0.15 * PI, 1.5 * PI).unwrap(), 0, 0).unwrap();
        assert_eq!(grid.points[0], direct);
    }

    #[test]
    fn landscape_error_arithmetic() {
        let mk = |f_measured: f64, f_ideal: f64| PointRecord {
            beta: 0.0,
            gamma: 0.0,
            realization: 0,
            pops: vec![],
            norm: 1.0,
            f_measured,
            f_ideal,
            abs_diff: (f_measured - f_ideal).abs(),
            error: None,
        };
        let grid = LandscapeGrid {
            n_beta: 1,
            n_gamma: 3,
            realizations: 1,
            cost_range: 1.0,
            points: vec![mk(-0.4, -0.5), mk(0.1, 0.0), mk(-0.9, -1.0)],
        };
        assert!((landscape_error(&grid).unwrap() - 0.1).abs() < 1e-12);

        let averaged = LandscapeGrid {
            n_beta: 1,
            n_gamma: 1,
            realizations: 2,
            cost_range: 1.0,
            points: vec![mk(-0.4, -0.5), mk(-0.6, -0.5)],
        };
        assert!(landscape_error(&averaged).unwrap().abs() < 1e-12);

        let empty = LandscapeGrid {
            points: vec![],
            ..averaged
        };
        assert!(landscape_error(&empty).is_err());
    }

    #[test]
    fn degenerate_calibration_flags_point() {
        let mut cfg = k2_ideal_grid();
        cfg.mode = Mode::Sampled;
        cfg.calibration_source = CalibrationSource::Exact;
        cfg.calibration = CalibrationTable::new(vec![4.0, 3.0, 2.0, 1.0]).unwrap();
        cfg.shots = 1000;
        cfg.beta = AxisRange::new(0.1, 0.2, 0.1).unwrap();
        cfg.gamma = AxisRange::point(0.3);
        let grid = run_scan(&cfg).unwrap();
        assert_eq!(grid.invalid_count(), 2);
        assert!(grid.points[0].error.as_ref().unwrap().contains("c_11"));
        assert!(grid.to_csv().contains("nan"));
    }

    #[test]
    fn csv_format() {
        let mut cfg = k2_ideal_grid();
        cfg.beta = AxisRange::point(PI / 8.0);
        cfg.gamma = AxisRange::point(1.5 * PI);
        let csv = run_scan(&cfg).unwrap().to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "beta,gamma,realization,F_measured,F_ideal,abs_diff,norm,pops"
        );
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "0.3926990817");
        assert_eq!(row[1], "4.712388980");
        assert_eq!(row[2], "0");
        assert_eq!(row[3], "-1.000000000");
        assert_eq!(row[7].split('|').count(), 4);
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(-0.5), "-0.5000000000");
        assert_eq!(format_sig(0.0), "0.000000000");
        assert_eq!(format_sig(1234.5), "1234.500000");
        assert_eq!(format_sig(1.5e-7), "1.500000000e-7");
        assert_eq!(format_sig(f64::NAN), "nan");
    }

    #[test]
    fn optimize_k2_ideal() {
        let cfg = k2_ideal_grid();
        for strategy in [Strategy::GridThenRefine, Strategy::Simplex] {
            let r = optimize(&cfg, strategy).unwrap();
            assert!((r.best_f + 1.0).abs() < 1e-6, "{strategy:?}: {}", r.best_f);
            let (b, g) = (r.best_params.betas()[0], r.best_params.gammas()[0]);
            assert!(((4.0 * b).sin() * g.sin() + 1.0).abs() < 1e-5);
            assert!(r.trace.len() >= cfg.grid_len());
        }
    }

    #[test]
    fn optimize_edgeless_is_flat() {
        let mut cfg = k2_ideal_grid();
        cfg.graph = Graph::edgeless(2).unwrap();
        cfg.beta = AxisRange::new(0.0, 0.5, 0.25).unwrap();
        cfg.gamma = AxisRange::new(0.0, 1.0, 0.5).unwrap();
        let r = optimize(&cfg, Strategy::GridThenRefine).unwrap();
        assert_eq!(r.best_f, 0.0);
        assert!(r.trace.iter().all(|e| e.value == 0.0));
        assert_eq!(r.best_params.betas(), &[0.0]);
    }

    #[test]
    fn convergence_rejects_ideal_mode() {
        let cfg = k2_ideal_grid();
        let params = QaoaParams::single(0.1, 0.2).unwrap();
        assert!(matches!(convergence(&cfg, &params), Err(Error::Config(_))));
    }

    #[test]
    fn convergence_rows() {
        let mut cfg = k2_ideal_grid();
        cfg.mode = Mode::Sampled;
        cfg.shots = 10_500;
        cfg.realizations = 3;
        let trace = convergence(&cfg, &QaoaParams::single(0.15 * PI, 1.5 * PI).unwrap()).unwrap();
        assert_eq!(trace.rows.len(), 10);
        assert_eq!(trace.rows[9].shots, 10_000);
        assert_eq!(trace.final_norms.len(), 3);
        let header = trace.to_csv().lines().next().unwrap().to_string();
        assert_eq!(
            header,
            "shots,p00,p01,p10,p11,norm,std_p00,std_p01,std_p10,std_p11,std_norm"
        );
    }
}
