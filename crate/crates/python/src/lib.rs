//! Python bindings: graphs, cost evaluation, readout reconstruction, shot
//! sampling and landscape scans.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use nvqaoa_core::experiment::{self, AxisRange, Mode, ScanConfig};
use nvqaoa_core::readout::DEFAULT_CHECKPOINT_EVERY;
use nvqaoa_core::{BitString, CalibrationTable, Error, QaoaParams, ShotSettings};

create_exception!(
    nvqaoa,
    DegenerateCalibrationError,
    PyException,
    "A calibration Walsh coefficient vanishes."
);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::DegenerateCalibration { .. } => DegenerateCalibrationError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn calibration(intensities: Vec<f64>) -> PyResult<CalibrationTable> {
    CalibrationTable::new(intensities).map_err(to_py)
}

fn params(betas: Vec<f64>, gammas: Vec<f64>) -> PyResult<QaoaParams> {
    QaoaParams::new(betas, gammas).map_err(to_py)
}

fn range(r: (f64, f64, f64)) -> PyResult<AxisRange> {
    AxisRange::new(r.0, r.1, r.2).map_err(to_py)
}

/// Weighted undirected graph on vertices `0..n`.
#[pyclass(module = "nvqaoa", skip_from_py_object)]
#[derive(Clone)]
struct Graph {
    inner: nvqaoa_core::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (num_vertices, edges = Vec::new()))]
    fn new(num_vertices: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        let inner = nvqaoa_core::Graph::from_edges(num_vertices, &edges).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn complete(n: usize) -> PyResult<Self> {
        let inner = nvqaoa_core::Graph::complete(n).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = nvqaoa_core::Graph::parse(text).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.edges()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Graph({}, {:?})", self.inner.num_vertices(), self.inner.edges())
    }
}

/// Negated cut weight of a bit string such as `"01"`.
#[pyfunction]
fn cost(graph: &Graph, bits: &str) -> PyResult<f64> {
    let x: BitString = bits.parse().map_err(to_py)?;
    nvqaoa_core::cost(&graph.inner, &x).map_err(to_py)
}

#[pyfunction]
fn diagonal_costs(graph: &Graph) -> PyResult<Vec<f64>> {
    nvqaoa_core::diagonal_costs(&graph.inner).map_err(to_py)
}

/// Returns `(optimal bit strings, optimal cost)`.
#[pyfunction]
fn brute_force(graph: &Graph) -> PyResult<(Vec<String>, f64)> {
    let report = nvqaoa_core::brute_force(&graph.inner).map_err(to_py)?;
    Ok((
        report.best_strings.iter().map(|b| b.to_string()).collect(),
        report.best_cost,
    ))
}

#[pyfunction]
fn ideal_cost(graph: &Graph, betas: Vec<f64>, gammas: Vec<f64>) -> PyResult<f64> {
    nvqaoa_core::ideal_cost(&graph.inner, &params(betas, gammas)?).map_err(to_py)
}

#[pyfunction]
fn closed_form_cost_k2(beta: f64, gamma: f64) -> f64 {
    nvqaoa_core::closed_form_cost_k2(beta, gamma)
}

/// Gate list of the ansatz, one gate per line.
#[pyfunction]
#[pyo3(signature = (graph, betas, gammas, native = false))]
fn ansatz_circuit(graph: &Graph, betas: Vec<f64>, gammas: Vec<f64>, native: bool) -> PyResult<String> {
    let p = params(betas, gammas)?;
    let circuit = if native {
        nvqaoa_core::build_ansatz_native(&graph.inner, &p)
    } else {
        nvqaoa_core::build_ansatz(&graph.inner, &p)
    };
    Ok(circuit.map_err(to_py)?.to_text())
}

#[pyfunction]
#[pyo3(signature = (graph, betas, gammas, native = false))]
fn ansatz_populations(graph: &Graph, betas: Vec<f64>, gammas: Vec<f64>, native: bool) -> PyResult<Vec<f64>> {
    let p = params(betas, gammas)?;
    let circuit = if native {
        nvqaoa_core::build_ansatz_native(&graph.inner, &p)
    } else {
        nvqaoa_core::build_ansatz(&graph.inner, &p)
    };
    Ok(circuit.and_then(|c| c.simulate()).map_err(to_py)?.populations())
}

#[pyfunction]
fn walsh_coefficients(intensities: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(nvqaoa_core::walsh_coefficients(&calibration(intensities)?).c)
}

#[pyfunction]
fn forward_means(intensities: Vec<f64>, pops: Vec<f64>) -> PyResult<Vec<f64>> {
    nvqaoa_core::forward_means(&calibration(intensities)?, &pops).map_err(to_py)
}

/// Returns a dict with `pops`, `correlators` and `norm`.
#[pyfunction]
fn reconstruct<'py>(py: Python<'py>, intensities: Vec<f64>, means: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let est = nvqaoa_core::reconstruct(&calibration(intensities)?, &means).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("pops", est.pops)?;
    d.set_item("correlators", est.correlators)?;
    d.set_item("norm", est.norm)?;
    Ok(d)
}

/// Poisson photon counting on `shots` shots drawn from `pops`.
#[pyfunction]
#[pyo3(signature = (intensities, pops, shots, seed, checkpoint_every = DEFAULT_CHECKPOINT_EVERY, retain_counts = false))]
fn sample_shots<'py>(
    py: Python<'py>,
    intensities: Vec<f64>,
    pops: Vec<f64>,
    shots: u64,
    seed: u64,
    checkpoint_every: u64,
    retain_counts: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let cal = calibration(intensities)?;
    let settings = ShotSettings::new(shots)
        .checkpoint_every(checkpoint_every)
        .retain_counts(retain_counts);
    let record = py
        .detach(|| nvqaoa_core::sample_shots(&cal, &pops, &settings, seed))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("num_shots", record.num_shots)?;
    d.set_item("total_photons", record.total_photons)?;
    d.set_item("running_mean", record.running_mean)?;
    let checkpoints: Vec<(u64, f64)> = record.checkpoints.iter().map(|c| (c.shots, c.mean)).collect();
    d.set_item("checkpoints", checkpoints)?;
    d.set_item("counts", record.counts)?;
    Ok(d)
}

/// Result of [`run_scan`].
#[pyclass(module = "nvqaoa", skip_from_py_object)]
struct Landscape {
    inner: experiment::LandscapeGrid,
}

#[pymethods]
impl Landscape {
    #[getter]
    fn shape(&self) -> (usize, usize, usize) {
        (self.inner.n_beta, self.inner.n_gamma, self.inner.realizations)
    }

    #[getter]
    fn invalid_count(&self) -> usize {
        self.inner.invalid_count()
    }

    /// `(beta, gamma, realization, f_measured, f_ideal, norm)` per point.
    fn points(&self) -> Vec<(f64, f64, usize, f64, f64, f64)> {
        self.inner
            .points
            .iter()
            .map(|p| (p.beta, p.gamma, p.realization, p.f_measured, p.f_ideal, p.norm))
            .collect()
    }

    fn mean_measured(&self) -> Vec<f64> {
        self.inner.mean_measured()
    }

    fn landscape_error(&self) -> PyResult<f64> {
        experiment::landscape_error(&self.inner).map_err(to_py)
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }
}

/// Scans `(beta, gamma)` over `(start, stop, step)` ranges in radians.
#[pyfunction]
#[pyo3(signature = (
    graph, beta, gamma, mode = "ideal", shots = 300_000, realizations = 4, seed = 0, p = 1,
    calibration = None, depolarizing_prob = 0.0, overrotation_frac = 0.0, phase_offset = 0.0,
    calibration_sigma = 0.0, trajectories = 1000
))]
#[allow(clippy::too_many_arguments)]
fn run_scan(
    py: Python<'_>,
    graph: &Graph,
    beta: (f64, f64, f64),
    gamma: (f64, f64, f64),
    mode: &str,
    shots: u64,
    realizations: usize,
    seed: u64,
    p: usize,
    calibration: Option<Vec<f64>>,
    depolarizing_prob: f64,
    overrotation_frac: f64,
    phase_offset: f64,
    calibration_sigma: f64,
    trajectories: usize,
) -> PyResult<Landscape> {
    let table = match calibration {
        Some(v) => self::calibration(v)?,
        None => CalibrationTable::default_two_qubit(),
    };
    let mut cfg = ScanConfig::paper_grid(graph.inner.clone(), table);
    cfg.beta = range(beta)?;
    cfg.gamma = range(gamma)?;
    cfg.mode = match mode {
        "ideal" => Mode::Ideal,
        "sampled" => Mode::Sampled,
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    cfg.shots = shots;
    cfg.realizations = realizations;
    cfg.master_seed = seed;
    cfg.p = p;
    cfg.noise.seed = seed;
    cfg.noise.depolarizing_prob = depolarizing_prob;
    cfg.noise.overrotation_frac = overrotation_frac;
    cfg.noise.phase_offset = phase_offset;
    cfg.noise.calibration_sigma = calibration_sigma;
    cfg.noise.trajectories = trajectories;
    let inner = py.detach(|| nvqaoa_core::run_scan(&cfg)).map_err(to_py)?;
    Ok(Landscape { inner })
}

#[pymodule]
fn nvqaoa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add(
        "DegenerateCalibrationError",
        m.py().get_type::<DegenerateCalibrationError>(),
    )?;
    m.add_class::<Graph>()?;
    m.add_class::<Landscape>()?;
    m.add_function(wrap_pyfunction!(cost, m)?)?;
    m.add_function(wrap_pyfunction!(diagonal_costs, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_cost, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_cost_k2, m)?)?;
    m.add_function(wrap_pyfunction!(ansatz_circuit, m)?)?;
    m.add_function(wrap_pyfunction!(ansatz_populations, m)?)?;
    m.add_function(wrap_pyfunction!(walsh_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(forward_means, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(sample_shots, m)?)?;
    m.add_function(wrap_pyfunction!(run_scan, m)?)?;
    Ok(())
}
