//! Python module `pypolyspec`: sampling, spectra, distances to the limit
//! laws, tail bounds, log-determinant gaps and the experiment runner.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use polyspec::esd::{self, DistanceSettings, EmpiricalSpectralDistribution, LimitLaw};
use polyspec::harness::{self, ExperimentConfig, HarnessError, Regime};
use polyspec::linalg::{self, DenseMatrix};
use polyspec::matpoly;
use polyspec::verify;
use polyspec::RngStream;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn harness_err(e: HarnessError) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn to_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<DenseMatrix> {
    DenseMatrix::from_rows(&rows).map_err(value_err)
}

fn from_matrix(m: &DenseMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn parse_law(law: &str, k: Option<usize>) -> PyResult<LimitLaw> {
    match law {
        "disc-mixture" => {
            LimitLaw::disc_mixture(k.ok_or_else(|| value_err("disc-mixture needs k"))?).map_err(value_err)
        }
        "unit-circle" => Ok(LimitLaw::UnitCircle),
        "unit-disc" => Ok(LimitLaw::UnitDisc),
        other => Err(value_err(format!(
            "unknown law `{other}` (expected disc-mixture, unit-circle or unit-disc)"
        ))),
    }
}

/// Monic matrix polynomial `I xᵏ + C_{k−1} xᵏ⁻¹ + … + C₀`.
#[pyclass(name = "MatrixPolynomial", module = "pypolyspec", frozen)]
struct PyMatrixPolynomial {
    inner: matpoly::MatrixPolynomial,
}

#[pymethods]
impl PyMatrixPolynomial {
    /// From the lower coefficients `[C₀, …, C_{k−1}]`, each an `n × n` nested list.
    #[new]
    fn new(coeffs: Vec<Vec<Vec<Complex64>>>) -> PyResult<Self> {
        let coeffs = coeffs.into_iter().map(to_matrix).collect::<PyResult<Vec<_>>>()?;
        let inner = matpoly::MatrixPolynomial::monic(coeffs).map_err(value_err)?;
        Ok(Self { inner })
    }

    /// Coefficients i.i.d. standard complex Gaussian.
    #[staticmethod]
    #[pyo3(signature = (n, k, seed, stream = 0))]
    fn sample(n: usize, k: usize, seed: u64, stream: u64) -> PyResult<Self> {
        let inner = matpoly::sample_monic_gaussian(n, k, &RngStream::new(seed, stream)).map_err(value_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = matpoly::MatrixPolynomial::from_json(text).map_err(value_err)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn coeffs(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.coeffs().iter().map(from_matrix).collect()
    }

    /// `P(x)` as a nested list.
    fn evaluate(&self, x: Complex64) -> Vec<Vec<Complex64>> {
        from_matrix(&matpoly::evaluate(&self.inner, x))
    }

    fn companion(&self) -> PyResult<Vec<Vec<Complex64>>> {
        let split = matpoly::companion(&self.inner).map_err(value_err)?;
        Ok(from_matrix(&split.m))
    }

    /// The `kn` finite eigenvalues.
    fn eigenvalues(&self) -> PyResult<Vec<Complex64>> {
        Ok(matpoly::finite_eigenvalues(&self.inner).map_err(value_err)?.eigenvalues)
    }

    fn __repr__(&self) -> String {
        format!("MatrixPolynomial(n={}, k={})", self.inner.n(), self.inner.k())
    }
}

#[pyfunction]
fn eigenvalues(matrix: Vec<Vec<Complex64>>) -> PyResult<Vec<Complex64>> {
    Ok(linalg::eigenvalues(&to_matrix(matrix)?).map_err(value_err)?.eigenvalues)
}

/// Descending singular values.
#[pyfunction]
fn singular_values(matrix: Vec<Vec<Complex64>>) -> PyResult<Vec<f64>> {
    linalg::singular_values(&to_matrix(matrix)?).map_err(value_err)
}

#[pyfunction]
fn pseudoinverse(matrix: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(from_matrix(
        &linalg::pseudoinverse(&to_matrix(matrix)?).map_err(value_err)?,
    ))
}

/// Pooled eigenvalues of `trials` independent samples, scaled by `scale`
/// (default `n^{-1/2}`).
#[pyfunction]
#[pyo3(signature = (n, k, trials, seed, scale = None))]
fn sample_spectrum(n: usize, k: usize, trials: usize, seed: u64, scale: Option<f64>) -> PyResult<Vec<Complex64>> {
    if n == 0 || k == 0 || trials == 0 {
        return Err(value_err("n, k and trials must be positive"));
    }
    let scale = scale.unwrap_or(1.0 / (n as f64).sqrt());
    let root = RngStream::new(seed, 0);
    let esds = (0..trials as u64)
        .map(|t| {
            let p = matpoly::sample_monic_gaussian(n, k, &root.substream(t)).map_err(value_err)?;
            esd::esd_of_polynomial(&p, scale).map_err(value_err)
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(esd::merge(&esds).map_err(value_err)?.points().to_vec())
}

/// `F(r)` of the radial marginal of `law`.
#[pyfunction]
#[pyo3(signature = (law, r, k = None))]
fn radial_cdf(law: &str, r: f64, k: Option<usize>) -> PyResult<f64> {
    Ok(parse_law(law, k)?.radial_cdf(r))
}

/// Distances of a point cloud to `law`, as a dict.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (points, law, k = None, atom_radius = 0.2, exclusion_radius = 0.5, radial_bins = 8, angular_bins = 16))]
fn distance_report<'py>(
    py: Python<'py>,
    points: Vec<Complex64>,
    law: &str,
    k: Option<usize>,
    atom_radius: f64,
    exclusion_radius: f64,
    radial_bins: usize,
    angular_bins: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let law = parse_law(law, k)?;
    let esd = EmpiricalSpectralDistribution::from_samples(points).map_err(value_err)?;
    let settings = DistanceSettings {
        atom_radius,
        exclusion_radius,
        radial_bins,
        angular_bins,
    };
    let report = esd::distance_report(&esd, &law, &settings).map_err(value_err)?;
    json_to_py(py, &serde_json::to_string(&report).expect("report serializes"))
}

/// Closed-form upper bound on `P(σ_n(R + G) ≤ τ)` for `n × N` Gaussian `G`.
#[pyfunction]
fn pseudoinverse_tail_bound(n: usize, big_n: usize, tau: f64) -> PyResult<f64> {
    Ok(verify::pseudoinverse_tail_bound(n, big_n, tau)
        .map_err(value_err)?
        .value)
}

/// `(1/m)(log|det(a − zI)| − log|det(b − zI)|)`; with `prescaled = False`
/// both matrices are first scaled by `m^{-1/2}`.
#[pyfunction]
#[pyo3(signature = (a, b, z, prescaled = false))]
fn replacement_gap(a: Vec<Vec<Complex64>>, b: Vec<Vec<Complex64>>, z: Complex64, prescaled: bool) -> PyResult<f64> {
    let (a, b) = (to_matrix(a)?, to_matrix(b)?);
    let gap = if prescaled {
        verify::replacement_gap_prescaled(&a, &b, z)
    } else {
        verify::replacement_gap(&a, &b, z)
    };
    Ok(gap.map_err(value_err)?.value)
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn resolve_config(config: Option<&str>, regime: &str) -> PyResult<ExperimentConfig> {
    match config {
        Some(text) => serde_json::from_str(text).map_err(value_err),
        None => Ok(ExperimentConfig::default_for(
            regime.parse::<Regime>().map_err(value_err)?,
        )),
    }
}

/// Runs a convergence experiment and returns its result as a dict. `config`
/// is a JSON string in the CLI config format; without it the regime defaults
/// are used. With `output_dir` set, CSV and JSON outputs are written there.
#[pyfunction]
#[pyo3(signature = (config = None, regime = "grow-n", output_dir = None))]
fn run_experiment<'py>(
    py: Python<'py>,
    config: Option<&str>,
    regime: &str,
    output_dir: Option<std::path::PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = resolve_config(config, regime)?;
    cfg.validate().map_err(harness_err)?;
    let mut result = py.detach(|| harness::run_experiment(&cfg)).map_err(harness_err)?;
    if let Some(dir) = output_dir {
        harness::export_result(&mut result, &dir, cfg.format).map_err(harness_err)?;
    }
    json_to_py(py, &serde_json::to_string(&result).expect("result serializes"))
}

/// Runs the verification suites and returns the summary and per-check reports as a dict.
#[pyfunction]
#[pyo3(signature = (config = None))]
fn run_verification<'py>(py: Python<'py>, config: Option<&str>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = resolve_config(config, "grow-n")?;
    let result = py
        .detach(|| harness::run_verification(&cfg, &RngStream::new(cfg.seed, 0)))
        .map_err(harness_err)?;
    json_to_py(py, &serde_json::to_string(&result).expect("result serializes"))
}

#[pymodule]
fn pypolyspec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrixPolynomial>()?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(singular_values, m)?)?;
    m.add_function(wrap_pyfunction!(pseudoinverse, m)?)?;
    m.add_function(wrap_pyfunction!(sample_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(radial_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(distance_report, m)?)?;
    m.add_function(wrap_pyfunction!(pseudoinverse_tail_bound, m)?)?;
    m.add_function(wrap_pyfunction!(replacement_gap, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    Ok(())
}
