//! Python module `permpoly`: exact permanents, closed-form expectations,
//! Monte-Carlo estimators, root clouds and the verification suites.

use permpoly::closed_forms::{
    mean_perm_poly_goe, mean_perm_poly_gue, two_point_cue, two_point_ginibre, two_point_goe,
    two_point_gue, AsymptoticProfile,
};
use permpoly::ensembles::{EnsembleKind, EnsembleSpec};
use permpoly::montecarlo::{mc_mean_perm_poly_at, mc_two_point};
use permpoly::perm::{per_contour_default, per_glynn, per_naive, per_ryser, perm_poly_ryser};
use permpoly::roots::{poly_roots, root_cloud, size_report};
use permpoly::stats::MCEstimate;
use permpoly::verify::{run_suite, Suite, VerifyOptions};
use permpoly::{CMatrix, Poly, C64};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

const DEFAULT_SEED: u64 = 20_240_101;

fn err(e: permpoly::Error) -> PyErr {
    match e {
        permpoly::Error::Usage(_) | permpoly::Error::Size { .. } | permpoly::Error::Domain { .. } => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn matrix(rows: Vec<Vec<C64>>) -> PyResult<CMatrix> {
    CMatrix::from_rows(&rows).map_err(err)
}

fn kind(name: &str) -> PyResult<EnsembleKind> {
    EnsembleKind::parse(name).map_err(err)
}

fn spec(ensemble: &str, n: usize) -> PyResult<EnsembleSpec> {
    EnsembleSpec::new(kind(ensemble)?, n).map_err(err)
}

/// Monte-Carlo estimate of a complex expectation.
#[pyclass(name = "Estimate", frozen)]
struct PyEstimate(MCEstimate);

#[pymethods]
impl PyEstimate {
    #[getter]
    fn mean(&self) -> C64 {
        self.0.mean
    }
    #[getter]
    fn stderr_re(&self) -> f64 {
        self.0.stderr_re
    }
    #[getter]
    fn stderr_im(&self) -> f64 {
        self.0.stderr_im
    }
    #[getter]
    fn samples(&self) -> u64 {
        self.0.n_samples
    }
    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }
    /// Componentwise z-score against an exact value.
    fn z_score(&self, exact: C64) -> f64 {
        self.0.z_score(exact)
    }
    fn __repr__(&self) -> String {
        format!(
            "Estimate(mean={}, stderr=({:.3e}, {:.3e}), samples={})",
            self.0.mean, self.0.stderr_re, self.0.stderr_im, self.0.n_samples
        )
    }
}

/// Permanent of a square matrix given as a list of rows.
/// `method` is one of naive, ryser, glynn, contour.
#[pyfunction]
#[pyo3(signature = (rows, method = "ryser"))]
fn per(rows: Vec<Vec<C64>>, method: &str) -> PyResult<C64> {
    let a = matrix(rows)?;
    match method {
        "naive" => per_naive(&a),
        "ryser" => per_ryser(&a),
        "glynn" => per_glynn(&a),
        "contour" => per_contour_default(&a),
        other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
    }
    .map_err(err)
}

/// Coefficients of `Per(mu I - A)`, lowest degree first.
#[pyfunction]
fn perm_poly(rows: Vec<Vec<C64>>) -> PyResult<Vec<C64>> {
    Ok(perm_poly_ryser(&matrix(rows)?).map_err(err)?.into_coeffs())
}

/// Roots of the polynomial with the given coefficients, lowest degree first.
#[pyfunction]
fn roots_of(coeffs: Vec<C64>) -> PyResult<Vec<C64>> {
    poly_roots(&Poly::new(coeffs)).map_err(err)
}

/// Exact `<Per(mu I - H)>` for the Gaussian ensembles.
#[pyfunction]
fn mean_perm_poly(ensemble: &str, n: usize, mu: C64) -> PyResult<C64> {
    match kind(ensemble)? {
        EnsembleKind::Gue => Ok(mean_perm_poly_gue(n, mu)),
        EnsembleKind::Goe => Ok(mean_perm_poly_goe(n, mu)),
        k => Err(PyValueError::new_err(format!("no closed form for {}", k.name()))),
    }
}

/// Exact two-point function: `<p(mu1) p(mu2)>` for GUE/GOE,
/// `<p(mu1) conj(p(mu2))>` for CUE/Ginibre.
#[pyfunction]
fn two_point(ensemble: &str, n: usize, mu1: C64, mu2: C64) -> PyResult<C64> {
    match kind(ensemble)? {
        EnsembleKind::Gue => two_point_gue(n, mu1, mu2).map_err(err),
        EnsembleKind::Goe => two_point_goe(n, mu1, mu2).map_err(err),
        EnsembleKind::Cue => Ok(two_point_cue(n, mu1, mu2)),
        EnsembleKind::Ginibre => Ok(two_point_ginibre(n, mu1, mu2)),
        k => Err(PyValueError::new_err(format!("no closed form for {}", k.name()))),
    }
}

/// Monte-Carlo `<Per(mu I - H)>`.
#[pyfunction]
#[pyo3(signature = (ensemble, n, mu, samples = 100_000, seed = DEFAULT_SEED))]
fn estimate_mean(py: Python<'_>, ensemble: &str, n: usize, mu: C64, samples: usize, seed: u64) -> PyResult<PyEstimate> {
    let s = spec(ensemble, n)?;
    py.detach(|| mc_mean_perm_poly_at(&s, mu, samples, seed)).map(PyEstimate).map_err(err)
}

/// Monte-Carlo two-point function, conjugating the second factor for CUE
/// and Ginibre as in [`two_point`].
#[pyfunction]
#[pyo3(signature = (ensemble, n, mu1, mu2, samples = 100_000, seed = DEFAULT_SEED))]
fn estimate_two_point(
    py: Python<'_>,
    ensemble: &str,
    n: usize,
    mu1: C64,
    mu2: C64,
    samples: usize,
    seed: u64,
) -> PyResult<PyEstimate> {
    let s = spec(ensemble, n)?;
    let conj = matches!(s.kind, EnsembleKind::Cue | EnsembleKind::Ginibre);
    py.detach(|| mc_two_point(&s, mu1, mu2, conj, samples, seed)).map(PyEstimate).map_err(err)
}

/// Permanental roots of `samples` random matrices, one list per sample.
#[pyfunction]
#[pyo3(signature = (ensemble, n, samples = 500, seed = DEFAULT_SEED))]
fn root_samples(py: Python<'_>, ensemble: &str, n: usize, samples: usize, seed: u64) -> PyResult<Vec<Vec<C64>>> {
    let s = spec(ensemble, n)?;
    let cloud = py.detach(|| root_cloud(&s, samples, seed)).map_err(err)?;
    Ok((0..cloud.n_samples()).map(|i| cloud.sample(i).to_vec()).collect())
}

/// Root statistics of a cloud as a JSON string.
#[pyfunction]
#[pyo3(signature = (ensemble, n, samples = 500, seed = DEFAULT_SEED))]
fn root_summary(py: Python<'_>, ensemble: &str, n: usize, samples: usize, seed: u64) -> PyResult<String> {
    let s = spec(ensemble, n)?;
    let cloud = py.detach(|| root_cloud(&s, samples, seed)).map_err(err)?;
    serde_json::to_string(&size_report(&cloud)).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Limiting potential `Phi(z)` (None for GOE) and density at `z`.
#[pyfunction]
fn asymptotics(ensemble: &str, z: C64) -> PyResult<(Option<f64>, f64)> {
    let p = AsymptoticProfile::new(kind(ensemble)?).map_err(err)?;
    Ok((p.phi(z), p.density(z)))
}

/// Runs a verification suite; returns `(passed, report_text)`.
#[pyfunction]
#[pyo3(signature = (suite, seed = DEFAULT_SEED, samples = None))]
fn verify(py: Python<'_>, suite: &str, seed: u64, samples: Option<usize>) -> PyResult<(bool, String)> {
    let suite = Suite::parse(suite).map_err(err)?;
    let opts = VerifyOptions { samples, ..VerifyOptions::with_seed(seed) };
    let report = py.detach(|| run_suite(suite, &opts)).map_err(err)?;
    Ok((report.passed(), report.to_string()))
}

#[pymodule(name = "permpoly")]
fn permpoly_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEstimate>()?;
    m.add_function(wrap_pyfunction!(per, m)?)?;
    m.add_function(wrap_pyfunction!(perm_poly, m)?)?;
    m.add_function(wrap_pyfunction!(roots_of, m)?)?;
    m.add_function(wrap_pyfunction!(mean_perm_poly, m)?)?;
    m.add_function(wrap_pyfunction!(two_point, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_mean, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_two_point, m)?)?;
    m.add_function(wrap_pyfunction!(root_samples, m)?)?;
    m.add_function(wrap_pyfunction!(root_summary, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotics, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
