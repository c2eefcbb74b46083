//! Python bindings: meshes, a single solve on the layer test case, rates and
//! the convergence-study driver.

use std::sync::Arc;

use ldg_core::error_analysis::{error_record, rate_r2, rate_rs};
use ldg_core::ldg::solve_problem;
use ldg_core::manufactured::layer_case;
use ldg_core::poly::gauss_quadrature;
use ldg_core::study::{emit_table, run_study, ConfigBuilder};
use ldg_core::{LdgError, Mesh, MeshKind, MeshSpec};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: LdgError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_kind(kind: &str) -> PyResult<MeshKind> {
    kind.parse().map_err(py_err)
}

/// Layer-adapted mesh on [0, 1], refined near x = 1.
#[pyclass(name = "Mesh", frozen)]
pub struct PyMesh {
    inner: Arc<Mesh>,
}

#[pymethods]
impl PyMesh {
    /// `kind` is one of s, bs, b. `sigma` defaults to k + 1.5 with k = 1.
    #[new]
    #[pyo3(signature = (kind, n, eps, sigma = 2.5, alpha = 1.0))]
    fn new(kind: &str, n: usize, eps: f64, sigma: f64, alpha: f64) -> PyResult<Self> {
        let spec = MeshSpec::new(parse_kind(kind)?, n, eps, sigma, alpha).map_err(py_err)?;
        Ok(Self { inner: Arc::new(Mesh::build(&spec).map_err(py_err)?) })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n_elements()
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tau()
    }

    #[getter]
    fn clamped(&self) -> bool {
        self.inner.clamped()
    }

    fn nodes(&self) -> Vec<f64> {
        self.inner.nodes().to_vec()
    }

    /// `1 - x` at each node, exact in the layer.
    fn offsets(&self) -> Vec<f64> {
        self.inner.offsets().to_vec()
    }

    fn widths(&self) -> Vec<f64> {
        self.inner.widths().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Mesh(n={}, tau={:e})", self.inner.n_elements(), self.inner.tau())
    }
}

/// Errors of one LDG solve against the exact layer solution.
#[pyclass(name = "SolveResult", frozen, get_all)]
pub struct PySolveResult {
    energy: f64,
    l2_u: f64,
    l2_p: f64,
    l2_q: f64,
    backward_error: f64,
    growth_factor: f64,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        format!("SolveResult(energy={:e}, l2_u={:e}, l2_p={:e})", self.energy, self.l2_u, self.l2_p)
    }
}

/// Solve the layer test case on `mesh` with degree `k`.
#[pyfunction]
#[pyo3(signature = (mesh, k, eps, quad_error = 20))]
fn solve(mesh: &PyMesh, k: usize, eps: f64, quad_error: usize) -> PyResult<PySolveResult> {
    let case = layer_case(eps);
    let qa = gauss_quadrature(k + 3).map_err(py_err)?;
    let qe = gauss_quadrature(quad_error).map_err(py_err)?;
    let w = solve_problem(&case.problem, &mesh.inner, k, &qa).map_err(py_err)?;
    let r = error_record(&case, &w, &qe);
    Ok(PySolveResult {
        energy: r.energy,
        l2_u: r.l2_u,
        l2_p: r.l2_p,
        l2_q: r.l2_q,
        backward_error: w.info.backward_error,
        growth_factor: w.info.growth_factor,
    })
}

#[pyfunction]
fn phi(kind: &str, t: f64, n: usize, eps: f64) -> PyResult<f64> {
    ldg_core::phi_eval(parse_kind(kind)?, t, n, eps).map_err(py_err)
}

#[pyfunction(name = "rate_r2")]
fn py_rate_r2(e_n: f64, e_2n: f64) -> PyResult<f64> {
    rate_r2(e_n, e_2n).map_err(py_err)
}

#[pyfunction(name = "rate_rs")]
fn py_rate_rs(e_n: f64, e_2n: f64, n: usize) -> PyResult<f64> {
    rate_rs(e_n, e_2n, n).map_err(py_err)
}

#[pyfunction]
fn format_error(v: f64) -> String {
    ldg_core::study::format_error(v)
}

/// Run a convergence study. Keyword arguments use the CLI names
/// (mesh="s,b", k="0..1", eps="1e-8", nmin=16, nmax=64, format="csv", ...).
/// Returns `(table_text, any_failed)`.
#[pyfunction]
#[pyo3(signature = (**settings))]
fn study(settings: Option<std::collections::HashMap<String, Bound<'_, PyAny>>>) -> PyResult<(String, bool)> {
    let mut builder = ConfigBuilder::new();
    for (key, value) in settings.unwrap_or_default() {
        builder.set(&key, &value.str()?.to_string()).map_err(py_err)?;
    }
    let config = builder.build().map_err(py_err)?;
    let report = run_study(&config).map_err(py_err)?;
    Ok((emit_table(&report, config.format), report.any_failed()))
}

#[pymodule]
mod ldg_py {
    #[pymodule_export]
    use super::{format_error, phi, py_rate_r2, py_rate_rs, solve, study, PyMesh, PySolveResult};

    #[pymodule_export]
    const CSV_HEADER: &str = ldg_core::study::CSV_HEADER;
}
