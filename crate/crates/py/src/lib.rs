//! Python bindings: `import caputo_l1`.

// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use caputo::experiments;
use caputo::{Error, QuadratureConfig, SampledFunction, TestFunctionSpec, UniformGrid};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(caputo_l1, NoConvergenceError, PyRuntimeError);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::NoConvergence(msg) => NoConvergenceError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn samples(values: Vec<f64>, tau: f64) -> PyResult<SampledFunction> {
    if values.len() < 2 {
        return Err(PyValueError::new_err("need at least two samples"));
    }
    let grid = UniformGrid::new(tau, values.len() - 1).map_err(to_py)?;
    SampledFunction::new(grid, values).map_err(to_py)
}

/// Γ(x) for x > 0.
#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    caputo::gamma(x).map_err(to_py)
}

/// ζ(s) for s in (-1, 0).
#[pyfunction]
fn riemann_zeta(s: f64) -> PyResult<f64> {
    caputo::riemann_zeta(s).map_err(to_py)
}

/// The first `count` weights b_i = (i+1)^(1-α) - i^(1-α).
#[pyfunction]
fn weights(alpha: f64, count: usize) -> PyResult<Vec<f64>> {
    Ok(caputo::weights(alpha, count).map_err(to_py)?.as_slice().to_vec())
}

/// The L1 approximation at node `n` of samples y_0..y_N with step `tau`.
#[pyfunction]
fn l1_apply(values: Vec<f64>, tau: f64, alpha: f64, n: usize) -> PyResult<f64> {
    caputo::l1_apply(&samples(values, tau)?, alpha, n).map_err(to_py)
}

/// The L1 approximation at every node t_1..t_N.
#[pyfunction]
fn l1_apply_all(py: Python<'_>, values: Vec<f64>, tau: f64, alpha: f64) -> PyResult<Vec<f64>> {
    let s = samples(values, tau)?;
    py.detach(|| caputo::l1_apply_all(&s, alpha)).map_err(to_py)
}

/// Piecewise-linear interpolant of the samples at time `t`.
#[pyfunction]
fn interpolate(values: Vec<f64>, tau: f64, t: f64) -> PyResult<f64> {
    caputo::interpolate(&samples(values, tau)?, t).map_err(to_py)
}

/// Exact Caputo derivative of the piecewise-linear interpolant at node `n`.
#[pyfunction]
fn caputo_of_interpolant(values: Vec<f64>, tau: f64, alpha: f64, n: usize) -> PyResult<f64> {
    caputo::caputo_of_interpolant(&samples(values, tau)?, alpha, n).map_err(to_py)
}

fn params(alpha: f64, beta: f64, k: u8, n: u64) -> PyResult<caputo::ErrorConstantParams> {
    caputo::ErrorConstantParams::new(alpha, beta, k, n).map_err(to_py)
}

#[pyfunction]
fn error_constant(alpha: f64, beta: f64, k: u8, n: u64) -> PyResult<f64> {
    caputo::error_constant(&params(alpha, beta, k, n)?).map_err(to_py)
}

#[pyfunction]
fn truncation_bound(alpha: f64, beta: f64, k: u8, n: u64, tau: f64, seminorm: f64) -> PyResult<f64> {
    caputo::truncation_bound(&params(alpha, beta, k, n)?, tau, seminorm).map_err(to_py)
}

#[pyfunction]
fn interpolation_bound(k: u8, beta: f64, t: f64, t_j: f64, tau: f64, weight: f64) -> PyResult<f64> {
    caputo::interpolation_bound(k, beta, t, t_j, tau, weight).map_err(to_py)
}

#[pyfunction]
fn caputo_wellposed_bound(alpha: f64, beta: f64, t: f64, seminorm: f64) -> PyResult<f64> {
    caputo::caputo_wellposed_bound(alpha, beta, t, seminorm).map_err(to_py)
}

#[pyfunction]
fn asymptotic_optimal_constant(alpha: f64) -> PyResult<f64> {
    caputo::asymptotic_optimal_constant(alpha).map_err(to_py)
}

/// Member y_{k,β}(t) = (t - 1/2)^k |t - 1/2|^β of the test family on [0, 1].
#[pyclass(frozen)]
struct TestFunction {
    inner: caputo::HolderFunction,
}

#[pymethods]
impl TestFunction {
    #[new]
    fn new(k: u8, beta: f64) -> PyResult<Self> {
        let spec = TestFunctionSpec::new(k, beta).map_err(to_py)?;
        Ok(Self {
            inner: caputo::make_test_function(spec),
        })
    }

    /// Builds the member with k + β = `v` (k = 0 for v ≤ 1).
    #[staticmethod]
    fn from_smoothness(v: f64) -> PyResult<Self> {
        let spec = TestFunctionSpec::from_smoothness(v).map_err(to_py)?;
        Ok(Self {
            inner: caputo::make_test_function(spec),
        })
    }

    #[getter]
    fn k(&self) -> u8 {
        self.inner.k()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    #[getter]
    fn seminorm(&self) -> Option<f64> {
        self.inner.known_seminorm()
    }

    fn __call__(&self, t: f64) -> f64 {
        self.inner.eval(t)
    }

    /// Samples on the grid τ, 2τ, …, covering [0, 1].
    fn sample(&self, tau: f64) -> PyResult<Vec<f64>> {
        let grid = UniformGrid::covering(self.inner.horizon(), tau).map_err(to_py)?;
        Ok((0..=grid.n_max()).map(|n| self.inner.eval(grid.node(n))).collect())
    }

    /// Reference Caputo derivative by quadrature: (value, error estimate).
    #[pyo3(signature = (alpha, t, tol = 1e-10))]
    fn caputo(&self, py: Python<'_>, alpha: f64, t: f64, tol: f64) -> PyResult<(f64, f64)> {
        let cfg = QuadratureConfig::with_tolerance(tol);
        let r = py
            .detach(|| caputo::caputo_reference(&self.inner, alpha, t, &cfg))
            .map_err(to_py)?;
        Ok((r.value, r.error_estimate))
    }

    /// Estimated convergence order from grids τ, τ/2, τ/4 on [0, 1].
    #[pyo3(signature = (alpha, tau_base = experiments::DEFAULT_TAU))]
    fn estimate_order(&self, py: Python<'_>, alpha: f64, tau_base: f64) -> PyResult<f64> {
        let horizon = self.inner.horizon();
        py.detach(|| caputo::estimate_order(&self.inner, alpha, tau_base, horizon))
            .map(|e| e.estimated_order)
            .map_err(to_py)
    }

    /// Largest observed error, largest bound and worst ratio over all nodes.
    #[pyo3(signature = (alpha, tau, tol = 1e-10))]
    fn check_bound(&self, py: Python<'_>, alpha: f64, tau: f64, tol: f64) -> PyResult<(f64, f64, f64)> {
        let cfg = QuadratureConfig::with_tolerance(tol);
        let horizon = self.inner.horizon();
        let c = py
            .detach(|| experiments::check_bound(&self.inner, alpha, tau, horizon, &cfg))
            .map_err(to_py)?;
        Ok((c.observed_max, c.bound_max, c.worst_ratio))
    }

    fn __repr__(&self) -> String {
        format!("TestFunction(k={}, beta={})", self.inner.k(), self.inner.beta())
    }
}

/// Order table as a list of rows (one per α); undefined cells are None.
#[pyfunction]
#[pyo3(signature = (alphas = None, kbeta = None, tau_base = experiments::DEFAULT_TAU))]
fn order_table(
    py: Python<'_>,
    alphas: Option<Vec<f64>>,
    kbeta: Option<Vec<f64>>,
    tau_base: f64,
) -> PyResult<Vec<Vec<Option<f64>>>> {
    let alphas = alphas.unwrap_or_else(|| experiments::DEFAULT_ALPHAS.to_vec());
    let kbeta = kbeta.unwrap_or_else(|| experiments::DEFAULT_SMOOTHNESS.to_vec());
    let table = py
        .detach(|| experiments::order_table(&alphas, &kbeta, tau_base, 1.0))
        .map_err(to_py)?;
    let mut rows = Vec::with_capacity(alphas.len());
    for i in 0..alphas.len() {
        let mut row = Vec::with_capacity(kbeta.len());
        for j in 0..kbeta.len() {
            match table.get(i, j) {
                Ok(est) => row.push(Some(est.estimated_order)),
                Err(Error::DegenerateDifference { .. }) => row.push(None),
                Err(e) => return Err(to_py(e.clone())),
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

#[pymodule]
fn caputo_l1(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NoConvergenceError", m.py().get_type::<NoConvergenceError>())?;
    m.add_class::<TestFunction>()?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_zeta, m)?)?;
    m.add_function(wrap_pyfunction!(weights, m)?)?;
    m.add_function(wrap_pyfunction!(l1_apply, m)?)?;
    m.add_function(wrap_pyfunction!(l1_apply_all, m)?)?;
    m.add_function(wrap_pyfunction!(interpolate, m)?)?;
    m.add_function(wrap_pyfunction!(caputo_of_interpolant, m)?)?;
    m.add_function(wrap_pyfunction!(error_constant, m)?)?;
    m.add_function(wrap_pyfunction!(truncation_bound, m)?)?;
    m.add_function(wrap_pyfunction!(interpolation_bound, m)?)?;
    m.add_function(wrap_pyfunction!(caputo_wellposed_bound, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_optimal_constant, m)?)?;
    m.add_function(wrap_pyfunction!(order_table, m)?)?;
    Ok(())
}
