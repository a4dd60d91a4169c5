//! Python bindings. Usage errors raise `ValueError`, numerical breakdowns
//! raise `ArithmeticError`.

use std::sync::Arc;

use plap::asymptotics::{self, ConvergenceSummary, Family, RecordStatus};
use plap::eigensolver::{self, SolverOptions};
use plap::ptrig::{self, PTrigTable};
use plap::weight::{self, ProblemConfig, WeightCase};
use plap::{bounds, Error};
use pyo3::exceptions::{PyArithmeticError, PyIOError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        Error::InsufficientData(_) => PyValueError::new_err(e.to_string()),
        _ if e.is_usage() => PyValueError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

fn table(p: f64) -> PyResult<Arc<PTrigTable>> {
    PTrigTable::cached(p).map_err(to_py)
}

/// Generalized half-period `pi_p`.
#[pyfunction]
fn pi_p(p: f64) -> PyResult<f64> {
    ptrig::pi_p(p).map_err(to_py)
}

/// Generalized sine, normalized so that `|sin_p|^p + (p-1)|cos_p|^p = p-1`.
#[pyfunction]
fn sin_p(p: f64, theta: f64) -> PyResult<f64> {
    ptrig::sin_p(p, theta).map_err(to_py)
}

/// Weight `q` on `[0, 1]` for the annulus `R < |x| < Rbar` in dimension `N`.
#[pyclass(frozen, name = "WeightProfile")]
struct PyWeight(weight::WeightProfile);

#[pymethods]
impl PyWeight {
    /// `Rbar` defaults to `R + 1`.
    #[new]
    #[pyo3(signature = (p, dim, inner, outer = None))]
    fn new(p: f64, dim: u32, inner: f64, outer: Option<f64>) -> PyResult<Self> {
        let config =
            ProblemConfig::new(p, dim, inner, outer.unwrap_or(inner + 1.0)).map_err(to_py)?;
        weight::WeightProfile::new(config).map(Self).map_err(to_py)
    }

    /// The constant weight `q = 1`.
    #[staticmethod]
    fn unit(p: f64) -> PyResult<Self> {
        weight::WeightProfile::unit(p).map(Self).map_err(to_py)
    }

    #[getter]
    fn p(&self) -> f64 {
        self.0.p()
    }

    /// `"subcritical"`, `"conformal"` or `"unit"`.
    #[getter]
    fn case(&self) -> &'static str {
        match self.0.case() {
            WeightCase::Subcritical => "subcritical",
            WeightCase::Conformal => "conformal",
            WeightCase::Unit => "unit",
        }
    }

    #[getter]
    fn q0(&self) -> f64 {
        self.0.q0()
    }

    #[getter]
    fn q1(&self) -> f64 {
        self.0.q1()
    }

    /// The `t` with `q(t) = 1`, if `q` crosses one.
    #[getter]
    fn kink(&self) -> Option<f64> {
        self.0.kink()
    }

    fn q(&self, t: f64) -> PyResult<f64> {
        self.0.q(t).map_err(to_py)
    }

    fn derivative(&self, t: f64) -> PyResult<f64> {
        self.0.derivative(t).map_err(to_py)
    }

    /// `int_0^t q`.
    fn antiderivative(&self, t: f64) -> PyResult<f64> {
        self.0.antiderivative(t).map_err(to_py)
    }

    fn integral(&self) -> f64 {
        self.0.integral()
    }

    /// `(int min(1, q), int max(1, q))`.
    fn averages(&self) -> (f64, f64) {
        (bounds::q_bar_minus(&self.0), bounds::q_bar_plus(&self.0))
    }

    fn __repr__(&self) -> String {
        match self.0.config() {
            Some(c) => format!(
                "WeightProfile(p={}, dim={}, inner={}, outer={})",
                c.p(),
                c.dim(),
                c.inner(),
                c.outer()
            ),
            None => format!("WeightProfile.unit({})", self.0.p()),
        }
    }
}

/// Two-sided bound `lower <= lambda_k <= upper`.
#[pyclass(frozen, get_all, skip_from_py_object, name = "Bracket")]
#[derive(Clone)]
struct PyBracket {
    k: usize,
    q_minus: f64,
    q_plus: f64,
    lower: f64,
    upper: f64,
}

impl From<bounds::EigenBracket> for PyBracket {
    fn from(b: bounds::EigenBracket) -> Self {
        Self {
            k: b.k,
            q_minus: b.q_minus,
            q_plus: b.q_plus,
            lower: b.lower,
            upper: b.upper,
        }
    }
}

#[pymethods]
impl PyBracket {
    fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    fn __repr__(&self) -> String {
        format!(
            "Bracket(k={}, lower={}, upper={})",
            self.k, self.lower, self.upper
        )
    }
}

#[pyfunction]
fn bracket(weight: &PyWeight, k: usize) -> PyResult<PyBracket> {
    let table = table(weight.0.p())?;
    bounds::eigen_bracket(&weight.0, k, &table)
        .map(PyBracket::from)
        .map_err(to_py)
}

/// The `k`-th eigenpair. `value` is the eigenvalue; `eigenfunction` holds
/// `(t, v)` samples with `max |v| = 1`.
#[pyclass(frozen, get_all, name = "EigenResult")]
struct PyEigen {
    k: usize,
    value: f64,
    theta_end: f64,
    zero_count: usize,
    residual: f64,
    bracket: PyBracket,
    eigenfunction: Vec<(f64, f64)>,
}

#[pymethods]
impl PyEigen {
    fn __repr__(&self) -> String {
        format!("EigenResult(k={}, value={})", self.k, self.value)
    }
}

#[pyfunction]
#[pyo3(signature = (weight, k, tol = 1e-10, samples = 401))]
fn eigenvalue(
    py: Python<'_>,
    weight: &PyWeight,
    k: usize,
    tol: f64,
    samples: usize,
) -> PyResult<PyEigen> {
    let table = table(weight.0.p())?;
    let opts = SolverOptions {
        samples,
        ..SolverOptions::with_tol(tol)
    };
    let w = &weight.0;
    let res = py
        .detach(|| eigensolver::eigenvalue(w, k, &table, &opts))
        .map_err(to_py)?;
    Ok(PyEigen {
        k: res.k,
        value: res.lambda,
        theta_end: res.theta_end,
        zero_count: res.zero_count,
        residual: res.residual,
        bracket: res.bracket.into(),
        eigenfunction: res.eigenfunction,
    })
}

/// One `(R, k)` row of a sweep. `value` and `gap` are `None` when the solver
/// failed; `error` then holds the reason.
#[pyclass(frozen, get_all, name = "SweepRecord")]
struct PyRecord {
    family: String,
    p: f64,
    dim: u32,
    radius: f64,
    k: usize,
    value: Option<f64>,
    lower: f64,
    upper: f64,
    target: f64,
    gap: Option<f64>,
    q0: f64,
    q1: f64,
    qbar_minus: f64,
    qbar_plus: f64,
    error: Option<String>,
}

#[pymethods]
impl PyRecord {
    fn __repr__(&self) -> String {
        format!(
            "SweepRecord(family={}, radius={}, k={}, value={:?})",
            self.family, self.radius, self.k, self.value
        )
    }
}

/// Family by label: `"pn"` takes `p`, `"p2"` takes `N`, `"rfam"` takes `r`.
fn family(name: &str, param: u32) -> PyResult<Family> {
    let family = match name {
        "pn" => Family::PEqualsN { p: param },
        "p2" => Family::P2 { dim: param },
        "rfam" => Family::RFamily { r: param },
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown family {other:?}; expected pn, p2 or rfam"
            )))
        }
    };
    family.validate().map_err(to_py)?;
    Ok(family)
}

fn record(rec: asymptotics::SweepRecord, family: Family) -> PyRecord {
    let error = match &rec.status {
        RecordStatus::Ok => None,
        RecordStatus::Failed(msg) => Some(msg.clone()),
    };
    PyRecord {
        family: family.label().to_string(),
        p: rec.p(),
        dim: rec.dim(),
        radius: rec.radius,
        k: rec.k,
        value: rec.lambda,
        lower: rec.lower,
        upper: rec.upper,
        target: rec.target,
        gap: rec.gap,
        q0: rec.q0,
        q1: rec.q1,
        qbar_minus: rec.qbar_minus,
        qbar_plus: rec.qbar_plus,
        error,
    }
}

/// Solve every `(R, k)` pair with `Rbar = R + 1`. Rows are sorted by `(k, R)`.
#[pyfunction]
#[pyo3(signature = (family_name, param, radii = None, k_max = 3, tol = 1e-10))]
fn run_sweep(
    py: Python<'_>,
    family_name: &str,
    param: u32,
    radii: Option<Vec<f64>>,
    k_max: usize,
    tol: f64,
) -> PyResult<Vec<PyRecord>> {
    let family = family(family_name, param)?;
    let radii = radii.unwrap_or_else(|| asymptotics::DEFAULT_RADII.to_vec());
    let mut spec = asymptotics::SweepSpec::new(family, radii, k_max).map_err(to_py)?;
    spec.options = SolverOptions::with_tol(tol);
    let records = py.detach(|| asymptotics::run_sweep(&spec)).map_err(to_py)?;
    Ok(records.into_iter().map(|r| record(r, family)).collect())
}

/// Convergence diagnostics for one `(family, k)` group.
#[pyclass(frozen, get_all, name = "ConvergenceSummary")]
struct PySummary {
    family: String,
    k: usize,
    radii: Vec<f64>,
    gaps: Vec<f64>,
    slope: Option<f64>,
    verdict: String,
    tolerance: f64,
    passed: bool,
}

impl From<ConvergenceSummary> for PySummary {
    fn from(s: ConvergenceSummary) -> Self {
        Self {
            family: s.family.to_string(),
            k: s.k,
            radii: s.radii,
            gaps: s.gaps,
            slope: s.slope,
            verdict: s.verdict.to_string(),
            tolerance: s.tolerance,
            passed: s.passed,
        }
    }
}

#[pymethods]
impl PySummary {
    fn __repr__(&self) -> String {
        format!(
            "ConvergenceSummary(family={}, k={}, verdict={}, passed={})",
            self.family,
            self.k,
            self.verdict,
            if self.passed { "True" } else { "False" }
        )
    }
}

/// Sweep and summarize in one call.
#[pyfunction]
#[pyo3(signature = (family_name, param, radii = None, k_max = 3, tol = 1e-10))]
fn convergence_report(
    py: Python<'_>,
    family_name: &str,
    param: u32,
    radii: Option<Vec<f64>>,
    k_max: usize,
    tol: f64,
) -> PyResult<Vec<PySummary>> {
    let family = family(family_name, param)?;
    let radii = radii.unwrap_or_else(|| asymptotics::DEFAULT_RADII.to_vec());
    let mut spec = asymptotics::SweepSpec::new(family, radii, k_max).map_err(to_py)?;
    spec.options = SolverOptions::with_tol(tol);
    let summaries = py
        .detach(|| asymptotics::run_sweep(&spec).and_then(|r| asymptotics::convergence_report(&r)))
        .map_err(to_py)?;
    Ok(summaries.into_iter().map(PySummary::from).collect())
}

#[pymodule]
#[pyo3(name = "radial_plap")]
fn radial_plap_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(pi_p, m)?)?;
    m.add_function(wrap_pyfunction!(sin_p, m)?)?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_report, m)?)?;
    m.add_class::<PyWeight>()?;
    m.add_class::<PyBracket>()?;
    m.add_class::<PyEigen>()?;
    m.add_class::<PyRecord>()?;
    m.add_class::<PySummary>()?;
    Ok(())
}
