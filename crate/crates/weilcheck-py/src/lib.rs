//! Python bindings. Reports come back as plain dicts via JSON.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use weilcheck::epsweil::{weil_gauss_oracle, weil_index};
use weilcheck::harness::{self, InstanceSpec, MatrixFilter, SuiteConfig, VerifyOptions};
use weilcheck::linalg;
use weilcheck::localfield::{AdditiveCharacter, GroundField};
use weilcheck::quadform::QuadSpace;
use weilcheck::Error;

pyo3::create_exception!(weilcheck, ObstructedError, PyRuntimeError);

fn err(e: Error) -> PyErr {
    match e {
        Error::Obstructed(m) => ObstructedError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_py(py: Python<'_>, v: &impl serde::Serialize) -> PyResult<PyObject> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import_bound("json")?.call_method1("loads", (s,))?.unbind())
}

/// Accepts a dict or a JSON string.
fn json_arg(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<String> {
    if let Ok(s) = obj.extract::<String>() {
        return Ok(s);
    }
    py.import_bound("json")?.call_method1("dumps", (obj,))?.extract()
}

/// A local ground field: "R", "C", "Qp:5", "Fq((t)):3".
#[pyclass(name = "Field", frozen)]
#[derive(Clone)]
struct PyField(GroundField);

#[pymethods]
impl PyField {
    #[new]
    fn new(descriptor: &str) -> PyResult<Self> {
        GroundField::parse(descriptor).map(PyField).map_err(err)
    }

    /// Labels of the square classes F^×/F^×2.
    fn square_classes(&self) -> Vec<String> {
        self.0.classes().into_iter().map(|c| self.0.class_label(c)).collect()
    }

    fn hilbert(&self, a: &str, b: &str) -> PyResult<i8> {
        let (a, b) = (self.0.parse_class(a).map_err(err)?, self.0.parse_class(b).map_err(err)?);
        Ok(self.0.hilbert(a, b))
    }

    fn __repr__(&self) -> String {
        format!("Field('{}')", self.0)
    }
}

/// A nondegenerate quadratic space given by an integer polar Gram matrix.
#[pyclass(name = "QuadraticForm", frozen)]
struct PyQuadForm(QuadSpace);

#[pymethods]
impl PyQuadForm {
    #[new]
    fn new(field: &PyField, gram: Vec<Vec<i64>>) -> PyResult<Self> {
        let f = field.0;
        QuadSpace::new(f, linalg::from_ints(&f, &gram)).map(PyQuadForm).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Class of the graded Clifford algebra, as "(χ, b)".
    fn wall(&self) -> PyResult<String> {
        self.0.wall().map(|w| w.to_string()).map_err(err)
    }

    /// γ(Q, ψ) as one of "1", "i", "-1", "-i".
    #[pyo3(signature = (psi_level = 0))]
    fn weil_index(&self, psi_level: i64) -> PyResult<String> {
        let psi = AdditiveCharacter::new(self.0.field, psi_level);
        weil_index(&self.0, &psi).map(|g| g.to_string()).map_err(err)
    }

    /// Gauss-sum evaluation of γ(Q, ψ), unsnapped.
    #[pyo3(signature = (psi_level = 0))]
    fn gauss_sum(&self, psi_level: i64) -> PyResult<(f64, f64)> {
        let psi = AdditiveCharacter::new(self.0.field, psi_level);
        weil_gauss_oracle(&self.0, &psi).map(|o| (o.re, o.im)).map_err(err)
    }
}

/// Check one instance; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (instance, precision = None, psi_level = None, intermediates = false, robustness = false))]
fn verify(
    py: Python<'_>,
    instance: &Bound<'_, PyAny>,
    precision: Option<u32>,
    psi_level: Option<i64>,
    intermediates: bool,
    robustness: bool,
) -> PyResult<PyObject> {
    let spec = InstanceSpec::from_json(&json_arg(py, instance)?).map_err(err)?;
    let opts = VerifyOptions { precision, psi_level, intermediates, robustness, ..Default::default() };
    let rep = py.allow_threads(|| harness::verify_main_theorem(&spec, &opts)).map_err(err)?;
    to_py(py, &rep)
}

/// Run suites from a config (dict or JSON string); returns the suite report.
#[pyfunction]
fn run_suite(py: Python<'_>, config: &Bound<'_, PyAny>) -> PyResult<PyObject> {
    let cfg = SuiteConfig::from_json(&json_arg(py, config)?).map_err(err)?;
    let rep = py.allow_threads(|| harness::run_suite(&cfg)).map_err(err)?;
    to_py(py, &rep)
}

/// Instances of the main-theorem matrix, as dicts.
#[pyfunction]
#[pyo3(signature = (types = None, fields = None))]
fn matrix_instances(py: Python<'_>, types: Option<Vec<String>>, fields: Option<Vec<String>>) -> PyResult<PyObject> {
    let filter = MatrixFilter { types: types.unwrap_or_default(), fields: fields.unwrap_or_default() };
    to_py(py, &harness::matrix_instances(&filter).map_err(err)?)
}

#[pymodule]
#[pyo3(name = "weilcheck")]
fn weilcheck_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyQuadForm>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_instances, m)?)?;
    m.add("ObstructedError", m.py().get_type_bound::<ObstructedError>())?;
    m.add("SUITE_NAMES", harness::SUITE_NAMES.to_vec())?;
    Ok(())
}
