//! Python bindings: terms, identities, finite algebras, model search and
//! the classifier. Reports are returned as plain dicts and lists.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

use zlab::algebra::{self, FiniteZroupoid};
use zlab::classify as classifier;
use zlab::lemmas;
use zlab::search::{self, Constraint, SearchSpec};
use zlab::{Style, Term};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes through JSON so reports arrive as native Python objects.
fn to_python(py: Python<'_>, value: &impl Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn style(sugared: bool) -> Style {
    if sugared {
        Style::Sugared
    } else {
        Style::Expanded
    }
}

#[pyclass(name = "Term", module = "zlab_py", frozen, from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyTerm(Term);

#[pymethods]
impl PyTerm {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Term::parse(text).map(PyTerm).map_err(value_error)
    }

    #[pyo3(signature = (sugared = true))]
    fn render(&self, sugared: bool) -> String {
        self.0.render(style(sugared))
    }

    fn variables(&self) -> Vec<String> {
        self.0.variables().iter().map(|v| v.name().to_string()).collect()
    }

    fn depth(&self) -> usize {
        self.0.depth()
    }

    /// Value of the term in `alg` under `env` (variable name to element).
    fn eval(&self, alg: &PyAlgebra, env: std::collections::BTreeMap<String, usize>) -> PyResult<usize> {
        let mut assignment = zlab::term::Assignment::new();
        for (k, v) in env {
            let var = zlab::Var::from_name(&k).ok_or_else(|| value_error(format!("unknown variable {k}")))?;
            assignment.insert(var, v);
        }
        self.0.eval(&alg.0, &assignment).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.render(Style::Sugared)
    }

    fn __repr__(&self) -> String {
        format!("Term({:?})", self.0.render(Style::Sugared))
    }
}

#[pyclass(name = "Identity", module = "zlab_py", frozen, from_py_object)]
#[derive(Clone)]
struct PyIdentity(zlab::Identity);

#[pymethods]
impl PyIdentity {
    /// Parses `lhs = rhs` (or `lhs ≈ rhs`).
    #[new]
    #[pyo3(signature = (text, name = None))]
    fn new(text: &str, name: Option<String>) -> PyResult<Self> {
        let name = name.unwrap_or_else(|| text.trim().to_string());
        zlab::Identity::parse(name, text).map(PyIdentity).map_err(value_error)
    }

    /// Looks up an `nmXpq` name or one of its aliases.
    #[staticmethod]
    fn from_name(name: &str) -> PyResult<Self> {
        zlab::identity_from_name(name).map(PyIdentity).map_err(value_error)
    }

    #[getter]
    fn name(&self) -> &str {
        &self.0.name
    }

    #[getter]
    fn alias(&self) -> Option<&str> {
        self.0.alias.as_deref()
    }

    #[getter]
    fn lhs(&self) -> PyTerm {
        PyTerm(self.0.lhs.clone())
    }

    #[getter]
    fn rhs(&self) -> PyTerm {
        PyTerm(self.0.rhs.clone())
    }

    #[pyo3(signature = (sugared = true))]
    fn render(&self, sugared: bool) -> String {
        self.0.render(style(sugared))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Identity({}: {})", self.0.display_name(), self.0)
    }
}

#[pyclass(name = "Algebra", module = "zlab_py", frozen, from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyAlgebra(FiniteZroupoid);

#[pymethods]
impl PyAlgebra {
    /// `table[i][j]` is `i -> j`; element 0 is the constant.
    #[new]
    #[pyo3(signature = (table, name = String::new()))]
    fn new(table: Vec<Vec<usize>>, name: String) -> PyResult<Self> {
        FiniteZroupoid::new(table).map(|a| PyAlgebra(a.with_name(name))).map_err(value_error)
    }

    #[staticmethod]
    fn from_catalog(name: &str) -> PyResult<Self> {
        algebra::catalog().remove(name).map(PyAlgebra).ok_or_else(|| PyKeyError::new_err(name.to_string()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        FiniteZroupoid::from_json(text).map(PyAlgebra).map_err(value_error)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        FiniteZroupoid::load(path).map(PyAlgebra).map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn name(&self) -> &str {
        self.0.name()
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn table(&self) -> Vec<Vec<usize>> {
        self.0.rows()
    }

    fn op(&self, a: usize, b: usize) -> PyResult<usize> {
        let n = self.0.size();
        if a >= n || b >= n {
            return Err(value_error(format!("elements must be below {n}")));
        }
        Ok(self.0.op(a, b))
    }

    /// Satisfaction report for one identity: `holds`, and on failure the
    /// first witness with both side values.
    fn satisfies(&self, py: Python<'_>, identity: &PyIdentity) -> PyResult<Py<PyAny>> {
        to_python(py, &algebra::satisfies(&self.0, &identity.0))
    }

    /// Membership in a named variety (`I`, `S`, `SL`, `BA`, ... or any
    /// identity name, taken relative to `S`).
    fn member_of(&self, py: Python<'_>, variety: &str) -> PyResult<Py<PyAny>> {
        let v = algebra::variety(variety).ok_or_else(|| PyKeyError::new_err(variety.to_string()))?;
        to_python(py, &algebra::member_of(&self.0, &v))
    }

    fn lemma_suite(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_python(py, &lemmas::lemma_suite(&self.0))
    }

    fn canonical(&self) -> PyAlgebra {
        PyAlgebra(search::canonical_form(&self.0).to_algebra())
    }

    fn is_isomorphic(&self, other: &PyAlgebra) -> bool {
        search::are_isomorphic(&self.0, &other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Algebra(name={:?}, table={:?})", self.0.name(), self.0.rows())
    }
}

#[pyfunction]
#[pyo3(signature = (max_len = 4))]
fn enumerate_waids(max_len: usize) -> PyResult<Vec<PyIdentity>> {
    zlab::enumerate_waids(max_len).map(|v| v.into_iter().map(PyIdentity).collect()).map_err(value_error)
}

#[pyfunction]
fn catalog() -> std::collections::BTreeMap<String, PyAlgebra> {
    algebra::catalog().into_iter().map(|(k, v)| (k, PyAlgebra(v))).collect()
}

fn constraint(name: &str) -> PyResult<Constraint> {
    if let Some(v) = algebra::variety(name) {
        return Ok(v.into());
    }
    Ok(PyIdentity::new(name, None)?.0.into())
}

fn failing(name: &str) -> PyResult<zlab::Identity> {
    if let Ok(id) = zlab::identity_from_name(name) {
        return Ok(id);
    }
    if let Some(v) = algebra::variety(name).filter(|v| v.defining.len() == 1) {
        return Ok(v.defining[0].clone());
    }
    Ok(PyIdentity::new(name, None)?.0)
}

/// Models of `size` satisfying every name in `satisfy` and violating every
/// name in `fail`.
#[pyfunction]
#[pyo3(signature = (size, satisfy = vec![], fail = vec![], iso_reduce = true, limit = None, allow_large = false))]
fn find_models(
    py: Python<'_>,
    size: usize,
    satisfy: Vec<String>,
    fail: Vec<String>,
    iso_reduce: bool,
    limit: Option<usize>,
    allow_large: bool,
) -> PyResult<Vec<PyAlgebra>> {
    let mut spec = SearchSpec::new(size).iso_reduce(iso_reduce);
    if allow_large {
        spec = spec.allow_large();
    }
    for s in &satisfy {
        spec = spec.satisfy(constraint(s)?);
    }
    for f in &fail {
        spec = spec.fail(failing(f)?);
    }
    if let Some(l) = limit {
        spec = spec.limit(l);
    }
    let models = py.detach(|| search::enumerate_models(&spec)).map_err(value_error)?;
    Ok(models.into_iter().map(PyAlgebra).collect())
}

/// Smallest symmetric model of `holds` in which `fails` is violated.
#[pyfunction]
fn find_separator(py: Python<'_>, holds: &str, fails: &str, max_size: usize) -> PyResult<Option<PyAlgebra>> {
    let a = zlab::identity_from_name(holds).map_err(value_error)?;
    let b = zlab::identity_from_name(fails).map_err(value_error)?;
    let found = py.detach(|| search::find_separator(&a, &b, max_size)).map_err(value_error)?;
    Ok(found.map(PyAlgebra))
}

fn models_or_search(py: Python<'_>, models: Option<Vec<PyAlgebra>>, max_size: usize) -> PyResult<Vec<FiniteZroupoid>> {
    match models {
        Some(m) => Ok(m.into_iter().map(|a| a.0).collect()),
        None => py.detach(|| classifier::symmetric_models_up_to(max_size, search::DEFAULT_SIZE_CAP)).map_err(value_error),
    }
}

/// Partition of the 155 identities over `models` (default: every symmetric
/// model up to `max_size`).
#[pyfunction]
#[pyo3(signature = (models = None, max_size = 4))]
fn classify(py: Python<'_>, models: Option<Vec<PyAlgebra>>, max_size: usize) -> PyResult<Py<PyAny>> {
    let models = models_or_search(py, models, max_size)?;
    let ids = zlab::enumerate_waids(4).map_err(value_error)?;
    let report = classifier::induced_partition(&ids, &models).map_err(value_error)?;
    to_python(py, &report)
}

/// Covering pairs between blocks, plus the DOT rendering.
#[pyfunction]
#[pyo3(signature = (models = None, max_size = 4, with_landmarks = false))]
fn hasse(py: Python<'_>, models: Option<Vec<PyAlgebra>>, max_size: usize, with_landmarks: bool) -> PyResult<Py<PyAny>> {
    let models = models_or_search(py, models, max_size)?;
    let ids = zlab::enumerate_waids(4).map_err(value_error)?;
    let report = classifier::induced_partition(&ids, &models).map_err(value_error)?;
    let poset = classifier::inclusion_poset(&report, &models, with_landmarks);
    let out = PyDict::new(py);
    out.set_item("edges", poset.edges())?;
    out.set_item("nodes", to_python(py, &poset.nodes)?)?;
    out.set_item("dot", classifier::hasse_dot(&poset))?;
    Ok(out.into_any().unbind())
}

#[pymodule]
fn zlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyTerm>()?;
    m.add_class::<PyIdentity>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_function(wrap_pyfunction!(enumerate_waids, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(find_models, m)?)?;
    m.add_function(wrap_pyfunction!(find_separator, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(hasse, m)?)?;
    Ok(())
}
