//! Python bindings for `gradlca`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gradlca::algebra::{audit_jacobi, audit_skew, parse_param_value, AlgebraSpec, Report};
use gradlca::catalog::{family_spec, Family, Params};
use gradlca::classify::{
    audit_additivity, audit_degree_bound, classify_v, extend_v_seed, ExtendOutcome, VSeed,
};
use gradlca::derived::{annihilation_truncation, basic_lie_algebra};
use gradlca::poly::{self, ParamSet};
use gradlca::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Precondition(_) | Error::Shape(_) | Error::Inconsistent(_) | Error::Factorization(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn params(kv: Option<Vec<(String, String)>>) -> PyResult<Params> {
    kv.unwrap_or_default()
        .into_iter()
        .map(|(k, v)| Ok((k, parse_param_value(&v).map_err(py_err)?)))
        .collect()
}

/// A polynomial in d (∂), x (λ) and named parameters.
#[pyclass(frozen, eq, str, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Poly {
    inner: poly::Poly,
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.inner.fmt(f)
    }
}

#[pymethods]
impl Poly {
    #[new]
    #[pyo3(signature = (text, params = vec![]))]
    fn new(text: &str, params: Vec<String>) -> PyResult<Self> {
        let names = ParamSet::new(params.iter().map(String::as_str));
        let inner = poly::parse(text, &names).map_err(|e| py_err(e.into()))?;
        Ok(Poly { inner })
    }

    fn __add__(&self, o: &Poly) -> Poly {
        Poly { inner: self.inner.add(&o.inner) }
    }

    fn __sub__(&self, o: &Poly) -> Poly {
        Poly { inner: self.inner.sub(&o.inner) }
    }

    fn __mul__(&self, o: &Poly) -> Poly {
        Poly { inner: self.inner.mul(&o.inner) }
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.inner)
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }
}

/// Outcome of an audit.
#[pyclass(frozen, str)]
pub struct AuditReport {
    inner: Report,
}

impl std::fmt::Display for AuditReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.inner.fmt(f)
    }
}

#[pymethods]
impl AuditReport {
    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed()
    }

    /// (check, locus) of each failed entry.
    fn failures(&self) -> Vec<(String, String)> {
        self.inner.failures().map(|e| (e.check.clone(), e.locus.to_string())).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }
}

/// A Z-graded Lie conformal algebra of rank one in each degree.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Algebra {
    inner: AlgebraSpec,
}

#[pymethods]
impl Algebra {
    /// A catalog family: vir, cur-sl2, v, cl1, cl2, scl2, cl3, ecl, m1, m2.
    #[staticmethod]
    #[pyo3(signature = (name, params = None, window = (-6, 6)))]
    fn family(name: &str, params: Option<Vec<(String, String)>>, window: (i64, i64)) -> PyResult<Self> {
        let f: Family = name.parse().map_err(py_err)?;
        let inner = family_spec(f, &self::params(params)?, window).map_err(py_err)?;
        Ok(Algebra { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Algebra { inner: AlgebraSpec::from_json(text).map_err(py_err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    /// The structure polynomial p_{i,j}(∂, λ).
    fn p(&self, i: i64, j: i64) -> Poly {
        Poly { inner: self.inner.p(i, j) }
    }

    fn audit_skew(&self) -> AuditReport {
        AuditReport { inner: audit_skew(&self.inner) }
    }

    fn audit_jacobi(&self, lo: i64, hi: i64) -> AuditReport {
        AuditReport { inner: audit_jacobi(&self.inner, lo, hi) }
    }

    fn audit_additivity(&self, lo: i64, hi: i64) -> PyResult<AuditReport> {
        Ok(AuditReport { inner: audit_additivity(&self.inner, lo, hi).map_err(py_err)? })
    }

    fn audit_degree_bound(&self, lo: i64, hi: i64) -> PyResult<AuditReport> {
        Ok(AuditReport { inner: audit_degree_bound(&self.inner, lo, hi).map_err(py_err)? })
    }

    /// JSON of the basic Lie algebra on `[lo, hi]`.
    fn basic_lie_algebra(&self, lo: i64, hi: i64) -> PyResult<String> {
        Ok(basic_lie_algebra(&self.inner, lo, hi).map_err(py_err)?.to_json().to_string())
    }

    /// JSON of the annihilation algebra truncated at `max_index`.
    fn annihilation_truncation(&self, max_index: u32, lo: i64, hi: i64) -> PyResult<String> {
        let g = annihilation_truncation(&self.inner, max_index, lo, hi).map_err(py_err)?;
        Ok(g.to_json().to_string())
    }

    fn __repr__(&self) -> String {
        format!("Algebra('{}')", self.inner.name())
    }
}

fn seed_of(source: &Bound<'_, PyAny>) -> PyResult<VSeed> {
    if let Ok(a) = source.cast::<Algebra>() {
        return VSeed::from_spec(&a.get().inner).map_err(py_err);
    }
    let text: String = source.extract()?;
    VSeed::from_json(&text).map_err(py_err)
}

/// Classifies a seed (an `Algebra` or seed JSON) and returns the state as JSON.
#[pyfunction]
#[pyo3(signature = (seed, extent = 4))]
fn classify(seed: &Bound<'_, PyAny>, extent: u32) -> PyResult<String> {
    let st = classify_v(&seed_of(seed)?, extent).map_err(py_err)?;
    Ok(st.to_json().to_string())
}

/// Extends a seed to `[-extent, extent]`; returns the table or the certificate as JSON.
#[pyfunction]
#[pyo3(signature = (seed, extent = 4))]
fn extend(seed: &Bound<'_, PyAny>, extent: u32) -> PyResult<String> {
    let out = match extend_v_seed(&seed_of(seed)?, extent).map_err(py_err)? {
        ExtendOutcome::Table(e) => serde_json::json!({ "outcome": "table", "algebra": e.spec.to_json() }),
        ExtendOutcome::Impossible(c) => serde_json::json!({
            "outcome": "impossible",
            "certificate": c.to_json(),
            "checked": c.check(),
        }),
    };
    Ok(out.to_string())
}

#[pymodule]
fn pygradlca(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poly>()?;
    m.add_class::<Algebra>()?;
    m.add_class::<AuditReport>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(extend, m)?)?;
    Ok(())
}
