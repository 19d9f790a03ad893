//! Python bindings. Field elements are integers in `0..q`, polynomials are
//! coefficient lists from the constant term up, and exact rationals come back
//! as strings such as `"7/3"`.

use num_bigint::BigUint;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use rsdist_core::aj::{aj, AjMethod, AjParams};
use rsdist_core::classes::{dist_table_formula, moments_formula, LeadClass};
use rsdist_core::distance::{classify_word, rs_distance};
use rsdist_core::interval::DEFAULT_PRECISION;
use rsdist_core::poly::{EvalSet, Poly};
use rsdist_core::region::{region_check, Branch, RegionParams};
use rsdist_core::scalar::{rational_string, Scalar};
use rsdist_core::verify::{run_all, Scope};
use rsdist_core::{Budget, Error, FieldSpec};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn budget(limit: Option<u128>) -> PyResult<Budget> {
    match limit {
        Some(l) => Budget::new(l).map_err(py_err),
        None => Budget::from_env().map_err(py_err),
    }
}

/// The finite field F_q.
#[pyclass(name = "Field", frozen)]
struct PyField {
    inner: FieldSpec,
}

impl PyField {
    fn elem(&self, a: u64) -> PyResult<u32> {
        self.inner.check(a).map_err(py_err)
    }

    fn set(&self, set: Option<Vec<u64>>) -> PyResult<EvalSet> {
        match set {
            None => Ok(EvalSet::full(&self.inner)),
            Some(s) => {
                let elems = s.into_iter().map(|a| self.elem(a)).collect::<PyResult<_>>()?;
                EvalSet::new(&self.inner, elems).map_err(py_err)
            }
        }
    }

    fn poly(&self, coeffs: &[u64]) -> PyResult<Poly> {
        Poly::from_coeffs(&self.inner, coeffs).map_err(py_err)
    }

    fn word(&self, word: &[u64]) -> PyResult<Vec<u32>> {
        word.iter().map(|&a| self.elem(a)).collect()
    }
}

#[pymethods]
impl PyField {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        Ok(PyField { inner: FieldSpec::with_order(q).map_err(py_err)? })
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    #[getter]
    fn characteristic(&self) -> u32 {
        self.inner.characteristic()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.inner.add(self.elem(a)?, self.elem(b)?))
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.inner.mul(self.elem(a)?, self.elem(b)?))
    }

    fn neg(&self, a: u64) -> PyResult<u32> {
        Ok(self.inner.neg(self.elem(a)?))
    }

    /// Raises ValueError for zero.
    fn inv(&self, a: u64) -> PyResult<u32> {
        self.inner
            .inv(self.elem(a)?)
            .ok_or_else(|| PyValueError::new_err("zero has no inverse"))
    }

    /// Row `N_d(eps, 0..=d)` for the class with leading coefficients `eps`.
    #[pyo3(signature = (eps, d, set=None, budget_limit=None))]
    fn dist_table(&self, eps: Vec<u64>, d: usize, set: Option<Vec<u64>>, budget_limit: Option<u128>) -> PyResult<Vec<BigUint>> {
        let eps = self.word(&eps)?;
        let class = LeadClass::new(&self.inner, eps).map_err(py_err)?;
        let set = self.set(set)?;
        let t = dist_table_formula(&self.inner, &class, d, &set, &budget(budget_limit)?).map_err(py_err)?;
        Ok(t.counts)
    }

    #[pyo3(signature = (word, k, set=None, budget_limit=None))]
    fn distance(&self, word: Vec<u64>, k: usize, set: Option<Vec<u64>>, budget_limit: Option<u128>) -> PyResult<usize> {
        let word = self.word(&word)?;
        let set = self.set(set)?;
        rs_distance(&self.inner, &word, k, &set, &budget(budget_limit)?).map_err(py_err)
    }

    /// Dict with degree, distance and the codeword / deep-hole / ordinary flags.
    #[pyo3(signature = (word, k, set=None, budget_limit=None))]
    fn classify(&self, py: Python<'_>, word: Vec<u64>, k: usize, set: Option<Vec<u64>>, budget_limit: Option<u128>) -> PyResult<Py<PyAny>> {
        let word = self.word(&word)?;
        let set = self.set(set)?;
        let c = classify_word(&self.inner, &word, k, &set, &budget(budget_limit)?).map_err(py_err)?;
        to_py(py, &c)
    }

    /// Falling-factorial moment of the agreement count, as an exact rational string.
    #[pyo3(signature = (f, k, m, set=None, budget_limit=None))]
    fn moment(&self, f: Vec<u64>, k: usize, m: usize, set: Option<Vec<u64>>, budget_limit: Option<u128>) -> PyResult<String> {
        let f = self.poly(&f)?;
        let set = self.set(set)?;
        let r = moments_formula(&self.inner, &f, k, &set, m, &budget(budget_limit)?).map_err(py_err)?;
        Ok(rational_string(&r.value))
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner.order())
    }
}

/// A_j(u, w) with exact rational `u`, `w` given as strings like "5/2".
#[pyfunction]
#[pyo3(signature = (j, p, u, w, method="binsum"))]
fn aj_value(j: usize, p: u64, u: &str, w: &str, method: &str) -> PyResult<String> {
    let method = match method {
        "perm" | "permutation" => AjMethod::Permutation,
        "series" => AjMethod::Series,
        "binsum" => AjMethod::Binsum,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    let params = AjParams::new(j, p, Scalar::parse(u).map_err(py_err)?, Scalar::parse(w).map_err(py_err)?)
        .map_err(py_err)?;
    Ok(aj(&params, method).map_err(py_err)?.to_string())
}

/// A_j at `u = q`, `w = q1/q`; intervals print as `[lo, hi]`.
#[pyfunction]
#[pyo3(signature = (q, ell, j, prec=DEFAULT_PRECISION))]
fn aj_code(q: u64, ell: usize, j: usize, prec: u32) -> PyResult<String> {
    let params = AjParams::from_field(q, ell, j, prec).map_err(py_err)?;
    Ok(aj(&params, AjMethod::Binsum).map_err(py_err)?.to_string())
}

/// Certified check of the ordinary-word region condition; returns the verdict dict.
#[pyfunction]
#[pyo3(signature = (q, k, ell, branch="b", p=None, prec=DEFAULT_PRECISION))]
fn region(py: Python<'_>, q: u64, k: usize, ell: usize, branch: &str, p: Option<u64>, prec: u32) -> PyResult<Py<PyAny>> {
    let branch = match branch {
        "a" | "A" => Branch::A,
        "b" | "B" => Branch::B,
        other => return Err(PyValueError::new_err(format!("branch must be a or b, got {other:?}"))),
    };
    let params = match p {
        Some(p) => RegionParams::with_characteristic(p, q, k, ell),
        None => RegionParams::new(q, k, ell),
    }
    .map_err(py_err)?;
    to_py(py, &region_check(&params, branch, prec).map_err(py_err)?)
}

/// Runs the acceptance criteria; returns one report dict per criterion.
#[pyfunction]
#[pyo3(signature = (desk=true, prec=DEFAULT_PRECISION, budget_limit=None))]
fn verify_all(py: Python<'_>, desk: bool, prec: u32, budget_limit: Option<u128>) -> PyResult<Py<PyAny>> {
    let scope = if desk { Scope::Desk } else { Scope::Full };
    let b = budget(budget_limit)?;
    let reports = py.detach(|| run_all(scope, prec, &b)).map_err(py_err)?;
    to_py(py, &reports)
}

#[pymodule]
fn rsdist(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(aj_value, m)?)?;
    m.add_function(wrap_pyfunction!(aj_code, m)?)?;
    m.add_function(wrap_pyfunction!(region, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
