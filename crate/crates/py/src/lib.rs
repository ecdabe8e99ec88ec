//! Python bindings: polynomials, ideals and the main invariant computations.

use curvemoduli_core::branches::{self, Branch, DeltaOutcome, Parametrization};
use curvemoduli_core::deform::{flatness_direct, is_family_first_order, FirstOrderDeformation};
use curvemoduli_core::idealcalc::{self, IdealPresentation};
use curvemoduli_core::motivic::{self, MeasureContext, MotivicClass};
use curvemoduli_core::trunctower;
use curvemoduli_core::{FieldSpec, Scalar, TruncatedPoly};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(curvemoduli, SoftFailure, PyRuntimeError, "Not decided at this level; retry higher.");

fn err(e: curvemoduli_core::Error) -> PyErr {
    if e.is_soft() {
        SoftFailure::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn field(text: &str) -> PyResult<FieldSpec> {
    FieldSpec::parse(text).map_err(err)
}

fn fraction<'py>(py: Python<'py>, x: &Scalar) -> PyResult<Bound<'py, PyAny>> {
    let frac = py.import("fractions")?.getattr("Fraction")?;
    frac.call1((x.numer().clone(), x.denom().clone()))
}

/// Power series truncated modulo `M^level`.
#[pyclass(name = "Poly", module = "curvemoduli", frozen)]
struct PyPoly {
    inner: TruncatedPoly,
}

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (text, nvars, field = "Q", level = 8))]
    fn new(text: &str, nvars: usize, field: &str, level: u32) -> PyResult<Self> {
        let f = self::field(field)?;
        Ok(PyPoly { inner: TruncatedPoly::parse(text, nvars, f, level).map_err(err)? })
    }

    #[getter]
    fn level(&self) -> u32 {
        self.inner.level()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    /// Order (lowest degree), or None for zero.
    fn order(&self) -> Option<u32> {
        self.inner.order()
    }

    fn initial_form(&self) -> PyResult<Self> {
        Ok(PyPoly { inner: self.inner.initial_form().map_err(err)? })
    }

    fn truncate(&self, level: u32) -> PyResult<Self> {
        Ok(PyPoly { inner: self.inner.truncate(level).map_err(err)? })
    }

    fn __add__(&self, o: &Self) -> PyResult<Self> {
        Ok(PyPoly { inner: self.inner.add(&o.inner).map_err(err)? })
    }

    fn __sub__(&self, o: &Self) -> PyResult<Self> {
        Ok(PyPoly { inner: self.inner.sub(&o.inner).map_err(err)? })
    }

    fn __mul__(&self, o: &Self) -> PyResult<Self> {
        Ok(PyPoly { inner: self.inner.mul_trunc(&o.inner).map_err(err)? })
    }

    fn __neg__(&self) -> Self {
        PyPoly { inner: self.inner.neg() }
    }

    fn __eq__(&self, o: &Self) -> bool {
        self.inner == o.inner
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}', nvars={}, level={})", self.inner, self.inner.nvars(), self.inner.level())
    }
}

/// Hilbert-Samuel data `H^1(t)` for `t < level`.
#[pyclass(name = "HilbertData", module = "curvemoduli", frozen)]
struct PyHilbertData {
    inner: idealcalc::HilbertData,
}

#[pymethods]
impl PyHilbertData {
    #[getter]
    fn values(&self) -> Vec<u64> {
        self.inner.values.clone()
    }

    #[getter]
    fn graded(&self) -> Vec<i64> {
        self.inner.graded.clone()
    }

    #[getter]
    fn e0(&self) -> Option<i64> {
        self.inner.e0
    }

    #[getter]
    fn e1(&self) -> Option<i64> {
        self.inner.e1
    }

    #[getter]
    fn stable(&self) -> bool {
        self.inner.is_stable()
    }

    #[getter]
    fn polynomial(&self) -> Option<String> {
        self.inner.polynomial_forms().map(|p| p.0)
    }

    fn __repr__(&self) -> String {
        format!("HilbertData(values={:?}, e0={:?}, e1={:?})", self.inner.values, self.inner.e0, self.inner.e1)
    }
}

/// Ideal `(I + M^level)/M^level` given by generators.
#[pyclass(name = "Ideal", module = "curvemoduli", frozen)]
struct PyIdeal {
    inner: IdealPresentation,
}

#[pymethods]
impl PyIdeal {
    #[new]
    #[pyo3(signature = (generators, nvars, field = "Q", level = 8))]
    fn new(generators: Vec<String>, nvars: usize, field: &str, level: u32) -> PyResult<Self> {
        let f = self::field(field)?;
        Ok(PyIdeal { inner: IdealPresentation::parse(&generators, nvars, f, level).map_err(err)? })
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.to_strings()
    }

    #[getter]
    fn level(&self) -> u32 {
        self.inner.level()
    }

    fn hilbert(&self) -> PyResult<PyHilbertData> {
        let inner = idealcalc::hilbert_data(&self.inner, self.inner.level()).map_err(err)?;
        Ok(PyHilbertData { inner })
    }

    /// Minimal generators of the initial ideal (tangent cone).
    fn initial(&self) -> PyResult<Vec<String>> {
        let d = idealcalc::initial_ideal(&self.inner, self.inner.level()).map_err(err)?;
        Ok(d.generators.iter().map(ToString::to_string).collect())
    }

    fn is_standard_basis(&self) -> PyResult<bool> {
        Ok(idealcalc::standard_basis_check(&self.inner, self.inner.level()).map_err(err)?.is_standard)
    }

    fn contains(&self, f: &PyPoly) -> PyResult<bool> {
        let spans = idealcalc::ideal_spans(&self.inner, self.inner.level()).map_err(err)?;
        Ok(spans.contains(&f.inner.with_level(self.inner.level())))
    }

    /// Truncation-set membership at level `n` (defaults to the ideal's level).
    #[pyo3(signature = (e0, n = None))]
    fn tn_member(&self, e0: u64, n: Option<u32>) -> PyResult<bool> {
        let n = n.unwrap_or(self.inner.level());
        Ok(trunctower::tn_membership(&self.inner, n, e0).map_err(err)?.is_member())
    }

    fn __repr__(&self) -> String {
        format!("Ideal({:?}, level={})", self.inner.to_strings(), self.inner.level())
    }
}

/// `(rho0, rho1)` bounding e1 for embedding dimension `b` and multiplicity `e0`.
#[pyfunction]
fn admissible_range(b: u64, e0: u64) -> PyResult<(i64, i64)> {
    let r = trunctower::admissible_range(b, e0).map_err(err)?;
    Ok((r.rho0, r.rho1))
}

/// Gaps, delta, conductor and Milnor number of a numerical semigroup.
#[pyfunction]
fn semigroup<'py>(py: Python<'py>, gens: Vec<u64>) -> PyResult<Bound<'py, PyDict>> {
    let s = branches::semigroup(&gens, None).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("gaps", s.gaps)?;
    d.set_item("delta", s.delta)?;
    d.set_item("conductor", s.conductor)?;
    d.set_item("multiplicity", s.multiplicity)?;
    d.set_item("mu", branches::milnor(s.delta, 1).map_err(err)?)?;
    Ok(d)
}

fn parametrization(branch_list: &[Vec<String>], precision: Option<u32>, n: u32, field: &str) -> PyResult<Parametrization> {
    let f = self::field(field)?;
    let probe: Vec<Branch> = branch_list.iter().map(|b| Branch::parse(b, 1024, f)).collect::<Result<_, _>>().map_err(err)?;
    let p = Parametrization::new(probe).map_err(err)?;
    let m = precision.unwrap_or_else(|| p.required_precision(n));
    Ok(p.with_precision(m))
}

/// Hilbert data of the curve parametrized by `branches` (each a list of components in t).
#[pyfunction]
#[pyo3(signature = (branches, n, precision = None, field = "Q"))]
fn param_hilbert(branches: Vec<Vec<String>>, n: u32, precision: Option<u32>, field: &str) -> PyResult<PyHilbertData> {
    let p = parametrization(&branches, precision, n, field)?;
    Ok(PyHilbertData { inner: branches::hilbert_from_param(&p, n).map_err(err)? })
}

/// Delta invariant from a parametrization; None when the precision is too low to decide.
#[pyfunction]
#[pyo3(signature = (branches, precision, field = "Q"))]
fn param_delta(branches: Vec<Vec<String>>, precision: u32, field: &str) -> PyResult<Option<u64>> {
    let p = parametrization(&branches, Some(precision), 1, field)?;
    Ok(match branches::delta_param(&p).map_err(err)? {
        DeltaOutcome::Computed { delta } => Some(delta),
        DeltaOutcome::Unsupported { .. } => None,
    })
}

/// First-order deformation `f_i + eps g_i`: `(colon criterion, direct flatness)`.
#[pyfunction]
#[pyo3(signature = (base, perturbations, nvars, e0, field = "Q"))]
fn deform_check(base: Vec<String>, perturbations: Vec<String>, nvars: usize, e0: u64, field: &str) -> PyResult<(bool, bool)> {
    let f = self::field(field)?;
    let d = FirstOrderDeformation::parse(&base, &perturbations, nvars, f, e0 as u32 + 3).map_err(err)?;
    let fam = is_family_first_order(&d, e0).map_err(err)?.is_family;
    let flat = flatness_direct(&d, e0 as u32 + 1).map_err(err)?.flat;
    Ok((fam, flat))
}

/// Number of points of the truncation set over F_q.
#[pyfunction]
fn enumerate_count(nvars: usize, e0: u64, n: u32, q: u64) -> PyResult<usize> {
    let f = FieldSpec::prime(q).map_err(err)?;
    Ok(trunctower::enumerate_xi(nvars, e0, n, f).map_err(err)?.count)
}

/// Coefficients `T^0..=T^terms` of the closed-form motivic series, as strings in L.
#[pyfunction]
#[pyo3(signature = (class0, n0, nvars, e0, terms = 10))]
fn mps_expand(class0: &str, n0: u32, nvars: u32, e0: u32, terms: usize) -> PyResult<Vec<String>> {
    let ctx = MeasureContext::new(nvars, e0).map_err(err)?;
    let c = MotivicClass::parse(class0).map_err(err)?;
    let s = motivic::mps(&c, n0, &ctx).map_err(err)?;
    Ok(s.expand(terms).iter().map(ToString::to_string).collect())
}

/// Point-count realization of a class at `L = q`, as a `fractions.Fraction`.
#[pyfunction]
fn specialize<'py>(py: Python<'py>, class: &str, q: u64) -> PyResult<Bound<'py, PyAny>> {
    let v = MotivicClass::parse(class).and_then(|c| c.specialize(q)).map_err(err)?;
    fraction(py, &v)
}

/// Integer coefficients of a class, keyed by the exponent of L.
#[pyfunction]
fn class_terms(class: &str) -> PyResult<Vec<(i64, BigInt)>> {
    let c = MotivicClass::parse(class).map_err(err)?;
    Ok(c.terms().iter().map(|(k, v)| (*k, v.clone())).collect())
}

#[pymodule]
fn curvemoduli(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_class::<PyIdeal>()?;
    m.add_class::<PyHilbertData>()?;
    m.add("SoftFailure", m.py().get_type::<SoftFailure>())?;
    m.add_function(wrap_pyfunction!(admissible_range, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup, m)?)?;
    m.add_function(wrap_pyfunction!(param_hilbert, m)?)?;
    m.add_function(wrap_pyfunction!(param_delta, m)?)?;
    m.add_function(wrap_pyfunction!(deform_check, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_count, m)?)?;
    m.add_function(wrap_pyfunction!(mps_expand, m)?)?;
    m.add_function(wrap_pyfunction!(specialize, m)?)?;
    m.add_function(wrap_pyfunction!(class_terms, m)?)?;
    Ok(())
}
