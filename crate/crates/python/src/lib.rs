//! Python bindings. Exact values cross the boundary as `fractions.Fraction`
//! (or plain `int`), never as floats.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use blowdown_core::cone::{self, LinearForm, PositivityResult};
use blowdown_core::invariants::{self, ManifoldInvariants};
use blowdown_core::lattice::{self, Ambient};
use blowdown_core::plumbing;
use blowdown_core::ratmath::{parse_rational, Rational};
use blowdown_core::report::{self, Scenario};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn form_dict<'py>(py: Python<'py>, f: &LinearForm) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (i, c) in f.coeffs().iter().enumerate() {
        d.set_item(LinearForm::symbol_name(i), fraction(py, c)?)?;
    }
    Ok(d)
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let s: String = obj.str()?.extract()?;
    parse_rational(&s).ok_or_else(|| err(format!("not an exact rational: {s}")))
}

/// A class `c₀·h + Σ cᵢ·eᵢ` in `H₂(CP² # n·CP̄²)`.
#[pyclass(name = "HomologyClass", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyHomologyClass(lattice::HomologyClass);

#[pymethods]
impl PyHomologyClass {
    /// `coeffs = [h, e1, …, en]`.
    #[new]
    fn new(coeffs: Vec<i64>) -> PyResult<Self> {
        if coeffs.is_empty() {
            return Err(err("need at least the h coefficient"));
        }
        let a = Ambient::new(coeffs.len() - 1);
        a.class(coeffs).map(Self).map_err(err)
    }

    #[staticmethod]
    fn canonical(n: usize) -> Self {
        Self(Ambient::new(n).canonical())
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.ambient().n
    }

    #[getter]
    fn coeffs(&self) -> Vec<i64> {
        self.0.coeffs().to_vec()
    }

    fn pair(&self, other: &Self) -> PyResult<i64> {
        self.0.pair(&other.0).map_err(err)
    }

    fn square(&self) -> i64 {
        self.0.square()
    }

    fn is_characteristic(&self) -> bool {
        self.0.is_characteristic()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_add(&other.0).map(Self).map_err(err)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_sub(&other.0).map(Self).map_err(err)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __rmul__(&self, k: i64) -> Self {
        Self(k * &self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("HomologyClass({:?})", self.0.coeffs())
    }
}

fn unwrap_classes(classes: Vec<PyRef<'_, PyHomologyClass>>) -> Vec<lattice::HomologyClass> {
    classes.iter().map(|c| c.0.clone()).collect()
}

/// The linear chain `C_p`, optionally with embedded classes.
#[pyclass(name = "Configuration", frozen)]
struct PyConfiguration(plumbing::Configuration);

#[pymethods]
impl PyConfiguration {
    #[new]
    #[pyo3(signature = (p, classes = None))]
    fn new(p: i64, classes: Option<Vec<PyRef<'_, PyHomologyClass>>>) -> PyResult<Self> {
        let c = plumbing::make_cp(p).map_err(err)?;
        match classes {
            Some(cs) => c.with_embedding(unwrap_classes(cs)).map(Self).map_err(err),
            None => Ok(Self(c)),
        }
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p()
    }

    fn plumbing_matrix<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        matrix(py, self.0.plumbing_matrix())
    }

    fn dual_form<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        matrix(py, self.0.dual_form())
    }

    /// `(n, q)` of the boundary `L(n, q)`.
    fn boundary(&self) -> (i64, i64) {
        let l = self.0.boundary();
        (l.n, l.q)
    }

    /// `None` when the Gram matrix matches, else the first mismatch as
    /// `(row, col, expected, found)` with 1-based indices.
    fn verify_embedding(&self, classes: Vec<PyRef<'_, PyHomologyClass>>) -> PyResult<Option<(usize, usize, i64, i64)>> {
        let check = self.0.verify_embedding(&unwrap_classes(classes)).map_err(err)?;
        Ok(check.mismatch.map(|m| (m.row, m.col, m.expected, m.found)))
    }
}

fn matrix<'py>(py: Python<'py>, m: &blowdown_core::ratmath::Matrix) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(|v| fraction(py, v)).collect())
        .collect()
}

/// `K|C`, `ω|C`, `K·ω`, `K|C·ω|C` and `K_p·ω_p` as coefficient dicts
/// keyed by `a`, `b1`, ….
#[pyfunction]
fn blowdown_pairing<'py>(py: Python<'py>, canonical: &PyHomologyClass, config: &PyConfiguration) -> PyResult<Bound<'py, PyDict>> {
    let bp = cone::blowdown_pairing(&canonical.0, &config.0).map_err(err)?;
    let d = PyDict::new(py);
    let k: Vec<Bound<'py, PyAny>> = bp
        .canonical_restricted
        .coords
        .iter()
        .map(|c| fraction(py, c.constant_term()))
        .collect::<PyResult<_>>()?;
    d.set_item("canonical_restricted", k)?;
    let w: Vec<Bound<'py, PyDict>> = bp.omega_restricted.coords.iter().map(|c| form_dict(py, c)).collect::<PyResult<_>>()?;
    d.set_item("omega_restricted", w)?;
    d.set_item("ambient_term", form_dict(py, &bp.ambient_term)?)?;
    d.set_item("restricted_term", form_dict(py, &bp.restricted_term)?)?;
    d.set_item("result", form_dict(py, &bp.result)?)?;
    d.set_item("result_text", bp.result.factored_string())?;
    Ok(d)
}

/// Decides whether `Σ coeffs[i]·xᵢ > 0` on the symplectic cone of
/// `CP² # n·CP̄²` (`x = (a, b1, …, bn)`). Returns `("Positive", terms)` with
/// the form written as a non-negative combination of the cone constraints,
/// or `("NotPositive", witness)`.
#[pyfunction]
fn certify_positive<'py>(py: Python<'py>, coeffs: Vec<Bound<'py, PyAny>>) -> PyResult<(String, Bound<'py, PyAny>)> {
    if coeffs.len() < 2 {
        return Err(err("need coefficients for a and at least b1"));
    }
    let f = LinearForm::from_coeffs(coeffs.iter().map(to_rational).collect::<PyResult<_>>()?);
    let cone_system = cone::symplectic_cone(coeffs.len() - 1);
    match cone::certify_positive(&f, &cone_system).map_err(err)? {
        PositivityResult::Positive(cert) => {
            if !cert.verify(&f, &cone_system) {
                return Err(err("certificate failed verification"));
            }
            let terms: Vec<(Bound<'py, PyAny>, String)> = cert
                .decomposition(&cone_system)
                .into_iter()
                .map(|(c, g)| Ok((fraction(py, &c)?, g.to_string())))
                .collect::<PyResult<_>>()?;
            Ok(("Positive".into(), terms.into_pyobject(py)?.into_any()))
        }
        PositivityResult::NotPositive { witness } => {
            let w: Vec<Bound<'py, PyAny>> = witness.iter().map(|v| fraction(py, v)).collect::<PyResult<_>>()?;
            Ok(("NotPositive".into(), w.into_pyobject(py)?.into_any()))
        }
    }
}

/// `(b2+, b2-, e, σ, c1²)` together with parity and simple connectivity.
#[pyclass(name = "Invariants", frozen)]
struct PyInvariants(ManifoldInvariants);

#[pymethods]
impl PyInvariants {
    /// `CP² # n·CP̄²`.
    #[staticmethod]
    fn rational_surface(n: u32) -> Self {
        Self(invariants::rational_surface_invariants(n))
    }

    #[getter]
    fn b2plus(&self) -> u32 {
        self.0.b2plus
    }

    #[getter]
    fn b2minus(&self) -> u32 {
        self.0.b2minus
    }

    #[getter]
    fn euler(&self) -> i64 {
        self.0.euler
    }

    #[getter]
    fn signature(&self) -> i64 {
        self.0.signature
    }

    #[getter]
    fn c1sq(&self) -> i64 {
        self.0.c1sq
    }

    #[getter]
    fn simply_connected(&self) -> bool {
        self.0.simply_connected
    }

    fn numeric(&self) -> (u32, u32, i64, i64, i64) {
        self.0.numeric()
    }

    #[pyo3(signature = (p, assume_simply_connected = false))]
    fn rational_blowdown(&self, p: u32, assume_simply_connected: bool) -> PyResult<Self> {
        self.0.rational_blowdown(p, assume_simply_connected).map(Self).map_err(err)
    }

    fn blow_up(&self) -> Self {
        Self(self.0.blow_up())
    }

    fn homeo_type(&self) -> PyResult<String> {
        invariants::homeo_type(&self.0).map(|h| h.to_string()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Invariants{:?}", self.0.numeric())
    }
}

#[pyfunction]
fn sw_dimension(c1sq_of_l: i64, inv: &PyInvariants) -> PyResult<i64> {
    invariants::sw_dimension(c1sq_of_l, &inv.0).map_err(err)
}

#[pyfunction]
fn wall_crossing_delta(d: i64) -> PyResult<i64> {
    invariants::wall_crossing_delta(d).map_err(err)
}

#[pyfunction]
fn kotschick_bound<'py>(py: Python<'py>, inv: &PyInvariants, d: i64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &invariants::kotschick_bound(&inv.0, d))
}

/// JSON report for `main1`, `main2` or `main3`.
#[pyfunction]
fn run_report(which: &str) -> PyResult<String> {
    let r = match which {
        "main1" => report::run_main1(),
        "main2" => report::run_main2(),
        "main3" => report::run_main3(),
        other => return Err(err(format!("unknown report {other}"))),
    };
    r.map(|r| r.to_json()).map_err(err)
}

/// JSON report for scenario file contents.
#[pyfunction]
fn run_scenario(text: &str) -> PyResult<String> {
    let s = Scenario::parse(text).map_err(err)?;
    report::run_scenario(&s).map(|r| r.to_json()).map_err(err)
}

/// JSON summary of `C_p`: `P`, `Q = P⁻¹` and the boundary.
#[pyfunction]
fn plumbing_summary(p: i64) -> PyResult<String> {
    report::plumbing_summary(p).map(|s| s.to_json()).map_err(err)
}

#[pymodule]
fn blowdown(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHomologyClass>()?;
    m.add_class::<PyConfiguration>()?;
    m.add_class::<PyInvariants>()?;
    m.add_function(wrap_pyfunction!(blowdown_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(certify_positive, m)?)?;
    m.add_function(wrap_pyfunction!(sw_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(wall_crossing_delta, m)?)?;
    m.add_function(wrap_pyfunction!(kotschick_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run_report, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(plumbing_summary, m)?)?;
    Ok(())
}
