//! Python bindings. Exact values cross the boundary as `fractions.Fraction`;
//! reports come back as plain dicts.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat, PyInt};
use serde::Serialize;

use p3c_core::atlas::region_report;
use p3c_core::bde::classify_folded as folded;
use p3c_core::cross_ratio::{invariants_at, recover_moduli, CrossRatioSet, RecoveryReport};
use p3c_core::io::{Literal, SurfaceInput};
use p3c_core::locus::closed::all_normalized;
use p3c_core::locus::LocusLabel;
use p3c_core::report::{analyze, AnalyzeOptions};
use p3c_core::scalar::{format_rational, parse_rational, Rational};
use p3c_core::surface::{normal_form_surface, SurfaceJet};

create_exception!(p3c, P3cError, PyValueError);

fn fail(e: impl std::fmt::Display) -> PyErr {
    P3cError::new_err(e.to_string())
}

/// int, float, Fraction or `"p/q"` string to an exact rational.
fn rational(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = if v.is_instance_of::<PyInt>() || v.is_instance_of::<PyFloat>() {
        v.repr()?.to_string()
    } else {
        v.str()?.to_string()
    };
    parse_rational(&text).map_err(|e| fail(format!("not a rational number: {e}")))
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((format_rational(q),))
}

fn to_py<'py, S: Serialize>(py: Python<'py>, v: &S) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(fail)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn literal_table(d: Option<&Bound<'_, PyDict>>) -> PyResult<BTreeMap<String, Literal>> {
    let mut out = BTreeMap::new();
    if let Some(d) = d {
        for (k, v) in d.iter() {
            out.insert(k.str()?.to_string(), Literal::Text(format_rational(&rational(&v)?)));
        }
    }
    Ok(out)
}

/// A surface jet in 4-space at a parabolic point, held with exact coefficients.
#[pyclass(module = "p3c")]
pub struct Surface {
    jet: SurfaceJet<Rational>,
}

#[pymethods]
impl Surface {
    /// Normal form with moduli `alpha`, `beta`.
    #[staticmethod]
    fn normal_form(alpha: &Bound<'_, PyAny>, beta: &Bound<'_, PyAny>) -> PyResult<Self> {
        let jet = normal_form_surface(rational(alpha)?, rational(beta)?, None).map_err(fail)?;
        Ok(Self { jet })
    }

    /// Parabolic chart from `{"32": 1, "44": "-1/2"}`-style tables (`a_ki` multiplies `x^(k-i) y^i`).
    #[staticmethod]
    #[pyo3(signature = (a=None, b=None))]
    fn from_coefficients(a: Option<&Bound<'_, PyDict>>, b: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let input = SurfaceInput { a: literal_table(a)?, b: literal_table(b)?, alpha: None, beta: None };
        Ok(Self { jet: input.surface().map_err(fail)? })
    }

    /// Reads a JSON or TOML surface file.
    #[staticmethod]
    fn read(path: std::path::PathBuf) -> PyResult<Self> {
        let input = SurfaceInput::read(&path).map_err(fail)?;
        Ok(Self { jet: input.surface().map_err(fail)? })
    }

    fn a(&self, py: Python<'_>, k: u8, i: u8) -> PyResult<Py<PyAny>> {
        Ok(fraction(py, &self.jet.a(k, i))?.unbind())
    }

    fn b(&self, py: Python<'_>, k: u8, i: u8) -> PyResult<Py<PyAny>> {
        Ok(fraction(py, &self.jet.b(k, i))?.unbind())
    }

    /// P3(c) test: conditions, modulus and versality.
    fn detect<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = self.jet.detect_p3c().map_err(fail)?;
        let d = PyDict::new(py);
        d.set_item("is_p3c", r.is_p3c)?;
        d.set_item("failure", r.failure.map(|f| f.to_string()))?;
        d.set_item("versal", r.versal)?;
        d.set_item("modulus_c", r.modulus_c.as_ref().map(|c| fraction(py, c)).transpose()?)?;
        Ok(d.into_any())
    }

    /// Full report as a dict; `mode` is `"exact"` or `"float"`.
    #[pyo3(signature = (mode="exact", oracle=true, tol=1e-6))]
    fn analyze<'py>(&self, py: Python<'py>, mode: &str, oracle: bool, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        let opts = AnalyzeOptions { oracle, tol, ..Default::default() };
        let a = match mode {
            "exact" => analyze(&self.jet, &opts),
            "float" => analyze(&self.jet.to_f64(), &opts),
            _ => return Err(fail(format!("unknown mode {mode:?}"))),
        }
        .map_err(fail)?;
        to_py(py, &a.report)
    }

    fn __repr__(&self) -> String {
        match self.jet.normal_form_moduli() {
            Some((a, b)) => format!("Surface(alpha={a}, beta={b})"),
            None => "Surface(<parabolic chart>)".into(),
        }
    }
}

/// The seven quadratic coefficients at normalized `(alpha, beta)`, keyed by locus name.
#[pyfunction]
fn closed_forms<'py>(py: Python<'py>, alpha: &Bound<'py, PyAny>, beta: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let c = all_normalized(&rational(alpha)?, &rational(beta)?).map_err(fail)?;
    let d = PyDict::new(py);
    for (label, v) in LocusLabel::ALL.iter().zip(&c) {
        d.set_item(label.name(), fraction(py, v)?)?;
    }
    Ok(d)
}

/// `(rho1, rho2, rho3, rho4)` at normalized `(alpha, beta)`.
#[pyfunction]
fn invariants<'py>(py: Python<'py>, alpha: &Bound<'py, PyAny>, beta: &Bound<'py, PyAny>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let r = invariants_at(&rational(alpha)?, &rational(beta)?).map_err(fail)?;
    [r.rho1, r.rho2, r.rho3, r.rho4].iter().map(|v| fraction(py, v)).collect()
}

/// Moduli from invariants. `rho4` is only consulted on the degenerate branch.
#[pyfunction]
#[pyo3(signature = (rho1, rho2, rho3, rho4=None))]
fn recover<'py>(
    py: Python<'py>,
    rho1: &Bound<'py, PyAny>,
    rho2: &Bound<'py, PyAny>,
    rho3: &Bound<'py, PyAny>,
    rho4: Option<&Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let set = CrossRatioSet {
        rho1: rational(rho1)?,
        rho2: rational(rho2)?,
        rho3: rational(rho3)?,
        rho4: rho4.map(rational).transpose()?.unwrap_or_default(),
    };
    let rec = recover_moduli(&set).map_err(fail)?;
    let d = PyDict::new(py);
    d.set_item("beta", fraction(py, &rec.beta)?)?;
    d.set_item("alpha", fraction(py, &rec.alpha_selected)?)?;
    let cands = rec.alpha_candidates.iter().map(|a| fraction(py, a)).collect::<PyResult<Vec<_>>>()?;
    d.set_item("alpha_candidates", cands)?;
    d.set_item("branch", to_py(py, &RecoveryReport::new(&set, &rec, false).branch)?)?;
    Ok(d.into_any())
}

/// Folded singularity type at the origin, e.g. `"FoldedFocus"`, with `q` and eigenvalues.
#[pyfunction]
fn classify_folded<'py>(py: Python<'py>, alpha: &Bound<'py, PyAny>, beta: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &folded(&rational(alpha)?, &rational(beta)?))
}

/// Local and multilocal orderings, boundary flags and configuration class.
#[pyfunction]
fn region<'py>(py: Python<'py>, alpha: &Bound<'py, PyAny>, beta: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &region_report(&rational(alpha)?, &rational(beta)?))
}

#[pymodule]
fn p3c(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Surface>()?;
    m.add_function(wrap_pyfunction!(closed_forms, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    m.add_function(wrap_pyfunction!(classify_folded, m)?)?;
    m.add_function(wrap_pyfunction!(region, m)?)?;
    m.add("P3cError", m.py().get_type::<P3cError>())?;
    Ok(())
}
