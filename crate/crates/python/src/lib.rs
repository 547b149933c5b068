//! Python bindings for `klvwb`.

use std::collections::BTreeMap;
use std::sync::Arc;

use klvwb::check::run_suites;
use klvwb::coxeter::{parse_word, CoxElt};
use klvwb::datum::{
    builtin_datum, builtin_names, load_datum, validate_datum, OrbitDatum, ParamId, ValidatedDatum,
};
use klvwb::extcalc::ExtCalculator;
use klvwb::klv::{c_expansion, is_clean, is_cuspidal, klv_table, KlvTable};
use klvwb::laurent::LaurentPoly;
use klvwb::mq::MqElement;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyKeyError, PyValueError};
use pyo3::prelude::*;

create_exception!(pyklvwb, KlvwbError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    KlvwbError::new_err(e.to_string())
}

/// Laurent polynomial in `q` with integer coefficients.
#[pyclass(name = "LaurentPoly", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyLaurentPoly(LaurentPoly);

#[pymethods]
impl PyLaurentPoly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse()
            .map(Self)
            .map_err(|e: klvwb::laurent::LaurentError| PyValueError::new_err(e.to_string()))
    }

    fn bar(&self) -> Self {
        Self(self.0.bar())
    }

    fn coeff(&self, exp: i32) -> String {
        self.0.coeff(exp).to_string()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LaurentPoly('{}')", self.0)
    }
}

/// A validated orbit datum.
#[pyclass(name = "Datum", frozen)]
struct PyDatum(Arc<ValidatedDatum>);

fn validated(d: OrbitDatum) -> PyResult<PyDatum> {
    ValidatedDatum::new(d)
        .map(|v| PyDatum(Arc::new(v)))
        .map_err(|f| err(format!("{f}\n{}", f.report)))
}

impl PyDatum {
    fn datum(&self) -> &OrbitDatum {
        self.0.datum()
    }

    fn param(&self, id: &str) -> PyResult<ParamId> {
        self.datum()
            .find_param(id)
            .ok_or_else(|| PyKeyError::new_err(format!("unknown parameter `{id}`")))
    }

    fn element(&self, word: &str) -> PyResult<CoxElt> {
        let word = parse_word(word).map_err(|e| PyValueError::new_err(e.to_string()))?;
        self.datum()
            .coxeter()
            .from_reduced_word(&word)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn coords(&self, x: &MqElement) -> BTreeMap<String, PyLaurentPoly> {
        x.terms()
            .map(|(p, c)| (self.datum().param(p).id.clone(), PyLaurentPoly(c.clone())))
            .collect()
    }
}

#[pymethods]
impl PyDatum {
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        validated(builtin_datum(name).map_err(err)?)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        validated(load_datum(text).map_err(err)?)
    }

    /// Validation report of an unvalidated JSON datum as `(check, passed, details)`.
    #[staticmethod]
    fn check_json(text: &str) -> PyResult<Vec<(String, bool, Vec<String>)>> {
        let d = load_datum(text).map_err(err)?;
        Ok(validate_datum(&d)
            .checks
            .into_iter()
            .map(|c| (c.name, c.passed, c.details))
            .collect())
    }

    #[getter]
    fn name(&self) -> String {
        self.datum().name().to_string()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.datum().rank()
    }

    fn params(&self) -> Vec<String> {
        self.datum().params().iter().map(|p| p.id.clone()).collect()
    }

    fn dim(&self, id: &str) -> PyResult<u32> {
        Ok(self.datum().dim(self.param(id)?))
    }

    fn to_json(&self) -> String {
        self.datum().to_json()
    }

    /// `T_w m_param` or `C_w m_param`, with `w` given by a reduced word.
    #[pyo3(signature = (param, word, basis = "T"))]
    fn act(
        &self,
        param: &str,
        word: &str,
        basis: &str,
    ) -> PyResult<BTreeMap<String, PyLaurentPoly>> {
        let x = MqElement::basis(self.param(param)?);
        let w = self.element(word)?;
        let y = match basis {
            "T" => self.0.actions().apply_tw(w, &x),
            "C" => self
                .0
                .actions()
                .act_c(self.0.hecke().kl_basis(), w, &x)
                .map_err(err)?,
            _ => return Err(PyValueError::new_err("basis must be 'T' or 'C'")),
        };
        Ok(self.coords(&y))
    }

    fn klv_table(&self) -> PyResult<PyKlvTable> {
        let table = klv_table(&self.0).map_err(err)?;
        Ok(PyKlvTable {
            vd: self.0.clone(),
            table: Arc::new(table),
        })
    }

    /// Runs every check suite; returns `(passed, report text)`.
    #[pyo3(signature = (window = 10))]
    fn check(&self, window: i32) -> PyResult<(bool, String)> {
        let report = run_suites(self.datum().clone(), window).map_err(err)?;
        Ok((report.passed, report.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Datum('{}', {} params)",
            self.datum().name(),
            self.datum().params().len()
        )
    }
}

/// The self-dual basis of a datum and the quantities read off from it.
#[pyclass(name = "KlvTable", frozen)]
struct PyKlvTable {
    vd: Arc<ValidatedDatum>,
    table: Arc<KlvTable>,
}

impl PyKlvTable {
    fn param(&self, id: &str) -> PyResult<ParamId> {
        self.vd
            .datum()
            .find_param(id)
            .ok_or_else(|| PyKeyError::new_err(format!("unknown parameter `{id}`")))
    }
}

#[pymethods]
impl PyKlvTable {
    fn p(&self, gamma: &str, delta: &str) -> PyResult<PyLaurentPoly> {
        Ok(PyLaurentPoly(
            self.table.p(self.param(gamma)?, self.param(delta)?).clone(),
        ))
    }

    /// `L[delta]` in the standard basis.
    fn element(&self, delta: &str) -> PyResult<BTreeMap<String, PyLaurentPoly>> {
        let x = self.table.element(self.param(delta)?);
        Ok(PyDatum(self.vd.clone()).coords(&x))
    }

    /// `(gamma, delta, P)` for every nonzero entry.
    fn rows(&self) -> Vec<(String, String, String)> {
        self.table
            .rows(self.vd.datum())
            .into_iter()
            .map(|r| (r.gamma, r.delta, r.p))
            .collect()
    }

    fn to_csv(&self) -> String {
        self.table.to_csv(self.vd.datum())
    }

    fn is_clean(&self, tau: &str) -> PyResult<bool> {
        Ok(is_clean(&self.table, self.param(tau)?))
    }

    fn is_cuspidal(&self, tau: &str) -> PyResult<bool> {
        Ok(is_cuspidal(&self.vd, &self.table, self.param(tau)?))
    }

    /// Nonzero `c^w_{gamma,tau}`, keyed by `gamma`.
    fn c_expansion(&self, word: &str, tau: &str) -> PyResult<BTreeMap<String, PyLaurentPoly>> {
        let d = PyDatum(self.vd.clone());
        let w = d.element(word)?;
        let c = c_expansion(&self.vd, &self.table, w, self.param(tau)?).map_err(err)?;
        Ok(c.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| (self.vd.datum().params()[g].id.clone(), PyLaurentPoly(c)))
            .collect())
    }

    /// `(series, first_degrees)` of `Ext(L_tau, L_gamma)`.
    #[pyo3(signature = (tau, gamma, window = 10))]
    fn ext(&self, tau: &str, gamma: &str, window: i32) -> PyResult<(String, String)> {
        let calc = ExtCalculator::new(&self.vd, &self.table).map_err(err)?;
        let row = calc
            .ext(self.param(tau)?, self.param(gamma)?)
            .row(self.vd.datum(), window);
        Ok((row.series, row.first_degrees))
    }

    /// `(series, first_degrees)` of the intersection cohomology of `L_tau`.
    #[pyo3(signature = (tau, window = 10))]
    fn ic(&self, tau: &str, window: i32) -> PyResult<(String, String)> {
        let calc = ExtCalculator::new(&self.vd, &self.table).map_err(err)?;
        let row = calc.ic(self.param(tau)?).row(self.vd.datum(), window);
        Ok((row.series, row.first_degrees))
    }
}

#[pyfunction(name = "builtin_names")]
fn py_builtin_names() -> Vec<String> {
    builtin_names()
}

#[pymodule]
fn pyklvwb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("KlvwbError", m.py().get_type::<KlvwbError>())?;
    m.add_class::<PyLaurentPoly>()?;
    m.add_class::<PyDatum>()?;
    m.add_class::<PyKlvTable>()?;
    m.add_function(wrap_pyfunction!(py_builtin_names, m)?)?;
    Ok(())
}
