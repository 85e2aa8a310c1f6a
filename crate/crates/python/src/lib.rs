//! Python bindings. Rationals cross the boundary as canonical `"p/q"` strings,
//! streams as `"DIGITS~d"` strings.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use conreal::bar::{bar_uniform_bound, hitting_time, BarFunction, DecidableBar};
use conreal::code::{code_eval, code_locate, code_uc_witness, code_validate, Progress, SharedCode};
use conreal::real::eq_at;
use conreal::spread::{path_of_real, phi, rho};
use conreal::{BinaryStream, BinaryWord, Error, RegularReal, TernaryStream};

create_exception!(conreal, CapExceeded, PyRuntimeError);
create_exception!(conreal, InvariantViolation, PyRuntimeError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => CapExceeded::new_err(e.to_string()),
        Error::InvariantViolation(_) => InvariantViolation::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for conreal::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

type ValidateResult = (Vec<(String, Vec<String>)>, Vec<bool>);

/// A regular real.
#[pyclass(name = "Real", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyReal(RegularReal);

#[pymethods]
impl PyReal {
    /// `const:p/q`, `dyadic:p/q`, `kappa:BITS`, `phi:DIGITS[~d]` or `p/q`.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        conreal::cli::parse_real(spec).map(PyReal).py()
    }

    /// A rational within `2^-k`, as `"p/q"`.
    fn approx(&self, k: usize) -> PyResult<String> {
        Ok(self.0.approx(k).py()?.to_string())
    }

    fn term(&self, n: usize) -> PyResult<String> {
        Ok(self.0.term(n).py()?.to_string())
    }

    fn __add__(&self, other: &PyReal) -> PyReal {
        PyReal(self.0.add(&other.0))
    }

    fn __sub__(&self, other: &PyReal) -> PyReal {
        PyReal(self.0.sub(&other.0))
    }

    fn __neg__(&self) -> PyReal {
        PyReal(self.0.neg())
    }

    fn __abs__(&self) -> PyReal {
        PyReal(self.0.abs())
    }

    fn eq_at(&self, other: &PyReal, depth: usize) -> PyResult<bool> {
        eq_at(&self.0, &other.0, depth).py()
    }

    /// The first `digits` digits of the spread path of this real.
    fn path(&self, digits: usize) -> PyResult<String> {
        path_of_real(&self.0).to_string_prefix(digits).py()
    }
}

#[pyfunction]
#[pyo3(name = "phi")]
fn py_phi(path: &str) -> PyResult<PyReal> {
    Ok(PyReal(phi(&TernaryStream::parse(path).py()?)))
}

#[pyfunction]
#[pyo3(name = "rho")]
fn py_rho(path: &str, digits: usize) -> PyResult<String> {
    rho(&TernaryStream::parse(path).py()?).to_string_prefix(digits).py()
}

#[pyfunction]
#[pyo3(name = "kappa")]
fn py_kappa(bits: &str) -> PyResult<PyReal> {
    Ok(PyReal(conreal::cantor::kappa(&BinaryStream::parse(bits).py()?)))
}

#[pyfunction]
#[pyo3(name = "gamma")]
fn py_gamma(path: &str, digits: usize) -> PyResult<String> {
    conreal::cantor::gamma(&TernaryStream::parse(path).py()?).to_string_prefix(digits).py()
}

#[pyfunction]
fn cantor_interval(word: &str) -> PyResult<(String, String)> {
    let w: BinaryWord = word.parse().py()?;
    let i = conreal::cantor::cantor_interval(&w);
    Ok((i.lo().to_string(), i.hi().to_string()))
}

/// A bar generated by a list of binary words, one per line.
#[pyclass(name = "Bar", frozen)]
struct PyBar(BarFunction);

#[pymethods]
impl PyBar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyBar(BarFunction::new(DecidableBar::parse(text).py()?)))
    }

    fn eval(&self, x: &PyReal) -> PyResult<PyReal> {
        self.0.eval(&x.0).map(PyReal).py()
    }

    fn hitting(&self, bits: &str) -> PyResult<usize> {
        hitting_time(self.0.bar(), &BinaryStream::parse(bits).py()?, conreal::search_cap()).py()
    }

    fn bound(&self, cap: usize) -> PyResult<usize> {
        bar_uniform_bound(self.0.bar(), cap).py()
    }
}

/// A code: `builtin:identity`, `builtin:const:p/q`, `builtin:affine:a/b:c/d`,
/// `builtin:slow-zero` or `file:PATH`.
#[pyclass(name = "Code", frozen)]
struct PyCode(SharedCode);

#[pymethods]
impl PyCode {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        conreal::cli::parse_code(spec).map(PyCode).py()
    }

    /// `(violations, progress)`: violation tags with witness words, and one flag per `k <= kmax`.
    fn validate(&self, depth: usize, kmax: usize) -> PyResult<ValidateResult> {
        let r = code_validate(self.0.as_ref(), depth, kmax).py()?;
        let violations = r.violations.iter().map(|v| (format!("{:?}", v.rule), v.words.iter().map(|w| w.to_string()).collect())).collect();
        Ok((violations, r.progress.iter().map(|p| *p == Progress::Verified).collect()))
    }

    fn eval(&self, x: &PyReal) -> PyReal {
        PyReal(code_eval(&self.0, &x.0))
    }

    fn locate(&self, k: usize, path: &str, cap: usize) -> PyResult<usize> {
        code_locate(self.0.as_ref(), k, &TernaryStream::parse(path).py()?, cap).py()
    }

    fn uc_witness(&self, kmax: usize, cap: usize) -> PyResult<Vec<usize>> {
        code_uc_witness(&Arc::clone(&self.0), kmax, cap).py()?.prefix(kmax + 1).py()
    }
}

/// Runs the command line with `args` (without the program name).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    conreal::cli::run(std::iter::once("conreal".to_string()).chain(args))
}

#[pymodule]
#[pyo3(name = "conreal")]
fn conreal_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyReal>()?;
    m.add_class::<PyBar>()?;
    m.add_class::<PyCode>()?;
    m.add_function(wrap_pyfunction!(py_phi, m)?)?;
    m.add_function(wrap_pyfunction!(py_rho, m)?)?;
    m.add_function(wrap_pyfunction!(py_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(py_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(cantor_interval, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("CapExceeded", m.py().get_type::<CapExceeded>())?;
    m.add("InvariantViolation", m.py().get_type::<InvariantViolation>())?;
    Ok(())
}
