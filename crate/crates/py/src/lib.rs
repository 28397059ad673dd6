//! Python bindings. Exact rationals cross the boundary as `fractions.Fraction`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sadic_core::dimension::{self, DEFAULT_CYLINDER_GUARD};
use sadic_core::frequency::{classify_with_profile, ClassificationConfig};
use sadic_core::measure::{self, IndependentDigitMeasure};
use sadic_core::source::parse_rational;
use sadic_core::stream::explicit_stream;
use sadic_core::transform::{self, PositionClass};
use sadic_core::{Base, DigitSource, Error, StochasticVector, Verdict};

fn err(e: Error) -> PyErr {
    match e {
        Error::Parameter(_) | Error::Domain(_) | Error::NotInSupport { .. } | Error::Io(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::Contract(_) | Error::Resource(_) => PyRuntimeError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    cls.call1((q.numer().clone(), q.denom().clone()))
}

/// Accepts `Fraction`, `int` or a `"p/q"` string.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    parse_rational(&obj.str()?.to_string()).map_err(err)
}

/// Digits go back to Python as a list of ints rather than `bytes`.
fn list(v: Vec<u8>) -> Vec<u32> {
    v.into_iter().map(u32::from).collect()
}

fn base(s: u32) -> PyResult<Base> {
    Base::new(s).map_err(err)
}

#[pyclass(name = "TransformParams", frozen)]
struct PyTransformParams {
    inner: transform::TransformParams,
}

#[pymethods]
impl PyTransformParams {
    #[new]
    fn new(s: u32, p: u64) -> PyResult<Self> {
        Ok(PyTransformParams { inner: transform::TransformParams::new(s, p).map_err(err)? })
    }

    #[getter]
    fn s(&self) -> u32 {
        self.inner.s()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    fn group_end(&self, k: u64) -> PyResult<BigUint> {
        transform::group_end(&self.inner, k).map_err(err)
    }

    fn upper_checkpoint(&self, k: u64, i: u8) -> PyResult<BigUint> {
        transform::upper_checkpoint(&self.inner, k, i).map_err(err)
    }

    fn lower_checkpoint(&self, k: u64, i: u8) -> PyResult<BigUint> {
        transform::lower_checkpoint(&self.inner, k, i).map_err(err)
    }

    /// `("fixed", digit)` or `("free", source_index)` for position `n >= 1`.
    fn position_class(&self, n: BigUint) -> PyResult<(&'static str, BigUint)> {
        Ok(match transform::position_class(&self.inner, &n).map_err(err)? {
            PositionClass::Fixed(d) => ("fixed", BigUint::from(d)),
            PositionClass::Free(j) => ("free", j),
        })
    }

    /// First `n` digits of `f_p(x)` for the digits `x`.
    #[pyo3(signature = (x, n = None))]
    fn forward(&self, x: Vec<u8>, n: Option<usize>) -> PyResult<Vec<u32>> {
        let stream = explicit_stream(self.inner.base(), x).map_err(err)?;
        let mut z = transform::f(&self.inner, stream).map_err(err)?;
        Ok(list(z.take_prefix(n.unwrap_or(usize::MAX))))
    }

    /// Source digits recovered from `z`; raises `ValueError` off the support.
    fn inverse(&self, z: Vec<u8>) -> PyResult<Vec<u32>> {
        let stream = explicit_stream(self.inner.base(), z).map_err(err)?;
        transform::f_inverse_prefix(&self.inner, stream, usize::MAX).map(list).map_err(err)
    }

    fn subsequence_limits<'py>(&self, py: Python<'py>, i: u8) -> PyResult<Bound<'py, PyDict>> {
        let l = transform::expected_subsequence_limits(&self.inner, i).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("lower", fraction(py, &l.lower)?)?;
        d.set_item("upper", fraction(py, &l.upper)?)?;
        d.set_item("alternative_upper", fraction(py, &l.alternative_upper)?)?;
        Ok(d)
    }

    fn upper_dimension_bound<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &dimension::upper_dimension_bound(&self.inner).map_err(err)?)
    }

    /// `log_s` of the alpha-volume of the `k`-th special covering.
    fn alpha_volume_log<'py>(&self, py: Python<'py>, k: u64, alpha: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let v = dimension::alpha_volume_log(&self.inner, k, &rational(alpha)?).map_err(err)?;
        fraction(py, v.exact_log().expect("covering volumes are exact"))
    }

    /// `(m_k, c_k)`: rank and log-count of the `k`-th special covering.
    fn covering(&self, k: u64) -> PyResult<(BigUint, BigInt)> {
        let c = dimension::covering_report(&self.inner, k).map_err(err)?;
        Ok((c.rank.clone(), c.count_log().to_integer()))
    }

    fn cylinder_count(&self, rank: usize) -> PyResult<u64> {
        let oracle = dimension::SupportOracle::new(&self.inner, rank);
        dimension::cylinder_count_enumerate(&oracle, self.inner.base(), rank, DEFAULT_CYLINDER_GUARD).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("TransformParams(s={}, p={})", self.inner.s(), self.inner.p())
    }
}

/// The measure `mu_p` carried by `S_p`.
#[pyclass(name = "MuP", frozen)]
struct PyMuP {
    inner: IndependentDigitMeasure,
}

#[pymethods]
impl PyMuP {
    #[new]
    fn new(s: u32, p: u64) -> PyResult<Self> {
        let params = transform::TransformParams::new(s, p).map_err(err)?;
        Ok(PyMuP { inner: measure::mu_p(&params) })
    }

    #[pyo3(signature = (n, seed, index = 0))]
    fn sample(&self, n: usize, seed: u64, index: u64) -> PyResult<Vec<u32>> {
        measure::sample_indexed(&self.inner, n, seed, index).map(list).map_err(err)
    }

    /// Lower and upper bounds on `F(t)`.
    #[pyo3(signature = (t, precision = 200))]
    fn cdf<'py>(&self, py: Python<'py>, t: &Bound<'py, PyAny>, precision: usize) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let iv = measure::cdf(&self.inner, &rational(t)?, precision).map_err(err)?;
        Ok((fraction(py, &iv.lower)?, fraction(py, &iv.upper)?))
    }

    /// `[(k, m_k, c_{m_k}, ratio)]` for `k = 1..=horizon`.
    fn entropy_dimension<'py>(&self, py: Python<'py>, horizon: u64) -> PyResult<Vec<(u64, u64, u64, Bound<'py, PyAny>)>> {
        let d = measure::dimension_of_measure(&self.inner, horizon).map_err(err)?;
        d.samples.iter().map(|s| Ok((s.k, s.n, s.coefficient, fraction(py, &s.ratio)?))).collect()
    }
}

#[pyfunction]
fn expand(x: &Bound<'_, PyAny>, s: u32, n: usize) -> PyResult<Vec<u32>> {
    sadic_core::expand(&rational(x)?, base(s)?, n).map(list).map_err(err)
}

#[pyfunction]
fn evaluate_prefix<'py>(py: Python<'py>, digits: Vec<u8>, s: u32) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &sadic_core::evaluate_prefix(&digits, base(s)?).map_err(err)?)
}

/// First `n` digits of a source such as `"champernowne"` or `"transformed:1,zero"`.
#[pyfunction]
#[pyo3(signature = (source, s, n, seed = 0))]
fn digits(source: &str, s: u32, n: usize, seed: u64) -> PyResult<Vec<u32>> {
    let src: DigitSource = source.parse().map_err(err)?;
    Ok(list(src.open(base(s)?, seed).map_err(err)?.take_prefix(n)))
}

/// Classifies a source; returns `{"tag", "set", "counts", "verdicts"}`.
#[pyfunction]
#[pyo3(signature = (source, s, depth = None, seed = 0))]
fn classify<'py>(py: Python<'py>, source: &str, s: u32, depth: Option<u64>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let src: DigitSource = source.parse().map_err(err)?;
    let cfg = depth.map_or_else(ClassificationConfig::default, ClassificationConfig::with_depth);
    let mut stream = src.open(base(s)?, seed).map_err(err)?;
    let (class, profile) = classify_with_profile(&mut stream, &cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("tag", format!("{:?}", class.tag))?;
    d.set_item("set", class.tag.set_name())?;
    d.set_item("counts", profile.counts)?;
    let verdicts: Vec<&str> = class
        .verdicts
        .iter()
        .map(|v| match v {
            Verdict::Converged { .. } => "converged",
            Verdict::Oscillating { .. } => "oscillating",
        })
        .collect();
    d.set_item("verdicts", verdicts)?;
    Ok(d)
}

/// Besicovitch-Eggleston dimension of a frequency vector of Fractions or floats.
#[pyfunction]
fn besicovitch_eggleston(nu: Vec<Bound<'_, PyAny>>, s: u32) -> PyResult<f64> {
    let exact: PyResult<Vec<BigRational>> = nu.iter().map(rational).collect();
    let v = match exact {
        Ok(q) => StochasticVector::exact(q),
        Err(_) => StochasticVector::float(nu.iter().map(|x| x.extract::<f64>()).collect::<PyResult<_>>()?),
    }
    .map_err(err)?;
    Ok(dimension::besicovitch_eggleston(&v, base(s)?).map_err(err)?.numeric)
}

/// `max p/(p+2)` over `p = 1..=pmax`, as a Fraction.
#[pyfunction]
fn g_dimension_sup(py: Python<'_>, pmax: u64) -> PyResult<Bound<'_, PyAny>> {
    let ps: Vec<u64> = (1..=pmax).collect();
    fraction(py, &dimension::g_dimension_sup(&ps).map_err(err)?.sup)
}

#[pymodule]
fn sadic(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTransformParams>()?;
    m.add_class::<PyMuP>()?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_prefix, m)?)?;
    m.add_function(wrap_pyfunction!(digits, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(besicovitch_eggleston, m)?)?;
    m.add_function(wrap_pyfunction!(g_dimension_sup, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
