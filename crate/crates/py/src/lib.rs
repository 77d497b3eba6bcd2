//! Python bindings: polynomial construction, refined zeros, the limit law and
//! the verification report.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::xizero::asymptotics;
use ::xizero::hp::{f64_to_rational, format_significant, Complex, Real};
use ::xizero::limitlaw::LimitLawContext;
use ::xizero::verify::{run_verify, VerifyConfig};
use ::xizero::zeros::{self, parse_decimal};
use ::xizero::{eulerb_poly, xi_family, Error};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn eps_or_default(eps: Option<&str>) -> PyResult<BigRational> {
    match eps {
        Some(s) => parse_decimal(s).map_err(py_err),
        None => Ok(zeros::default_eps()),
    }
}

fn rational(x: f64) -> PyResult<BigRational> {
    if x.is_finite() {
        Ok(f64_to_rational(x))
    } else {
        Err(PyValueError::new_err(format!("{x} is not finite")))
    }
}

/// Coefficients of the type-B Eulerian polynomial `B_m`, constant term first.
#[pyfunction]
fn eulerian_b(m: usize) -> Vec<BigInt> {
    eulerb_poly::eulerian_b_int(m).coeffs().to_vec()
}

/// Exact check of `sum_k (2k+1)^m x^k = B_m(x)/(1-x)^(m+1)`.
#[pyfunction]
fn series_identity(m: usize) -> bool {
    eulerb_poly::series_identity_check(m)
}

/// The rescaled polynomial `Xi~_n` with exact rational coefficients.
#[pyclass(name = "XiPolynomial", module = "xizero", frozen)]
struct PyXi {
    inner: xi_family::XiPolynomial,
}

#[pymethods]
impl PyXi {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: xi_family::build_xi(n).map_err(py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.xi_tilde.degree()
    }

    /// `(numerator, denominator)` pairs, constant term first.
    fn coefficients(&self) -> Vec<(BigInt, BigInt)> {
        self.inner
            .xi_tilde
            .coeffs()
            .iter()
            .map(|c| (c.numer().clone(), c.denom().clone()))
            .collect()
    }

    /// Exact value at `num/den` as a `(numerator, denominator)` pair.
    fn eval(&self, num: BigInt, den: BigInt) -> PyResult<(BigInt, BigInt)> {
        if den == BigInt::from(0) {
            return Err(PyValueError::new_err("zero denominator"));
        }
        let v = self.inner.xi_tilde.eval(&BigRational::new(num, den));
        Ok((v.numer().clone(), v.denom().clone()))
    }

    fn is_squarefree(&self) -> bool {
        xi_family::is_squarefree(&self.inner.xi_tilde)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("XiPolynomial(n={})", self.inner.n)
    }
}

/// Uniform measure on the refined zeros of `Xi~_n` in `(0,1)`.
#[pyclass(name = "EmpiricalMeasure", module = "xizero", frozen)]
struct PyMeasure {
    inner: zeros::EmpiricalMeasure,
}

#[pymethods]
impl PyMeasure {
    /// `eps` is a decimal string such as `"1e-30"`.
    #[new]
    #[pyo3(signature = (n, eps=None))]
    fn new(py: Python<'_>, n: usize, eps: Option<&str>) -> PyResult<Self> {
        let eps = eps_or_default(eps)?;
        let inner = py
            .detach(|| zeros::EmpiricalMeasure::compute(n, &eps))
            .map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    fn __len__(&self) -> usize {
        self.inner.mass()
    }

    fn roots(&self) -> Vec<f64> {
        self.inner.roots.iter().map(|r| r.to_f64()).collect()
    }

    /// Root midpoints as decimal strings with `digits` significant digits.
    #[pyo3(signature = (digits=40))]
    fn roots_decimal(&self, digits: usize) -> Vec<String> {
        self.inner
            .roots
            .iter()
            .map(|r| format_significant(&r.midpoint, digits))
            .collect()
    }

    fn cdf(&self, x: f64) -> f64 {
        self.inner.cdf_f64(x)
    }

    /// Roots whose refinement had to go past the nominal tolerance.
    fn escalated(&self) -> usize {
        self.inner.escalated()
    }

    #[pyo3(signature = (precision_bits=128))]
    fn ks_distance(&self, precision_bits: usize) -> PyResult<f64> {
        let ctx = LimitLawContext::new(precision_bits).map_err(py_err)?;
        Ok(asymptotics::ks_distance(&self.inner, &ctx).to_f64())
    }

    #[pyo3(signature = (z, precision_bits=128))]
    fn stieltjes(&self, z: Complex64, precision_bits: usize) -> PyResult<Complex64> {
        let ctx = LimitLawContext::new(precision_bits).map_err(py_err)?;
        let z = Complex::from_f64(z.re, z.im, precision_bits);
        Ok(ctx.stieltjes_empirical(&self.inner, &z).map_err(py_err)?.to_f64())
    }

    /// `x_1 n^2` for the smallest root.
    fn left_edge(&self) -> PyResult<f64> {
        Ok(asymptotics::left_edge_scaling(&self.inner, 1, 128).map_err(py_err)?.to_f64())
    }

    /// `L(x_{n-1}) / (2n)` for the largest root.
    #[pyo3(signature = (precision_bits=128))]
    fn right_edge(&self, precision_bits: usize) -> PyResult<f64> {
        let ctx = LimitLawContext::new(precision_bits).map_err(py_err)?;
        Ok(asymptotics::right_edge_scaling(&self.inner, &ctx).map_err(py_err)?.value.to_f64())
    }

    fn __repr__(&self) -> String {
        format!("EmpiricalMeasure(n={}, roots={})", self.inner.n, self.inner.mass())
    }
}

/// Limiting zero distribution evaluated at a fixed working precision.
#[pyclass(name = "LimitLaw", module = "xizero", frozen)]
struct PyLimitLaw {
    ctx: LimitLawContext,
}

impl PyLimitLaw {
    fn r(&self, x: f64) -> Real {
        Real::from_f64(x, self.ctx.precision_bits())
    }
}

#[pymethods]
impl PyLimitLaw {
    #[new]
    #[pyo3(signature = (precision_bits=128))]
    fn new(precision_bits: usize) -> PyResult<Self> {
        Ok(Self {
            ctx: LimitLawContext::new(precision_bits).map_err(py_err)?,
        })
    }

    #[getter]
    fn precision_bits(&self) -> usize {
        self.ctx.precision_bits()
    }

    fn density(&self, x: f64) -> PyResult<f64> {
        Ok(self.ctx.density(&self.r(x)).map_err(py_err)?.to_f64())
    }

    fn cdf(&self, x: f64) -> f64 {
        self.ctx.cdf(&self.r(x)).to_f64()
    }

    fn quantile(&self, p: f64) -> PyResult<f64> {
        Ok(self.ctx.quantile(&self.r(p)).map_err(py_err)?.to_f64())
    }

    /// `F(x)` as a decimal string, for `x` given exactly as a float.
    #[pyo3(signature = (x, digits=30))]
    fn cdf_decimal(&self, x: f64, digits: usize) -> PyResult<String> {
        Ok(self.ctx.cdf_rational(&rational(x)?).to_decimal(digits))
    }

    fn stieltjes(&self, z: Complex64) -> PyResult<Complex64> {
        let z = Complex::from_f64(z.re, z.im, self.ctx.precision_bits());
        Ok(self.ctx.stieltjes_limit(&z).map_err(py_err)?.to_f64())
    }

    fn inversion_density(&self, x: f64, eps: f64) -> PyResult<f64> {
        Ok(self
            .ctx
            .inversion_density(&self.r(x), &self.r(eps))
            .map_err(py_err)?
            .to_f64())
    }
}

/// `(1/m) S_{m+1}(x)/S_m(x)` and its certified error bound.
#[pyfunction]
#[pyo3(signature = (m, x, precision_bits=128))]
fn s_ratio(m: usize, x: f64, precision_bits: usize) -> PyResult<(f64, f64)> {
    let est = asymptotics::s_ratio(m, &rational(x)?, precision_bits).map_err(py_err)?;
    Ok((est.value.to_f64(), est.error_bound.to_f64()))
}

/// `(1/m) B_{m+1}(x)/B_m(x)`.
#[pyfunction]
#[pyo3(signature = (m, x, precision_bits=128))]
fn b_ratio(m: usize, x: f64, precision_bits: usize) -> PyResult<f64> {
    Ok(asymptotics::b_ratio(m, &rational(x)?, precision_bits).map_err(py_err)?.to_f64())
}

/// Runs the invariant suite; returns `(report_text, passed)`.
#[pyfunction]
#[pyo3(signature = (n_list=None, eps=None, precision_bits=128))]
fn verify(py: Python<'_>, n_list: Option<Vec<usize>>, eps: Option<&str>, precision_bits: usize) -> PyResult<(String, bool)> {
    let mut n_list = n_list.unwrap_or_else(|| VerifyConfig::default().n_list);
    n_list.sort_unstable();
    n_list.dedup();
    let cfg = VerifyConfig {
        n_list,
        eps: eps_or_default(eps)?,
        precision_bits,
    };
    let report = py.detach(|| run_verify(&cfg)).map_err(py_err)?;
    Ok((report.render(), report.passed()))
}

#[pymodule]
fn xizero(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(eulerian_b, m)?)?;
    m.add_function(wrap_pyfunction!(series_identity, m)?)?;
    m.add_function(wrap_pyfunction!(s_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(b_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_class::<PyXi>()?;
    m.add_class::<PyMeasure>()?;
    m.add_class::<PyLimitLaw>()?;
    Ok(())
}
