//! The family `Xi_n` and its rescaling `Xi~_n(x) = Xi_n(sqrt x)`.
//!
//! `Xi_n(x) = C_n (1+x)^(2n-1)/x * B_{2n-1}(-(1-x)/(1+x))` with
//! `C_n = (-1)^(n+1) / (2^(4n-1) (2n-1)!)`. The product
//! `(1+x)^(2n-1) B_{2n-1}(-(1-x)/(1+x))` is the homogenised form
//! `sum_k b_k (x-1)^k (1+x)^(2n-1-k)`, which is expanded exactly in integers.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::eulerb_poly::eulerian_b_int;
use crate::error::{Error, Result};
use crate::hp::Real;
use crate::poly::{ExactPolynomial, IntPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiPolynomial {
    pub n: usize,
    /// `Xi_n` in `x`; only even powers are nonzero.
    pub xi: ExactPolynomial,
    /// `Xi~_n` in `x`, of degree `n - 1`.
    pub xi_tilde: ExactPolynomial,
    /// `C_n`.
    pub scale: BigRational,
}

/// `C_n = (-1)^(n+1) / (2^(4n-1) (2n-1)!)`.
pub fn scale_constant(n: usize) -> BigRational {
    let fact = (1..=2 * n - 1).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
    let den = (BigInt::one() << (4 * n - 1)) * fact;
    let num = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
    BigRational::new(num, den)
}

/// `sum_k b_k (x-1)^k (1+x)^(m-k)` for `B_m = sum_k b_k z^k`.
fn homogenised_expansion(row: &IntPoly) -> Vec<BigInt> {
    let m = row.degree();
    let b = row.coeffs();
    // rows of (1+x)^j
    let mut pascal: Vec<Vec<BigInt>> = Vec::with_capacity(m + 1);
    pascal.push(vec![BigInt::one()]);
    for j in 1..=m {
        let prev = &pascal[j - 1];
        let mut next = vec![BigInt::zero(); j + 1];
        for (i, c) in prev.iter().enumerate() {
            next[i] += c;
            next[i + 1] += c;
        }
        pascal.push(next);
    }
    // Horner in (x-1): acc <- acc*(x-1) + b_k (1+x)^(m-k)
    let mut acc = vec![b[m].clone()];
    for k in (0..m).rev() {
        let mut next = vec![BigInt::zero(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c;
        }
        for (i, c) in pascal[m - k].iter().enumerate() {
            next[i] += &b[k] * c;
        }
        acc = next;
    }
    acc
}

pub fn build_xi(n: usize) -> Result<XiPolynomial> {
    if n == 0 {
        return Err(Error::Domain("Xi_n requires n >= 1".into()));
    }
    let fail = |reason: String| Error::Construction { n, reason };
    let row = eulerian_b_int(2 * n - 1);
    let expanded = homogenised_expansion(&row);
    if !expanded[0].is_zero() {
        return Err(fail(format!("constant term {} does not vanish", expanded[0])));
    }
    let scale = scale_constant(n);
    let xi = ExactPolynomial::new(
        expanded[1..]
            .iter()
            .map(|c| BigRational::from_integer(c.clone()) * &scale)
            .collect(),
    );
    if let Some(k) = xi.coeffs().iter().enumerate().position(|(k, c)| k % 2 == 1 && !c.is_zero()) {
        return Err(fail(format!("odd coefficient at degree {k} is nonzero")));
    }
    let xi_tilde = ExactPolynomial::new(xi.coeffs().iter().step_by(2).cloned().collect());
    if xi_tilde.degree() != n - 1 || xi_tilde.is_zero() {
        return Err(fail(format!("Xi~ has degree {} instead of {}", xi_tilde.degree(), n - 1)));
    }
    Ok(XiPolynomial { n, xi, xi_tilde, scale })
}

impl XiPolynomial {
    /// Exact `Xi~_n'(x) / Xi~_n(x)`.
    pub fn log_derivative_direct(&self, x: &BigRational) -> Result<BigRational> {
        let value = self.xi_tilde.eval(x);
        if value.is_zero() {
            return Err(Error::NearSingularity { distance: "0".into() });
        }
        Ok(self.xi_tilde.derivative().eval(x) / value)
    }

    /// Versioned text form: `xi v1 n=<n>` followed by `<degree> <num>/<den>`
    /// for each nonzero coefficient of `Xi~_n`.
    pub fn to_text(&self) -> String {
        let mut out = format!("xi v1 n={}\n", self.n);
        for (k, c) in self.xi_tilde.coeffs().iter().enumerate() {
            if !c.is_zero() {
                writeln!(out, "{k} {}/{}", c.numer(), c.denom()).unwrap();
            }
        }
        out
    }

    /// Parses [`XiPolynomial::to_text`] output and checks it against a fresh
    /// construction.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
        let n: usize = header
            .strip_prefix("xi v1 n=")
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad n: {e}")))?;
        let mut coeffs: Vec<BigRational> = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let (deg, frac) = line
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("bad line {line:?}")))?;
            let deg: usize = deg.parse().map_err(|e| Error::Parse(format!("bad degree: {e}")))?;
            let (num, den) = frac
                .split_once('/')
                .ok_or_else(|| Error::Parse(format!("bad coefficient {frac:?}")))?;
            let num: BigInt = num.parse().map_err(|e| Error::Parse(format!("{e}")))?;
            let den: BigInt = den.parse().map_err(|e| Error::Parse(format!("{e}")))?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, BigRational::zero());
            }
            coeffs[deg] = BigRational::new(num, den);
        }
        let built = build_xi(n)?;
        if ExactPolynomial::new(coeffs) != built.xi_tilde {
            return Err(Error::Parse(format!("coefficients do not match Xi~_{n}")));
        }
        Ok(built)
    }
}

pub fn log_derivative_direct(n: usize, x: &BigRational) -> Result<BigRational> {
    build_xi(n)?.log_derivative_direct(x)
}

fn horner(coeffs: &[BigInt], y: &Real) -> Real {
    let p = y.precision();
    coeffs
        .iter()
        .rev()
        .fold(Real::zero(p), |acc, c| acc * y + Real::from_bigint(c, p))
}

fn abs_horner(coeffs: &[BigInt], y: &Real) -> Real {
    let y = y.abs();
    let p = y.precision();
    coeffs
        .iter()
        .rev()
        .fold(Real::zero(p), |acc, c| acc * &y + Real::from_bigint(&c.abs(), p))
}

/// Evaluates the closed form
///
/// `(2n-1)/(2 sqrt x (1+sqrt x)) - 1/(2x)
///   - [B_{2n}(y)/B_{2n-1}(y) - ((4n-1)y + 1)] / (4 sqrt x (1 - sqrt x))`
///
/// with `y = -(1 - sqrt x)/(1 + sqrt x)`. The alternating Eulerian sums are
/// evaluated with enough guard bits to absorb their cancellation, then the
/// result is rounded to `prec` bits.
pub fn log_derivative_formula(n: usize, x: &Real, prec: usize) -> Result<Real> {
    if n == 0 {
        return Err(Error::Domain("Xi_n requires n >= 1".into()));
    }
    if !(x.is_positive() && x < &Real::one(x.precision())) {
        return Err(Error::Domain(format!("x = {x:?} is not in (0,1)")));
    }
    let upper = eulerian_b_int(2 * n);
    let lower = eulerian_b_int(2 * n - 1);
    let guard = upper.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0) as usize + 64;
    let w = prec + guard;
    let x = x.with_precision(w);
    let one = Real::one(w);
    let s = x.sqrt();
    let y = -((&one - &s) / (&one + &s));
    let b_lower = horner(lower.coeffs(), &y);
    let b_upper = horner(upper.coeffs(), &y);
    // |B(y)| compared with sum |b_k| |y|^k measures the cancellation.
    let scale = abs_horner(lower.coeffs(), &y);
    if b_lower.is_zero() || b_lower.abs() * Real::one(w).scale_pow2(guard as i32) < scale {
        return Err(Error::DivisionRisk(format!("B_{}(y)", 2 * n - 1)));
    }
    let nn = Real::from_i64(n as i64, w);
    let two = Real::from_i64(2, w);
    let four = Real::from_i64(4, w);
    let first = (&two * &nn - &one) / (&two * &s * (&one + &s));
    let second = (&two * &x).recip();
    let bracket = &b_upper / &b_lower - ((&four * &nn - &one) * &y + &one);
    let third = bracket / (&four * &s * (&one - &s));
    let value = first - second - third;
    // Away from a root the logarithmic derivative is moderate; a value beyond
    // 2^(p/2) means x sits within about 2^(-p/2) of a zero.
    if value.abs() > Real::one(w).scale_pow2((prec / 2) as i32) {
        return Err(Error::NearSingularity {
            distance: format!("2^-{}", prec / 2),
        });
    }
    Ok(value.with_precision(prec))
}

/// True when `p` and its derivative are coprime, i.e. all roots simple.
///
/// Tries the modular certificate first and falls back to the exact integer
/// gcd when it is inconclusive.
pub fn is_squarefree(p: &ExactPolynomial) -> bool {
    let ip = p.primitive_int();
    let d = ip.derivative();
    ip.coprime_mod_prime(&d) || ip.gcd(&d).degree() == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn xi_one_is_constant_quarter() {
        let x = build_xi(1).unwrap();
        assert_eq!(x.xi, ExactPolynomial::constant(q(1, 4)));
        assert_eq!(x.xi_tilde, ExactPolynomial::constant(q(1, 4)));
        assert_eq!(x.scale, q(1, 8));
    }

    #[test]
    fn xi_two_closed_form() {
        let x = build_xi(2).unwrap();
        assert_eq!(x.xi.coeffs(), &[q(5, 96), q(0, 1), q(-6, 96)]);
        assert_eq!(x.xi_tilde.coeffs(), &[q(5, 96), q(-6, 96)]);
    }

    #[test]
    fn degrees_and_parity() {
        for n in 1..=40 {
            let x = build_xi(n).unwrap();
            assert_eq!(x.xi_tilde.degree(), n - 1);
            for (k, c) in x.xi_tilde.coeffs().iter().enumerate() {
                assert_eq!(&x.xi.coeff(2 * k), c);
            }
        }
    }

    #[test]
    fn n_zero_rejected() {
        assert!(build_xi(0).is_err());
    }

    #[test]
    fn direct_log_derivative() {
        assert_eq!(log_derivative_direct(2, &q(1, 2)).unwrap(), q(-3, 1));
        assert_eq!(log_derivative_direct(1, &q(1, 3)).unwrap(), q(0, 1));
        assert!(log_derivative_direct(2, &q(5, 6)).is_err());
    }

    #[test]
    fn formula_matches_direct() {
        let tol = Real::from_f64(1e-30, 128);
        for (n, x) in [(2, q(1, 2)), (1, q(1, 4)), (3, q(1, 2)), (5, q(3, 4))] {
            let f = log_derivative_formula(n, &Real::from_rational(&x, 256), 128).unwrap();
            let d = Real::from_rational(&log_derivative_direct(n, &x).unwrap(), 128);
            assert!((f - d).abs() < tol, "n={n}");
        }
    }

    #[test]
    fn formula_flags_root_adjacency() {
        let root = Real::from_rational(&q(5, 6), 256);
        let r = log_derivative_formula(2, &root, 128);
        assert!(matches!(r, Err(Error::NearSingularity { .. }) | Err(Error::DivisionRisk(_))));
    }

    #[test]
    fn text_round_trip() {
        let x = build_xi(7).unwrap();
        let text = x.to_text();
        assert!(text.starts_with("xi v1 n=7\n"));
        assert_eq!(XiPolynomial::from_text(&text).unwrap(), x);
        assert!(XiPolynomial::from_text("xi v2 n=7\n").is_err());
        assert!(XiPolynomial::from_text("xi v1 n=2\n0 5/96\n1 -1/17\n").is_err());
    }

    #[test]
    fn text_for_n_two() {
        assert_eq!(build_xi(2).unwrap().to_text(), "xi v1 n=2\n0 5/96\n1 -1/16\n");
    }
}
