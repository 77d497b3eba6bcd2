//! Dense univariate polynomials with exact coefficients.
//!
//! [`ExactPolynomial`] carries arbitrary-precision rational coefficients and
//! is the public currency of the crate. [`IntPoly`] is its integer
//! counterpart, used wherever a primitive integer representative is enough
//! (Sturm chains, GCDs, sign evaluation), because it avoids the repeated
//! normalisation cost of rational arithmetic.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial over Q; `coeffs[k]` multiplies `x^k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactPolynomial {
    coeffs: Vec<BigRational>,
}

impl ExactPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `x - root`.
    pub fn linear_root(root: BigRational) -> Self {
        Self::new(vec![-root, BigRational::one()])
    }

    pub fn from_integers<I: IntoIterator<Item = BigInt>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Exact value at `x`, through one integer homogeneous evaluation over the
    /// common denominator of the coefficients.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let common = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&common / c.denom()))
            .collect();
        let value = IntPoly::new(ints).eval_homogeneous(x.numer(), x.denom());
        BigRational::new(value, common * num_traits::pow(x.denom().clone(), self.degree()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Positive rational multiple with coprime integer coefficients.
    pub fn primitive_int(&self) -> IntPoly {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect(),
        )
        .primitive()
    }

    /// Monic greatest common divisor over Q.
    pub fn gcd(&self, other: &Self) -> Self {
        let g = self.primitive_int().gcd(&other.primitive_int());
        let p = g.to_exact();
        match p.leading() {
            Some(lc) => {
                let inv = lc.recip();
                p.scale(&inv)
            }
            None => p,
        }
    }
}

impl fmt::Debug for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Dense polynomial over Z.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn to_exact(&self) -> ExactPolynomial {
        ExactPolynomial::from_integers(self.coeffs.iter().cloned())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the (positive) content; sign and roots are unchanged.
    pub fn primitive(self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self;
        }
        Self::new(self.coeffs.into_iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "pseudo-division by zero polynomial");
        let dd = divisor.degree();
        let lc = divisor.leading().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return self.clone();
        }
        let steps = r.len() - dd;
        for step in 0..steps {
            let top = r.len() - 1 - step;
            let t = r[top].clone();
            for c in r.iter_mut().take(top + 1) {
                *c *= lc;
            }
            if !t.is_zero() {
                let shift = top - dd;
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    r[shift + j] -= &t * dc;
                }
            }
            debug_assert!(r[top].is_zero());
        }
        r.truncate(dd);
        Self::new(r)
    }

    /// One-sided coprimality certificate: `true` proves `gcd(self, other)` is
    /// constant over the rationals. It runs Euclid modulo the prime
    /// `2^61 - 1`; when that prime does not divide the leading coefficient of
    /// `self`, the true gcd reduces to a divisor of the modular gcd of the
    /// same degree, so a constant modular gcd settles it. `false` means
    /// "not certified", not "shares a factor".
    pub fn coprime_mod_prime(&self, other: &Self) -> bool {
        let a = reduce_mod(&self.coeffs);
        if a.last().is_none_or(|&c| c == 0) || a.len() != self.coeffs.len() {
            return false;
        }
        let b = reduce_mod(&other.coeffs);
        modp_gcd_degree(a, b) == Some(0)
    }

    /// Primitive GCD with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.clone().primitive(), other.clone().primitive())
        } else {
            (other.clone().primitive(), self.clone().primitive())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        if a.leading().is_some_and(Signed::is_negative) {
            a = Self::new(a.coeffs.into_iter().map(|c| -c).collect());
        }
        a
    }

    /// `sum_k c_k num^k den^(d-k)`, i.e. `den^d * p(num/den)`.
    pub fn eval_homogeneous(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        // Horner in `num`, with the matching power of `den` attached to each
        // lower coefficient.
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        acc
    }

    /// Sign of `p(x)` at a rational point.
    pub fn sign_at(&self, x: &BigRational) -> Sign {
        // BigRational keeps a positive denominator, so the homogeneous form has
        // the sign of p(x).
        self.eval_homogeneous(x.numer(), x.denom()).sign()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let d = self.degree() as u32;
        BigRational::new(
            self.eval_homogeneous(x.numer(), x.denom()),
            num_traits::pow(x.denom().clone(), d as usize),
        )
    }
}

const MOD_P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, MOD_P - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    acc
}

/// Coefficients reduced into `[0, p)`, trailing zeros dropped.
fn reduce_mod(c: &[BigInt]) -> Vec<u64> {
    let p = BigInt::from(MOD_P);
    let mut v: Vec<u64> = c
        .iter()
        .map(|x| {
            let r = x.mod_floor(&p);
            r.to_u64().expect("residue below 2^61")
        })
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Degree of the monic gcd over GF(p); `None` when both inputs vanish.
fn modp_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> Option<usize> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap());
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = mul_mod(*a.last().unwrap(), inv);
            for (j, &bc) in b.iter().enumerate() {
                let t = mul_mod(f, bc);
                a[shift + j] = (a[shift + j] + MOD_P - t) % MOD_P;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().checked_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPoly {
        IntPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn modular_coprimality() {
        // (x-1)(x-2) and its derivative are coprime
        let f = ip(&[2, -3, 1]);
        assert!(f.coprime_mod_prime(&f.derivative()));
        // (x-1)^2 (x+3) shares (x-1) with its derivative
        let g = ip(&[3, -5, 1, 1]);
        assert!(!g.coprime_mod_prime(&g.derivative()));
        assert_eq!(g.gcd(&g.derivative()).degree(), 1);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = ExactPolynomial::from_integers([1, 2, 0, 0].map(BigInt::from));
        assert_eq!(p.degree(), 1);
        assert!(ExactPolynomial::from_integers([0].map(BigInt::from)).is_zero());
    }

    #[test]
    fn gcd_of_products() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = ip(&[2, -3, 1]);
        let b = ip(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), ip(&[-1, 1]));
        let e = a.to_exact().gcd(&b.to_exact());
        assert_eq!(e, ExactPolynomial::linear_root(q(1, 1)));
    }

    #[test]
    fn gcd_coprime_is_constant() {
        let a = ip(&[1, 0, 1]);
        let b = ip(&[-1, 1]);
        assert_eq!(a.gcd(&b).degree(), 0);
    }

    #[test]
    fn homogeneous_eval_matches_rational_eval() {
        let p = ip(&[5, -6, 0, 7]);
        let x = q(-3, 7);
        assert_eq!(p.eval(&x), p.to_exact().eval(&x));
    }

    #[test]
    fn pseudo_remainder_identity() {
        let a = ip(&[1, 2, 3, 4, 5]);
        let b = ip(&[1, 0, 2]);
        let r = a.pseudo_rem(&b);
        assert!(r.degree() < b.degree());
        // lc(b)^(deg a - deg b + 1) * a - r is divisible by b: check at the
        // roots of b indirectly through the gcd.
        let lhs = a.to_exact().scale(&q(8, 1)).add(&r.to_exact().scale(&q(-1, 1)));
        let g = lhs.gcd(&b.to_exact());
        assert_eq!(g.degree(), 2);
    }
}
