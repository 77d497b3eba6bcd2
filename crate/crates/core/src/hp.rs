//! Arbitrary-precision real and complex scalars.
//!
//! Thin value-semantics wrapper over `astro_float::BigFloat`. Each value
//! remembers the precision it was produced at; binary operations run at the
//! larger of the two operand precisions. Round-to-nearest-even throughout.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = 64;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("constant cache allocation"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Self { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(1, prec), prec)
    }

    pub fn from_f64(v: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(v, prec), prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(v, prec), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        if n.is_zero() {
            return Self::zero(prec);
        }
        let (sign, words) = n.to_u64_digits();
        let sign = if sign == num_bigint::Sign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let exact = BigFloat::from_words(&words, sign, (words.len() * WORD_BITS) as i32);
        let mut r = Self::wrap(exact, words.len() * WORD_BITS);
        r.set_precision(prec);
        r
    }

    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        let guard = prec + WORD_BITS;
        let num = Self::from_bigint(q.numer(), guard);
        let den = Self::from_bigint(q.denom(), guard);
        Self::wrap(num.v.div(&den.v, prec, RM), prec)
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn set_precision(&mut self, prec: usize) {
        self.prec = prec;
        self.v
            .set_precision(prec, RM)
            .expect("precision change on a finite value");
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        let mut r = self.clone();
        r.set_precision(prec);
        r
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_zero() && self.v.is_positive()
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn ln(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.v.ln(p, RM, cc)), p)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.v.exp(p, RM, cc)), p)
    }

    pub fn atan(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.v.atan(p, RM, cc)), p)
    }

    pub fn tan(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.v.tan(p, RM, cc)), p)
    }

    pub fn tanh(&self) -> Self {
        let p = self.prec;
        Self::wrap(with_consts(|cc| self.v.tanh(p, RM, cc)), p)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.v.reciprocal(self.prec, RM), self.prec)
    }

    /// Binary exponent `e` with `|self|` in `[2^(e-1), 2^e)`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.v.exponent().map(i64::from)
        }
    }

    pub fn scale_pow2(&self, k: i32) -> Self {
        let two = BigFloat::from_word(2, WORD_BITS);
        let factor = two.powi(k.unsigned_abs() as usize, WORD_BITS, RM);
        let v = if k >= 0 {
            self.v.mul(&factor, self.prec, RM)
        } else {
            self.v.div(&factor, self.prec, RM)
        };
        Self::wrap(v, self.prec)
    }

    /// Exact rational value of the binary float.
    pub fn to_rational(&self) -> BigRational {
        assert!(self.is_finite(), "non-finite value has no rational form");
        if self.is_zero() {
            return BigRational::zero();
        }
        let (words, _, sign, e, _) = self.v.as_raw_parts().expect("finite value");
        let mut m = BigInt::from_biguint(num_bigint::Sign::Plus, BigUint::new(to_u32_digits(words)));
        if sign == Sign::Neg {
            m = -m;
        }
        let shift = e as i64 - (words.len() * WORD_BITS) as i64;
        if shift >= 0 {
            BigRational::from_integer(m << shift as usize)
        } else {
            BigRational::new(m, BigInt::one() << (-shift) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if self.is_zero() {
            return 0.0;
        }
        let (words, _, sign, e, _) = self.v.as_raw_parts().expect("finite value");
        let top = words[words.len() - 1] as f64;
        let next = if words.len() > 1 {
            words[words.len() - 2] as f64 / 18446744073709551616.0
        } else {
            0.0
        };
        let shift = e - WORD_BITS as i32;
        let half = shift / 2;
        let mag = (top + next) * 2f64.powi(half) * 2f64.powi(shift - half);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Decimal rendering with a fixed number of significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        format_significant(&self.to_rational(), sig)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

fn to_u32_digits(words: &[u64]) -> Vec<u32> {
    words
        .iter()
        .flat_map(|w| [(*w & 0xffff_ffff) as u32, (*w >> 32) as u32])
        .collect()
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.to_decimal(24))
        } else {
            write!(f, "{:?}", self.v)
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = decimal_digits(self.prec);
        if self.is_finite() {
            write!(f, "{}", self.to_decimal(digits))
        } else {
            write!(f, "{:?}", self.v)
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let p = self.prec.max(rhs.prec);
                Real::wrap(self.v.$method(&rhs.v, p, RM), p)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.neg(), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

/// Complex number over [`Real`] with principal-branch `sqrt` and `ln`.
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn real(re: Real) -> Self {
        let p = re.precision();
        Self { re, im: Real::zero(p) }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        Self::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    pub fn from_rationals(re: &BigRational, im: &BigRational, prec: usize) -> Self {
        Self::new(Real::from_rational(re, prec), Real::from_rational(im, prec))
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, k: &Real) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn add_real(&self, k: &Real) -> Self {
        Self::new(&self.re + k, self.im.clone())
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Self::new(&self.re / &d, -(&self.im / &d))
    }

    /// Argument in `(-pi, pi]`.
    pub fn arg(&self) -> Real {
        let p = self.precision();
        let pi = Real::pi(p);
        if self.re.is_zero() {
            let half = pi.scale_pow2(-1);
            return if self.im.is_negative() {
                -half
            } else if self.im.is_zero() {
                Real::zero(p)
            } else {
                half
            };
        }
        let base = (&self.im / &self.re).atan();
        if self.re.is_positive() {
            base
        } else if self.im.is_negative() {
            base - pi
        } else {
            base + pi
        }
    }

    pub fn ln(&self) -> Self {
        Self::new(self.abs().ln(), self.arg())
    }

    pub fn sqrt(&self) -> Self {
        let p = self.precision();
        if self.re.is_zero() && self.im.is_zero() {
            return Self::real(Real::zero(p));
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let t = ((&r + &self.re).scale_pow2(-1)).sqrt();
            let im = &self.im / t.scale_pow2(1);
            Self::new(t, im)
        } else {
            let t = ((&r - &self.re).scale_pow2(-1)).sqrt();
            let re = self.im.abs() / t.scale_pow2(1);
            let im = if self.im.is_negative() { -t } else { t };
            Self::new(re, im)
        }
    }

    pub fn to_f64(&self) -> num_complex::Complex<f64> {
        num_complex::Complex::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let d = rhs.norm_sqr();
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &d;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / &d;
        Complex::new(re, im)
    }
}

/// Number of decimal digits carried by `bits` binary digits, rounded up.
pub fn decimal_digits(bits: usize) -> usize {
    (bits as f64 * 0.301).ceil() as usize
}

fn pow10(k: usize) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k)
}

/// Round `q` to the nearest integer, ties away from zero.
fn round_rational(q: &BigRational) -> BigInt {
    let two = BigInt::from(2u32);
    let (n, d) = (q.numer(), q.denom());
    let mag = (n.abs() * &two + d).div_floor(&(d * &two));
    if n.is_negative() {
        -mag
    } else {
        mag
    }
}

/// Plain decimal with exactly `frac` digits after the point.
pub fn format_fixed(q: &BigRational, frac: usize) -> String {
    let scaled = round_rational(&(q * BigRational::from_integer(pow10(frac))));
    let neg = scaled.is_negative();
    let mut digits = scaled.abs().to_string();
    if digits.len() <= frac {
        digits = format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits);
    }
    let split = digits.len() - frac;
    let (int, dec) = digits.split_at(split);
    let sign = if neg { "-" } else { "" };
    if frac == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{dec}")
    }
}

/// Decimal with `sig` significant digits; scientific notation outside
/// `[1e-6, 1e21)`.
pub fn format_significant(q: &BigRational, sig: usize) -> String {
    let sig = sig.max(1);
    if q.is_zero() {
        return format_fixed(q, sig - 1);
    }
    let mag = q.abs();
    // floor(log10 |q|), starting from a bit-length estimate
    let bits = mag.numer().bits() as i64 - mag.denom().bits() as i64;
    let mut e10 = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(pow10(e as usize))
        } else {
            BigRational::new(BigInt::one(), pow10((-e) as usize))
        }
    };
    while pow(e10) > mag {
        e10 -= 1;
    }
    while pow(e10 + 1) <= mag {
        e10 += 1;
    }
    let mut scaled = round_rational(&(&mag / pow(e10 - sig as i64 + 1)));
    if scaled >= pow10(sig) {
        scaled /= BigInt::from(10u32);
        e10 += 1;
    }
    let sign = if q.is_negative() { "-" } else { "" };
    let digits = scaled.to_string();
    if (-6..21).contains(&e10) {
        if e10 >= 0 {
            let int_len = (e10 + 1) as usize;
            if int_len >= digits.len() {
                format!("{sign}{digits}{}", "0".repeat(int_len - digits.len()))
            } else {
                format!("{sign}{}.{}", &digits[..int_len], &digits[int_len..])
            }
        } else {
            let zeros = (-e10 - 1) as usize;
            format!("{sign}0.{}{digits}", "0".repeat(zeros))
        }
    } else if digits.len() > 1 {
        format!("{sign}{}.{}e{e10}", &digits[..1], &digits[1..])
    } else {
        format!("{sign}{digits}e{e10}")
    }
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite f64")
}

pub fn format_f64(v: f64, sig: usize) -> String {
    if v.is_finite() {
        format_significant(&f64_to_rational(v), sig)
    } else {
        v.to_string()
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| Real::from_rational(q, 64).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_round_trip_is_exact_for_dyadics() {
        let x = q(-12345, 1 << 20);
        assert_eq!(Real::from_rational(&x, 128).to_rational(), x);
        let big = BigInt::from(3u32).pow(200u32);
        let r = Real::from_bigint(&big, 400);
        assert_eq!(r.to_rational(), BigRational::from_integer(big));
    }

    #[test]
    fn to_f64_matches() {
        for v in [1.0, -2.5, 1e-300, 6.02e23, std::f64::consts::PI] {
            assert_eq!(Real::from_f64(v, 128).to_f64(), v);
        }
    }

    #[test]
    fn third_is_accurate() {
        let third = Real::from_rational(&q(1, 3), 128);
        let err = (third.to_rational() - q(1, 3)).abs();
        assert!(err < q(1, 1) / BigRational::from_integer(BigInt::one() << 127));
    }

    #[test]
    fn principal_sqrt_and_log() {
        let p = 128;
        let z = Complex::from_f64(-1.0, 0.0, p);
        let s = z.sqrt();
        assert!(s.re.abs().to_f64() < 1e-30);
        assert!((s.im.to_f64() - 1.0).abs() < 1e-15);
        let l = Complex::from_f64(-1.0, 1e-30, p).ln();
        assert!((l.im.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let l = Complex::from_f64(-1.0, -1e-30, p).ln();
        assert!((l.im.to_f64() + std::f64::consts::PI).abs() < 1e-15);
        let w = Complex::from_f64(3.0, -4.0, p).sqrt();
        assert!((w.re.to_f64() - 2.0).abs() < 1e-15 && (w.im.to_f64() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_fixed(&q(5, 6), 5), "0.83333");
        assert_eq!(format_fixed(&q(-1, 8), 2), "-0.13");
        assert_eq!(format_fixed(&q(3, 2), 0), "2");
        assert_eq!(format_significant(&q(5, 6), 4), "0.8333");
        assert_eq!(format_significant(&q(-6, 7), 3), "-0.857");
        assert_eq!(format_significant(&q(12345, 1), 3), "12300");
        assert_eq!(format_significant(&q(1, 10_000_000), 2), "1.0e-7");
        assert_eq!(format_significant(&q(999, 1000), 2), "1.0");
        assert_eq!(format_significant(&q(0, 1), 3), "0.00");
    }
}
