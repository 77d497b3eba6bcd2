//! The limiting zero distribution: density, distribution function, quantile,
//! limiting Stieltjes transform and its numerical inversion.
//!
//! With `q(x) = (1 - sqrt x)/(1 + sqrt x)` and `L(x) = -log q(x)`:
//!
//! * `rho(x) = 2 / (sqrt(x) (1-x) (L(x)^2 + pi^2))` on `(0,1)`;
//! * `F(x) = (2/pi) atan(L(x)/pi)`;
//! * `F^{-1}(p) = tanh^2((pi/2) tan(pi p / 2))`;
//! * `s(z) = 1/(sqrt z (1 + sqrt z)) + (u + (1-u)/log u) / (sqrt z (1 - sqrt z))`
//!   with `u = (sqrt z - 1)/(sqrt z + 1)`.
//!
//! `sqrt` and `log` are principal. `s` is unchanged under `sqrt z -> -sqrt z`
//! (which sends `u` to `1/u`), so the principal choice gives a single-valued
//! function on `C \ [0,1]`, including the negative real axis where `|u| = 1`.

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::hp::{Complex, Real};
use crate::zeros::EmpiricalMeasure;

/// Extra bits carried through intermediate steps.
const GUARD_BITS: usize = 32;

/// The two first-term normalisations found in circulation for `s(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StieltjesVariant {
    /// First term `1/(sqrt z (1 + sqrt z))`. Satisfies `s(z) ~ 1/z`.
    Unit,
    /// First term `1/(2 sqrt z (1 + sqrt z))`.
    Halved,
}

impl StieltjesVariant {
    pub fn label(self) -> &'static str {
        match self {
            Self::Unit => "first term 1/(sqrt(z)(1+sqrt(z)))",
            Self::Halved => "first term 1/(2 sqrt(z)(1+sqrt(z)))",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LimitLawContext {
    precision_bits: usize,
}

impl LimitLawContext {
    pub fn new(precision_bits: usize) -> Result<Self> {
        if precision_bits < 64 {
            return Err(Error::Domain(format!(
                "precision must be at least 64 bits, got {precision_bits}"
            )));
        }
        Ok(Self { precision_bits })
    }

    pub fn precision_bits(&self) -> usize {
        self.precision_bits
    }

    fn work(&self) -> usize {
        self.precision_bits + GUARD_BITS
    }

    fn out(&self, v: Real) -> Real {
        v.with_precision(self.precision_bits)
    }

    /// `1 - x` at the working precision or at the precision of `x`,
    /// whichever is larger, so an `x` carrying extra bits near 1 keeps them.
    fn one_minus(&self, x: &Real) -> Real {
        Real::one(self.work()) - x
    }

    /// Distance below which a point counts as lying on the cut, `2^(-p/2)`.
    pub fn cut_tolerance(&self) -> Real {
        Real::one(self.work()).scale_pow2(-((self.precision_bits / 2) as i32))
    }

    /// `L(x) = log((1 + sqrt x)/(1 - sqrt x))` from `x` and `1 - x`,
    /// written as `log((1 + sqrt x)^2 / (1 - x))` so that nothing cancels
    /// near `x = 1`.
    pub fn edge_log_split(&self, x: &Real, one_minus_x: &Real) -> Real {
        let p = self.work();
        let s = x.with_precision(p).sqrt();
        let a = (Real::one(p) + s).sqr();
        self.out((a / one_minus_x.with_precision(p)).ln())
    }

    pub fn edge_log(&self, x: &Real) -> Result<Real> {
        check_open_unit(x)?;
        Ok(self.edge_log_split(x, &self.one_minus(x)))
    }

    /// `L(x)` for a rational `x`, with `1 - x` formed exactly.
    pub fn edge_log_rational(&self, x: &BigRational) -> Result<Real> {
        check_open_unit_q(x)?;
        let p = self.work();
        let omx = Real::from_rational(&(BigRational::one() - x), p);
        Ok(self.edge_log_split(&Real::from_rational(x, p), &omx))
    }

    /// `rho(x)` from `x` and `1 - x`.
    pub fn density_split(&self, x: &Real, one_minus_x: &Real) -> Real {
        let p = self.work();
        let l = self.edge_log_split(x, one_minus_x).with_precision(p);
        let pi = Real::pi(p);
        let denom = x.with_precision(p).sqrt() * one_minus_x.with_precision(p) * (l.sqr() + pi.sqr());
        self.out(Real::from_i64(2, p) / denom)
    }

    /// `rho(x)`; rejects `x` outside `(0,1)`.
    pub fn density(&self, x: &Real) -> Result<Real> {
        check_open_unit(x)?;
        Ok(self.density_split(x, &self.one_minus(x)))
    }

    /// `rho(x)` extended by zero outside `(0,1)`.
    pub fn density_or_zero(&self, x: &Real) -> Real {
        self.density(x).unwrap_or_else(|_| Real::zero(self.precision_bits))
    }

    fn cdf_from_log(&self, l: &Real) -> Real {
        let p = self.work();
        let pi = Real::pi(p);
        let v = (l.with_precision(p) / &pi).atan() * Real::from_i64(2, p) / pi;
        self.out(v)
    }

    /// `F(x)`, with `F = 0` for `x <= 0` and `F = 1` for `x >= 1`.
    pub fn cdf(&self, x: &Real) -> Real {
        if !x.is_positive() {
            return Real::zero(self.precision_bits);
        }
        if x >= &Real::one(self.precision_bits) {
            return Real::one(self.precision_bits);
        }
        let l = self.edge_log(x).expect("x checked to lie in (0,1)");
        self.cdf_from_log(&l)
    }

    /// `F(x)` for a rational argument; `1 - x` is formed exactly, which keeps
    /// full relative accuracy in `1 - F` for roots exponentially close to 1.
    pub fn cdf_rational(&self, x: &BigRational) -> Real {
        if !x.is_positive() {
            return Real::zero(self.precision_bits);
        }
        if x >= &BigRational::one() {
            return Real::one(self.precision_bits);
        }
        let l = self.edge_log_rational(x).expect("x checked to lie in (0,1)");
        self.cdf_from_log(&l)
    }

    /// `F^{-1}(p) = tanh^2((pi/2) tan(pi p/2))`.
    ///
    /// For `p` near 1 the result is `1 - 4 exp(-2v)` with `v` large, so it is
    /// returned with enough extra bits for `1 - F^{-1}(p)` to keep the full
    /// context precision.
    pub fn quantile(&self, prob: &Real) -> Result<Real> {
        check_open_unit(prob)?;
        let v = self.quantile_argument(prob);
        // -log2(1 - tanh^2 v) < 2v / ln 2 <= 3v
        let extra = if v.to_f64() > 1.0 { (3.0 * v.to_f64()).ceil() as usize } else { 0 };
        let p = self.work() + extra;
        let v = self.quantile_argument_at(prob, p);
        Ok(v.tanh().sqr().with_precision(self.precision_bits + extra))
    }

    /// `v(p) = (pi/2) tan(pi p/2)`, so that `F^{-1}(p) = tanh^2 v`.
    fn quantile_argument(&self, prob: &Real) -> Real {
        self.quantile_argument_at(prob, self.work())
    }

    fn quantile_argument_at(&self, prob: &Real, p: usize) -> Real {
        let half_pi = Real::pi(p).scale_pow2(-1);
        let t = (prob.with_precision(p) * &half_pi).tan();
        half_pi * t
    }

    /// `rho(F^{-1}(p)) * dF^{-1}/dp`, which is identically 1; evaluating it
    /// is an analytic check of the normalisation `int rho = 1`.
    pub fn quantile_jacobian_product(&self, prob: &Real) -> Result<Real> {
        check_open_unit(prob)?;
        let p = self.work();
        let v = self.quantile_argument(prob);
        let half_pi = Real::pi(p).scale_pow2(-1);
        let t = (prob.with_precision(p) * &half_pi).tan();
        let dv = half_pi.sqr() * (Real::one(p) + t.sqr());
        let th = v.tanh();
        let e = v.exp();
        let cosh = (&e + e.recip()).scale_pow2(-1);
        let sech2 = cosh.sqr().recip();
        // dQ/dv = 2 tanh(v) sech^2(v), and 1 - Q = sech^2(v)
        let dq = Real::from_i64(2, p) * &th * &sech2 * dv;
        let rho = self.density_split(&th.sqr(), &sech2).with_precision(p);
        Ok(self.out(rho * dq))
    }

    /// Distance of `z` from the segment `[0,1]`.
    pub fn distance_to_cut(&self, z: &Complex) -> Real {
        let p = self.work();
        let zero = Real::zero(p);
        let one = Real::one(p);
        if z.re < zero {
            z.abs()
        } else if z.re > one {
            Complex::new(&z.re - &one, z.im.clone()).abs()
        } else {
            z.im.abs()
        }
    }

    fn check_off_cut(&self, z: &Complex) -> Result<()> {
        let d = self.distance_to_cut(z);
        if d.is_zero() {
            return Err(Error::Domain(format!("z = {} + {}i lies on [0,1]", z.re, z.im)));
        }
        if d < self.cut_tolerance() {
            return Err(Error::NearSingularity {
                distance: d.to_decimal(6),
            });
        }
        Ok(())
    }

    /// `s(z)` for `z` off `[0,1]`.
    pub fn stieltjes_limit(&self, z: &Complex) -> Result<Complex> {
        self.stieltjes_variant(z, StieltjesVariant::Unit)
    }

    pub fn stieltjes_variant(&self, z: &Complex, variant: StieltjesVariant) -> Result<Complex> {
        self.check_off_cut(z)?;
        let p = self.work();
        let z = Complex::new(z.re.with_precision(p), z.im.with_precision(p));
        let one = Real::one(p);
        let r = z.sqrt();
        let rp = r.add_real(&one);
        let rm = r.add_real(&-&one);
        let u = &rm / &rp;
        if u.norm_sqr() > one {
            return Err(Error::Domain("|u(z)| > 1 under the principal branch".into()));
        }
        let log_u = u.ln();
        let one_c = Complex::real(one.clone());
        let bracket = &u + &(&(&one_c - &u) / &log_u);
        let mut first = (&r * &rp).recip();
        if variant == StieltjesVariant::Halved {
            first = first.scale(&Real::one(p).scale_pow2(-1));
        }
        let second = &bracket / &(&r * &(&one_c - &r));
        let s = &first + &second;
        Ok(Complex::new(self.out(s.re), self.out(s.im)))
    }

    /// `(1/(n-1)) sum_k 1/(z - x_k)` over the refined roots of the measure.
    ///
    /// Fails with [`Error::NearSingularity`] when `z` is within
    /// `max(2^(-p/2), 2 * radius)` of a root.
    pub fn stieltjes_empirical(&self, measure: &EmpiricalMeasure, z: &Complex) -> Result<Complex> {
        let p = self.work();
        let z = Complex::new(z.re.with_precision(p), z.im.with_precision(p));
        let tol = self.cut_tolerance();
        let mut acc = Complex::real(Real::zero(p));
        for root in &measure.roots {
            let x = Real::from_rational(&root.midpoint, p);
            let d = Complex::new(&z.re - &x, z.im.clone());
            let dist = d.abs();
            let r2 = Real::from_rational(&(&root.radius * BigRational::from_integer(2.into())), p);
            if dist < tol || dist <= r2 {
                return Err(Error::NearSingularity {
                    distance: dist.to_decimal(6),
                });
            }
            acc = &acc + &d.recip();
        }
        let k = Real::from_i64(measure.roots.len() as i64, p);
        let s = Complex::new(&acc.re / &k, &acc.im / &k);
        Ok(Complex::new(self.out(s.re), self.out(s.im)))
    }

    /// `-Im s(x + i eps) / pi`.
    pub fn inversion_density(&self, x: &Real, eps: &Real) -> Result<Real> {
        check_open_unit(x)?;
        if !eps.is_positive() {
            return Err(Error::Domain("eps must be positive".into()));
        }
        let p = self.work();
        let z = Complex::new(x.with_precision(p), eps.with_precision(p));
        let s = self.stieltjes_limit(&z)?;
        Ok(self.out(-(s.im.with_precision(p) / Real::pi(p))))
    }
}

fn check_open_unit(x: &Real) -> Result<()> {
    if x.is_positive() && x < &Real::one(x.precision()) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{x} is not in (0,1)")))
    }
}

fn check_open_unit_q(x: &BigRational) -> Result<()> {
    if x.is_positive() && x < &BigRational::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{x} is not in (0,1)")))
    }
}
