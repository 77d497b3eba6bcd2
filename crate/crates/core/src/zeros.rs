//! Certified real-root isolation on `(0,1)` by Sturm sequences, bisection
//! refinement in exact rational arithmetic, and the empirical zero measure.

use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hp::{decimal_digits, format_fixed, format_significant, rational_to_f64};
use crate::poly::{ExactPolynomial, IntPoly};
use crate::xi_family::build_xi;

/// Default refinement radius, `10^-30`.
pub fn default_eps() -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10u32), 30))
}

/// Sturm chain `p, p', -rem(p, p'), ...` stored up to positive constant
/// factors, which leave every sign intact.
///
/// Built as a subresultant remainder sequence: each member is a signed
/// multiple of the Euclidean remainder, and every division along the way is
/// exact, so no content gcds are needed.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

fn negate(p: IntPoly) -> IntPoly {
    IntPoly::new(p.into_coeffs().into_iter().map(|c| -c).collect())
}

fn div_exact(p: IntPoly, d: &BigInt) -> IntPoly {
    IntPoly::new(p.into_coeffs().into_iter().map(|c| c / d).collect())
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Self {
        let p0 = p.clone().primitive();
        if p0.degree() == 0 {
            return Self { chain: vec![p0] };
        }
        let p1 = p0.derivative().primitive();
        // raw subresultant members and the sign turning each into a Sturm member
        let mut raw = vec![p0, p1];
        let mut signs = vec![false, false];
        let mut psi = -BigInt::one();
        let mut beta: Option<BigInt> = None;
        loop {
            let len = raw.len();
            let (a, b) = (&raw[len - 2], &raw[len - 1]);
            if b.degree() == 0 {
                break;
            }
            let delta = a.degree() - b.degree();
            let lc = b.leading().unwrap().clone();
            let beta_i = match beta.take() {
                Some(v) => v,
                None => if delta % 2 == 0 { -BigInt::one() } else { BigInt::one() },
            };
            let prem = a.pseudo_rem(b);
            if prem.is_zero() {
                break;
            }
            let r = div_exact(prem, &beta_i);
            // rem(a, b) = r * beta / lc^(delta+1), and the Sturm member is
            // -sign(a member) * rem
            let lc_neg = lc.is_negative() && delta % 2 == 0;
            let neg = !(signs[len - 2] ^ beta_i.is_negative() ^ lc_neg);
            // psi_{i+1} = (-lc)^delta / psi^(delta-1)
            let mlc = -lc.clone();
            psi = if delta == 0 {
                psi
            } else {
                num_traits::pow(mlc.clone(), delta) / num_traits::pow(psi.clone(), delta - 1)
            };
            let next_delta = b.degree() - r.degree();
            beta = Some(-&lc * num_traits::pow(psi.clone(), next_delta));
            raw.push(r);
            signs.push(neg);
        }
        let chain = raw
            .into_iter()
            .zip(signs)
            .map(|(p, neg)| if neg { negate(p) } else { p })
            .collect();
        Self { chain }
    }

    pub fn polynomial(&self) -> &IntPoly {
        &self.chain[0]
    }

    /// Degree of `gcd(p, p')`, read off the last member of the chain.
    pub fn gcd_degree(&self) -> usize {
        if self.chain.len() == 1 {
            return 0;
        }
        self.chain.last().map_or(0, IntPoly::degree)
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Sign changes of the chain at `x`, zeros skipped.
    pub fn variations(&self, x: &BigRational) -> usize {
        let mut last = Sign::NoSign;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &BigRational, hi: &BigRational) -> Result<usize> {
        for e in [lo, hi] {
            if self.chain[0].sign_at(e) == Sign::NoSign {
                return Err(Error::RootAtEndpoint(e.to_string()));
            }
        }
        Ok(self.variations(lo).saturating_sub(self.variations(hi)))
    }
}

pub fn sturm_count(p: &ExactPolynomial, lo: &BigRational, hi: &BigRational) -> Result<usize> {
    SturmChain::new(&p.primitive_int()).count(lo, hi)
}

/// Rational interval `(lo, hi)` containing exactly one simple root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl IsolatingInterval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Splitting points tried in order: the midpoint, then `lo + t (hi - lo)`
/// for `t = 1/3, 2/5, 3/7, ...` when a candidate is itself a root.
fn split_point(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> BigRational {
    let width = hi - lo;
    let mut t = BigRational::new(BigInt::one(), BigInt::from(2u32));
    let mut j = 1u32;
    loop {
        let m = lo + &width * &t;
        if p.sign_at(&m) != Sign::NoSign {
            return m;
        }
        t = BigRational::new(BigInt::from(j), BigInt::from(2 * j + 1));
        j += 1;
    }
}

/// Isolates every root of `p` in `(0,1)`, ordered left to right.
pub fn isolate_roots(p: &ExactPolynomial) -> Result<Vec<IsolatingInterval>> {
    if p.is_zero() {
        return Err(Error::Domain("zero polynomial has no isolated roots".into()));
    }
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let g = p.gcd(&p.derivative());
    if g.degree() > 0 {
        return Err(Error::NotSquarefree(g.degree()));
    }
    let chain = SturmChain::new(&p.primitive_int());
    let lo = BigRational::zero();
    let hi = BigRational::one();
    let total = chain.count(&lo, &hi)?;
    let mut out = Vec::with_capacity(total);
    let mut stack = vec![(lo, hi, total)];
    // Depth-first with the right half pushed first keeps the output sorted.
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push(IsolatingInterval { lo, hi }),
            _ => {
                let m = split_point(chain.polynomial(), &lo, &hi);
                let left = chain.count(&lo, &m)?;
                stack.push((m.clone(), hi, count - left));
                stack.push((lo, m, left));
            }
        }
    }
    Ok(out)
}

/// A root midpoint with a certified radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedRoot {
    pub midpoint: BigRational,
    pub radius: BigRational,
}

impl RefinedRoot {
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.midpoint)
    }
}

/// Bisects while `keep_going(lo, hi)` holds, preserving the sign change.
fn bisect_while(
    p: &IntPoly,
    iv: &IsolatingInterval,
    mut keep_going: impl FnMut(&BigRational, &BigRational) -> bool,
) -> RefinedRoot {
    let (mut lo, mut hi) = (iv.lo.clone(), iv.hi.clone());
    let lo_sign = p.sign_at(&lo);
    let two = BigRational::from_integer(BigInt::from(2u32));
    while keep_going(&lo, &hi) {
        let m = (&lo + &hi) / &two;
        match p.sign_at(&m) {
            Sign::NoSign => {
                return RefinedRoot {
                    midpoint: m,
                    radius: BigRational::zero(),
                }
            }
            s if s == lo_sign => lo = m,
            _ => hi = m,
        }
    }
    RefinedRoot {
        midpoint: (&lo + &hi) / &two,
        radius: (hi - lo) / two,
    }
}

/// Midpoint within `eps` of the root of `p` in `iv`.
pub fn refine_root(p: &ExactPolynomial, iv: &IsolatingInterval, eps: &BigRational) -> Result<RefinedRoot> {
    if !eps.is_positive() {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let ip = p.primitive_int();
    check_bracket(&ip, iv)?;
    let target = eps * BigRational::from_integer(BigInt::from(2u32));
    Ok(bisect_while(&ip, iv, |lo, hi| hi - lo > target))
}

fn check_bracket(p: &IntPoly, iv: &IsolatingInterval) -> Result<()> {
    let (a, b) = (p.sign_at(&iv.lo), p.sign_at(&iv.hi));
    if a == Sign::NoSign {
        return Err(Error::RootAtEndpoint(iv.lo.to_string()));
    }
    if b == Sign::NoSign {
        return Err(Error::RootAtEndpoint(iv.hi.to_string()));
    }
    if a == b {
        return Err(Error::Domain(format!("no sign change on ({}, {})", iv.lo, iv.hi)));
    }
    Ok(())
}

/// Refines until `radius <= eps` and `radius <= (1 - hi)/10^4`.
///
/// The second condition resolves roots that sit exponentially close to 1,
/// where a fixed absolute tolerance cannot tell the root from the endpoint.
pub fn refine_root_edge_aware(p: &IntPoly, iv: &IsolatingInterval, eps: &BigRational) -> RefinedRoot {
    let target = eps * BigRational::from_integer(BigInt::from(2u32));
    let edge = BigRational::from_integer(BigInt::from(10_000u32));
    let two = BigRational::from_integer(BigInt::from(2u32));
    bisect_while(p, iv, |lo, hi| {
        let w = hi - lo;
        w > target || &w / &two * &edge > BigRational::one() - hi
    })
}

/// Uniform probability measure on the `n-1` roots of `Xi~_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalMeasure {
    pub n: usize,
    pub eps: BigRational,
    pub roots: Vec<RefinedRoot>,
}

impl EmpiricalMeasure {
    /// Isolates and refines all roots of `Xi~_n`; fails unless exactly
    /// `n-1` roots lie in `(0,1)`.
    pub fn compute(n: usize, eps: &BigRational) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain("the zero measure needs n >= 2".into()));
        }
        if !eps.is_positive() {
            return Err(Error::Domain("eps must be positive".into()));
        }
        let xi = build_xi(n)?;
        let intervals = isolate_roots(&xi.xi_tilde)?;
        if intervals.len() != n - 1 {
            return Err(Error::Construction {
                n,
                reason: format!("{} roots in (0,1), expected {}", intervals.len(), n - 1),
            });
        }
        let ip = xi.xi_tilde.primitive_int();
        let roots = intervals
            .par_iter()
            .map(|iv| refine_root_edge_aware(&ip, iv, eps))
            .collect();
        Ok(Self {
            n,
            eps: eps.clone(),
            roots,
        })
    }

    pub fn mass(&self) -> usize {
        self.roots.len()
    }

    /// Number of roots `<= x`.
    pub fn count_le(&self, x: &BigRational) -> usize {
        self.roots.partition_point(|r| &r.midpoint <= x)
    }

    /// `F_n(x) = #{k : x_k <= x} / (n-1)`.
    pub fn cdf(&self, x: &BigRational) -> f64 {
        self.count_le(x) as f64 / self.mass() as f64
    }

    pub fn cdf_f64(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x >= 1.0 {
            return 1.0;
        }
        if x <= 0.0 {
            return 0.0;
        }
        self.cdf(&BigRational::from_float(x).unwrap())
    }

    /// Roots that `eps` alone would not separate from 1, i.e. those with
    /// `1 - (x + radius) < 10^4 eps`; their radius was driven below `eps`
    /// by the edge-aware refinement.
    pub fn escalated(&self) -> usize {
        let limit = &self.eps * BigRational::from_integer(BigInt::from(10_000u32));
        self.roots
            .iter()
            .filter(|r| BigRational::one() - (&r.midpoint + &r.radius) < limit)
            .count()
    }

    /// Root cache text: header `roots v1 n=<n> eps=<eps>`, then one decimal
    /// midpoint per line in ascending order.
    pub fn to_cache_text(&self) -> String {
        let mut out = format!("roots v1 n={} eps={}\n", self.n, format_compact(&self.eps));
        for r in &self.roots {
            let scale = if r.radius.is_zero() { &self.eps } else { &r.radius };
            let digits = fractional_digits_for(scale) + 3;
            writeln!(out, "{}", format_fixed(&r.midpoint, digits)).unwrap();
        }
        out
    }

    /// Parses cache text and re-certifies every root: the window
    /// `(d - w, d + w]` with `w = min(eps, (1-d)/1000)` must hold exactly one
    /// root of `Xi~_n`.
    pub fn from_cache_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty root cache".into()))?;
        let rest = header
            .strip_prefix("roots v1 ")
            .ok_or_else(|| Error::Parse(format!("unsupported root cache header {header:?}")))?;
        let mut n = None;
        let mut eps = None;
        for field in rest.split_whitespace() {
            match field.split_once('=') {
                Some(("n", v)) => n = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?),
                Some(("eps", v)) => eps = Some(parse_decimal(v)?),
                _ => return Err(Error::Parse(format!("unknown header field {field:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing n".into()))?;
        let eps = eps.ok_or_else(|| Error::Parse("missing eps".into()))?;
        if n < 2 || !eps.is_positive() {
            return Err(Error::Parse("invalid n or eps".into()));
        }
        let mids = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| parse_decimal(l.trim()))
            .collect::<Result<Vec<_>>>()?;
        if mids.len() != n - 1 {
            return Err(Error::Parse(format!("{} roots listed, expected {}", mids.len(), n - 1)));
        }
        if mids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("roots are not strictly increasing".into()));
        }
        let chain = SturmChain::new(&build_xi(n)?.xi_tilde.primitive_int());
        let thousand = BigRational::from_integer(BigInt::from(1000u32));
        let roots = mids
            .into_iter()
            .map(|d| {
                let edge = (BigRational::one() - &d) / &thousand;
                let w = if edge < eps { edge } else { eps.clone() };
                if !w.is_positive() {
                    return Err(Error::Parse(format!("root {d} is not below 1")));
                }
                let count = chain.count(&(&d - &w), &(&d + &w))?;
                if count != 1 {
                    return Err(Error::Parse(format!(
                        "cached root {} failed re-verification ({count} roots within its window)",
                        format_significant(&d, 12)
                    )));
                }
                Ok(RefinedRoot { midpoint: d, radius: w })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, eps, roots })
    }
}

/// Number of fractional decimal digits needed to show a quantity of size `q`.
fn fractional_digits_for(q: &BigRational) -> usize {
    let mut k = 0usize;
    let mut scaled = q.clone();
    let ten = BigRational::from_integer(BigInt::from(10u32));
    while scaled < BigRational::one() {
        scaled *= &ten;
        k += 1;
    }
    k
}

/// Shortest significant-digit rendering that parses back to `q` exactly,
/// falling back to 40 digits.
pub fn format_compact(q: &BigRational) -> String {
    for sig in 1..=40 {
        let s = format_significant(q, sig);
        let s = strip_trailing_zeros(&s);
        if parse_decimal(&s).is_ok_and(|v| &v == q) {
            return s;
        }
    }
    format_significant(q, decimal_digits(133))
}

fn strip_trailing_zeros(s: &str) -> String {
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let mant = if mant.contains('.') {
        mant.trim_end_matches('0').trim_end_matches('.')
    } else {
        mant
    };
    match exp {
        Some(e) => format!("{mant}e{e}"),
        None => mant.to_string(),
    }
}

/// Exact value of a decimal literal such as `0.125`, `-3`, `1e-30`, `2.5E4`.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid decimal {s:?}"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let e = exp - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let mut v = if e >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, e as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        v = -v;
    }
    Ok(v)
}
