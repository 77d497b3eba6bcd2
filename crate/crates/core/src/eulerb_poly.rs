//! Type-B Eulerian polynomials and the odd-power series `S_m`.
//!
//! Rows are produced by the differential recurrence
//! `B_m(z) = ((2m-1)z + 1) B_{m-1}(z) + 2z(1-z) B'_{m-1}(z)`, `B_0 = 1`,
//! and memoised in an [`EulerianBTable`]. The series identity
//! `B_m(x) = (1-x)^(m+1) * sum_k (2k+1)^m x^k` is kept as an independent
//! check of the recurrence's index convention.

use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{ExactPolynomial, IntPoly};

/// Append-only cache of the integer rows `B_0 .. B_max`.
///
/// Extension takes the write lock; finished rows are immutable `Arc`s and can
/// be handed to any number of readers.
#[derive(Debug)]
pub struct EulerianBTable {
    rows: RwLock<Vec<Arc<IntPoly>>>,
}

impl Default for EulerianBTable {
    fn default() -> Self {
        Self::new()
    }
}

impl EulerianBTable {
    pub fn new() -> Self {
        Self {
            rows: RwLock::new(vec![Arc::new(IntPoly::new(vec![BigInt::one()]))]),
        }
    }

    /// Largest `m` currently stored.
    pub fn max_m(&self) -> usize {
        self.rows.read().expect("table lock").len() - 1
    }

    pub fn row(&self, m: usize) -> Arc<IntPoly> {
        if let Some(r) = self.rows.read().expect("table lock").get(m) {
            return Arc::clone(r);
        }
        self.extend_to(m);
        Arc::clone(&self.rows.read().expect("table lock")[m])
    }

    pub fn extend_to(&self, m: usize) {
        let mut rows = self.rows.write().expect("table lock");
        while rows.len() <= m {
            let next = recurrence_step(rows.last().unwrap(), rows.len());
            rows.push(Arc::new(next));
        }
    }
}

/// One application of the recurrence, producing `B_m` from `B_{m-1}`.
fn recurrence_step(prev: &IntPoly, m: usize) -> IntPoly {
    let c = prev.coeffs();
    let d = prev.derivative();
    let d = d.coeffs();
    let at = |v: &[BigInt], k: isize| -> BigInt {
        if k < 0 {
            BigInt::zero()
        } else {
            v.get(k as usize).cloned().unwrap_or_default()
        }
    };
    let lin = BigInt::from(2 * m - 1);
    let two = BigInt::from(2u32);
    let out = (0..=m as isize)
        .map(|k| {
            // ((2m-1)z + 1) B  +  2z B'  -  2z^2 B'
            at(c, k) + &lin * at(c, k - 1) + &two * at(d, k - 1) - &two * at(d, k - 2)
        })
        .collect();
    IntPoly::new(out)
}

static TABLE: LazyLock<EulerianBTable> = LazyLock::new(EulerianBTable::new);

/// The process-wide table used by the free functions of this crate.
pub fn shared_table() -> &'static EulerianBTable {
    &TABLE
}

/// `B_m` with integer coefficients, from the shared table.
pub fn eulerian_b_int(m: usize) -> Arc<IntPoly> {
    TABLE.row(m)
}

pub fn eulerian_b(m: usize) -> ExactPolynomial {
    eulerian_b_int(m).to_exact()
}

/// Number of signed permutations of `m` letters, `2^m m!`.
pub fn signed_permutation_count(m: usize) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, k| acc * BigInt::from(2 * k))
}

/// Compares `B_m` with the first `m+1` coefficients of
/// `(1-x)^(m+1) * sum_{k<=m} (2k+1)^m x^k`.
pub fn series_identity_check(m: usize) -> bool {
    let series: Vec<BigInt> = (0..=m)
        .map(|k| num_traits::pow(BigInt::from(2 * k + 1), m))
        .collect();
    // (1-x)^(m+1) truncated to degree m, signed binomials
    let mut binom = Vec::with_capacity(m + 1);
    let mut b = BigInt::one();
    for j in 0..=m {
        binom.push(if j % 2 == 0 { b.clone() } else { -b.clone() });
        b = b * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
    }
    let row = eulerian_b_int(m);
    (0..=m).all(|k| {
        let coeff: BigInt = (0..=k).map(|j| &binom[j] * &series[k - j]).sum();
        row.coeffs().get(k).cloned().unwrap_or_default() == coeff
    })
}

fn check_unit_interval(x: &BigRational) -> Result<()> {
    if x.is_positive() && x < &BigRational::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} is not in (0,1)")))
    }
}

/// Numerator of `sum_{k<=terms} (2k+1)^m x^k` over the denominator
/// `den(x)^terms`.
pub(crate) fn s_m_numerator(m: usize, x: &BigRational, terms: usize) -> BigInt {
    let (a, b) = (x.numer(), x.denom());
    let mut acc = BigInt::one();
    let mut a_pow = BigInt::one();
    for k in 1..=terms {
        a_pow *= a;
        acc = acc * b + num_traits::pow(BigInt::from(2 * k + 1), m) * &a_pow;
    }
    acc
}

/// Exact partial sum `sum_{k=0}^{terms} (2k+1)^m x^k`.
pub fn s_m_partial(m: usize, x: &BigRational, terms: usize) -> Result<BigRational> {
    check_unit_interval(x)?;
    Ok(BigRational::new(
        s_m_numerator(m, x, terms),
        num_traits::pow(x.denom().clone(), terms),
    ))
}

/// Upper bound for the dropped tail `sum_{k>terms} (2k+1)^m x^k`.
///
/// For `k > terms` consecutive term ratios are at most
/// `r = ((2 terms + 5)/(2 terms + 3))^m x`, so the tail is at most
/// `(2 terms + 3)^m x^(terms+1) / (1 - r)`. Returns `None` while `r >= 1`,
/// i.e. before the terms have started to decrease.
pub fn s_m_tail_bound(m: usize, x: &BigRational, terms: usize) -> Option<BigRational> {
    let k = BigInt::from(2 * terms + 3);
    let growth = BigRational::new(BigInt::from(2 * terms + 5), k.clone());
    let r = num_traits::pow(growth, m) * x;
    if r >= BigRational::one() {
        return None;
    }
    let first = BigRational::from_integer(num_traits::pow(k, m)) * num_traits::pow(x.clone(), terms + 1);
    Some(first / (BigRational::one() - r))
}

/// Smallest truncation index whose certified tail bound is below `tol`.
pub fn s_m_min_terms(m: usize, x: &BigRational, tol: &BigRational) -> Result<usize> {
    check_unit_interval(x)?;
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let ok = |t: usize| s_m_tail_bound(m, x, t).is_some_and(|b| &b <= tol);
    let mut hi = 1usize;
    while !ok(hi) {
        hi *= 2;
    }
    // `ok` flips from false to true exactly once: the bound is undefined or
    // huge until the terms decrease and shrinks monotonically afterwards.
    let mut lo = hi / 2;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(hi)
}

/// Partial sum of `S_m(x)` whose dropped tail is certified to be at most
/// `2^-rel_bits` times the partial sum itself.
///
/// With `x = a/b`, the partial sum is `numerator / b^terms`, and the relative
/// tail bound is `rel_num / rel_den`.
#[derive(Clone, Debug)]
pub struct CertifiedPartialSum {
    pub terms: usize,
    pub numerator: BigInt,
    pub rel_num: BigInt,
    pub rel_den: BigInt,
}

/// Floating-point estimate of the smallest truncation meeting the relative
/// target, from log-sum-exp of the terms; certification is done exactly.
fn estimate_terms(m: usize, x: &BigRational, rel_bits: usize) -> usize {
    let lx = rational_ln(x);
    let ln_term = |k: usize| m as f64 * ((2 * k + 1) as f64).ln() + k as f64 * lx;
    // log-sum-exp of the terms, run far enough past the peak
    let mut peak = f64::NEG_INFINITY;
    let mut acc = 0.0f64;
    let mut k = 0usize;
    loop {
        let t = ln_term(k);
        if t > peak {
            acc = acc * (peak - t).exp() + 1.0;
            peak = t;
        } else {
            acc += (t - peak).exp();
        }
        if t < peak - 50.0 && k > 2 {
            break;
        }
        k += 1;
    }
    let ln_s = peak + acc.ln();
    let target = ln_s - rel_bits as f64 * std::f64::consts::LN_2;
    let mut k = 0usize;
    loop {
        let growth = m as f64 * (((2 * k + 5) as f64) / ((2 * k + 3) as f64)).ln() + lx;
        if growth < 0.0 {
            let ln_tail = ln_term(k + 1) - (-growth.exp()).ln_1p();
            if ln_tail < target {
                return k;
            }
        }
        k += 1;
    }
}

fn rational_ln(x: &BigRational) -> f64 {
    // ln(a/b) without overflowing either part into infinity
    let ln_big = |v: &BigInt| {
        let bits = v.bits();
        let shift = bits.saturating_sub(60);
        let top: BigInt = v >> shift;
        top.to_f64().unwrap_or(1.0).ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln_big(x.numer()) - ln_big(x.denom())
}

/// Exact relative tail test for truncation `terms`, or `None` while the terms
/// are still growing.
fn certify(m: usize, x: &BigRational, terms: usize, numerator: &BigInt) -> Option<(BigInt, BigInt)> {
    let (a, b) = (x.numer(), x.denom());
    let lead = num_traits::pow(BigInt::from(2 * terms + 3), m);
    let growth = num_traits::pow(BigInt::from(2 * terms + 5), m);
    // tail <= (2K+3)^(2m) a^(K+1) / (b^K D) with D = (2K+3)^m b - (2K+5)^m a
    let d = &lead * b - growth * a;
    if !d.is_positive() {
        return None;
    }
    let rel_num = &lead * &lead * num_traits::pow(a.clone(), terms + 1);
    let rel_den = d * numerator;
    Some((rel_num, rel_den))
}

/// Certified partial sum of `S_m(x)` with relative tail at most `2^-rel_bits`.
pub fn s_m_certified(m: usize, x: &BigRational, rel_bits: usize) -> Result<CertifiedPartialSum> {
    check_unit_interval(x)?;
    let mut terms = estimate_terms(m, x, rel_bits);
    loop {
        let numerator = s_m_numerator(m, x, terms);
        if let Some((rel_num, rel_den)) = certify(m, x, terms, &numerator) {
            if (&rel_num << rel_bits) <= rel_den {
                return Ok(CertifiedPartialSum {
                    terms,
                    numerator,
                    rel_num,
                    rel_den,
                });
            }
        }
        terms += terms / 16 + 1;
    }
}

/// One decimal coefficient per line, for debugging dumps.
pub fn dump_row(m: usize) -> String {
    eulerian_b_int(m)
        .coeffs()
        .iter()
        .map(|c| format!("{c}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &IntPoly) -> Vec<i64> {
        p.coeffs().iter().map(|c| c.try_into().unwrap()).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_rows() {
        assert_eq!(ints(&eulerian_b_int(0)), vec![1]);
        assert_eq!(ints(&eulerian_b_int(1)), vec![1, 1]);
        assert_eq!(ints(&eulerian_b_int(2)), vec![1, 6, 1]);
        assert_eq!(ints(&eulerian_b_int(3)), vec![1, 23, 23, 1]);
        assert_eq!(ints(&eulerian_b_int(4)), vec![1, 76, 230, 76, 1]);
    }

    #[test]
    fn series_identity_small() {
        assert!(series_identity_check(0));
        assert!(series_identity_check(1));
        assert!(series_identity_check(12));
    }

    #[test]
    fn separate_tables_agree() {
        let t = EulerianBTable::new();
        assert_eq!(t.max_m(), 0);
        assert_eq!(*t.row(9), *eulerian_b_int(9));
        assert_eq!(t.max_m(), 9);
    }

    #[test]
    fn partial_sums() {
        // single term
        assert_eq!(s_m_partial(2, &q(1, 2), 0).unwrap(), q(1, 1));
        // geometric series: 2 - 2^-60
        let s = s_m_partial(0, &q(1, 2), 60).unwrap();
        assert!((s - q(2, 1)).abs() <= q(2, 1) / BigRational::from_integer(BigInt::one() << 60));
        // (1+x)/(1-x)^2 = 6
        let s = s_m_partial(1, &q(1, 2), 200).unwrap();
        let tail = s_m_tail_bound(1, &q(1, 2), 200).unwrap();
        let err = q(6, 1) - s;
        assert!(err.is_positive() && err <= tail);
    }

    #[test]
    fn partial_sum_rejects_outside_unit_interval() {
        assert!(s_m_partial(1, &q(1, 1), 3).is_err());
        assert!(s_m_partial(1, &q(0, 1), 3).is_err());
        assert!(s_m_partial(1, &q(-1, 3), 3).is_err());
    }

    #[test]
    fn min_terms_meets_tolerance() {
        let x = q(3, 4);
        let tol = q(1, 1_000_000_000_000);
        let k = s_m_min_terms(7, &x, &tol).unwrap();
        assert!(s_m_tail_bound(7, &x, k).unwrap() <= tol);
        assert!(s_m_tail_bound(7, &x, k - 1).is_none_or(|b| b > tol));
    }

    #[test]
    fn certified_sum_brackets_closed_form() {
        // S_1(x) = (1+x)/(1-x)^2 = 6 at x = 1/2
        let c = s_m_certified(1, &q(1, 2), 80).unwrap();
        let partial = BigRational::new(c.numerator.clone(), num_traits::pow(BigInt::from(2), c.terms));
        let rel = BigRational::new(c.rel_num.clone(), c.rel_den.clone());
        let gap = q(6, 1) - &partial;
        assert!(gap.is_positive());
        assert!(gap <= &partial * &rel);
        assert!(rel <= BigRational::new(BigInt::one(), BigInt::one() << 80));
    }

    #[test]
    fn dump_format() {
        assert_eq!(dump_row(3), "1\n23\n23\n1\n");
    }
}
