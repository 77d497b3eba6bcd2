//! Convergence statistics: the ratio limits of `S_m` and `B_m`, the
//! Kolmogorov distance between the empirical and limiting zero
//! distributions, and the scaling of the extreme zeros.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::eulerb_poly::{eulerian_b_int, s_m_certified, CertifiedPartialSum};
use crate::hp::{Real, format_significant};
use crate::limitlaw::LimitLawContext;
use crate::zeros::EmpiricalMeasure;

/// A labelled sequence of statistic values indexed by `n` or `m`.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub statistic: String,
    pub params: Vec<usize>,
    pub values: Vec<Real>,
    pub target: Option<Real>,
}

impl ConvergenceReport {
    pub fn new(statistic: impl Into<String>, params: Vec<usize>, values: Vec<Real>, target: Option<Real>) -> Result<Self> {
        if params.len() != values.len() {
            return Err(Error::Domain(format!(
                "{} parameters but {} values",
                params.len(),
                values.len()
            )));
        }
        if values.iter().chain(target.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite value in report".into()));
        }
        Ok(Self {
            statistic: statistic.into(),
            params,
            values,
            target,
        })
    }

    /// `|value - target|` per entry, or the raw values without a target.
    pub fn deviations(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| match &self.target {
                Some(t) => (v - t).abs().to_f64(),
                None => v.to_f64(),
            })
            .collect()
    }

    /// `statistic,param,value,target` rows with `digits` significant digits;
    /// the target column is empty when there is none.
    pub fn to_csv_rows(&self, digits: usize) -> String {
        let target = self
            .target
            .as_ref()
            .map(|t| t.to_decimal(digits))
            .unwrap_or_default();
        self.params
            .iter()
            .zip(&self.values)
            .map(|(p, v)| format!("{},{},{},{}\n", self.statistic, p, v.to_decimal(digits), target))
            .collect()
    }
}

pub const CSV_HEADER: &str = "statistic,param,value,target\n";

pub fn is_strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// The dyadic rational nearest to `1/e` at `bits` bits of precision.
pub fn inverse_e(bits: usize) -> BigRational {
    Real::from_i64(-1, bits).exp().to_rational()
}

/// A ratio value with an absolute error bound.
#[derive(Clone, Debug)]
pub struct RatioEstimate {
    pub value: Real,
    pub error_bound: Real,
}

/// `(1/m) S_{m+1}(x)/S_m(x)` with a certified error bound; converges to
/// `2/(-log x)`.
pub fn s_ratio(m: usize, x: &BigRational, precision_bits: usize) -> Result<RatioEstimate> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let rel_bits = precision_bits + 32;
    let w = precision_bits + 64;
    let s0 = s_m_certified(m, x, rel_bits)?;
    let s1 = s_m_certified(m + 1, x, rel_bits)?;
    // S_i ~ N_i / b^K_i; bring both numerators over the same power of b
    let b = x.denom();
    let (mut top, mut bottom) = (s1.numerator.clone(), s0.numerator.clone() * BigInt::from(m));
    if s1.terms > s0.terms {
        bottom *= num_traits::pow(b.clone(), s1.terms - s0.terms);
    } else {
        top *= num_traits::pow(b.clone(), s0.terms - s1.terms);
    }
    let value = Real::from_bigint(&top, w) / Real::from_bigint(&bottom, w);
    let rel = |c: &CertifiedPartialSum| Real::from_bigint(&c.rel_num, w) / Real::from_bigint(&c.rel_den, w);
    // the ratio lies in [v/(1+r0), v(1+r1)], so |error| <= v (r0 + r1); the
    // last term absorbs rounding in the floating steps
    let slack = Real::one(w).scale_pow2(-(precision_bits as i32) + 2);
    let err = &value * (rel(&s0) + rel(&s1) + slack);
    Ok(RatioEstimate {
        value: value.with_precision(precision_bits),
        error_bound: err.with_precision(precision_bits),
    })
}

/// `(1/m) B_{m+1}(x)/B_m(x)`, exact up to the final rounding; converges to
/// `2(1-x)/(-log x)`.
pub fn b_ratio(m: usize, x: &BigRational, precision_bits: usize) -> Result<Real> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    if !(x.is_positive() && x < &BigRational::one()) {
        return Err(Error::Domain(format!("x = {x} is not in (0,1)")));
    }
    let (a, b) = (x.numer(), x.denom());
    // b^(m+1) B_{m+1}(a/b) over b^m B_m(a/b)
    let top = eulerian_b_int(m + 1).eval_homogeneous(a, b);
    let bottom = eulerian_b_int(m).eval_homogeneous(a, b) * b * BigInt::from(m);
    let w = precision_bits + 64;
    let v = Real::from_bigint(&top, w) / Real::from_bigint(&bottom, w);
    Ok(v.with_precision(precision_bits))
}

/// `2/(-log x)`.
pub fn s_ratio_target(x: &BigRational, precision_bits: usize) -> Real {
    let l = Real::from_rational(x, precision_bits).ln();
    Real::from_i64(-2, precision_bits) / l
}

/// `2(1-x)/(-log x)`.
pub fn b_ratio_target(x: &BigRational, precision_bits: usize) -> Real {
    let omx = Real::from_rational(&(BigRational::one() - x), precision_bits);
    s_ratio_target(x, precision_bits) * omx
}

/// Kolmogorov distance `sup |F_n - F|`, attained at a root from one side.
pub fn ks_distance(measure: &EmpiricalMeasure, ctx: &LimitLawContext) -> Real {
    let p = ctx.precision_bits();
    let total = Real::from_i64(measure.mass() as i64, p);
    let mut best = Real::zero(p);
    for (i, root) in measure.roots.iter().enumerate() {
        let f = ctx.cdf_rational(&root.midpoint);
        let after = Real::from_i64(i as i64 + 1, p) / &total;
        let before = Real::from_i64(i as i64, p) / &total;
        best = best.max((&after - &f).abs()).max((&before - &f).abs());
    }
    best
}

/// `x_k n^2 / k^2` for the `k`-th smallest root (1-based); the heuristic
/// limit is `pi^4/16`.
pub fn left_edge_scaling(measure: &EmpiricalMeasure, k: usize, precision_bits: usize) -> Result<Real> {
    if k == 0 || k > measure.mass() {
        return Err(Error::Domain(format!("root index {k} out of range")));
    }
    let n = BigRational::from_integer(BigInt::from(measure.n));
    let kk = BigRational::from_integer(BigInt::from(k));
    let v = &measure.roots[k - 1].midpoint * &n * &n / (&kk * &kk);
    Ok(Real::from_rational(&v, precision_bits))
}

/// `pi^4/16`.
pub fn left_edge_target(precision_bits: usize) -> Real {
    Real::pi(precision_bits).sqr().sqr().scale_pow2(-4)
}

/// Right-edge statistic and the resolution needed to compute it.
#[derive(Clone, Debug)]
pub struct RightEdge {
    /// `L(x_{n-1}) / (2n)`.
    pub value: Real,
    /// `1 - x_{n-1}`.
    pub gap: Real,
    /// Bits needed to carry the largest root to the resolved radius.
    pub required_bits: usize,
    /// `required_bits` exceeds the context precision, so the root was refined
    /// past the nominal working precision.
    pub escalated: bool,
}

/// `L(x_{n-1}) / (2n)` with `L(x) = log((1+sqrt x)/(1-sqrt x))`; the
/// heuristic limit is 1.
///
/// Fails with [`Error::Unresolved`] unless the refinement radius of the
/// largest root is at most `(1 - x)/100`.
pub fn right_edge_scaling(measure: &EmpiricalMeasure, ctx: &LimitLawContext) -> Result<RightEdge> {
    let p = ctx.precision_bits();
    let root = measure
        .roots
        .last()
        .ok_or_else(|| Error::Domain("empty measure".into()))?;
    let gap = BigRational::one() - &root.midpoint;
    let hundred = BigRational::from_integer(BigInt::from(100u32));
    if &root.radius * &hundred > gap {
        return Err(Error::Unresolved {
            radius: format_significant(&root.radius, 6),
            gap: format_significant(&gap, 6),
        });
    }
    let required_bits = if root.radius.is_zero() {
        root.midpoint.denom().bits() as usize
    } else {
        // smallest b with 2^-b <= radius
        let inv = BigRational::one() / &root.radius;
        (inv.ceil().to_integer().bits() as usize).max(1)
    };
    let l = ctx.edge_log_rational(&root.midpoint)?;
    let two_n = Real::from_i64(2 * measure.n as i64, p);
    Ok(RightEdge {
        value: l / two_n,
        gap: Real::from_rational(&gap, p),
        required_bits,
        escalated: required_bits > p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeros::default_eps;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn report_shape_is_checked() {
        let r = ConvergenceReport::new("x", vec![1, 2], vec![Real::one(64)], None);
        assert!(r.is_err());
        let r = ConvergenceReport::new("ks", vec![2], vec![Real::from_f64(0.5, 64)], None).unwrap();
        assert_eq!(r.to_csv_rows(3), "ks,2,0.500,\n");
    }

    #[test]
    fn ratio_identity_small_m() {
        let x = q(1, 3);
        for m in [1, 5, 17] {
            let s = s_ratio(m, &x, 128).unwrap();
            let b = b_ratio(m, &x, 128).unwrap();
            let diff = (b - s.value * Real::from_rational(&q(2, 3), 128)).abs();
            assert!(diff.to_f64() < 1e-30, "m={m}: {diff}");
            assert!(s.error_bound.to_f64() < 1e-30);
        }
    }

    #[test]
    fn ratios_at_half() {
        let x = q(1, 2);
        let s = s_ratio(400, &x, 128).unwrap().value.to_f64();
        assert!((s / (2.0 / 2f64.ln()) - 1.0).abs() < 0.01);
        let b = b_ratio(200, &x, 128).unwrap().to_f64();
        assert!((b / (1.0 / 2f64.ln()) - 1.0).abs() < 0.02);
    }

    #[test]
    fn n2_statistics() {
        let ctx = LimitLawContext::new(128).unwrap();
        let m = EmpiricalMeasure::compute(2, &default_eps()).unwrap();
        let ks = ks_distance(&m, &ctx).to_f64();
        assert!((ks - 0.505_376_703_223_121_9).abs() < 1e-12, "{ks}");
        let r = right_edge_scaling(&m, &ctx).unwrap();
        assert!((r.value.to_f64() - 0.772_242_476_211_15).abs() < 1e-12);
        assert!(!r.escalated);
    }
}
