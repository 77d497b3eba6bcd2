//! Adaptive Gauss–Kronrod quadrature (7/15 points) and integration against
//! the limiting zero density with both endpoint singularities transformed
//! away.
//!
//! This module is the independent side of the Stieltjes and normalisation
//! checks: it only ever evaluates the density itself, never the closed-form
//! distribution function or the limiting transform.

use std::f64::consts::PI;

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kr = fc * WGK[7];
    let mut ga = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kr += s * WGK[j];
        if j % 2 == 1 {
            ga += s * WG[j / 2];
        }
    }
    let value = kr * h;
    let error = ((kr - ga) * h).norm();
    (value, error)
}

/// Integrates `f` over `[a, b]`, bisecting the worst segment until the
/// summed error estimate is below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> QuadResult {
    let (v, e) = kronrod(&f, a, b);
    let mut segs = vec![Segment { a, b, value: v, error: e }];
    let mut evaluations = 15;
    loop {
        let total: Complex64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.error).sum();
        let converged = err <= abs_tol.max(rel_tol * total.norm());
        if converged || segs.len() >= max_segments {
            return QuadResult {
                value: total,
                error: err,
                evaluations,
                converged,
            };
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // segment cannot be split further in f64
            segs.push(s);
            let total: Complex64 = segs.iter().map(|s| s.value).sum();
            return QuadResult {
                value: total,
                error: segs.iter().map(|s| s.error).sum(),
                evaluations,
                converged: false,
            };
        }
        let (v1, e1) = kronrod(&f, s.a, mid);
        let (v2, e2) = kronrod(&f, mid, s.b);
        evaluations += 30;
        segs.push(Segment { a: s.a, b: mid, value: v1, error: e1 });
        segs.push(Segment { a: mid, b: s.b, value: v2, error: e2 });
    }
}

/// Limiting density from `x` and `1 - x`, so that points near 1 keep full
/// relative accuracy.
pub fn density_split(x: f64, one_minus_x: f64) -> f64 {
    let s = x.sqrt();
    let q = one_minus_x / ((1.0 + s) * (1.0 + s));
    let l = q.ln();
    2.0 / (s * one_minus_x * (l * l + PI * PI))
}

/// Piecewise integral of `rho(x) g(x)` over `(0,1)`.
#[derive(Clone, Copy, Debug)]
pub struct DensityIntegral {
    pub value: Complex64,
    pub error: f64,
    pub left_tail: Complex64,
    pub interior: Complex64,
    pub right_tail: Complex64,
    pub converged: bool,
}

/// `int_0^1 rho(x) g(x, 1-x) dx`, split at `delta` and `1 - delta`:
///
/// * `(0, delta)`: `x = u^2`, removing the `x^(-1/2)` singularity;
/// * `[delta, 1/2]` in `x` and `[1/2, 1 - delta]` in `w = 1 - x`;
/// * `(1 - delta, 1)`: the variable `l = log((1+sqrt x)/(1-sqrt x))`, in
///   which `rho(x) dx = 2/(l^2 + pi^2) dl`, mapped onto `[0,1)` by
///   `l = l0 + s/(1-s)`.
pub fn integrate_density<G: Fn(f64, f64) -> Complex64>(g: G, delta: f64, tol: f64) -> DensityIntegral {
    let max_segments = 4000;
    let left = integrate(
        |u| {
            let x = u * u;
            g(x, 1.0 - x) * density_split(x, 1.0 - x) * (2.0 * u)
        },
        0.0,
        delta.sqrt(),
        tol / 8.0,
        0.0,
        max_segments,
    );
    let mid_left = integrate(
        |x| g(x, 1.0 - x) * density_split(x, 1.0 - x),
        delta,
        0.5,
        tol / 8.0,
        0.0,
        max_segments,
    );
    let mid_right = integrate(
        |w| g(1.0 - w, w) * density_split(1.0 - w, w),
        delta,
        0.5,
        tol / 8.0,
        0.0,
        max_segments,
    );
    let s0 = (1.0 - delta).sqrt();
    let l0 = ((1.0 + s0) * (1.0 + s0) / delta).ln();
    let right = integrate(
        |s| {
            let l = l0 + s / (1.0 - s);
            let jac = 1.0 / ((1.0 - s) * (1.0 - s));
            let half = 0.5 * l;
            let x = half.tanh().powi(2);
            let omx = 1.0 / half.cosh().powi(2);
            g(x, omx) * (2.0 / (l * l + PI * PI) * jac)
        },
        0.0,
        1.0,
        tol / 8.0,
        0.0,
        max_segments,
    );
    let interior = mid_left.value + mid_right.value;
    DensityIntegral {
        value: left.value + interior + right.value,
        error: left.error + mid_left.error + mid_right.error + right.error,
        left_tail: left.value,
        interior,
        right_tail: right.value,
        converged: left.converged && mid_left.converged && mid_right.converged && right.converged,
    }
}

/// `int rho(x)/(z - x) dx` by [`integrate_density`].
pub fn stieltjes_quadrature(z: Complex64, tol: f64) -> DensityIntegral {
    integrate_density(|x, _| (z - x).inv(), 1e-12, tol)
}
