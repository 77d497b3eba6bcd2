//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Built with `harness = false`, so `cargo test` runs `main`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use xizero::asymptotics::{
    b_ratio, inverse_e, is_strictly_decreasing, ks_distance, left_edge_scaling, left_edge_target,
    right_edge_scaling, s_ratio,
};
use xizero::eulerb_poly::series_identity_check;
use xizero::hp::{Complex, Real};
use xizero::limitlaw::{LimitLawContext, StieltjesVariant};
use xizero::quadrature::{integrate_density, stieltjes_quadrature};
use xizero::verify::{run_verify, VerifyConfig};
use xizero::xi_family::{build_xi, log_derivative_formula};
use xizero::zeros::{default_eps, isolate_roots, refine_root, EmpiricalMeasure, SturmChain, parse_decimal};
use xizero::ExactPolynomial;

const PREC: usize = 128;

const SERIES_MAX_M: usize = 40;
const SERIES_BUDGET: Duration = Duration::from_secs(10);
const XI2_ROOT_TOL: &str = "1e-30";
const ZERO_COUNT_MAX_N: usize = 64;
const ZERO_COUNT_BUDGET: Duration = Duration::from_secs(300);
const LOG_DERIVATIVE_TOL: f64 = 1e-30;
const MASS_TOL: f64 = 1e-10;
const CDF_DERIVATIVE_STEP: f64 = 1e-8;
const CDF_DERIVATIVE_TOL: f64 = 1e-6;
const QUANTILE_INVERSE_TOL: f64 = 1e-20;
const STIELTJES_TOL: f64 = 1e-8;
const STIELTJES_POINTS: [(f64, f64); 4] = [(2.0, 0.0), (-1.0, 0.0), (0.5, 0.5), (0.0, 1.0)];
const QUADRATURE_TOL: f64 = 1e-12;
const INVERSION_EPS: f64 = 1e-6;
const INVERSION_TOL: f64 = 1e-3;
const RATIO_M: [usize; 4] = [50, 100, 200, 400];
const S_RATIO_TOL: f64 = 0.01;
const B_RATIO_TOL: f64 = 0.015;
const KS_N: [usize; 4] = [8, 16, 32, 64];
const EDGE_N: [usize; 3] = [16, 32, 64];
const RIGHT_EDGE_BRACKET: (f64, f64) = (0.5, 1.5);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn r(v: f64) -> Real {
    Real::from_f64(v, PREC)
}

fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

fn criterion_series() -> Outcome {
    let t = Instant::now();
    let bad: Vec<usize> = (0..=SERIES_MAX_M).filter(|&m| !series_identity_check(m)).collect();
    let dt = t.elapsed();
    outcome(
        bad.is_empty() && dt < SERIES_BUDGET,
        format!("m=0..{SERIES_MAX_M} failing={bad:?} time={dt:.2?} budget={SERIES_BUDGET:?}"),
    )
}

fn criterion_xi2() -> Outcome {
    let xi = match build_xi(2) {
        Ok(x) => x.xi_tilde,
        Err(e) => return outcome(false, e.to_string()),
    };
    let expected = ExactPolynomial::new(vec![q(5, 96), q(-6, 96)]);
    let closed = xi == expected;
    let eps = default_eps();
    let dev = isolate_roots(&xi).and_then(|iv| {
        if iv.len() != 1 {
            return Ok(None);
        }
        let root = refine_root(&xi, &iv[0], &eps)?;
        Ok(Some((root.midpoint - q(5, 6)).abs()))
    });
    match dev {
        Ok(Some(d)) => {
            let tol = parse_decimal(XI2_ROOT_TOL).expect("decimal tolerance");
            let dev = xizero::hp::rational_to_f64(&d);
            outcome(
                closed && d <= tol,
                format!("closed_form={closed} |root-5/6|={} tol={XI2_ROOT_TOL}", sci(dev)),
            )
        }
        Ok(None) => outcome(false, "expected exactly one isolating interval"),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_zero_count() -> Outcome {
    let t = Instant::now();
    let (zero, one) = (BigRational::zero(), BigRational::one());
    let bad: Vec<String> = (2..=ZERO_COUNT_MAX_N)
        .into_par_iter()
        .filter_map(|n| {
            let chain = match build_xi(n) {
                Ok(x) => SturmChain::new(&x.xi_tilde.primitive_int()),
                Err(e) => return Some(format!("n={n}:{e}")),
            };
            match chain.count(&zero, &one) {
                Ok(c) if c == n - 1 && chain.gcd_degree() == 0 => None,
                Ok(c) => Some(format!("n={n}:count={c},gcd_degree={}", chain.gcd_degree())),
                Err(e) => Some(format!("n={n}:{e}")),
            }
        })
        .collect();
    let dt = t.elapsed();
    outcome(
        bad.is_empty() && dt < ZERO_COUNT_BUDGET,
        format!("n=2..{ZERO_COUNT_MAX_N} failing={bad:?} time={dt:.2?} budget={ZERO_COUNT_BUDGET:?}"),
    )
}

fn criterion_log_derivative() -> Outcome {
    let points = [q(1, 8), q(1, 3), q(1, 2), q(2, 3), q(7, 8)];
    let worst = (2..=20usize)
        .into_par_iter()
        .map(|n| -> xizero::Result<f64> {
            let xi = build_xi(n)?;
            let mut worst = 0.0f64;
            for x in &points {
                let direct = Real::from_rational(&xi.log_derivative_direct(x)?, PREC);
                let formula = log_derivative_formula(n, &Real::from_rational(x, PREC), PREC)?;
                worst = worst.max((direct - formula).abs().to_f64());
            }
            Ok(worst)
        })
        .collect::<xizero::Result<Vec<f64>>>();
    match worst {
        Ok(v) => {
            let w = v.into_iter().fold(0.0, f64::max);
            outcome(
                w < LOG_DERIVATIVE_TOL,
                format!("n=2..20 points=5 max_dev={} tol={}", sci(w), sci(LOG_DERIVATIVE_TOL)),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_limit_law(ctx: &LimitLawContext) -> Outcome {
    let result = (|| -> xizero::Result<(f64, f64, f64, f64, bool)> {
        let quad = integrate_density(|_, _| Complex64::new(1.0, 0.0), 1e-12, QUADRATURE_TOL);
        let mass_quad = (quad.value.re - 1.0).abs();
        let mut mass_subst = 0.0f64;
        let mut deriv = 0.0f64;
        let h = r(CDF_DERIVATIVE_STEP);
        let two_h = r(2.0 * CDF_DERIVATIVE_STEP);
        for k in 1..100 {
            let t = r(k as f64 / 100.0);
            let j = ctx.quantile_jacobian_product(&t)?;
            mass_subst = mass_subst.max((j - Real::one(PREC)).abs().to_f64());
            let fd = (ctx.cdf(&(&t + &h)) - ctx.cdf(&(&t - &h))) / &two_h;
            let rho = ctx.density(&t)?;
            deriv = deriv.max(((fd - &rho) / rho).abs().to_f64());
        }
        let mut inverse = 0.0f64;
        for k in 1..100 {
            let p = r(k as f64 / 100.0);
            inverse = inverse.max((ctx.cdf(&ctx.quantile(&p)?) - &p).abs().to_f64());
        }
        Ok((mass_quad, mass_subst, deriv, inverse, quad.converged))
    })();
    match result {
        Ok((mq, ms, d, i, conv)) => outcome(
            mq < MASS_TOL && ms < MASS_TOL && conv && d < CDF_DERIVATIVE_TOL && i < QUANTILE_INVERSE_TOL,
            format!(
                "mass_quadrature={} mass_substitution={} tol={} cdf'_vs_rho={} tol={} cdf_quantile={} tol={}",
                sci(mq),
                sci(ms),
                sci(MASS_TOL),
                sci(d),
                sci(CDF_DERIVATIVE_TOL),
                sci(i),
                sci(QUANTILE_INVERSE_TOL)
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_stieltjes(ctx: &LimitLawContext) -> Outcome {
    let result = (|| -> xizero::Result<(f64, f64, f64)> {
        let mut unit = 0.0f64;
        let mut halved = f64::INFINITY;
        for &(re, im) in &STIELTJES_POINTS {
            let quad = stieltjes_quadrature(Complex64::new(re, im), QUADRATURE_TOL);
            if !quad.converged {
                return Err(xizero::Error::Domain(format!("quadrature did not converge at {re}{im:+}i")));
            }
            let z = Complex::from_f64(re, im, PREC);
            let u = ctx.stieltjes_variant(&z, StieltjesVariant::Unit)?.to_f64();
            let h = ctx.stieltjes_variant(&z, StieltjesVariant::Halved)?.to_f64();
            unit = unit.max((u - quad.value).norm());
            halved = halved.min((h - quad.value).norm());
        }
        let quarter = r(0.25);
        let rho = ctx.density(&quarter)?;
        let inv = ctx.inversion_density(&quarter, &r(INVERSION_EPS))?;
        Ok((unit, halved, ((inv - &rho) / rho).abs().to_f64()))
    })();
    match result {
        Ok((unit, halved, inv)) => {
            // exactly one variant may agree with the quadrature
            let unique = unit < STIELTJES_TOL && halved >= STIELTJES_TOL;
            outcome(
                unique && inv < INVERSION_TOL,
                format!(
                    "unit_max_dev={} halved_min_dev={} tol={} variant={} inversion_rel={} tol={}",
                    sci(unit),
                    sci(halved),
                    sci(STIELTJES_TOL),
                    if unique { StieltjesVariant::Unit.label() } else { "undecided" },
                    sci(inv),
                    sci(INVERSION_TOL)
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_ratios() -> Outcome {
    let x = inverse_e(PREC);
    let s_target = 2.0;
    let b_target = 2.0 * (1.0 - (-1.0f64).exp());
    let errors = RATIO_M
        .par_iter()
        .map(|&m| -> xizero::Result<(f64, f64)> {
            let s = s_ratio(m, &x, PREC)?.value.to_f64();
            let b = b_ratio(m, &x, PREC)?.to_f64();
            Ok(((s - s_target).abs(), (b - b_target).abs()))
        })
        .collect::<xizero::Result<Vec<_>>>();
    match errors {
        Ok(v) => {
            let (s, b): (Vec<f64>, Vec<f64>) = v.into_iter().unzip();
            let (s_last, b_last) = (s[s.len() - 1], b[b.len() - 1]);
            let pass =
                s_last < S_RATIO_TOL && b_last < B_RATIO_TOL && is_strictly_decreasing(&s) && is_strictly_decreasing(&b);
            let fmt = |v: &[f64]| v.iter().map(|e| sci(*e)).collect::<Vec<_>>().join(",");
            outcome(
                pass,
                format!(
                    "m={RATIO_M:?} s_err=[{}] tol={S_RATIO_TOL} b_err=[{}] tol={B_RATIO_TOL}",
                    fmt(&s),
                    fmt(&b)
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_ks(ctx: &LimitLawContext, measures: &BTreeMap<usize, EmpiricalMeasure>) -> Outcome {
    let ks: Vec<f64> = KS_N.iter().map(|n| ks_distance(&measures[n], ctx).to_f64()).collect();
    let halved = ks[ks.len() - 1] < ks[0] / 2.0;
    outcome(
        is_strictly_decreasing(&ks) && halved,
        format!(
            "n={KS_N:?} ks=[{}] ks(64)<ks(8)/2={halved}",
            ks.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(",")
        ),
    )
}

fn criterion_edges(ctx: &LimitLawContext, measures: &BTreeMap<usize, EmpiricalMeasure>) -> Outcome {
    let target = left_edge_target(PREC);
    let left = EDGE_N
        .iter()
        .map(|n| -> xizero::Result<f64> {
            let v = left_edge_scaling(&measures[n], 1, PREC)?;
            Ok((v / &target - Real::one(PREC)).abs().to_f64())
        })
        .collect::<xizero::Result<Vec<f64>>>();
    let right = EDGE_N
        .iter()
        .map(|n| right_edge_scaling(&measures[n], ctx))
        .collect::<xizero::Result<Vec<_>>>();
    match (left, right) {
        (Ok(left), Ok(right)) => {
            let values: Vec<f64> = right.iter().map(|e| e.value.to_f64()).collect();
            let bracket = values
                .iter()
                .all(|v| RIGHT_EDGE_BRACKET.0 < *v && *v < RIGHT_EDGE_BRACKET.1);
            let escalated: Vec<usize> = EDGE_N
                .iter()
                .zip(&right)
                .filter(|(_, e)| e.escalated)
                .map(|(n, _)| *n)
                .collect();
            let bits: Vec<usize> = right.iter().map(|e| e.required_bits).collect();
            outcome(
                is_strictly_decreasing(&left) && bracket && !escalated.is_empty(),
                format!(
                    "n={EDGE_N:?} left_dev=[{}] right=[{}] bracket={RIGHT_EDGE_BRACKET:?} required_bits={bits:?} \
                     escalated_n={escalated:?}",
                    left.iter().map(|v| sci(*v)).collect::<Vec<_>>().join(","),
                    values.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(",")
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => outcome(false, e.to_string()),
    }
}

fn criterion_determinism() -> Outcome {
    let cfg = VerifyConfig::default();
    match (run_verify(&cfg), run_verify(&cfg)) {
        (Ok(a), Ok(b)) => {
            let (a_text, b_text) = (a.render(), b.render());
            let same = a_text == b_text;
            let failed = a.failures().count();
            outcome(
                same && a.passed(),
                format!(
                    "identical={same} bytes={} checks={} failed={failed}",
                    a_text.len(),
                    a.checks.len()
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => outcome(false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let ctx = LimitLawContext::new(PREC).expect("128-bit context");
    let eps = default_eps();
    let measures: xizero::Result<BTreeMap<usize, EmpiricalMeasure>> = KS_N
        .par_iter()
        .map(|&n| EmpiricalMeasure::compute(n, &eps).map(|m| (n, m)))
        .collect();

    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 series_identity", criterion_series()),
        ("2 xi2_closed_form_and_root", criterion_xi2()),
        ("3 zero_count_and_simplicity", criterion_zero_count()),
        ("4 log_derivative_identity", criterion_log_derivative()),
        ("5 limit_law_consistency", criterion_limit_law(&ctx)),
        ("6 stieltjes_consistency", criterion_stieltjes(&ctx)),
        ("7 ratio_limits", criterion_ratios()),
    ];
    match &measures {
        Ok(ms) => {
            results.push(("8 cdf_convergence", criterion_ks(&ctx, ms)));
            results.push(("9 edge_laws", criterion_edges(&ctx, ms)));
        }
        Err(e) => {
            results.push(("8 cdf_convergence", outcome(false, e.to_string())));
            results.push(("9 edge_laws", outcome(false, e.to_string())));
        }
    }
    results.push(("10 determinism", criterion_determinism()));

    let mut failures = 0;
    for (name, o) in &results {
        if !o.pass {
            failures += 1;
        }
        println!("{} {name} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!(
        "acceptance passed={} failed={failures} time={:.1?}",
        results.len() - failures,
        start.elapsed()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
