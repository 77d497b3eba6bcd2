//! The full invariant suite, rendered as a deterministic plain-text report.
//!
//! Each line is `<PASS|FAIL> <suite> <check> measured=<value> tolerance=<value>`;
//! `note` lines carry context such as the confirmed Stieltjes variant and
//! right-edge precision escalation. The report contains no timings, so two
//! runs with the same configuration produce identical bytes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::asymptotics::{
    b_ratio, b_ratio_target, inverse_e, is_strictly_decreasing, ks_distance, left_edge_scaling, left_edge_target,
    right_edge_scaling, s_ratio, s_ratio_target,
};
use crate::error::{Error, Result};
use crate::eulerb_poly::{eulerian_b_int, series_identity_check, signed_permutation_count};
use crate::hp::{decimal_digits, format_f64, format_significant, Complex, Real};
use crate::limitlaw::{LimitLawContext, StieltjesVariant};
use crate::quadrature::{integrate_density, stieltjes_quadrature};
use crate::xi_family::{build_xi, is_squarefree, log_derivative_formula};
use crate::zeros::{format_compact, isolate_roots, refine_root, EmpiricalMeasure, SturmChain};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n_list: Vec<usize>,
    pub eps: BigRational,
    pub precision_bits: usize,
}

impl Default for VerifyConfig {
    /// `n = 8, 16, 32, 64` at `eps = 1e-30` and 128 bits.
    fn default() -> Self {
        Self {
            n_list: vec![8, 16, 32, 64],
            eps: crate::zeros::default_eps(),
            precision_bits: 128,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::Domain("n_list is empty".into()));
        }
        if self.n_list.iter().any(|&n| n < 2) {
            return Err(Error::Domain("every n must be at least 2".into()));
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("n_list must be sorted and free of duplicates".into()));
        }
        let limit = BigRational::new(BigInt::one(), BigInt::from(1_000_000u32));
        if !self.eps.is_positive() || self.eps > limit {
            return Err(Error::Domain("eps must lie in (0, 1e-6]".into()));
        }
        if self.precision_bits < 64 {
            return Err(Error::Domain("precision must be at least 64 bits".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub measured: String,
    pub tolerance: String,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub header: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.header);
        for c in &self.checks {
            out.push_str(&format!(
                "{} {} {} measured={} tolerance={}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.suite,
                c.name,
                c.measured,
                c.tolerance
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note {n}\n"));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "summary passed={} failed={}\n",
            self.checks.len() - failed,
            failed
        ));
        out
    }
}

/// Supplies the refined zero measure for a given `n`, e.g. from a cache.
pub type MeasureSource<'a> = dyn Fn(usize) -> Result<EmpiricalMeasure> + Sync + 'a;

struct Env<'a> {
    cfg: &'a VerifyConfig,
    ctx: LimitLawContext,
    digits: usize,
    measures: BTreeMap<usize, EmpiricalMeasure>,
}

impl Env<'_> {
    fn real(&self, v: &Real) -> String {
        v.to_decimal(self.digits)
    }

    fn float(&self, v: f64) -> String {
        format_f64(v, self.digits)
    }

    fn r(&self, v: f64) -> Real {
        Real::from_f64(v, self.cfg.precision_bits)
    }
}

type Outcome = (Vec<Check>, Vec<String>);

fn check(suite: &'static str, name: impl Into<String>, measured: String, tolerance: impl Into<String>, pass: bool) -> Check {
    Check {
        suite,
        name: name.into(),
        measured,
        tolerance: tolerance.into(),
        pass,
    }
}

fn failed(suite: &'static str, name: impl Into<String>, err: &Error) -> Check {
    let msg = err.to_string().replace(' ', "_");
    check(suite, name, format!("error:{msg}"), "n/a", false)
}

/// Runs every suite with roots from `EmpiricalMeasure::compute`.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    run_verify_with(cfg, &|n| EmpiricalMeasure::compute(n, &cfg.eps))
}

pub fn run_verify_with(cfg: &VerifyConfig, source: &MeasureSource<'_>) -> Result<VerifyReport> {
    cfg.validate()?;
    let ctx = LimitLawContext::new(cfg.precision_bits)?;
    let mut wanted: Vec<usize> = cfg.n_list.clone();
    wanted.push(2);
    wanted.sort_unstable();
    wanted.dedup();
    let measures = wanted
        .par_iter()
        .map(|&n| source(n).map(|m| (n, m)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let env = Env {
        cfg,
        ctx,
        digits: decimal_digits(cfg.precision_bits),
        measures,
    };
    let suites: Vec<fn(&Env) -> Outcome> = vec![
        suite_eulerb,
        suite_xi,
        suite_zeros,
        suite_limitlaw,
        suite_stieltjes,
        suite_ratios,
        suite_edges,
    ];
    let results: Vec<Outcome> = suites.par_iter().map(|s| s(&env)).collect();
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for (c, n) in results {
        checks.extend(c);
        notes.extend(n);
    }
    let n_list: Vec<String> = cfg.n_list.iter().map(|n| n.to_string()).collect();
    Ok(VerifyReport {
        header: format!(
            "xizero verify v1 precision_bits={} eps={} n_list={}",
            cfg.precision_bits,
            format_compact(&cfg.eps),
            n_list.join(",")
        ),
        checks,
        notes,
    })
}

fn suite_eulerb(_env: &Env) -> Outcome {
    const SUITE: &str = "eulerb_poly";
    let series = (0..=40).all(series_identity_check);
    let rows = (0..=40).all(|m| {
        let row = eulerian_b_int(m);
        let c = row.coeffs();
        let palindromic = c.iter().eq(c.iter().rev());
        let positive = c.iter().all(|v| v.is_positive());
        let total: BigInt = c.iter().sum();
        palindromic && positive && total == signed_permutation_count(m)
    });
    (
        vec![
            check(SUITE, "series_identity_m<=40", series.to_string(), "exact", series),
            check(SUITE, "rows_palindromic_positive_sum_2^m_m!_m<=40", rows.to_string(), "exact", rows),
        ],
        vec![],
    )
}

fn suite_xi(env: &Env) -> Outcome {
    const SUITE: &str = "xi_family";
    let mut checks = Vec::new();
    let closed = build_xi(2)
        .map(|x| {
            x.xi_tilde
                == crate::poly::ExactPolynomial::new(vec![
                    BigRational::new(5.into(), 96.into()),
                    BigRational::new((-6).into(), 96.into()),
                ])
        })
        .unwrap_or(false);
    checks.push(check(SUITE, "xi2_closed_form_(5-6x)/96", closed.to_string(), "exact", closed));

    let points = [(1, 8), (1, 3), (1, 2), (2, 3), (7, 8)];
    let prec = 128.max(env.cfg.precision_bits);
    let worst: Result<Real> = (2..=20usize)
        .into_par_iter()
        .map(|n| -> Result<Real> {
            let xi = build_xi(n)?;
            let mut worst = Real::zero(prec);
            for &(a, b) in &points {
                let q = BigRational::new(a.into(), b.into());
                let direct = Real::from_rational(&xi.log_derivative_direct(&q)?, prec);
                let formula = log_derivative_formula(n, &Real::from_rational(&q, prec), prec)?;
                worst = worst.max((direct - formula).abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().fold(Real::zero(prec), Real::max));
    let tol = Real::from_f64(1e-30, prec);
    checks.push(match worst {
        Ok(w) => {
            let pass = w < tol;
            check(SUITE, "log_derivative_identity_n=2..20", env.real(&w), "1e-30", pass)
        }
        Err(e) => failed(SUITE, "log_derivative_identity_n=2..20", &e),
    });
    (checks, vec![])
}

fn suite_zeros(env: &Env) -> Outcome {
    const SUITE: &str = "zeros";
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    let five_sixths = BigRational::new(5.into(), 6.into());
    let xi2 = build_xi(2).and_then(|x| {
        let iv = isolate_roots(&x.xi_tilde)?;
        let r = refine_root(&x.xi_tilde, &iv[0], &env.cfg.eps)?;
        Ok((r.midpoint - &five_sixths).abs())
    });
    checks.push(match xi2 {
        Ok(d) => {
            let pass = d <= env.cfg.eps;
            check(SUITE, "xi2_root_5/6", format_significant(&d, env.digits), format_compact(&env.cfg.eps), pass)
        }
        Err(e) => failed(SUITE, "xi2_root_5/6", &e),
    });

    let top = env.cfg.n_list.iter().copied().max().unwrap_or(2).max(2);
    let zero = BigRational::zero();
    let one = BigRational::one();
    let bad: Vec<String> = (2..=top)
        .into_par_iter()
        .filter_map(|n| {
            let ok = build_xi(n).and_then(|x| {
                let count = SturmChain::new(&x.xi_tilde.primitive_int()).count(&zero, &one)?;
                Ok(count == n - 1 && is_squarefree(&x.xi_tilde))
            });
            match ok {
                Ok(true) => None,
                _ => Some(n.to_string()),
            }
        })
        .collect();
    let pass = bad.is_empty();
    let measured = if pass { "all".to_string() } else { format!("failing_n={}", bad.join(",")) };
    checks.push(check(SUITE, format!("sturm_count_n-1_squarefree_n=2..{top}"), measured, "exact", pass));

    for (n, m) in &env.measures {
        let sorted = m.roots.windows(2).all(|w| w[0].midpoint < w[1].midpoint);
        let inside = m
            .roots
            .iter()
            .all(|r| r.midpoint.is_positive() && r.midpoint < one && r.radius <= m.eps);
        let round_trip = EmpiricalMeasure::from_cache_text(&m.to_cache_text()).is_ok();
        let pass = m.mass() == n - 1 && sorted && inside && round_trip;
        checks.push(check(
            SUITE,
            format!("refined_roots_n={n}"),
            format!("count={},sorted={sorted},in_(0,1)={inside},cache={round_trip}", m.mass()),
            format!("count={}", n - 1),
            pass,
        ));
        notes.push(format!("zeros n={n} all {} roots real and simple in (0,1)", n - 1));
    }
    (checks, notes)
}

fn suite_limitlaw(env: &Env) -> Outcome {
    const SUITE: &str = "limitlaw";
    let ctx = &env.ctx;
    let p = env.cfg.precision_bits;
    let mut checks = Vec::new();

    // normalisation through the quantile substitution
    let analytic = (1..100)
        .map(|k| ctx.quantile_jacobian_product(&env.r(k as f64 / 100.0)))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().map(|x| (x - Real::one(p)).abs()).fold(Real::zero(p), Real::max));
    checks.push(match analytic {
        Ok(w) => check(SUITE, "normalisation_quantile_substitution", env.real(&w), "1e-10", w.to_f64() < 1e-10),
        Err(e) => failed(SUITE, "normalisation_quantile_substitution", &e),
    });

    let quad = integrate_density(|_, _| Complex64::new(1.0, 0.0), 1e-12, 1e-12);
    let dev = (quad.value.re - 1.0).abs();
    checks.push(check(
        SUITE,
        "normalisation_quadrature",
        env.float(dev),
        "1e-10",
        dev < 1e-10 && quad.converged,
    ));

    let h = env.r(1e-8);
    let two_h = env.r(2e-8);
    let deriv: Result<Real> = (1..100)
        .map(|k| -> Result<Real> {
            let x = env.r(k as f64 / 100.0);
            let fd = (ctx.cdf(&(&x + &h)) - ctx.cdf(&(&x - &h))) / &two_h;
            let rho = ctx.density(&x)?;
            Ok(((fd - &rho) / rho).abs())
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().fold(Real::zero(p), Real::max));
    checks.push(match deriv {
        Ok(w) => check(SUITE, "cdf_derivative_equals_density_99pt", env.real(&w), "1e-6", w.to_f64() < 1e-6),
        Err(e) => failed(SUITE, "cdf_derivative_equals_density_99pt", &e),
    });

    let inverse = (|| -> Result<Real> {
        let mut worst = Real::zero(p);
        for k in 1..100 {
            let prob = env.r(k as f64 / 100.0);
            worst = worst.max((ctx.cdf(&ctx.quantile(&prob)?) - &prob).abs());
        }
        for k in 1..100 {
            let x = env.r(k as f64 / 100.0);
            worst = worst.max((ctx.quantile(&ctx.cdf(&x))? - &x).abs());
        }
        Ok(worst)
    })();
    let tol = if p >= 128 { 1e-20 } else { 1e-12 };
    checks.push(match inverse {
        Ok(w) => check(SUITE, "quantile_cdf_inverse", env.real(&w), format_f64(tol, 2), w.to_f64() < tol),
        Err(e) => failed(SUITE, "quantile_cdf_inverse", &e),
    });

    let anchors: Result<Vec<(String, f64, f64, f64)>> = (|| {
        Ok(vec![
            ("density_1/4", ctx.density(&env.r(0.25))?.to_f64(), 0.481_497_552_449_614_5, 1e-15),
            ("cdf_1/4", ctx.cdf(&env.r(0.25)).to_f64(), 0.214_163_206_890_443_5, 1e-15),
            ("quantile_1/2", ctx.quantile(&env.r(0.5))?.to_f64(), 0.841_168_406_819_936_7, 1e-15),
        ]
        .into_iter()
        .map(|(a, b, c, d)| (a.to_string(), b, c, d))
        .collect())
    })();
    match anchors {
        Ok(v) => {
            for (name, got, want, tol) in v {
                let d = (got - want).abs();
                checks.push(check(SUITE, name, env.float(got), format!("{}+-{}", env.float(want), format_f64(tol, 2)), d < tol));
            }
        }
        Err(e) => checks.push(failed(SUITE, "anchors", &e)),
    }

    let small = env.r(1e-8);
    let edge = ctx
        .density(&small)
        .map(|d| (d * Real::pi(p).sqr() * small.sqrt() / Real::from_i64(2, p) - Real::one(p)).abs());
    checks.push(match edge {
        Ok(w) => check(SUITE, "density_left_edge_2/(pi^2_sqrt_x)", env.real(&w), "1e-2", w.to_f64() < 1e-2),
        Err(e) => failed(SUITE, "density_left_edge", &e),
    });

    let tiny = env.r(1e-6);
    let qs = ctx
        .quantile(&tiny)
        .map(|q| (q / tiny.sqr() / left_edge_target(p) - Real::one(p)).abs());
    checks.push(match qs {
        Ok(w) => check(SUITE, "quantile_small_p_over_p^2_to_pi^4/16", env.real(&w), "1e-4", w.to_f64() < 1e-4),
        Err(e) => failed(SUITE, "quantile_small_p", &e),
    });
    (checks, vec![])
}

fn suite_stieltjes(env: &Env) -> Outcome {
    const SUITE: &str = "limitlaw";
    let ctx = &env.ctx;
    let p = env.cfg.precision_bits;
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    let points = [(2.0, 0.0), (-1.0, 0.0), (0.5, 0.5), (0.0, 1.0)];
    let mut unit_ok = true;
    let mut halved_ok = true;
    let mut worst_unit = 0.0f64;
    let mut best_halved = f64::INFINITY;
    for &(re, im) in &points {
        let z = Complex::from_f64(re, im, p);
        let q = stieltjes_quadrature(Complex64::new(re, im), 1e-12);
        let name = format!("stieltjes_vs_quadrature_z={re}{im:+}i");
        match (
            ctx.stieltjes_variant(&z, StieltjesVariant::Unit),
            ctx.stieltjes_variant(&z, StieltjesVariant::Halved),
        ) {
            (Ok(u), Ok(h)) => {
                let du = (u.to_f64() - q.value).norm();
                let dh = (h.to_f64() - q.value).norm();
                worst_unit = worst_unit.max(du);
                best_halved = best_halved.min(dh);
                unit_ok &= du < 1e-8 && q.converged;
                halved_ok &= dh < 1e-8;
                checks.push(check(SUITE, name, env.float(du), "1e-8", du < 1e-8 && q.converged));
            }
            (Err(e), _) | (_, Err(e)) => checks.push(failed(SUITE, name, &e)),
        }
    }
    let decided = unit_ok && !halved_ok;
    checks.push(check(
        SUITE,
        "stieltjes_variant_unique",
        format!("unit={unit_ok},halved={halved_ok}"),
        "exactly_one",
        decided,
    ));
    if decided {
        notes.push(format!(
            "stieltjes confirmed variant: {} (max deviation {}); rejected variant {} deviates by at least {}",
            StieltjesVariant::Unit.label(),
            format_f64(worst_unit, 3),
            StieltjesVariant::Halved.label(),
            format_f64(best_halved, 3)
        ));
    }

    let big = ctx
        .stieltjes_limit(&Complex::from_f64(1e6, 0.0, p))
        .map(|s| (s.re * env.r(1e6) - Real::one(p)).abs());
    checks.push(match big {
        Ok(w) => check(SUITE, "stieltjes_z*s(z)_to_1_at_1e6", env.real(&w), "1e-2", w.to_f64() < 1e-2),
        Err(e) => failed(SUITE, "stieltjes_z*s(z)_to_1_at_1e6", &e),
    });

    let mut herglotz = true;
    for a in [-2.0, -0.5, 0.1, 0.5, 0.9, 1.5, 3.0] {
        for b in [1e-3, 0.1, 1.0, 10.0] {
            match ctx.stieltjes_limit(&Complex::from_f64(a, b, p)) {
                Ok(s) => herglotz &= s.im.is_negative(),
                Err(_) => herglotz = false,
            }
        }
    }
    checks.push(check(SUITE, "herglotz_im_s<0_upper_half_plane", herglotz.to_string(), "28_points", herglotz));

    let quarter = env.r(0.25);
    let inv = (|| -> Result<(f64, Vec<f64>, f64)> {
        let rho = ctx.density(&quarter)?;
        let rel = |v: Real, r: &Real| ((v - r) / r).abs().to_f64();
        let at = rel(ctx.inversion_density(&quarter, &env.r(1e-6))?, &rho);
        let seq = [1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&e| Ok(rel(ctx.inversion_density(&quarter, &env.r(e))?, &rho)))
            .collect::<Result<Vec<_>>>()?;
        let x99 = env.r(0.99);
        let rho99 = ctx.density(&x99)?;
        let edge = rel(ctx.inversion_density(&x99, &env.r(1e-8))?, &rho99);
        Ok((at, seq, edge))
    })();
    match inv {
        Ok((at, seq, edge)) => {
            checks.push(check(SUITE, "inversion_density_1/4_eps=1e-6", env.float(at), "1e-3", at < 1e-3));
            let mono = is_strictly_decreasing(&seq);
            let shown: Vec<String> = seq.iter().map(|v| format_f64(*v, 6)).collect();
            checks.push(check(SUITE, "inversion_error_decreasing_eps=1e-3,1e-4,1e-5", shown.join(";"), "decreasing", mono));
            checks.push(check(SUITE, "inversion_density_0.99_eps=1e-8", env.float(edge), "1e-2", edge < 1e-2));
        }
        Err(e) => checks.push(failed(SUITE, "inversion_density", &e)),
    }

    // empirical transform for the refined measures
    let two = Complex::from_f64(2.0, 0.0, p);
    // each root moves 1/(2-x) by at most 2 radius, and radius <= eps; the
    // second term covers rounding at the working precision
    let root_tol = crate::hp::rational_to_f64(&env.cfg.eps) * 2.0 + 2f64.powi(8 - p as i32);
    let root_tol_s = format_f64(root_tol, 3);
    if let Some(m2) = env.measures.get(&2) {
        let r = ctx.stieltjes_empirical(m2, &two).map(|s| (s.re - Real::from_rational(&BigRational::new(6.into(), 7.into()), p)).abs());
        checks.push(match r {
            Ok(w) => check(SUITE, "stieltjes_empirical_n=2_z=2_is_6/7", env.real(&w), root_tol_s.clone(), w.to_f64() < root_tol),
            Err(e) => failed(SUITE, "stieltjes_empirical_n=2_z=2", &e),
        });
        let near = Complex::new(
            Real::from_rational(&BigRational::new(5.into(), 6.into()), p) + env.r(1e-30),
            Real::zero(p),
        );
        let flagged = matches!(ctx.stieltjes_empirical(m2, &near), Err(Error::NearSingularity { .. }));
        checks.push(check(SUITE, "stieltjes_empirical_root_proximity_flagged", flagged.to_string(), "flagged", flagged));
    }
    let z2q = BigRational::from_integer(2.into());
    for (n, m) in &env.measures {
        let r = (|| -> Result<Real> {
            let xi = build_xi(*n)?;
            let exact = xi.log_derivative_direct(&z2q)? / BigRational::from_integer(BigInt::from(n - 1));
            let s = ctx.stieltjes_empirical(m, &two)?;
            Ok((s.re - Real::from_rational(&exact, p)).abs())
        })();
        let name = format!("stieltjes_empirical_matches_log_derivative_n={n}");
        checks.push(match r {
            Ok(w) => check(SUITE, name, env.real(&w), root_tol_s.clone(), w.to_f64() < root_tol),
            Err(e) => failed(SUITE, name, &e),
        });
    }
    if let Some((&n, m)) = env.measures.iter().next_back() {
        if n >= 64 {
            let r = (|| -> Result<Real> {
                Ok((ctx.stieltjes_empirical(m, &two)?.re - ctx.stieltjes_limit(&two)?.re).abs())
            })();
            let name = format!("stieltjes_empirical_n={n}_near_limit_z=2");
            checks.push(match r {
                Ok(w) => check(SUITE, name, env.real(&w), "0.05", w.to_f64() < 0.05),
                Err(e) => failed(SUITE, name, &e),
            });
        }
    }
    (checks, notes)
}

fn suite_ratios(env: &Env) -> Outcome {
    const SUITE: &str = "asymptotics";
    let p = 128.max(env.cfg.precision_bits);
    let x = inverse_e(128);
    let ms = [50usize, 100, 200, 400];
    let cells: Vec<Result<(f64, f64, f64, f64)>> = ms
        .par_iter()
        .map(|&m| {
            let s = s_ratio(m, &x, p)?;
            let b = b_ratio(m, &x, p)?;
            let omx = Real::from_rational(&(BigRational::one() - &x), p);
            // (1-x) s_ratio and b_ratio differ only by the S_m truncation
            let ident = (&b - &s.value * &omx).abs().to_f64();
            let bound = (&s.error_bound * &omx).to_f64() + 1e-30;
            Ok((
                (s.value - s_ratio_target(&x, p)).abs().to_f64(),
                (b - b_ratio_target(&x, p)).abs().to_f64(),
                ident,
                bound,
            ))
        })
        .collect();
    let mut checks = Vec::new();
    let cells = match cells.into_iter().collect::<Result<Vec<_>>>() {
        Ok(c) => c,
        Err(e) => return (vec![failed(SUITE, "ratio_limits", &e)], vec![]),
    };
    let s_err: Vec<f64> = cells.iter().map(|c| c.0).collect();
    let b_err: Vec<f64> = cells.iter().map(|c| c.1).collect();
    let show = |v: &[f64]| v.iter().map(|e| format_f64(*e, 6)).collect::<Vec<_>>().join(";");
    checks.push(check(SUITE, "s_ratio_1/e_m=400", env.float(s_err[3]), "0.01", s_err[3] < 0.01));
    checks.push(check(SUITE, "b_ratio_1/e_m=400", env.float(b_err[3]), "0.015", b_err[3] < 0.015));
    checks.push(check(SUITE, "s_ratio_error_decreasing_m=50,100,200,400", show(&s_err), "decreasing", is_strictly_decreasing(&s_err)));
    checks.push(check(SUITE, "b_ratio_error_decreasing_m=50,100,200,400", show(&b_err), "decreasing", is_strictly_decreasing(&b_err)));
    let ident_ok = cells.iter().all(|c| c.2 <= c.3);
    let worst = cells.iter().map(|c| c.2).fold(0.0, f64::max);
    checks.push(check(SUITE, "b_ratio_equals_(1-x)s_ratio", env.float(worst), "truncation_bound", ident_ok));
    (checks, vec![])
}

fn suite_edges(env: &Env) -> Outcome {
    const SUITE: &str = "asymptotics";
    let ctx = &env.ctx;
    let p = env.cfg.precision_bits;
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let listed: Vec<(usize, &EmpiricalMeasure)> = env
        .cfg
        .n_list
        .iter()
        .filter_map(|n| env.measures.get(n).map(|m| (*n, m)))
        .collect();

    if let Some(m2) = env.measures.get(&2) {
        let ks = ks_distance(m2, ctx).to_f64();
        checks.push(check(SUITE, "ks_n=2", env.float(ks), "0.50537670322+-1e-9", (ks - 0.505_376_703_22).abs() < 1e-9));
        match right_edge_scaling(m2, ctx) {
            Ok(r) => {
                let v = r.value.to_f64();
                checks.push(check(SUITE, "right_edge_n=2_L(5/6)/4", env.float(v), "0.77224247621+-1e-9", (v - 0.772_242_476_21).abs() < 1e-9));
            }
            Err(e) => checks.push(failed(SUITE, "right_edge_n=2", &e)),
        }
    }

    let ks: Vec<f64> = listed.iter().map(|(_, m)| ks_distance(m, ctx).to_f64()).collect();
    let names: Vec<String> = listed.iter().map(|(n, _)| n.to_string()).collect();
    let show = |v: &[f64]| v.iter().map(|e| format_f64(*e, 6)).collect::<Vec<_>>().join(";");
    if ks.len() >= 2 {
        checks.push(check(
            SUITE,
            format!("ks_decreasing_n={}", names.join(",")),
            show(&ks),
            "decreasing",
            is_strictly_decreasing(&ks),
        ));
        let (first, last) = (listed[0].0, listed[listed.len() - 1].0);
        if last >= 8 * first {
            let pass = ks[ks.len() - 1] < ks[0] / 2.0;
            checks.push(check(SUITE, format!("ks_n={last}_below_half_ks_n={first}"), show(&[ks[0], ks[ks.len() - 1]]), "ratio<0.5", pass));
        }
    }

    let target = left_edge_target(p);
    let big: Vec<(usize, &EmpiricalMeasure)> = listed.iter().copied().filter(|(n, _)| *n >= 16).collect();
    let mut left_dev = Vec::new();
    for (n, m) in &big {
        match left_edge_scaling(m, 1, p) {
            Ok(v) => left_dev.push((v / &target - Real::one(p)).abs().to_f64()),
            Err(e) => checks.push(failed(SUITE, format!("left_edge_n={n}"), &e)),
        }
    }
    if left_dev.len() >= 2 {
        let bn: Vec<String> = big.iter().map(|(n, _)| n.to_string()).collect();
        checks.push(check(
            SUITE,
            format!("left_edge_deviation_decreasing_n={}", bn.join(",")),
            show(&left_dev),
            "decreasing",
            is_strictly_decreasing(&left_dev),
        ));
    }
    if let Some(m64) = env.measures.get(&64) {
        if let (Ok(k1), Ok(k2)) = (left_edge_scaling(m64, 1, p), left_edge_scaling(m64, 2, p)) {
            let v = k1.to_f64();
            checks.push(check(SUITE, "left_edge_n=64_k=1_in_(3,12)", env.float(v), "(3,12)", v > 3.0 && v < 12.0));
            let ratio = k2.to_f64() / v;
            checks.push(check(SUITE, "left_edge_n=64_k=2_vs_k=1", env.float(ratio), "(0.5,2)", ratio > 0.5 && ratio < 2.0));
        }
    }

    let mut largest = Vec::new();
    for (n, m) in &listed {
        match right_edge_scaling(m, ctx) {
            Ok(r) => {
                let v = r.value.to_f64();
                if *n >= 16 {
                    checks.push(check(SUITE, format!("right_edge_n={n}_L/(2n)_in_(0.5,1.5)"), env.float(v), "(0.5,1.5)", v > 0.5 && v < 1.5));
                }
                if r.escalated {
                    notes.push(format!(
                        "right_edge n={n} adaptive precision escalated: largest root resolved to {} bits (working precision {p}), 1-x={}",
                        r.required_bits,
                        r.gap.to_decimal(6)
                    ));
                }
                largest.push(m.roots.last().map(|r| r.midpoint.clone()).unwrap_or_default());
            }
            Err(e) => checks.push(failed(SUITE, format!("right_edge_n={n}"), &e)),
        }
    }
    if largest.len() >= 2 {
        let inc = largest.windows(2).all(|w| w[0] < w[1]);
        checks.push(check(SUITE, "largest_root_increasing_in_n", inc.to_string(), "increasing", inc));
    }
    (checks, notes)
}
