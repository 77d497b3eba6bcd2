use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::PathBuf;

use num_rational::BigRational;
use rayon::prelude::*;
use xizero::asymptotics::{
    b_ratio, b_ratio_target, inverse_e, ks_distance, left_edge_scaling, left_edge_target, right_edge_scaling,
    s_ratio, s_ratio_target, ConvergenceReport, CSV_HEADER,
};
use xizero::hp::{decimal_digits, format_significant, Complex, Real};
use xizero::limitlaw::LimitLawContext;
use xizero::verify::run_verify_with;
use xizero::zeros::{parse_decimal, EmpiricalMeasure};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::store::{write_atomic, RootCache};
use crate::svg::{self, Curve};

pub const GRID_POINTS: usize = 512;
const RATIO_M: [usize; 4] = [50, 100, 200, 400];

/// Per-`n` pipelines run concurrently; results come back keyed by `n`.
fn measures(cfg: &RunConfig) -> Result<BTreeMap<usize, EmpiricalMeasure>, CliError> {
    let cache = RootCache::new(&cfg.cache_dir);
    cfg.n_list
        .par_iter()
        .map(|&n| cache.load_or_compute(n, &cfg.eps).map(|m| (n, m)))
        .collect()
}

fn ctx(cfg: &RunConfig) -> Result<LimitLawContext, CliError> {
    Ok(LimitLawContext::new(cfg.precision_bits)?)
}

fn write_out(cfg: &RunConfig, name: &str, body: &str) -> Result<PathBuf, CliError> {
    let path = cfg.output_dir.join(name);
    write_atomic(&path, body.as_bytes())?;
    Ok(path)
}

pub fn cmd_roots(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let digits = decimal_digits(cfg.precision_bits);
    let ms = measures(cfg)?;
    let mut csv = String::from("n,k,root\n");
    for (n, m) in &ms {
        for (k, r) in m.roots.iter().enumerate() {
            writeln!(csv, "{n},{},{}", k + 1, format_significant(&r.midpoint, digits)).unwrap();
        }
    }
    Ok(vec![write_out(cfg, "roots.csv", &csv)?])
}

/// Grid abscissae `j/(GRID_POINTS-1)`.
fn grid() -> Vec<BigRational> {
    let last = (GRID_POINTS - 1) as i64;
    (0..GRID_POINTS as i64)
        .map(|j| BigRational::new(j.into(), last.into()))
        .collect()
}

pub fn cmd_cdf_compare(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let digits = decimal_digits(cfg.precision_bits);
    let ctx = ctx(cfg)?;
    let ms = measures(cfg)?;
    let xs = grid();
    let limit: Vec<Real> = xs.iter().map(|x| ctx.cdf_rational(x)).collect();
    let limit_f: Vec<f64> = limit.iter().map(Real::to_f64).collect();
    let xs_f: Vec<f64> = xs.iter().map(xizero::hp::rational_to_f64).collect();

    let mut csv = String::from("n,x,empirical,limit\n");
    let mut ks_csv = String::from("n,ks\n");
    let mut curves = Vec::new();
    for (n, m) in &ms {
        let mut pts = Vec::with_capacity(xs.len());
        for (j, x) in xs.iter().enumerate() {
            let count = m.count_le(x);
            let emp = BigRational::new((count as i64).into(), (m.mass() as i64).into());
            writeln!(
                csv,
                "{n},{},{},{}",
                format_significant(x, digits),
                format_significant(&emp, digits),
                limit[j].to_decimal(digits)
            )
            .unwrap();
            pts.push((xs_f[j], count as f64 / m.mass() as f64));
        }
        let ks = ks_distance(m, &ctx);
        writeln!(ks_csv, "{n},{}", ks.to_decimal(digits)).unwrap();
        curves.push(Curve {
            label: format!("n = {n}"),
            points: pts,
        });
    }
    let mut written = vec![
        write_out(cfg, "cdf_compare.csv", &csv)?,
        write_out(cfg, "ks_summary.csv", &ks_csv)?,
    ];
    if cfg.plot {
        let limit_curve = Curve {
            label: "limit F".into(),
            points: xs_f.into_iter().zip(limit_f).collect(),
        };
        written.push(write_out(cfg, "cdf_compare.svg", &svg::render(&curves, &limit_curve))?);
    }
    Ok(written)
}

/// Runs the invariant suite; returns the report text and whether it passed.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(String, bool, PathBuf), CliError> {
    let cache = RootCache::new(&cfg.cache_dir);
    let source = |n: usize| {
        cache
            .load_or_compute(n, &cfg.eps)
            .map_err(|e| match e {
                CliError::Core(c) => c,
                other => xizero::Error::Parse(other.to_string()),
            })
    };
    let report = run_verify_with(&cfg.verify_config(), &source)?;
    let text = report.render();
    let path = write_out(cfg, "verify.txt", &text)?;
    Ok((text, report.passed(), path))
}

pub fn cmd_asymptotics(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let p = cfg.precision_bits.max(128);
    let digits = decimal_digits(cfg.precision_bits);
    let ctx = ctx(cfg)?;
    let ms = measures(cfg)?;
    let x = inverse_e(128);

    let ratios = RATIO_M
        .par_iter()
        .map(|&m| Ok((s_ratio(m, &x, p)?.value, b_ratio(m, &x, p)?)))
        .collect::<Result<Vec<_>, xizero::Error>>()?;
    let ns: Vec<usize> = ms.keys().copied().collect();
    let mut ks = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for m in ms.values() {
        ks.push(ks_distance(m, &ctx));
        left.push(left_edge_scaling(m, 1, p)?);
        right.push(right_edge_scaling(m, &ctx)?.value);
    }
    let reports = [
        ConvergenceReport::new(
            "s_ratio_x=1/e",
            RATIO_M.to_vec(),
            ratios.iter().map(|r| r.0.clone()).collect(),
            Some(s_ratio_target(&x, p)),
        )?,
        ConvergenceReport::new(
            "b_ratio_x=1/e",
            RATIO_M.to_vec(),
            ratios.iter().map(|r| r.1.clone()).collect(),
            Some(b_ratio_target(&x, p)),
        )?,
        ConvergenceReport::new("ks_distance", ns.clone(), ks, Some(Real::zero(p)))?,
        ConvergenceReport::new("left_edge_k=1", ns.clone(), left, Some(left_edge_target(p)))?,
        ConvergenceReport::new("right_edge", ns, right, Some(Real::one(p)))?,
    ];
    let mut csv = String::from(CSV_HEADER);
    for r in &reports {
        csv.push_str(&r.to_csv_rows(digits));
    }
    Ok(vec![write_out(cfg, "asymptotics.csv", &csv)?])
}

pub fn parse_point(re: &str, im: &str, prec: usize) -> Result<Complex, CliError> {
    let parse = |s: &str| parse_decimal(s).map_err(|_| CliError::Config(format!("invalid number `{s}`")));
    Ok(Complex::from_rationals(&parse(re)?, &parse(im)?, prec))
}

pub fn cmd_stieltjes(cfg: &RunConfig, z: &Complex) -> Result<Vec<PathBuf>, CliError> {
    let digits = decimal_digits(cfg.precision_bits);
    let ctx = ctx(cfg)?;
    let ms = measures(cfg)?;
    let limit = ctx.stieltjes_limit(z)?;
    let mut csv = String::from("n,z_re,z_im,empirical_re,empirical_im,limit_re,limit_im,abs_diff\n");
    for (n, m) in &ms {
        let s = ctx.stieltjes_empirical(m, z)?;
        let diff = (&s - &limit).abs();
        writeln!(
            csv,
            "{n},{},{},{},{},{},{},{}",
            z.re.to_decimal(digits),
            z.im.to_decimal(digits),
            s.re.to_decimal(digits),
            s.im.to_decimal(digits),
            limit.re.to_decimal(digits),
            limit.im.to_decimal(digits),
            diff.to_decimal(digits)
        )
        .unwrap();
    }
    Ok(vec![write_out(cfg, "stieltjes.csv", &csv)?])
}
