mod commands;
mod config;
mod error;
mod store;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{load_config_file, Overrides, RunConfig, CACHE_ENV};
use error::CliError;

/// Zeros of the Xi~_n polynomial family and their limiting distribution.
#[derive(Parser, Debug)]
#[command(name = "xizero", version)]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Comma-separated list of n (sorted and deduplicated)
    #[arg(long, global = true, value_name = "LIST")]
    n: Option<String>,

    /// Root tolerance, a decimal such as 1e-30
    #[arg(long, global = true)]
    eps: Option<String>,

    /// Working precision in bits (at least 64)
    #[arg(long, global = true, value_name = "BITS")]
    precision: Option<usize>,

    /// Root cache directory (overrides the XIZERO_CACHE_DIR variable)
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Also render an SVG overlay (cdf-compare)
    #[arg(long, global = true)]
    svg: bool,

    /// `key = value` file with defaults for the flags above
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Isolate and refine the zeros; writes roots.csv and the cache
    Roots,
    /// Empirical versus limiting CDF on a 512-point grid, plus KS distances
    CdfCompare,
    /// Run every invariant suite; exit status 1 on any failure
    Verify,
    /// Ratio limits and edge statistics as a convergence report
    Asymptotics,
    /// Empirical and limiting Stieltjes transform at one point z
    Stieltjes {
        /// Real part of z
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        re: String,
        /// Imaginary part of z
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        im: String,
    },
}

fn resolve(common: &Common) -> Result<RunConfig, CliError> {
    let file = match &common.config {
        Some(p) => load_config_file(p)?,
        None => Overrides::default(),
    };
    let env_cache = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let flags = Overrides {
        n: common.n.clone(),
        eps: common.eps.clone(),
        precision: common.precision,
        cache_dir: common.cache_dir.clone(),
        out: common.out.clone(),
        svg: common.svg.then_some(true),
    };
    RunConfig::resolve(file, env_cache, flags)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = resolve(&cli.common)?;
    let written = match cli.command {
        Command::Roots => commands::cmd_roots(&cfg)?,
        Command::CdfCompare => commands::cmd_cdf_compare(&cfg)?,
        Command::Asymptotics => commands::cmd_asymptotics(&cfg)?,
        Command::Stieltjes { re, im } => {
            let z = commands::parse_point(&re, &im, cfg.precision_bits)?;
            commands::cmd_stieltjes(&cfg, &z)?
        }
        Command::Verify => {
            let (text, passed, path) = commands::cmd_verify(&cfg)?;
            print!("{text}");
            eprintln!("wrote {}", path.display());
            return Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
