//! Run configuration: defaults, an optional `key = value` file, the cache
//! directory environment variable and command-line flags, in increasing
//! order of priority.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use xizero::verify::VerifyConfig;
use xizero::zeros::{default_eps, parse_decimal};

use crate::error::CliError;

pub const CACHE_ENV: &str = "XIZERO_CACHE_DIR";
pub const DEFAULT_N_LIST: [usize; 4] = [8, 16, 32, 64];
pub const DEFAULT_PRECISION: usize = 128;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n_list: Vec<usize>,
    pub eps: BigRational,
    pub precision_bits: usize,
    pub cache_dir: PathBuf,
    pub output_dir: PathBuf,
    pub plot: bool,
}

/// Settings given explicitly, either as flags or in a config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n: Option<String>,
    pub eps: Option<String>,
    pub precision: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,
}

impl Overrides {
    /// `other` wins wherever it sets a value.
    fn merged_with(self, other: Overrides) -> Overrides {
        Overrides {
            n: other.n.or(self.n),
            eps: other.eps.or(self.eps),
            precision: other.precision.or(self.precision),
            cache_dir: other.cache_dir.or(self.cache_dir),
            out: other.out.or(self.out),
            svg: other.svg.or(self.svg),
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment. Keys mirror the flags:
/// `n`, `eps`, `precision`, `cache-dir`, `out`, `svg`.
pub fn parse_config_text(text: &str) -> Result<Overrides, CliError> {
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", i + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().to_string();
        if seen.insert(key.clone(), value).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{key}`", i + 1)));
        }
    }
    let mut o = Overrides::default();
    for (key, value) in seen {
        match key.as_str() {
            "n" => o.n = Some(value),
            "eps" => o.eps = Some(value),
            "precision" => {
                o.precision = Some(
                    value
                        .parse()
                        .map_err(|_| CliError::Config(format!("precision: invalid integer `{value}`")))?,
                )
            }
            "cache-dir" => o.cache_dir = Some(PathBuf::from(value)),
            "out" => o.out = Some(PathBuf::from(value)),
            "svg" => {
                o.svg = Some(match value.as_str() {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(CliError::Config(format!("svg: expected true or false, got `{value}`"))),
                })
            }
            other => return Err(CliError::Config(format!("unknown key `{other}`"))),
        }
    }
    Ok(o)
}

pub fn load_config_file(path: &Path) -> Result<Overrides, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config_text(&text)
}

/// Comma-separated list of integers, sorted and deduplicated.
pub fn parse_n_list(s: &str) -> Result<Vec<usize>, CliError> {
    let mut v = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::Config(format!("n: invalid integer `{t}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

impl RunConfig {
    /// Layers `file`, the cache environment variable and `flags` over the
    /// defaults, then validates the result.
    pub fn resolve(file: Overrides, env_cache: Option<PathBuf>, flags: Overrides) -> Result<Self, CliError> {
        let env = Overrides {
            cache_dir: env_cache,
            ..Overrides::default()
        };
        let o = file.merged_with(env).merged_with(flags);
        let n_list = match &o.n {
            Some(s) => parse_n_list(s)?,
            None => DEFAULT_N_LIST.to_vec(),
        };
        let eps = match &o.eps {
            Some(s) => parse_decimal(s).map_err(|_| CliError::Config(format!("eps: invalid decimal `{s}`")))?,
            None => default_eps(),
        };
        let cfg = RunConfig {
            n_list,
            eps,
            precision_bits: o.precision.unwrap_or(DEFAULT_PRECISION),
            cache_dir: o.cache_dir.unwrap_or_else(|| PathBuf::from(".xizero-cache")),
            output_dir: o.out.unwrap_or_else(|| PathBuf::from("out")),
            plot: o.svg.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.verify_config()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig {
            n_list: self.n_list.clone(),
            eps: self.eps.clone(),
            precision_bits: self.precision_bits,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(Overrides::default(), None, Overrides::default()).unwrap();
        assert_eq!(c.n_list, vec![8, 16, 32, 64]);
        assert_eq!(c.eps, default_eps());
        assert_eq!(c.precision_bits, 128);
        assert!(!c.plot);
    }

    #[test]
    fn precedence() {
        let file = parse_config_text("n = 4, 2\nprecision = 96\ncache_dir = from-file # comment\nsvg = true\n").unwrap();
        let flags = Overrides {
            precision: Some(200),
            ..Overrides::default()
        };
        let c = RunConfig::resolve(file, Some(PathBuf::from("from-env")), flags).unwrap();
        assert_eq!(c.n_list, vec![2, 4]);
        assert_eq!(c.precision_bits, 200);
        assert_eq!(c.cache_dir, PathBuf::from("from-env"));
        assert!(c.plot);
    }

    #[test]
    fn dedup_and_rejections() {
        assert_eq!(parse_n_list("2,2").unwrap(), vec![2]);
        let bad = |o: Overrides| RunConfig::resolve(Overrides::default(), None, o).is_err();
        assert!(bad(Overrides { n: Some(String::new()), ..Default::default() }));
        assert!(bad(Overrides { n: Some("1,4".into()), ..Default::default() }));
        assert!(bad(Overrides { eps: Some("1e-3".into()), ..Default::default() }));
        assert!(bad(Overrides { precision: Some(32), ..Default::default() }));
        assert!(parse_config_text("colour = blue").is_err());
        assert!(parse_config_text("n = 2\nn = 3").is_err());
    }
}
