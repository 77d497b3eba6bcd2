//! Atomic file output and the on-disk root cache (one file per `(n, eps)`).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use xizero::zeros::{format_compact, EmpiricalMeasure};

use crate::error::CliError;

const CACHE_MAGIC: &str = "roots ";
const CACHE_VERSION: &str = "roots v1 ";

/// Writes `contents` to a temporary file next to `path`, then renames it
/// into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(contents).map_err(|e| CliError::io(&tmp, e))?;
    f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

#[derive(Clone, Debug)]
pub struct RootCache {
    dir: PathBuf,
}

impl RootCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path(&self, n: usize, eps: &BigRational) -> PathBuf {
        self.dir.join(format!("roots-n{n}-eps{}.txt", format_compact(eps)))
    }

    /// Reads and re-verifies a cached measure; `Ok(None)` when absent.
    pub fn load(&self, n: usize, eps: &BigRational) -> Result<Option<EmpiricalMeasure>, CliError> {
        let path = self.path(n, eps);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(CliError::io(&path, e)),
        };
        let header = text.lines().next().unwrap_or("");
        if header.starts_with(CACHE_MAGIC) && !header.starts_with(CACHE_VERSION) {
            return Err(CliError::CacheVersion {
                path,
                header: header.to_string(),
            });
        }
        let m = EmpiricalMeasure::from_cache_text(&text).map_err(|e| CliError::CacheInvalid {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        if m.n != n || &m.eps != eps {
            return Err(CliError::CacheInvalid {
                path,
                reason: format!("file holds n={} eps={}", m.n, format_compact(&m.eps)),
            });
        }
        Ok(Some(m))
    }

    /// Cached measure, or a fresh computation that is stored and then read
    /// back, so that every consumer sees the same cache-rounded roots.
    pub fn load_or_compute(&self, n: usize, eps: &BigRational) -> Result<EmpiricalMeasure, CliError> {
        if let Some(m) = self.load(n, eps)? {
            return Ok(m);
        }
        let m = EmpiricalMeasure::compute(n, eps)?;
        let text = m.to_cache_text();
        write_atomic(&self.path(n, eps), text.as_bytes())?;
        Ok(EmpiricalMeasure::from_cache_text(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use xizero::zeros::default_eps;

    #[test]
    fn round_trip_and_version_refusal() {
        let dir = tempfile::tempdir().unwrap();
        let cache = RootCache::new(dir.path());
        let eps = default_eps();
        assert!(cache.load(3, &eps).unwrap().is_none());
        let first = cache.load_or_compute(3, &eps).unwrap();
        let again = cache.load(3, &eps).unwrap().unwrap();
        assert_eq!(first, again);

        let path = cache.path(3, &eps);
        let text = fs::read_to_string(&path).unwrap().replacen("roots v1", "roots v2", 1);
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.load(3, &eps), Err(CliError::CacheVersion { .. })));
    }

    #[test]
    fn atomic_write_creates_parents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b/c.txt");
        write_atomic(&p, b"x").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"x");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
