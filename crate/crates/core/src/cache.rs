//! On-disk memo of enumerated shifted tableau counts.
//!
//! One JSON file, keyed by the canonical shape string. Only brute-force
//! counts are stored. Any I/O or parse problem degrades to an empty cache
//! with a warning; it never changes a result.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::prym::{BruteForce, ShapeCounter};
use crate::tableaux::{StrictPartition, TableauError};

/// Overrides the directory holding the cache file.
pub const CACHE_DIR_ENV: &str = "PRYM_CACHE_DIR";
pub const CACHE_FILE_NAME: &str = "sst-counts.json";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountCacheEntry {
    pub shape: StrictPartition,
    pub count: u64,
    pub tool_version: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    entries: BTreeMap<String, CountCacheEntry>,
}

/// `$PRYM_CACHE_DIR`, else `$XDG_DATA_HOME/prym`, else `$HOME/.local/share/prym`.
pub fn default_cache_path() -> Option<PathBuf> {
    let env_dir = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
    let dir = env_dir(CACHE_DIR_ENV)
        .or_else(|| env_dir("XDG_DATA_HOME").map(|d| d.join("prym")))
        .or_else(|| env_dir("HOME").map(|h| h.join(".local").join("share").join("prym")))?;
    Some(dir.join(CACHE_FILE_NAME))
}

#[derive(Debug)]
pub struct CountCache {
    path: Option<PathBuf>,
    version: String,
    entries: BTreeMap<String, CountCacheEntry>,
}

impl CountCache {
    /// A cache that never reads or writes anything.
    pub fn disabled() -> Self {
        Self {
            path: None,
            version: TOOL_VERSION.to_string(),
            entries: BTreeMap::new(),
        }
    }

    pub fn open(path: impl Into<PathBuf>) -> Self {
        Self::open_with_version(path, TOOL_VERSION)
    }

    pub fn open_with_version(path: impl Into<PathBuf>, version: &str) -> Self {
        let path = path.into();
        let entries = match fs::read_to_string(&path) {
            Ok(text) => match serde_json::from_str::<CacheFile>(&text) {
                Ok(f) => f.entries,
                Err(e) => {
                    warn!("ignoring corrupt count cache {}: {e}", path.display());
                    BTreeMap::new()
                }
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => {
                warn!("cannot read count cache {}: {e}", path.display());
                BTreeMap::new()
            }
        };
        Self {
            path: Some(path),
            version: version.to_string(),
            entries,
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn is_enabled(&self) -> bool {
        self.path.is_some()
    }

    /// Recorded count for `shape`, if one exists for this tool version.
    pub fn get(&self, shape: &StrictPartition) -> Option<u64> {
        self.entries
            .get(&shape.key())
            .filter(|e| e.tool_version == self.version && &e.shape == shape)
            .map(|e| e.count)
    }

    /// Records a count and rewrites the file atomically. Write failures are
    /// reported as warnings.
    pub fn put(&mut self, shape: &StrictPartition, count: u64) {
        let Some(path) = self.path.clone() else {
            return;
        };
        self.entries.insert(
            shape.key(),
            CountCacheEntry {
                shape: shape.clone(),
                count,
                tool_version: self.version.clone(),
            },
        );
        if let Err(e) = self.write(&path) {
            warn!("cannot write count cache {}: {e}", path.display());
        }
    }

    fn write(&self, path: &Path) -> std::io::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let file = CacheFile {
            entries: self.entries.clone(),
        };
        let text = serde_json::to_string_pretty(&file).map_err(std::io::Error::other)?;
        let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
        tmp_name.push(format!(".tmp.{}", std::process::id()));
        let tmp = path.with_file_name(tmp_name);
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}

/// Brute-force counter backed by a [`CountCache`].
///
/// With `trust` set, recorded counts are returned without recomputation.
/// Without it every count is enumerated afresh (and recorded), so a bad
/// cache file cannot hide anything.
#[derive(Debug)]
pub struct CachedCounter {
    inner: BruteForce,
    cache: RefCell<CountCache>,
    trust: bool,
}

impl CachedCounter {
    pub fn new(inner: BruteForce, cache: CountCache, trust: bool) -> Self {
        Self {
            inner,
            cache: RefCell::new(cache),
            trust,
        }
    }

    pub fn into_cache(self) -> CountCache {
        self.cache.into_inner()
    }
}

impl ShapeCounter for CachedCounter {
    fn count(&self, shape: &StrictPartition) -> Result<u64, TableauError> {
        if self.trust {
            if let Some(n) = self.cache.borrow().get(shape) {
                return Ok(n);
            }
        }
        let n = self.inner.count(shape)?;
        let mut cache = self.cache.borrow_mut();
        if cache.get(shape) != Some(n) {
            cache.put(shape, n);
        }
        Ok(n)
    }

    fn bound(&self) -> usize {
        self.inner.bound()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: &[usize]) -> StrictPartition {
        StrictPartition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn miss_then_hit() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let mut c = CountCache::open(&path);
        assert_eq!(c.get(&sp(&[2, 1])), None);
        c.put(&sp(&[2, 1]), 1);
        assert_eq!(c.get(&sp(&[2, 1])), Some(1));
        assert_eq!(CountCache::open(&path).get(&sp(&[2, 1])), Some(1));
    }

    #[test]
    fn last_put_wins() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        let mut c = CountCache::open(&path);
        c.put(&sp(&[3, 1]), 5);
        c.put(&sp(&[3, 1]), 2);
        assert_eq!(CountCache::open(&path).get(&sp(&[3, 1])), Some(2));
    }

    #[test]
    fn version_mismatch_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        CountCache::open_with_version(&path, "0.0.1").put(&sp(&[2, 1]), 1);
        assert_eq!(CountCache::open_with_version(&path, "9.9.9").get(&sp(&[2, 1])), None);
        assert_eq!(CountCache::open_with_version(&path, "0.0.1").get(&sp(&[2, 1])), Some(1));
    }

    #[test]
    fn disabled_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = CountCache::disabled();
        c.put(&sp(&[2, 1]), 1);
        assert_eq!(c.get(&sp(&[2, 1])), None);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
    }

    #[test]
    fn corrupt_file_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, "{not json").unwrap();
        let mut c = CountCache::open(&path);
        assert_eq!(c.get(&sp(&[1])), None);
        c.put(&sp(&[1]), 1);
        assert_eq!(CountCache::open(&path).get(&sp(&[1])), Some(1));
    }

    #[test]
    fn unwritable_path_degrades() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        // parent is a regular file, so the directory cannot be created
        let mut c = CountCache::open(blocker.join("sub").join("c.json"));
        c.put(&sp(&[2, 1]), 1);
        assert_eq!(c.get(&sp(&[2, 1])), Some(1));
    }

    #[test]
    fn poisoned_cache_only_used_when_trusted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        CountCache::open(&path).put(&sp(&[4, 2, 1]), 99);
        let trusted = CachedCounter::new(BruteForce::default(), CountCache::open(&path), true);
        assert_eq!(trusted.count(&sp(&[4, 2, 1])).unwrap(), 99);
        let strict = CachedCounter::new(BruteForce::default(), CountCache::open(&path), false);
        assert_eq!(strict.count(&sp(&[4, 2, 1])).unwrap(), 7);
        // the recomputation repaired the record
        assert_eq!(CountCache::open(&path).get(&sp(&[4, 2, 1])), Some(7));
    }

    #[test]
    fn file_is_keyed_by_shape_string() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        CountCache::open(&path).put(&sp(&[4, 2, 1]), 7);
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["entries"]["4,2,1"]["count"], 7);
        assert_eq!(v["entries"]["4,2,1"]["shape"], serde_json::json!([4, 2, 1]));
    }
}
