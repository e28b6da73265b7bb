//! Optional TOML configuration file.
//!
//! ```toml
//! format = "json"            # text | json | csv
//! enumeration_bound = 16
//!
//! [cache]
//! enabled = true
//! path = "/tmp/prym/sst-counts.json"
//! ```
//!
//! Command-line flags win over the file; the file wins over the
//! `PRYM_CACHE_DIR` environment variable and built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::output::Format;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub enumeration_bound: Option<usize>,
    #[serde(default)]
    pub cache: CacheSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheSection {
    pub enabled: Option<bool>,
    pub path: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Resolved settings for one invocation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub format: Format,
    pub enumeration_bound: usize,
    /// `None` disables the cache.
    pub cache_path: Option<PathBuf>,
    pub trust_cache: bool,
}
