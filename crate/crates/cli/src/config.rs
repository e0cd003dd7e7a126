//! Flat key=value config file, overridable by command-line flags.
//!
//! ```text
//! # emlead.conf
//! dicts_dir = data/dictionaries
//! patterns_path = data/patterns/seed.patterns
//! cache_dir = cache
//! output_dir = out
//! worker_count = 4
//! convergence_threshold = 0.01
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> anyhow::Result<ConfigFile> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut values = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected key = value", path.display(), idx + 1))?;
            values.insert(
                key.trim().to_string(),
                value.trim().trim_matches('"').to_string(),
            );
        }
        Ok(ConfigFile { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Flag value if set, else config value, else None.
    pub fn path_or(&self, flag: Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.or_else(|| self.get(key).map(PathBuf::from))
    }

    pub fn parse_or<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Option<T> {
        flag.or_else(|| self.get(key).and_then(|v| v.parse().ok()))
    }
}
