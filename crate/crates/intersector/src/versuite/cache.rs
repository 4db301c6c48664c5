//! Durable on-disk result cache keyed by canonical fingerprints.
//!
//! Entries are single JSON files named by fingerprint. Writes go through a
//! temporary file in the same directory followed by an atomic rename, so
//! concurrent writers cannot corrupt an entry. Storage failures are
//! non-fatal by design: computation proceeds without the cache.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub const CACHE_ENV: &str = "INTERSECTOR_CACHE";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheEntry {
    pub fingerprint: String,
    pub value: String,
    pub method: String,
    pub engine_version: String,
    pub timestamp: u64,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// Resolves the cache directory: explicit override, then the
    /// INTERSECTOR_CACHE environment variable, then a user-level default.
    pub fn resolve(dir_flag: Option<&Path>, disabled: bool) -> Self {
        if disabled {
            return Cache { dir: None };
        }
        let dir = dir_flag
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .or_else(|| {
                std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache/intersector"))
            })
            .unwrap_or_else(|| std::env::temp_dir().join("intersector-cache"));
        Cache { dir: Some(dir) }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: PathBuf) -> Self {
        Cache { dir: Some(dir) }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn path_for(&self, fingerprint: &str) -> Option<PathBuf> {
        // fingerprints are hex digests; reject anything else defensively
        if !fingerprint.chars().all(|c| c.is_ascii_hexdigit()) {
            return None;
        }
        self.dir.as_ref().map(|d| d.join(format!("{fingerprint}.json")))
    }

    pub fn get(&self, fingerprint: &str) -> Option<CacheEntry> {
        let path = self.path_for(fingerprint)?;
        let data = std::fs::read_to_string(path).ok()?;
        let entry: CacheEntry = serde_json::from_str(&data).ok()?;
        if entry.fingerprint == fingerprint {
            Some(entry)
        } else {
            None
        }
    }

    pub fn put(&self, entry: &CacheEntry) {
        let Some(path) = self.path_for(&entry.fingerprint) else {
            return;
        };
        let Some(dir) = path.parent() else { return };
        if std::fs::create_dir_all(dir).is_err() {
            return;
        }
        let tmp = dir.join(format!(
            ".{}.{}.tmp",
            entry.fingerprint,
            std::process::id()
        ));
        let Ok(json) = serde_json::to_string_pretty(entry) else {
            return;
        };
        if std::fs::write(&tmp, json).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
        let _ = std::fs::remove_file(&tmp);
    }
}

pub fn entry_now(fingerprint: &str, value: &str, method: &str) -> CacheEntry {
    CacheEntry {
        fingerprint: fingerprint.to_owned(),
        value: value.to_owned(),
        method: method.to_owned(),
        engine_version: env!("CARGO_PKG_VERSION").to_owned(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    }
}
