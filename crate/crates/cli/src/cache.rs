//! On-disk cache of command payloads.
//!
//! One file per key, written to a temporary name and renamed into place.
//! Entries from another engine version are ignored; entries that fail to
//! parse or whose payload digest does not match are evicted and reported.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub engine_version: String,
    pub command: String,
    pub params: serde_json::Value,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
    pub payload_sha256: String,
    pub payload: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CacheError {
    Unwritable { path: PathBuf, reason: String },
    Corrupt { path: PathBuf, reason: String },
}

impl fmt::Display for CacheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheError::Unwritable { path, reason } => write!(f, "cache directory {} is unwritable: {reason}", path.display()),
            CacheError::Corrupt { path, reason } => write!(f, "corrupt cache entry {} evicted: {reason}", path.display()),
        }
    }
}

impl std::error::Error for CacheError {}

pub struct Cache {
    dir: PathBuf,
    version: String,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    /// Opens (creating if needed) a cache directory for one engine version.
    pub fn open(dir: &Path, version: &str) -> Result<Self, CacheError> {
        let unwritable = |e: std::io::Error| CacheError::Unwritable { path: dir.to_path_buf(), reason: e.to_string() };
        fs::create_dir_all(dir).map_err(unwritable)?;
        if fs::metadata(dir).map_err(unwritable)?.permissions().readonly() {
            return Err(CacheError::Unwritable { path: dir.to_path_buf(), reason: "read-only".into() });
        }
        Ok(Cache { dir: dir.to_path_buf(), version: version.to_string() })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn key(&self, command: &str, params: &serde_json::Value) -> String {
        let mut h = Sha256::new();
        for part in [command, &params.to_string(), &self.version] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// `Ok(None)` on a miss or a stale entry; corrupt entries are removed
    /// and returned as an error so the caller can report and recompute.
    pub fn load(&self, command: &str, params: &serde_json::Value) -> Result<Option<String>, CacheError> {
        let key = self.key(command, params);
        let path = self.path(&key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(_) => return Ok(None),
        };
        let corrupt = |reason: String| {
            let _ = fs::remove_file(&path);
            CacheError::Corrupt { path: path.clone(), reason }
        };
        let entry: CacheEntry = serde_json::from_str(&text).map_err(|e| corrupt(e.to_string()))?;
        if entry.engine_version != self.version {
            return Ok(None);
        }
        if entry.key != key || entry.command != command || &entry.params != params {
            return Err(corrupt("key does not match its contents".into()));
        }
        if digest(entry.payload.as_bytes()) != entry.payload_sha256 {
            return Err(corrupt("payload digest mismatch".into()));
        }
        Ok(Some(entry.payload))
    }

    pub fn store(&self, command: &str, params: &serde_json::Value, payload: &str) -> Result<PathBuf, CacheError> {
        let key = self.key(command, params);
        let created_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let entry = CacheEntry {
            key: key.clone(),
            engine_version: self.version.clone(),
            command: command.to_string(),
            params: params.clone(),
            created_at,
            payload_sha256: digest(payload.as_bytes()),
            payload: payload.to_string(),
        };
        let path = self.path(&key);
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        let unwritable = |e: std::io::Error| CacheError::Unwritable { path: self.dir.clone(), reason: e.to_string() };
        let body = serde_json::to_string(&entry).expect("cache entries serialize");
        let mut f = fs::File::create(&tmp).map_err(unwritable)?;
        f.write_all(body.as_bytes()).map_err(unwritable)?;
        f.sync_all().map_err(unwritable)?;
        drop(f);
        fs::rename(&tmp, &path).map_err(unwritable)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use motivic_core::graded::BigradedChart;
    use serde_json::json;

    #[test]
    fn unit_chart_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path(), "1").unwrap();
        let payload = BigradedChart::unit().to_json();
        let params = json!({"x": 1});
        assert_eq!(cache.load("unit", &params).unwrap(), None);
        cache.store("unit", &params, &payload).unwrap();
        let back = cache.load("unit", &params).unwrap().unwrap();
        assert_eq!(back, payload);
        assert_eq!(BigradedChart::from_json(&back).unwrap().to_json(), payload);
    }

    #[test]
    fn other_version_misses() {
        let dir = tempfile::tempdir().unwrap();
        let params = json!({});
        Cache::open(dir.path(), "1").unwrap().store("c", &params, "{}").unwrap();
        let newer = Cache::open(dir.path(), "2").unwrap();
        assert_eq!(newer.load("c", &params).unwrap(), None);
    }

    #[test]
    fn stale_entry_under_same_key_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let params = json!({});
        let old = Cache::open(dir.path(), "1").unwrap();
        let path = old.store("c", &params, "{}").unwrap();
        let mut e: CacheEntry = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        e.engine_version = "0".into();
        fs::write(&path, serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(old.load("c", &params).unwrap(), None);
    }

    #[test]
    fn corrupt_entry_is_reported_and_evicted() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path(), "1").unwrap();
        let params = json!({"p": 3});
        let path = cache.store("c", &params, "{\"a\":1}").unwrap();
        fs::write(&path, "{ not json").unwrap();
        assert!(matches!(cache.load("c", &params), Err(CacheError::Corrupt { .. })));
        assert!(!path.exists());
        assert_eq!(cache.load("c", &params).unwrap(), None);

        let path = cache.store("c", &params, "{\"a\":1}").unwrap();
        let tampered = fs::read_to_string(&path).unwrap().replace("{\\\"a\\\":1}", "{\\\"a\\\":2}");
        fs::write(&path, tampered).unwrap();
        assert!(matches!(cache.load("c", &params), Err(CacheError::Corrupt { .. })));
    }
}
