//! On-disk cache of certified traces.
//!
//! One JSON file per cache directory holding sorted records and a SHA-256
//! checksum over them. Writes go to a temporary file that is renamed into
//! place, so readers never observe a partial file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::IteratorRandom;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::Discriminant;
use crate::error::{Error, Result};
use crate::traces::{trace, TraceResult};

pub const CACHE_FORMAT_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "ONAN_CACHE_DIR";
pub const CACHE_FILE: &str = "traces-v1.json";

/// Records recomputed on load.
pub const SPOT_CHECKS: usize = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub d: i64,
    pub a: String,
    pub precision_digits: u32,
    pub residual: f64,
    pub attempts: u32,
}

impl From<&TraceResult> for CacheRecord {
    fn from(t: &TraceResult) -> Self {
        CacheRecord {
            d: t.d.value(),
            a: t.a.to_string(),
            precision_digits: t.precision_digits,
            residual: t.residual,
            attempts: t.attempts,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    engine_version: String,
    records: Vec<CacheRecord>,
    checksum: String,
}

fn checksum(records: &[CacheRecord]) -> String {
    let bytes = serde_json::to_vec(records).expect("records serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug)]
pub struct TraceCache {
    path: PathBuf,
    records: BTreeMap<i64, CacheRecord>,
}

impl TraceCache {
    /// `$ONAN_CACHE_DIR`, or `./.onan-cache`.
    pub fn default_dir() -> PathBuf {
        std::env::var_os(CACHE_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".onan-cache"))
    }

    /// Opens (or starts) the cache in `dir`. A file written by another format
    /// or engine version is ignored; a corrupt file is an error.
    pub fn open(dir: &Path) -> Result<Self> {
        let path = dir.join(CACHE_FILE);
        let mut records = BTreeMap::new();
        if path.exists() {
            let text = fs::read_to_string(&path)?;
            let file: CacheFile = serde_json::from_str(&text)
                .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
            if checksum(&file.records) != file.checksum {
                return Err(Error::Cache(format!("{}: checksum mismatch", path.display())));
            }
            if file.format_version == CACHE_FORMAT_VERSION && file.engine_version == crate::ENGINE_VERSION {
                records = file.records.into_iter().map(|r| (r.d, r)).collect();
            }
        }
        Ok(TraceCache { path, records })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, d: i64) -> Option<&CacheRecord> {
        self.records.get(&d)
    }

    pub fn insert(&mut self, record: CacheRecord) {
        self.records.insert(record.d, record);
    }

    /// Recomputes up to `n` random records and fails on any disagreement.
    pub fn spot_check(&self, n: usize) -> Result<()> {
        let mut rng = rand::thread_rng();
        for r in self.records.values().choose_multiple(&mut rng, n) {
            let d = Discriminant::new(r.d)?;
            let fresh = trace(d, Some(r.precision_digits))?;
            if fresh.a.to_string() != r.a {
                return Err(Error::Cache(format!(
                    "cached a({}) = {} but recomputation gives {}",
                    r.d, r.a, fresh.a
                )));
            }
        }
        Ok(())
    }

    /// Atomically replaces the cache file.
    pub fn save(&self) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let records: Vec<CacheRecord> = self.records.values().cloned().collect();
        let file = CacheFile {
            format_version: CACHE_FORMAT_VERSION,
            engine_version: crate::ENGINE_VERSION.to_string(),
            checksum: checksum(&records),
            records,
        };
        let tmp = self.path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&file)?)?;
        fs::rename(&tmp, &self.path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(d: i64, a: &str) -> CacheRecord {
        CacheRecord {
            d,
            a: a.into(),
            precision_digits: 46,
            residual: 1e-40,
            attempts: 1,
        }
    }

    #[test]
    fn save_and_reload() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = TraceCache::open(dir.path()).unwrap();
        assert!(c.is_empty());
        c.insert(rec(-4, "143376"));
        c.insert(rec(-3, "26752"));
        c.save().unwrap();
        let c = TraceCache::open(dir.path()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.get(-3).unwrap().a, "26752");
        c.spot_check(2).unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = TraceCache::open(dir.path()).unwrap();
        c.insert(rec(-3, "26752"));
        c.save().unwrap();
        let path = dir.path().join(CACHE_FILE);
        let text = fs::read_to_string(&path).unwrap().replace("26752", "26753");
        fs::write(&path, text).unwrap();
        assert!(matches!(TraceCache::open(dir.path()), Err(Error::Cache(_))));
    }

    #[test]
    fn wrong_values_fail_spot_check() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = TraceCache::open(dir.path()).unwrap();
        c.insert(rec(-3, "26753"));
        assert!(c.spot_check(1).is_err());
    }
}
