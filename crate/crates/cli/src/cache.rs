//! On-disk cache of located a-points, keyed by a hash of everything that
//! determines them.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

use symzeta::{APoint, EvalPrecision, Rectangle, TargetValue};

use crate::config::JobConfig;

pub const CACHE_DIR_ENV: &str = "SYMZETA_CACHE_DIR";

#[derive(Serialize)]
struct KeyFields<'a> {
    version: &'a str,
    weights: &'a [f64],
    a: &'a TargetValue,
    region: &'a Rectangle,
    precision: &'a EvalPrecision,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct Entry {
    key: String,
    records: Vec<APoint>,
}

pub struct ResultCache {
    dir: PathBuf,
}

impl ResultCache {
    /// `$SYMZETA_CACHE_DIR`, else `$XDG_CACHE_HOME/symzeta`, else
    /// `$HOME/.cache/symzeta`, else `<output_dir>/cache`.
    pub fn locate(cfg: &JobConfig) -> Self {
        let env = |k| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        let dir = env(CACHE_DIR_ENV)
            .or_else(|| env("XDG_CACHE_HOME").map(|p| p.join("symzeta")))
            .or_else(|| env("HOME").map(|p| p.join(".cache").join("symzeta")))
            .unwrap_or_else(|| cfg.output_dir.join("cache"));
        ResultCache { dir }
    }

    pub fn key(cfg: &JobConfig, region: &Rectangle) -> String {
        let fields = KeyFields {
            version: symzeta::VERSION,
            weights: cfg.weights.values(),
            a: &cfg.a,
            region,
            precision: &cfg.precision,
        };
        let bytes = serde_json::to_vec(&fields).expect("key fields serialize");
        hex::encode(Sha256::digest(bytes))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The cached records, or `None` on a miss. A corrupted entry is
    /// reported and treated as a miss.
    pub fn get(&self, key: &str) -> Option<Vec<APoint>> {
        let path = self.path(key);
        let bytes = std::fs::read(&path).ok()?;
        match serde_json::from_slice::<Entry>(&bytes) {
            Ok(e) if e.key == key => Some(e.records),
            Ok(_) => {
                log::warn!("cache entry {} has a mismatched key; recomputing", path.display());
                None
            }
            Err(err) => {
                log::warn!("cache entry {} is corrupted ({err}); recomputing", path.display());
                None
            }
        }
    }

    pub fn put(&self, key: &str, records: &[APoint]) -> Result<()> {
        std::fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let entry = Entry {
            key: key.to_string(),
            records: records.to_vec(),
        };
        let path = self.path(key);
        write_atomically(&path, &serde_json::to_vec(&entry)?)
    }
}

/// Write through a sibling temporary file so readers never see half a file.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))
}
