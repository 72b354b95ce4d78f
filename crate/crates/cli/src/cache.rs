//! Content-addressed store of computed numbers.
//!
//! A record is addressed by the SHA-256 of the canonical JSON of its key and
//! stores that key in full; a hit requires exact key equality. Values are
//! kept as raw `f64` bit patterns so a hit reproduces them bit for bit.
//! Unreadable records are deleted.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Serialize, Deserialize)]
struct Record {
    key: String,
    bits: Vec<u64>,
}

/// Canonical text of a key: serde_json maps are ordered, so equal values
/// serialize identically.
pub fn canonical(key: &serde_json::Value) -> String {
    serde_json::to_string(key).expect("JSON values always serialize")
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
    hits: AtomicUsize,
    misses: AtomicUsize,
    evicted: AtomicUsize,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            dir,
            ..Default::default()
        }
    }

    fn path_for(dir: &Path, hash: &str) -> PathBuf {
        dir.join(&hash[..2]).join(format!("{hash}.json"))
    }

    pub fn get(&self, key: &serde_json::Value) -> Option<Vec<f64>> {
        let dir = self.dir.as_ref()?;
        let text = canonical(key);
        let path = Self::path_for(dir, &digest(&text));
        let found = fs::read(&path).ok().and_then(|raw| {
            match serde_json::from_slice::<Record>(&raw) {
                Ok(r) => Some(r),
                Err(_) => {
                    let _ = fs::remove_file(&path);
                    self.evicted.fetch_add(1, Ordering::Relaxed);
                    None
                }
            }
        });
        match found {
            Some(r) if r.key == text => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(r.bits.into_iter().map(f64::from_bits).collect())
            }
            _ => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    /// Best effort: a failed write only costs a recomputation later.
    pub fn put(&self, key: &serde_json::Value, values: &[f64]) {
        let Some(dir) = self.dir.as_ref() else { return };
        let text = canonical(key);
        let path = Self::path_for(dir, &digest(&text));
        let record = Record {
            key: text,
            bits: values.iter().map(|v| v.to_bits()).collect(),
        };
        let Some(parent) = path.parent() else { return };
        if fs::create_dir_all(parent).is_err() {
            return;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let body = serde_json::to_vec(&record).expect("record serializes");
        if fs::write(&tmp, body).is_ok() && fs::rename(&tmp, &path).is_err() {
            let _ = fs::remove_file(&tmp);
        }
    }

    pub fn stats(&self) -> serde_json::Value {
        serde_json::json!({
            "enabled": self.dir.is_some(),
            "hits": self.hits.load(Ordering::Relaxed),
            "misses": self.misses.load(Ordering::Relaxed),
            "evicted": self.evicted.load(Ordering::Relaxed),
        })
    }
}
