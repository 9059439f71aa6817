use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Relative to the run directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// What a run read, what it wrote and how long it took. The duration makes
/// the manifest itself the one output that is not byte-reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: u32,
    pub tool: String,
    pub config: Value,
    /// SHA-256 of the canonical JSON of `config`.
    pub input_sha256: String,
    pub files: Vec<FileEntry>,
    pub duration_seconds: f64,
}

impl RunManifest {
    pub fn new(config: Value, files: Vec<FileEntry>, duration_seconds: f64) -> Result<Self> {
        let input_sha256 = sha256_hex(super::to_canonical_json(&config)?.as_bytes());
        Ok(RunManifest {
            schema: 1,
            tool: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            config,
            input_sha256,
            files,
            duration_seconds,
        })
    }

    /// Re-hash every listed file under `dir`.
    pub fn verify(&self, dir: &Path) -> Result<()> {
        for entry in &self.files {
            let path = dir.join(&entry.path);
            let bytes = std::fs::read(&path).map_err(Error::io(&path))?;
            if sha256_hex(&bytes) != entry.sha256 {
                return Err(Error::Malformed { path, reason: "checksum mismatch".into() });
            }
        }
        Ok(())
    }
}
