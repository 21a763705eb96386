use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Written atomically next to the outputs after a successful run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub config_hash: String,
    pub tool_version: String,
    pub created_utc: String,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(config_bytes: &[u8], outputs: Vec<PathBuf>) -> Self {
        Self {
            config_hash: hex::encode(Sha256::digest(config_bytes)),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            created_utc: chrono::Utc::now().to_rfc3339(),
            outputs,
        }
    }

    /// Write to `dir/manifest.json` via a temp file + rename.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let target = dir.join("manifest.json");
        let tmp = dir.join("manifest.json.tmp");
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(&tmp, body)?;
        fs::rename(&tmp, &target)?;
        Ok(target)
    }
}
