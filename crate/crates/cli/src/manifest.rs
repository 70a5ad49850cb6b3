use std::fs;
use std::path::{Path, PathBuf};

use rauzy_core::rng::GENERATOR_ID;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path) -> CliResult<Self> {
        let data = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(Self::of_bytes(path, &data))
    }

    pub fn of_bytes(path: &Path, data: &[u8]) -> Self {
        Self {
            path: path.display().to_string(),
            bytes: data.len() as u64,
            sha256: hex::encode(Sha256::digest(data)),
        }
    }
}

/// Everything needed to replay a run: the full argument set, seeds and the
/// digests of what went in and came out.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub params: serde_json::Value,
    pub seeds: Vec<u64>,
    pub generator: &'static str,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl RunManifest {
    pub fn new(command: &str, params: &impl Serialize) -> CliResult<Self> {
        Ok(Self {
            schema_version: rauzy_core::SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_owned(),
            params: serde_json::to_value(params).map_err(|e| CliError::Internal(e.to_string()))?,
            seeds: Vec::new(),
            generator: GENERATOR_ID,
            inputs: Vec::new(),
            outputs: Vec::new(),
        })
    }
}

/// `path` with `suffix` appended to its file name.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn write_bytes(path: &Path, data: &[u8]) -> CliResult<FileDigest> {
    fs::write(path, data).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    Ok(FileDigest::of_bytes(path, data))
}

/// Pretty JSON with a trailing newline.
pub fn write_json(path: &Path, value: &impl Serialize) -> CliResult<FileDigest> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    write_bytes(path, text.as_bytes())
}
