//! File helpers shared by the pipeline stages.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

pub const ENTROPY_CURVE: &str = "entropy_curve.csv";
pub const SPECTRA: &str = "spectra.csv";
pub const MANIFEST: &str = "manifest.json";
pub const COOLING_SUMMARY: &str = "cooling_summary.csv";
pub const RATIOS: &str = "ratios.csv";
pub const HISTOGRAM: &str = "histogram.csv";
pub const FIT: &str = "fit.json";

pub fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| HarnessError::io(path, e))
}

/// Creates `dir` and proves it accepts writes.
pub fn ensure_writable(dir: &Path) -> Result<()> {
    create_dir(dir)?;
    let probe = dir.join(".entcool-write-probe");
    fs::write(&probe, b"ok").map_err(|e| HarnessError::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| HarnessError::io(&probe, e))
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partially written file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let tmp = tmp_path(path);
    fs::write(&tmp, contents).map_err(|e| HarnessError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| HarnessError::io(path, e))
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => HarnessError::NotFound(path.to_path_buf()),
        _ => HarnessError::io(path, e),
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn sci17(x: f64) -> String {
    format!("{x:.16e}")
}
