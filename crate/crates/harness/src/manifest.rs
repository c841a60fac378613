//! `manifest.json`: everything needed to re-run any realization in isolation.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use entcool_core::rng::{self, Purpose, RngStream};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::io;

pub const THETA_DISTRIBUTION: &str =
    "uniform on [0, pi), one angle per qubit drawn first from the heating stream";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Software {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RngInfo {
    pub algorithm: String,
    pub master_seed: u64,
}

/// Seed material of one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationSeed {
    pub index: u32,
    pub heating_stream: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolingSample {
    pub index: u32,
    pub cooling_stream: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolingSection {
    #[serde(with = "crate::config::beta_serde")]
    pub beta: f64,
    pub max_steps: usize,
    pub target_entropy: f64,
    pub objective_q: f64,
    pub trace_stride: usize,
    pub selection_stream: u64,
    pub samples: Vec<CoolingSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSection {
    pub cut: String,
    pub degenerate_gap: f64,
    pub bin_width: f64,
    pub r_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub software: Software,
    /// Configuration of the heating stage.
    pub config: ExperimentConfig,
    pub rng: RngInfo,
    pub theta_distribution: String,
    pub realizations: Vec<RealizationSeed>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cooling: Option<CoolingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsSection>,
    /// Stage start/finish times, seconds since the Unix epoch.
    pub timestamps: BTreeMap<String, u64>,
    /// Output file name -> SHA-256.
    pub files: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(config: &ExperimentConfig) -> Self {
        let realizations = (0..config.realizations as u32)
            .map(|index| RealizationSeed {
                index,
                heating_stream: RngStream::derive(config.seed, Purpose::Heating, index).stream(),
            })
            .collect();
        Self {
            software: Software {
                name: "entcool".into(),
                version: env!("CARGO_PKG_VERSION").into(),
            },
            config: config.clone(),
            rng: RngInfo {
                algorithm: rng::ALGORITHM.into(),
                master_seed: config.seed,
            },
            theta_distribution: THETA_DISTRIBUTION.into(),
            realizations,
            cooling: None,
            stats: None,
            timestamps: BTreeMap::new(),
            files: BTreeMap::new(),
        }
    }

    pub fn load(out: &Path) -> Result<Self> {
        io::read_json(&out.join(io::MANIFEST))
    }

    pub fn save(&self, out: &Path) -> Result<()> {
        io::write_json(&out.join(io::MANIFEST), self)
    }

    pub fn stamp(&mut self, key: &str) {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.timestamps.insert(key.into(), secs);
    }

    /// Records the checksum of `name` (relative to `out`).
    pub fn record_file(&mut self, out: &Path, name: &str) -> Result<()> {
        let sum = io::sha256_file(&out.join(name))?;
        self.files.insert(name.into(), sum);
        Ok(())
    }
}
