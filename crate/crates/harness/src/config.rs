//! Experiment configuration.
//!
//! Configs are flat TOML documents whose keys match the command-line flags,
//! e.g. `n-qubits = 12` and `--n-qubits 12`. Flags override file values,
//! which override the defaults below.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use entcool_core::circuit::GateSet;
use entcool_core::cooling::CoolingConfig;
use entcool_core::spectrum::{Bipartition, RankTolerance};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HarnessError, Result};

/// Which cut(s) spectra are recorded and pooled at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatsCut {
    Half,
    All,
    Cut(usize),
}

impl StatsCut {
    /// Cuts selected for an `n`-qubit register.
    pub fn cuts(self, n: usize) -> Vec<usize> {
        match self {
            StatsCut::Half => vec![n / 2],
            StatsCut::All => (1..n).collect(),
            StatsCut::Cut(c) => vec![c],
        }
    }

    /// Cut used for the entropy-vs-gate curves.
    pub fn curve_cut(self, n: usize) -> usize {
        match self {
            StatsCut::Half | StatsCut::All => n / 2,
            StatsCut::Cut(c) => c,
        }
    }

    /// Cut recorded in a ratio ensemble, `None` when cuts are pooled.
    pub fn source_cut(self, n: usize) -> Option<usize> {
        match self {
            StatsCut::All => None,
            s => Some(s.curve_cut(n)),
        }
    }
}

impl fmt::Display for StatsCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsCut::Half => f.write_str("half"),
            StatsCut::All => f.write_str("all"),
            StatsCut::Cut(c) => write!(f, "{c}"),
        }
    }
}

impl FromStr for StatsCut {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "half" => Ok(StatsCut::Half),
            "all" => Ok(StatsCut::All),
            other => other
                .parse()
                .map(StatsCut::Cut)
                .map_err(|_| format!("cut must be `half`, `all` or an integer, got {other:?}")),
        }
    }
}

impl Serialize for StatsCut {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for StatsCut {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(c) => Ok(StatsCut::Cut(c)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// JSON has no infinity, so an infinite beta is written as the string `"inf"`.
pub mod beta_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(beta: &f64, s: S) -> Result<S::Ok, S::Error> {
        if beta.is_finite() {
            s.serialize_f64(*beta)
        } else {
            s.serialize_str(if *beta > 0.0 { "inf" } else { "-inf" })
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => t.parse::<f64>().map_err(|_| {
                serde::de::Error::custom(format!("beta must be a number or \"inf\", got {t:?}"))
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    /// `cnot-h-t`, `cnot-h-s`, `cnot-h-not`, or a `-`-joined list of kinds.
    pub gate_set: String,
    /// Gates per heating circuit.
    pub n_gates: usize,
    pub realizations: usize,
    /// Heated realizations that get cooled.
    pub cool_samples: usize,
    /// Inverse temperature; `inf` gives greedy cooling.
    #[serde(with = "beta_serde")]
    pub beta: f64,
    pub max_steps: usize,
    /// Cut-averaged entropy (bits) counted as disentangled.
    pub target_entropy: f64,
    /// Rényi order of the cooling objective.
    pub objective_q: f64,
    pub seed: u64,
    pub cut: StatsCut,
    pub out: PathBuf,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Log curve entropies every k-th gate; 0 picks 1 for n <= 16 and 4 above.
    pub curve_stride: usize,
    /// Write every k-th cooling proposal to the trace files.
    pub trace_stride: usize,
    pub rank_tol: f64,
    pub degenerate_gap: f64,
    pub bin_width: f64,
    pub r_max: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_qubits: 16,
            gate_set: "cnot-h-t".into(),
            n_gates: 512,
            realizations: 5000,
            cool_samples: 100,
            beta: 5.0,
            max_steps: 200_000,
            target_entropy: 1e-8,
            objective_q: 1.0,
            seed: 1,
            cut: StatsCut::Half,
            out: PathBuf::from("entcool-out"),
            workers: 0,
            curve_stride: 0,
            trace_stride: 1,
            rank_tol: RankTolerance::DEFAULT.value(),
            degenerate_gap: entcool_core::spacings::DEFAULT_DEGENERATE_GAP,
            bin_width: 0.05,
            r_max: 10.0,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => HarnessError::NotFound(path.to_path_buf()),
            _ => HarnessError::io(path, e),
        })?;
        Self::from_toml(&text)
    }

    pub fn gate_set(&self) -> Result<GateSet> {
        self.gate_set
            .parse()
            .map_err(|e: entcool_core::Error| HarnessError::Config(format!("gate-set: {e}")))
    }

    pub fn rank_tolerance(&self) -> Result<RankTolerance> {
        RankTolerance::new(self.rank_tol)
            .map_err(|e| HarnessError::Config(format!("rank-tol: {e}")))
    }

    pub fn effective_curve_stride(&self) -> usize {
        match self.curve_stride {
            0 if self.n_qubits <= 16 => 1,
            0 => 4,
            k => k,
        }
    }

    pub fn cooling(&self) -> Result<CoolingConfig> {
        let cfg = CoolingConfig {
            beta: self.beta,
            max_steps: self.max_steps,
            target_entropy: self.target_entropy,
            objective_q: self.objective_q,
            rank_tolerance: self.rank_tolerance()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.n_qubits < 2 || self.n_qubits > entcool_core::qstate::MAX_QUBITS {
            return bad(format!(
                "n-qubits = {} outside 2..={}",
                self.n_qubits,
                entcool_core::qstate::MAX_QUBITS
            ));
        }
        let set = self.gate_set()?;
        if !set.has_two_qubit() {
            return bad(format!("gate-set {} has no two-qubit gate", set.label()));
        }
        if self.n_gates == 0 || self.realizations == 0 || self.cool_samples == 0 {
            return bad("n-gates, realizations and cool-samples must all be >= 1".into());
        }
        if self.cool_samples > self.realizations {
            return bad(format!(
                "cool-samples = {} exceeds realizations = {}",
                self.cool_samples, self.realizations
            ));
        }
        if self.realizations > u32::MAX as usize {
            return bad("too many realizations".into());
        }
        if self.trace_stride == 0 {
            return bad("trace-stride must be >= 1".into());
        }
        for c in self.cut.cuts(self.n_qubits) {
            Bipartition::new(self.n_qubits, c)
                .map_err(|e| HarnessError::Config(format!("cut: {e}")))?;
        }
        self.rank_tolerance()?;
        self.cooling()?;
        if self.degenerate_gap.is_nan() || self.degenerate_gap < 0.0 {
            return bad("degenerate-gap must be >= 0".into());
        }
        if !(self.bin_width > 0.0 && self.r_max > self.bin_width) {
            return bad("need 0 < bin-width < r-max".into());
        }
        Ok(())
    }
}
