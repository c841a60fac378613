//! Ensemble runner for entanglement heating, Metropolis cooling and
//! spacing-ratio statistics, with checkpointing and a run manifest.

pub mod cli;
pub mod config;
pub mod cooling;
pub mod error;
pub mod heating;
pub mod io;
pub mod manifest;
pub mod stats;

pub use config::{ExperimentConfig, StatsCut};
pub use error::{HarnessError, Result};

/// Runs heating, cooling and statistics in sequence.
pub fn run_all(cfg: &ExperimentConfig) -> Result<stats::StatsOutcome> {
    heating::run_heating_ensemble(cfg)?;
    cooling::run_cooling_ensemble(cfg)?;
    stats::run_stats(cfg)
}

mod pool {
    use crate::error::{HarnessError, Result};

    /// Thread pool of `workers` threads (0: one per core). Results never
    /// depend on the width: work is keyed by realization index and reduced
    /// in index order.
    pub fn build(workers: usize) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| HarnessError::Config(format!("workers: {e}")))
    }
}
