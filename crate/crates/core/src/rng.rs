//! Seeded, platform-independent random streams.
//!
//! Every stream is ChaCha8 keyed by `seed_from_u64(master_seed)`; independent
//! streams share the key and differ only in the ChaCha stream id, which is
//! `(purpose << 32) | index`. A realization's heating stream is therefore
//! `(master, Heating, realization)` and can be recreated in isolation.
//!
//! Draws only use `u32`/`f64` sampling so results do not depend on the
//! platform's pointer width.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name of the generator, recorded in run manifests.
pub const ALGORITHM: &str =
    "ChaCha8 (rand_chacha 0.9), key = seed_from_u64(master), stream = purpose<<32 | index";

/// What a derived stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    /// Initial angles and the heating circuit of one realization.
    Heating = 1,
    /// Metropolis proposals and acceptance draws of one cooling run.
    Cooling = 2,
    /// Choice of which realizations get cooled.
    Selection = 3,
    /// Ad hoc streams (tests, tools).
    Scratch = 4,
}

/// A seeded random stream.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    /// Stream 0 of `seed`.
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Stream for `purpose` and `index` (e.g. realization number) under `master`.
    pub fn derive(master: u64, purpose: Purpose, index: u32) -> Self {
        Self::with_stream(master, ((purpose as u64) << 32) | u64::from(index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u32) -> u32 {
        assert!(n > 0, "empty range");
        self.rng.random_range(0..n)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}
