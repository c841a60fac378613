//! Metropolis search for a disentangling gate sequence ("entanglement cooling").
//!
//! Each step proposes a random gate from the same set that built the state,
//! applies it, and compares the cut-averaged Rényi entropy before and after.
//! Decreases are kept; an increase `dS` is kept with probability
//! `exp(-beta dS)` and otherwise undone with the inverse gate. The search
//! stops when the average entropy reaches `target_entropy` or after
//! `max_steps` proposals.
//!
//! Per-cut entropies are cached between steps. A one-qubit gate cannot change
//! the entropy of any line cut, and a CNOT only changes the cuts lying between
//! its two operands, so only those spectra are recomputed.

use crate::circuit::{sample_gate, GateSet};
use crate::error::{Error, Result};
use crate::qstate::{Gate, StateVector};
use crate::rng::RngStream;
use crate::spectrum::{entanglement_spectrum, renyi_of_levels, Bipartition, RankTolerance};

/// Uphill moves smaller than this are accepted outright at finite `beta`.
pub const FLAT_MOVE_BAND: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CoolingConfig {
    /// Inverse temperature in 1/bits. `f64::INFINITY` accepts only moves with `dS <= 0`.
    pub beta: f64,
    pub max_steps: usize,
    /// Average entropy (bits) at or below which the state counts as a product state.
    pub target_entropy: f64,
    /// Rényi order of the objective.
    pub objective_q: f64,
    pub rank_tolerance: RankTolerance,
}

impl Default for CoolingConfig {
    fn default() -> Self {
        Self {
            beta: 5.0,
            max_steps: 200_000,
            target_entropy: 1e-8,
            objective_q: 1.0,
            rank_tolerance: RankTolerance::DEFAULT,
        }
    }
}

impl CoolingConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfiguration(m));
        if !(self.beta >= 0.0) {
            return bad(format!("beta = {} must be >= 0", self.beta));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be >= 1".into());
        }
        if !(self.target_entropy >= 0.0) {
            return bad(format!(
                "target_entropy = {} must be >= 0",
                self.target_entropy
            ));
        }
        if !(self.objective_q >= 0.0) {
            return bad(format!("objective_q = {} must be >= 0", self.objective_q));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Disentangled,
    StepBudgetExhausted,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Disentangled => "disentangled",
            Outcome::StepBudgetExhausted => "step_budget_exhausted",
        }
    }
}

/// One proposal. Entropies describe the state after the accept/reject decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// 1-based proposal number.
    pub step: usize,
    pub gate: Gate,
    pub delta_s: f64,
    pub accepted: bool,
    pub objective: f64,
    pub mean_s0: f64,
    pub mean_s1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoolingTrace {
    pub records: Vec<StepRecord>,
    pub outcome: Outcome,
    pub initial_objective: f64,
    pub initial_mean_s0: f64,
    pub initial_mean_s1: f64,
}

impl CoolingTrace {
    pub fn steps_used(&self) -> usize {
        self.records.len()
    }

    pub fn accepted(&self) -> usize {
        self.records.iter().filter(|r| r.accepted).count()
    }

    pub fn final_objective(&self) -> f64 {
        self.records
            .last()
            .map_or(self.initial_objective, |r| r.objective)
    }

    pub fn final_mean_s0(&self) -> f64 {
        self.records
            .last()
            .map_or(self.initial_mean_s0, |r| r.mean_s0)
    }

    pub fn final_mean_s1(&self) -> f64 {
        self.records
            .last()
            .map_or(self.initial_mean_s1, |r| r.mean_s1)
    }
}

/// Metropolis acceptance probability: 1 for `delta_s <= 0`, else `exp(-beta delta_s)`.
pub fn accept_probability(delta_s: f64, beta: f64) -> f64 {
    if delta_s <= 0.0 || beta == 0.0 {
        1.0
    } else {
        (-beta * delta_s).exp()
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct CutEntropy {
    s0: f64,
    s1: f64,
    objective: f64,
}

/// Entropies of every line cut, kept in sync with a state.
struct CutCache {
    cuts: Vec<CutEntropy>,
    q: f64,
    tol: RankTolerance,
}

impl CutCache {
    fn new(state: &StateVector, q: f64, tol: RankTolerance) -> Result<Self> {
        let mut cache = Self {
            cuts: vec![CutEntropy::default(); state.n_qubits() - 1],
            q,
            tol,
        };
        for cut in 1..state.n_qubits() {
            cache.refresh(state, cut)?;
        }
        Ok(cache)
    }

    fn refresh(&mut self, state: &StateVector, cut: usize) -> Result<()> {
        let spec = entanglement_spectrum(state, Bipartition::new(state.n_qubits(), cut)?)?;
        let levels = spec.retained(self.tol);
        let s0 = renyi_of_levels(levels, 0.0);
        let s1 = renyi_of_levels(levels, 1.0);
        let objective = if self.q == 0.0 {
            s0
        } else if self.q == 1.0 {
            s1
        } else {
            renyi_of_levels(levels, self.q)
        };
        self.cuts[cut - 1] = CutEntropy { s0, s1, objective };
        Ok(())
    }

    fn mean(&self, f: impl Fn(&CutEntropy) -> f64) -> f64 {
        self.cuts.iter().map(f).sum::<f64>() / self.cuts.len() as f64
    }
}

/// Cuts whose entropy `gate` can change.
fn affected_cuts(gate: &Gate) -> std::ops::Range<usize> {
    match gate {
        Gate::One { .. } => 0..0,
        Gate::Cnot(g) => {
            let (lo, hi) = (g.control.min(g.target), g.control.max(g.target));
            lo + 1..hi + 1
        }
    }
}

/// Runs the cooling search on `state` in place.
pub fn cool(
    state: &mut StateVector,
    set: &GateSet,
    cfg: &CoolingConfig,
    rng: &mut RngStream,
) -> Result<CoolingTrace> {
    cfg.validate()?;
    let n = state.n_qubits();
    if n < 2 {
        return Err(Error::InvalidConfiguration(
            "cooling needs at least two qubits".into(),
        ));
    }
    let mut cache = CutCache::new(state, cfg.objective_q, cfg.rank_tolerance)?;
    let mut current = cache.mean(|c| c.objective);
    let mut trace = CoolingTrace {
        records: Vec::new(),
        outcome: Outcome::StepBudgetExhausted,
        initial_objective: current,
        initial_mean_s0: cache.mean(|c| c.s0),
        initial_mean_s1: cache.mean(|c| c.s1),
    };
    if current <= cfg.target_entropy {
        trace.outcome = Outcome::Disentangled;
        return Ok(trace);
    }

    let mut saved = Vec::with_capacity(n);
    for step in 1..=cfg.max_steps {
        let gate = sample_gate(set, n, rng)?;
        let cuts = affected_cuts(&gate);
        saved.clear();
        saved.extend(cuts.clone().map(|c| cache.cuts[c - 1]));

        state.apply(&gate)?;
        for c in cuts.clone() {
            cache.refresh(state, c)?;
        }
        let proposed = cache.mean(|c| c.objective);
        let delta_s = proposed - current;

        let accepted = if delta_s <= 0.0 {
            true
        } else if cfg.beta.is_infinite() {
            false
        } else if delta_s <= FLAT_MOVE_BAND {
            true
        } else {
            rng.uniform() < accept_probability(delta_s, cfg.beta)
        };

        if accepted {
            current = proposed;
        } else {
            state.apply(&gate.inverse())?;
            for (c, old) in cuts.zip(&saved) {
                cache.cuts[c - 1] = *old;
            }
        }
        trace.records.push(StepRecord {
            step,
            gate,
            delta_s,
            accepted,
            objective: current,
            mean_s0: cache.mean(|c| c.s0),
            mean_s1: cache.mean(|c| c.s1),
        });
        if accepted && current <= cfg.target_entropy {
            trace.outcome = Outcome::Disentangled;
            break;
        }
    }
    Ok(trace)
}
