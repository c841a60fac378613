//! Cooling ensembles: a seeded sample of heated realizations is rebuilt from
//! the manifest and run through the Metropolis search.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use entcool_core::circuit::GateKind;
use entcool_core::cooling::{cool, CoolingTrace};
use entcool_core::qstate::Gate;
use entcool_core::rng::{Purpose, RngStream};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::heating::{heated_state, prepare_checkpoints, HeatParams};
use crate::io;
use crate::manifest::{CoolingSample, CoolingSection, RunManifest};
use crate::pool;

/// One row of `cooling_summary.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoolingRow {
    pub sample: u32,
    pub outcome: String,
    pub final_mean_s0: f64,
    pub final_mean_s1: f64,
    pub steps_used: usize,
    pub initial_mean_s0: f64,
    pub initial_mean_s1: f64,
}

impl CoolingRow {
    fn new(sample: u32, trace: &CoolingTrace) -> Self {
        Self {
            sample,
            outcome: trace.outcome.as_str().into(),
            final_mean_s0: trace.final_mean_s0(),
            final_mean_s1: trace.final_mean_s1(),
            steps_used: trace.steps_used(),
            initial_mean_s0: trace.initial_mean_s0,
            initial_mean_s1: trace.initial_mean_s1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct CoolFingerprint<'a> {
    heat: &'a HeatParams,
    section: &'a CoolingSection,
}

/// Picks `k` distinct realizations out of `n` with the selection stream,
/// returned in ascending order.
pub fn select_samples(seed: u64, n: usize, k: usize) -> Vec<u32> {
    let mut rng = RngStream::derive(seed, Purpose::Selection, 0);
    let mut pool: Vec<u32> = (0..n as u32).collect();
    for i in 0..k {
        let j = i + rng.below((n - i) as u32) as usize;
        pool.swap(i, j);
    }
    let mut picked = pool[..k].to_vec();
    picked.sort_unstable();
    picked
}

fn checkpoint_dir(out: &Path) -> PathBuf {
    out.join("checkpoints").join("cool")
}

pub fn trace_path(out: &Path, sample: u32) -> PathBuf {
    out.join("cooling").join(format!("trace_r{sample:06}.csv"))
}

fn gate_columns(g: &Gate) -> (String, String) {
    match *g {
        Gate::One { kind, qubit } => (GateKind::One(kind).to_string(), qubit.to_string()),
        Gate::Cnot(c) => (
            GateKind::Cnot.to_string(),
            format!("{}:{}", c.control, c.target),
        ),
    }
}

/// Trace CSV keeping every `stride`-th proposal plus the last one.
pub fn trace_csv(trace: &CoolingTrace, stride: usize) -> String {
    let mut s = String::from("step,gate,qubits,delta_s,accepted,mean_s0,mean_s1\n");
    let last = trace.records.len();
    for r in &trace.records {
        if r.step % stride != 0 && r.step != last {
            continue;
        }
        let (gate, qubits) = gate_columns(&r.gate);
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.step, gate, qubits, r.delta_s, r.accepted as u8, r.mean_s0, r.mean_s1
        );
    }
    s
}

fn cool_one(
    out: &Path,
    heat: &HeatParams,
    cfg: &ExperimentConfig,
    sample: &CoolingSample,
) -> Result<CoolingRow> {
    let ckpt = checkpoint_dir(out).join(format!("r{:06}.json", sample.index));
    if let Ok(row) = io::read_json::<CoolingRow>(&ckpt) {
        if row.sample == sample.index && trace_path(out, sample.index).exists() {
            return Ok(row);
        }
    }
    let (mut state, _) = heated_state(heat, sample.index)?;
    let set = cfg.gate_set()?;
    let mut rng = RngStream::derive(heat.seed, Purpose::Cooling, sample.index);
    let trace = cool(&mut state, &set, &cfg.cooling()?, &mut rng)?;
    io::write_atomic(
        &trace_path(out, sample.index),
        trace_csv(&trace, cfg.trace_stride).as_bytes(),
    )?;
    let row = CoolingRow::new(sample.index, &trace);
    io::write_json(&ckpt, &row)?;
    Ok(row)
}

/// Cools `cool-samples` realizations of the heating run recorded in
/// `cfg.out`, writing per-sample traces and `cooling_summary.csv`.
///
/// Heating parameters (qubits, gate set, seed, gates) come from the manifest;
/// the cooling knobs and the sample count come from `cfg`.
pub fn run_cooling_ensemble(cfg: &ExperimentConfig) -> Result<Vec<CoolingRow>> {
    let out = cfg.out.as_path();
    let manifest_path = out.join(io::MANIFEST);
    if !manifest_path.exists() {
        return Err(HarnessError::NotFound(manifest_path));
    }
    let mut manifest = RunManifest::load(out)?;
    let heat = HeatParams::from_config(&manifest.config);
    let cfg = ExperimentConfig {
        n_qubits: heat.n_qubits,
        gate_set: heat.gate_set.clone(),
        n_gates: heat.n_gates,
        realizations: manifest.config.realizations,
        seed: heat.seed,
        ..cfg.clone()
    };
    cfg.validate()?;
    io::ensure_writable(out)?;
    io::create_dir(&out.join("cooling"))?;

    let selection = RngStream::derive(heat.seed, Purpose::Selection, 0).stream();
    let samples: Vec<CoolingSample> = select_samples(heat.seed, cfg.realizations, cfg.cool_samples)
        .into_iter()
        .map(|index| CoolingSample {
            index,
            cooling_stream: RngStream::derive(heat.seed, Purpose::Cooling, index).stream(),
        })
        .collect();
    let section = CoolingSection {
        beta: cfg.beta,
        max_steps: cfg.max_steps,
        target_entropy: cfg.target_entropy,
        objective_q: cfg.objective_q,
        trace_stride: cfg.trace_stride,
        selection_stream: selection,
        samples,
    };
    prepare_checkpoints(
        &checkpoint_dir(out),
        &CoolFingerprint {
            heat: &heat,
            section: &section,
        },
    )?;
    manifest.stamp("cool_started");

    let rows = pool::build(cfg.workers)?.install(|| {
        section
            .samples
            .par_iter()
            .map(|s| cool_one(out, &heat, &cfg, s))
            .collect::<Result<Vec<_>>>()
    })?;

    io::write_atomic(
        &out.join(io::COOLING_SUMMARY),
        summary_csv(&rows).as_bytes(),
    )?;
    manifest
        .files
        .retain(|name, _| !name.starts_with("cooling/"));
    for s in &section.samples {
        let name = format!("cooling/trace_r{:06}.csv", s.index);
        manifest.record_file(out, &name)?;
    }
    manifest.record_file(out, io::COOLING_SUMMARY)?;
    manifest.cooling = Some(section);
    manifest.stamp("cool_finished");
    manifest.save(out)?;
    Ok(rows)
}

pub fn summary_csv(rows: &[CoolingRow]) -> String {
    let mut s = String::from(
        "sample,outcome,final_mean_s0,final_mean_s1,steps_used,initial_mean_s0,initial_mean_s1\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.sample,
            r.outcome,
            r.final_mean_s0,
            r.final_mean_s1,
            r.steps_used,
            r.initial_mean_s0,
            r.initial_mean_s1
        );
    }
    s
}
