//! Heating ensembles: many seeded random circuits applied to random product
//! states, with entropy curves and final spectra.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use entcool_core::circuit::{heat, Circuit, GateSet};
use entcool_core::qstate::StateVector;
use entcool_core::rng::{Purpose, RngStream};
use entcool_core::spectrum::{entanglement_spectrum, Bipartition, EntropyPair, RankTolerance};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, StatsCut};
use crate::error::{HarnessError, Result};
use crate::io;
use crate::manifest::RunManifest;
use crate::pool;

/// The part of the configuration that determines a realization's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatParams {
    pub n_qubits: usize,
    pub gate_set: String,
    pub n_gates: usize,
    pub seed: u64,
    pub cut: StatsCut,
    pub curve_stride: usize,
    pub rank_tol: f64,
}

impl HeatParams {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        Self {
            n_qubits: cfg.n_qubits,
            gate_set: cfg.gate_set.clone(),
            n_gates: cfg.n_gates,
            seed: cfg.seed,
            cut: cfg.cut,
            curve_stride: cfg.effective_curve_stride(),
            rank_tol: cfg.rank_tol,
        }
    }

    fn gate_set(&self) -> Result<GateSet> {
        self.gate_set
            .parse()
            .map_err(|e: entcool_core::Error| HarnessError::Config(e.to_string()))
    }

    fn tol(&self) -> Result<RankTolerance> {
        Ok(RankTolerance::new(self.rank_tol)?)
    }

    /// Gate numbers at which curve entropies are logged: 0, k, 2k, ... and the last gate.
    pub fn curve_points(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = (0..=self.n_gates).step_by(self.curve_stride).collect();
        if pts.last() != Some(&self.n_gates) {
            pts.push(self.n_gates);
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutSpectrum {
    pub cut: usize,
    pub values: Vec<f64>,
}

/// Result of one heating realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatRecord {
    pub realization: u32,
    /// `(S0, S1)` at each of [`HeatParams::curve_points`].
    pub curve: Vec<(f64, f64)>,
    pub spectra: Vec<CutSpectrum>,
}

/// Rebuilds the heated state of `realization` from its seed.
pub fn heated_state(params: &HeatParams, realization: u32) -> Result<(StateVector, Circuit)> {
    let (state, circuit, _) = run_realization(params, realization, false)?;
    Ok((state, circuit))
}

/// Draws the initial angles, heats, and records curve and spectra.
pub fn run_realization(
    params: &HeatParams,
    realization: u32,
    with_curve: bool,
) -> Result<(StateVector, Circuit, HeatRecord)> {
    let set = params.gate_set()?;
    let tol = params.tol()?;
    let n = params.n_qubits;
    let mut rng = RngStream::derive(params.seed, Purpose::Heating, realization);
    let thetas: Vec<f64> = (0..n)
        .map(|_| rng.uniform_in(0.0, std::f64::consts::PI))
        .collect();
    let mut state = StateVector::product(&thetas)?;

    let curve_part = Bipartition::new(n, params.cut.curve_cut(n))?;
    let stride = params.curve_stride;
    let last = params.n_gates;
    let mut curve = Vec::new();
    let mut failure = None;
    let mut log = |state: &StateVector, curve: &mut Vec<(f64, f64)>| match EntropyPair::at(
        state, curve_part, tol,
    ) {
        Ok(p) => curve.push((p.s0, p.s1)),
        Err(e) => failure = Some(e),
    };
    if with_curve {
        log(&state, &mut curve);
    }
    let circuit = heat(&mut state, &set, params.n_gates, &mut rng, |k, st, _| {
        if with_curve && (k % stride == 0 || k == last) {
            log(st, &mut curve);
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }

    let spectra = params
        .cut
        .cuts(n)
        .into_iter()
        .map(|cut| {
            let spec = entanglement_spectrum(&state, Bipartition::new(n, cut)?)?;
            Ok(CutSpectrum {
                cut,
                values: spec.values().to_vec(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let record = HeatRecord {
        realization,
        curve,
        spectra,
    };
    Ok((state, circuit, record))
}

/// One row of `entropy_curve.csv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub gate_number: usize,
    pub mean_s0: f64,
    pub mean_s1: f64,
    pub stderr_s0: f64,
    pub stderr_s1: f64,
}

#[derive(Debug, Clone)]
pub struct HeatSummary {
    pub curve: Vec<CurvePoint>,
    pub records: Vec<HeatRecord>,
}

fn checkpoint_dir(out: &Path) -> PathBuf {
    out.join("checkpoints").join("heat")
}

fn checkpoint_path(out: &Path, realization: u32) -> PathBuf {
    checkpoint_dir(out).join(format!("r{realization:06}.json"))
}

/// Creates the checkpoint directory, or checks that the checkpoints already
/// in it were produced with `fingerprint`.
pub(crate) fn prepare_checkpoints<T: Serialize>(dir: &Path, fingerprint: &T) -> Result<()> {
    io::create_dir(dir)?;
    let path = dir.join("fingerprint.json");
    let want = serde_json::to_string_pretty(fingerprint).expect("fingerprint serializes") + "\n";
    match std::fs::read_to_string(&path) {
        Ok(found) if found == want => Ok(()),
        Ok(_) => Err(HarnessError::CheckpointMismatch(dir.to_path_buf())),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            io::write_atomic(&path, want.as_bytes())
        }
        Err(e) => Err(HarnessError::io(&path, e)),
    }
}

fn load_or_run(out: &Path, params: &HeatParams, realization: u32) -> Result<HeatRecord> {
    let path = checkpoint_path(out, realization);
    if path.exists() {
        if let Ok(rec) = io::read_json::<HeatRecord>(&path) {
            if rec.realization == realization {
                return Ok(rec);
            }
        }
    }
    let (_, _, rec) = run_realization(params, realization, true)?;
    io::write_json(&path, &rec)?;
    Ok(rec)
}

/// Runs (or resumes) every realization of `cfg` and writes
/// `entropy_curve.csv`, `spectra.csv` and a fresh `manifest.json`.
pub fn run_heating_ensemble(cfg: &ExperimentConfig) -> Result<HeatSummary> {
    cfg.validate()?;
    let out = cfg.out.as_path();
    io::ensure_writable(out)?;
    let params = HeatParams::from_config(cfg);
    prepare_checkpoints(&checkpoint_dir(out), &params)?;

    let mut manifest = RunManifest::new(cfg);
    manifest.stamp("heat_started");

    let records = pool::build(cfg.workers)?.install(|| {
        (0..cfg.realizations as u32)
            .into_par_iter()
            .map(|i| load_or_run(out, &params, i))
            .collect::<Result<Vec<_>>>()
    })?;

    let curve = aggregate_curve(&params, &records);
    io::write_atomic(&out.join(io::ENTROPY_CURVE), curve_csv(&curve).as_bytes())?;
    io::write_atomic(&out.join(io::SPECTRA), spectra_csv(&records).as_bytes())?;

    manifest.stamp("heat_finished");
    manifest.record_file(out, io::ENTROPY_CURVE)?;
    manifest.record_file(out, io::SPECTRA)?;
    manifest.save(out)?;
    Ok(HeatSummary { curve, records })
}

/// Means and standard errors over realizations, reduced in index order.
pub fn aggregate_curve(params: &HeatParams, records: &[HeatRecord]) -> Vec<CurvePoint> {
    let r = records.len() as f64;
    params
        .curve_points()
        .iter()
        .enumerate()
        .map(|(j, &gate_number)| {
            let s0: Vec<f64> = records.iter().map(|rec| rec.curve[j].0).collect();
            let s1: Vec<f64> = records.iter().map(|rec| rec.curve[j].1).collect();
            let (mean_s0, stderr_s0) = mean_stderr(&s0);
            let (mean_s1, stderr_s1) = mean_stderr(&s1);
            debug_assert_eq!(s0.len() as f64, r);
            CurvePoint {
                gate_number,
                mean_s0,
                mean_s1,
                stderr_s0,
                stderr_s1,
            }
        })
        .collect()
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn curve_csv(curve: &[CurvePoint]) -> String {
    let mut s = String::from("gate_number,mean_s0,mean_s1,stderr_s0,stderr_s1\n");
    for p in curve {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            p.gate_number, p.mean_s0, p.mean_s1, p.stderr_s0, p.stderr_s1
        );
    }
    s
}

pub const SPECTRA_HEADER: &str = "realization,cut,level_index,lambda";

pub fn spectra_rows(rec: &HeatRecord, out: &mut String) {
    for cs in &rec.spectra {
        for (i, l) in cs.values.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                rec.realization,
                cs.cut,
                i,
                io::sci17(*l)
            );
        }
    }
}

pub fn spectra_csv(records: &[HeatRecord]) -> String {
    let mut s = String::from(SPECTRA_HEADER);
    s.push('\n');
    for rec in records {
        spectra_rows(rec, &mut s);
    }
    s
}

/// Outcome of re-running one realization from the manifest.
#[derive(Debug, Clone)]
pub struct ReplayReport {
    pub realization: u32,
    pub circuit_path: PathBuf,
    pub spectra_path: PathBuf,
    /// Whether the rows matched `spectra.csv`; `None` if that file is absent.
    pub matches_recorded: Option<bool>,
}

/// Re-runs `realization` from the manifest in `out`, dumps its circuit and
/// spectrum rows under `out/replay/`, and compares them with `spectra.csv`.
pub fn replay(out: &Path, realization: u32) -> Result<ReplayReport> {
    let manifest = RunManifest::load(out)?;
    if realization as usize >= manifest.config.realizations {
        return Err(HarnessError::Config(format!(
            "realization {realization} not in run of {}",
            manifest.config.realizations
        )));
    }
    let params = HeatParams::from_config(&manifest.config);
    let (_, circuit, rec) = run_realization(&params, realization, false)?;

    let dir = out.join("replay");
    io::create_dir(&dir)?;
    let circuit_path = dir.join(format!("r{realization:06}.circuit.txt"));
    io::write_atomic(&circuit_path, circuit.to_text().as_bytes())?;
    let mut rows = String::new();
    spectra_rows(&rec, &mut rows);
    let spectra_path = dir.join(format!("r{realization:06}.spectra.csv"));
    io::write_atomic(
        &spectra_path,
        format!("{SPECTRA_HEADER}\n{rows}").as_bytes(),
    )?;

    let recorded = out.join(io::SPECTRA);
    let matches_recorded = if recorded.exists() {
        let text = io::read_to_string(&recorded)?;
        let prefix = format!("{realization},");
        let mine: String = text
            .lines()
            .filter(|l| l.starts_with(&prefix))
            .flat_map(|l| [l, "\n"])
            .collect();
        Some(mine == rows)
    } else {
        None
    };
    if matches_recorded == Some(false) {
        return Err(HarnessError::ReplayMismatch { realization });
    }
    Ok(ReplayReport {
        realization,
        circuit_path,
        spectra_path,
        matches_recorded,
    })
}
