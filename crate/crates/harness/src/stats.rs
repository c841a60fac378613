//! Spacing-ratio statistics over the recorded spectra.

use std::fmt::Write as _;
use std::path::Path;

use entcool_core::spacings::{
    classify, histogram, spacing_ratios, FitReport, RatioEnsemble, SurmiseModel,
};
use entcool_core::spectrum::EntanglementSpectrum;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::heating::SPECTRA_HEADER;
use crate::io;
use crate::manifest::{RunManifest, StatsSection};

/// Spectrum of one realization at one cut, as read back from `spectra.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow {
    pub realization: u32,
    pub cut: usize,
    pub levels: Vec<f64>,
}

/// Parses `spectra.csv`, grouping consecutive rows by `(realization, cut)`.
pub fn read_spectra(path: &Path) -> Result<Vec<SpectrumRow>> {
    let text = io::read_to_string(path)?;
    let malformed = |line: usize, message: String| HarnessError::Malformed {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SPECTRA_HEADER => {}
        Some((_, h)) => {
            return Err(malformed(
                1,
                format!("expected header {SPECTRA_HEADER:?}, got {h:?}"),
            ))
        }
        None => return Ok(Vec::new()),
    }
    let mut out: Vec<SpectrumRow> = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(malformed(
                lineno,
                format!("expected 4 fields, got {}", fields.len()),
            ));
        }
        let bad = |what: &str| malformed(lineno, format!("bad {what}: {line:?}"));
        let realization: u32 = fields[0].trim().parse().map_err(|_| bad("realization"))?;
        let cut: usize = fields[1].trim().parse().map_err(|_| bad("cut"))?;
        let level: usize = fields[2].trim().parse().map_err(|_| bad("level_index"))?;
        let lambda: f64 = fields[3].trim().parse().map_err(|_| bad("lambda"))?;
        match out.last_mut() {
            Some(row) if row.realization == realization && row.cut == cut => {
                if level != row.levels.len() {
                    return Err(bad("level_index order"));
                }
                row.levels.push(lambda);
            }
            _ => {
                if level != 0 {
                    return Err(bad("level_index order"));
                }
                out.push(SpectrumRow {
                    realization,
                    cut,
                    levels: vec![lambda],
                });
            }
        }
    }
    Ok(out)
}

/// Contents of `fit.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitFile {
    pub ks_poisson: f64,
    pub ks_goe: f64,
    pub ks_gue: f64,
    pub mean_r_tilde: f64,
    pub n_ratios: usize,
    pub drop_count: usize,
    pub best_fit: String,
    pub gate_set: String,
    pub cut: String,
    pub verdict: String,
    pub low_statistics: bool,
}

pub fn verdict(best: SurmiseModel) -> &'static str {
    match best {
        SurmiseModel::Poisson => "non-universal (Poisson-like level statistics)",
        SurmiseModel::Goe | SurmiseModel::Gue => "universal (Wigner-Dyson level statistics)",
    }
}

#[derive(Debug, Clone)]
pub struct StatsOutcome {
    pub report: FitReport,
    pub fit: FitFile,
    pub ensemble: RatioEnsemble,
}

impl StatsOutcome {
    pub fn verdict_line(&self) -> String {
        let f = &self.fit;
        format!(
            "{}: best fit {} (KS Poisson {:.4}, GOE {:.4}, GUE {:.4}; <r~> = {:.4}, {} ratios) -> {}",
            f.gate_set, f.best_fit, f.ks_poisson, f.ks_goe, f.ks_gue, f.mean_r_tilde, f.n_ratios, f.verdict
        )
    }
}

/// Builds the ratio ensemble at the configured cut(s).
pub fn ensemble_from_rows(
    rows: &[SpectrumRow],
    cuts: &[usize],
    source_cut: Option<usize>,
    cfg: &ExperimentConfig,
) -> Result<RatioEnsemble> {
    let tol = cfg.rank_tolerance()?;
    let mut ens = RatioEnsemble::new(source_cut);
    for row in rows.iter().filter(|r| cuts.contains(&r.cut)) {
        let spec = EntanglementSpectrum::from_values(row.levels.clone())?;
        ens.push(
            row.realization,
            spacing_ratios(&spec, tol, cfg.degenerate_gap),
        );
    }
    Ok(ens)
}

/// Reads `spectra.csv` from `cfg.out` and writes `ratios.csv`,
/// `histogram.csv` and `fit.json`.
///
/// Register size and gate set are taken from the manifest when present.
pub fn run_stats(cfg: &ExperimentConfig) -> Result<StatsOutcome> {
    let out = cfg.out.as_path();
    let rows = read_spectra(&out.join(io::SPECTRA))?;
    if rows.is_empty() {
        return Err(HarnessError::Empty(format!(
            "{} contains no spectra",
            out.join(io::SPECTRA).display()
        )));
    }
    let mut manifest = match RunManifest::load(out) {
        Ok(m) => Some(m),
        Err(HarnessError::NotFound(_)) => None,
        Err(e) => return Err(e),
    };
    let (n, gate_set) = match &manifest {
        Some(m) => (m.config.n_qubits, m.config.gate_set.clone()),
        None => (cfg.n_qubits, cfg.gate_set.clone()),
    };
    let label = gate_set
        .parse::<entcool_core::circuit::GateSet>()
        .map(|s| s.label())
        .unwrap_or(gate_set);
    let cuts = cfg.cut.cuts(n);
    let ensemble = ensemble_from_rows(&rows, &cuts, cfg.cut.source_cut(n), cfg)?;
    if ensemble.is_empty() {
        return Err(HarnessError::Empty(format!(
            "no spacing ratios at cut {} ({} spectra read)",
            cfg.cut,
            rows.len()
        )));
    }
    let report = classify(&ensemble)?;
    let hist = histogram(&ensemble, cfg.bin_width, cfg.r_max)?;

    let mut ratios = String::from("realization,ratio\n");
    for (src, r) in ensemble.sources().iter().zip(ensemble.ratios()) {
        let _ = writeln!(ratios, "{src},{}", io::sci17(*r));
    }
    io::write_atomic(&out.join(io::RATIOS), ratios.as_bytes())?;

    let mut h = String::from("bin_left,bin_right,density\n");
    for b in &hist.bins {
        let _ = writeln!(h, "{},{},{}", b.left, b.right, b.density);
    }
    io::write_atomic(&out.join(io::HISTOGRAM), h.as_bytes())?;

    let fit = FitFile {
        ks_poisson: report.ks_poisson,
        ks_goe: report.ks_goe,
        ks_gue: report.ks_gue,
        mean_r_tilde: report.mean_r_tilde,
        n_ratios: report.n_ratios,
        drop_count: report.drop_count,
        best_fit: report.best_fit.to_string(),
        gate_set: label,
        cut: cfg.cut.to_string(),
        verdict: verdict(report.best_fit).into(),
        low_statistics: report.low_statistics,
    };
    io::write_json(&out.join(io::FIT), &fit)?;

    if let Some(m) = manifest.as_mut() {
        m.stats = Some(StatsSection {
            cut: cfg.cut.to_string(),
            degenerate_gap: cfg.degenerate_gap,
            bin_width: cfg.bin_width,
            r_max: cfg.r_max,
        });
        for name in [io::RATIOS, io::HISTOGRAM, io::FIT] {
            m.record_file(out, name)?;
        }
        m.stamp("stats_finished");
        m.save(out)?;
    }
    Ok(StatsOutcome {
        report,
        fit,
        ensemble,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grouped_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("spectra.csv");
        std::fs::write(
            &p,
            format!("{SPECTRA_HEADER}\n0,1,0,0.75\n0,1,1,0.25\n1,1,0,1.0\n0,2,0,0.5\n0,2,1,0.5\n"),
        )
        .unwrap();
        let rows = read_spectra(&p).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].levels, vec![0.75, 0.25]);
        assert_eq!((rows[2].realization, rows[2].cut), (0, 2));
    }

    #[test]
    fn rejects_malformed_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("spectra.csv");
        for body in ["0,1,1,0.5\n", "0,1,0\n", "x,1,0,0.5\n", "0,1,0,abc\n"] {
            std::fs::write(&p, format!("{SPECTRA_HEADER}\n{body}")).unwrap();
            let e = read_spectra(&p).unwrap_err();
            assert!(
                matches!(e, HarnessError::Malformed { line: 2, .. }),
                "{body}: {e}"
            );
        }
        std::fs::write(&p, "a,b\n").unwrap();
        assert!(matches!(
            read_spectra(&p),
            Err(HarnessError::Malformed { line: 1, .. })
        ));
    }
}
