//! Spacing-ratio statistics of entanglement spectra.
//!
//! For descending levels `lambda_1 > lambda_2 > ...` the gaps are
//! `eps_i = lambda_i - lambda_{i+1}` and the ratios `r_i = eps_{i+1} / eps_i`.
//! Ratios are scale free, so no unfolding is needed. Their distribution is
//! compared against
//!
//! * Poisson: `P(r) = 1 / (1 + r)^2`
//! * Wigner-Dyson surmise: `P(r) = (r + r^2)^b / (Z (1 + r + r^2)^(1 + 3b/2))`
//!   with `b = 1, Z = 8/27` (GOE) and `b = 2, Z = 4 pi / (81 sqrt 3)` (GUE).
//!
//! All three densities satisfy `P(1/r) / r^2 = P(r)`, hence
//! `CDF(r) = 1 - CDF(1/r)`, which is how the Wigner-Dyson CDFs are evaluated
//! for `r > 1`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid_arg, Error, Result};
use crate::quadrature::integrate;
use crate::spectrum::{EntanglementSpectrum, RankTolerance};

/// Gaps below this (absolute) are treated as exact degeneracies.
pub const DEFAULT_DEGENERATE_GAP: f64 = 1e-14;

/// Below this many ratios a fit report is flagged as low-statistics.
pub const LOW_STATISTICS_THRESHOLD: usize = 100;

const CDF_QUAD_TOL: f64 = 1e-13;

/// Ratios extracted from one spectrum.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectrumRatios {
    /// `r_i = eps_{i+1} / eps_i`, in level order.
    pub ratios: Vec<f64>,
    /// `min(r_i, 1 / r_i)`.
    pub folded: Vec<f64>,
    /// Ratios discarded because a gap they involve is degenerate.
    pub drop_count: usize,
}

/// Consecutive-gap ratios of the levels above `tol`.
///
/// A ratio is dropped (and counted) when either of its gaps is below
/// `degenerate_gap`: a zero denominator has no ratio and a zero numerator is
/// the mirror image of it under `r -> 1/r`. Fewer than three retained levels
/// yield no ratios.
pub fn spacing_ratios(
    spec: &EntanglementSpectrum,
    tol: RankTolerance,
    degenerate_gap: f64,
) -> SpectrumRatios {
    let levels = spec.retained(tol);
    let gaps: Vec<f64> = levels.windows(2).map(|w| w[0] - w[1]).collect();
    let mut out = SpectrumRatios::default();
    for pair in gaps.windows(2) {
        let (den, num) = (pair[0], pair[1]);
        if den < degenerate_gap || num < degenerate_gap {
            out.drop_count += 1;
            continue;
        }
        let r = num / den;
        out.ratios.push(r);
        out.folded.push(r.min(1.0 / r));
    }
    out
}

/// Reference distributions for spacing ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurmiseModel {
    Poisson,
    /// Orthogonal ensemble, Dyson index 1.
    Goe,
    /// Unitary ensemble, Dyson index 2.
    Gue,
}

impl SurmiseModel {
    pub const ALL: [SurmiseModel; 3] =
        [SurmiseModel::Poisson, SurmiseModel::Goe, SurmiseModel::Gue];

    /// Dyson index, `None` for Poisson.
    pub fn beta(self) -> Option<u32> {
        match self {
            SurmiseModel::Poisson => None,
            SurmiseModel::Goe => Some(1),
            SurmiseModel::Gue => Some(2),
        }
    }

    /// Normalization constant `Z` of the surmise, `None` for Poisson.
    pub fn z(self) -> Option<f64> {
        match self {
            SurmiseModel::Poisson => None,
            SurmiseModel::Goe => Some(8.0 / 27.0),
            SurmiseModel::Gue => Some(4.0 / 81.0 * PI / 3f64.sqrt()),
        }
    }

    fn density(self, r: f64) -> f64 {
        match self {
            SurmiseModel::Poisson => 1.0 / ((1.0 + r) * (1.0 + r)),
            SurmiseModel::Goe => {
                let s = 1.0 + r + r * r;
                (r + r * r) / (s * s.powf(1.5)) * (27.0 / 8.0)
            }
            SurmiseModel::Gue => {
                let s = 1.0 + r + r * r;
                let x = r + r * r;
                x * x / (s * s * s * s) / SurmiseModel::Gue.z().unwrap()
            }
        }
    }

    /// `<min(r, 1/r)>` under the model. Exact for Poisson (`2 ln 2 - 1`),
    /// by quadrature otherwise.
    pub fn mean_folded_ratio(self) -> f64 {
        match self {
            SurmiseModel::Poisson => 2.0 * LN_2 - 1.0,
            // symmetry: the folded ratio has density 2 P(r) on [0, 1]
            m => 2.0 * integrate(|r| r * m.density(r), 0.0, 1.0, CDF_QUAD_TOL),
        }
    }
}

impl fmt::Display for SurmiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurmiseModel::Poisson => "Poisson",
            SurmiseModel::Goe => "GOE",
            SurmiseModel::Gue => "GUE",
        })
    }
}

impl FromStr for SurmiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "poisson" => Ok(SurmiseModel::Poisson),
            "goe" => Ok(SurmiseModel::Goe),
            "gue" => Ok(SurmiseModel::Gue),
            _ => Err(invalid_arg(format!("unknown model {s:?}"))),
        }
    }
}

/// Density of the ratio `r` under `model`.
pub fn surmise_pdf(model: SurmiseModel, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(invalid_arg(format!("ratio {r} must be >= 0")));
    }
    if r.is_infinite() {
        return Ok(0.0);
    }
    Ok(model.density(r))
}

/// `P(ratio <= r)` under `model`; 0 for `r <= 0`.
pub fn surmise_cdf(model: SurmiseModel, r: f64) -> f64 {
    if r.is_nan() || r <= 0.0 {
        return 0.0;
    }
    if r.is_infinite() {
        return 1.0;
    }
    match model {
        SurmiseModel::Poisson => r / (1.0 + r),
        m if r <= 1.0 => integrate(|x| m.density(x), 0.0, r, CDF_QUAD_TOL),
        m => 1.0 - integrate(|x| m.density(x), 0.0, 1.0 / r, CDF_QUAD_TOL),
    }
}

/// Inverse CDF: the `r` with `surmise_cdf(model, r) = p`, for `p` in `[0, 1)`.
pub fn surmise_quantile(model: SurmiseModel, p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(invalid_arg(format!("probability {p} outside [0, 1)")));
    }
    if model == SurmiseModel::Poisson {
        return Ok(p / (1.0 - p));
    }
    // CDF(r) = p with p > 1/2 mirrors to CDF(1/r) = 1 - p
    let (target, mirrored) = if p > 0.5 { (1.0 - p, true) } else { (p, false) };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if surmise_cdf(model, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let r = 0.5 * (lo + hi);
    Ok(if mirrored { 1.0 / r } else { r })
}

/// Two-sided Kolmogorov-Smirnov distance between the empirical distribution
/// of `sorted` (ascending) and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i as f64 + 1.0) / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Spacing ratios pooled over many spectra.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RatioEnsemble {
    ratios: Vec<f64>,
    folded: Vec<f64>,
    /// Realization each ratio came from, parallel to `ratios`.
    sources: Vec<u32>,
    n_realizations: usize,
    /// Cut the spectra were taken at; `None` when cuts are pooled.
    source_cut: Option<usize>,
    drop_count: usize,
    last_realization: Option<u32>,
}

impl RatioEnsemble {
    pub fn new(source_cut: Option<usize>) -> Self {
        Self {
            source_cut,
            ..Self::default()
        }
    }

    /// Builds an ensemble directly from ratio samples (one pseudo-realization).
    pub fn from_ratios(ratios: Vec<f64>) -> Result<Self> {
        if let Some(r) = ratios.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(invalid_arg(format!("ratio {r} is not positive and finite")));
        }
        let folded = ratios.iter().map(|&r| r.min(1.0 / r)).collect();
        Ok(Self {
            sources: vec![0; ratios.len()],
            ratios,
            folded,
            n_realizations: 1,
            source_cut: None,
            drop_count: 0,
            last_realization: Some(0),
        })
    }

    /// Adds the ratios of one spectrum belonging to `realization`. Each
    /// realization is counted once however many spectra it contributes.
    pub fn push(&mut self, realization: u32, part: SpectrumRatios) {
        if self.last_realization != Some(realization) {
            self.n_realizations += 1;
            self.last_realization = Some(realization);
        }
        self.sources
            .extend(std::iter::repeat_n(realization, part.ratios.len()));
        self.ratios.extend(part.ratios);
        self.folded.extend(part.folded);
        self.drop_count += part.drop_count;
    }

    /// Appends `other`; merging partial ensembles in realization order gives
    /// the same result as building one sequentially.
    pub fn merge(&mut self, other: RatioEnsemble) {
        self.ratios.extend(other.ratios);
        self.folded.extend(other.folded);
        self.sources.extend(other.sources);
        self.n_realizations += other.n_realizations;
        self.drop_count += other.drop_count;
        self.last_realization = other.last_realization.or(self.last_realization);
    }

    pub fn ratios(&self) -> &[f64] {
        &self.ratios
    }

    pub fn folded(&self) -> &[f64] {
        &self.folded
    }

    pub fn sources(&self) -> &[u32] {
        &self.sources
    }

    pub fn len(&self) -> usize {
        self.ratios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratios.is_empty()
    }

    pub fn n_realizations(&self) -> usize {
        self.n_realizations
    }

    pub fn source_cut(&self) -> Option<usize> {
        self.source_cut
    }

    pub fn drop_count(&self) -> usize {
        self.drop_count
    }

    pub fn mean_folded(&self) -> f64 {
        self.folded.iter().sum::<f64>() / self.folded.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub density: f64,
}

/// Density-normalized histogram on `[0, r_max)`. The bin densities integrate
/// to the fraction of ratios below `r_max`; the rest is `overflow`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Histogram {
    pub bins: Vec<HistogramBin>,
    pub overflow: f64,
    pub n_samples: usize,
}

pub fn histogram(ensemble: &RatioEnsemble, bin_width: f64, r_max: f64) -> Result<Histogram> {
    histogram_of(ensemble.ratios(), bin_width, r_max)
}

pub fn histogram_of(samples: &[f64], bin_width: f64, r_max: f64) -> Result<Histogram> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(invalid_arg(format!(
            "bin width {bin_width} must be positive"
        )));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(invalid_arg(format!(
            "histogram range {r_max} must be positive"
        )));
    }
    if samples.is_empty() {
        return Ok(Histogram::default());
    }
    let n_bins = (r_max / bin_width - 1e-9).ceil().max(1.0) as usize;
    let mut counts = vec![0usize; n_bins];
    let mut over = 0usize;
    for &r in samples {
        if r >= r_max {
            over += 1;
        } else {
            let i = ((r / bin_width) as usize).min(n_bins - 1);
            counts[i] += 1;
        }
    }
    let n = samples.len() as f64;
    let bins = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let left = i as f64 * bin_width;
            let right = ((i + 1) as f64 * bin_width).min(r_max);
            HistogramBin {
                left,
                right,
                density: c as f64 / (n * (right - left)),
            }
        })
        .collect();
    Ok(Histogram {
        bins,
        overflow: over as f64 / n,
        n_samples: samples.len(),
    })
}

/// Goodness of fit of an ensemble against the three reference models.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub ks_poisson: f64,
    pub ks_goe: f64,
    pub ks_gue: f64,
    pub mean_r_tilde: f64,
    pub n_ratios: usize,
    pub drop_count: usize,
    pub best_fit: SurmiseModel,
    pub low_statistics: bool,
}

impl FitReport {
    pub fn ks(&self, model: SurmiseModel) -> f64 {
        match model {
            SurmiseModel::Poisson => self.ks_poisson,
            SurmiseModel::Goe => self.ks_goe,
            SurmiseModel::Gue => self.ks_gue,
        }
    }
}

/// KS distances below this are considered tied when picking the best fit.
const KS_TIE: f64 = 1e-9;

/// KS distance of the ensemble against every model; the best fit is the
/// smallest distance, with near-ties broken by how close `<r~>` is to the
/// model's mean folded ratio.
pub fn classify(ensemble: &RatioEnsemble) -> Result<FitReport> {
    if ensemble.is_empty() {
        return Err(invalid_arg("cannot classify an empty ratio ensemble"));
    }
    let mut sorted = ensemble.ratios().to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let ks = SurmiseModel::ALL.map(|m| ks_statistic(&sorted, |r| surmise_cdf(m, r)));
    let mean_r_tilde = ensemble.mean_folded();
    let min_ks = ks.iter().copied().fold(f64::INFINITY, f64::min);
    let best_fit = SurmiseModel::ALL
        .iter()
        .zip(ks)
        .filter(|(_, k)| *k <= min_ks + KS_TIE)
        .map(|(m, _)| *m)
        .min_by(|a, b| {
            let da = (a.mean_folded_ratio() - mean_r_tilde).abs();
            let db = (b.mean_folded_ratio() - mean_r_tilde).abs();
            da.total_cmp(&db)
        })
        .expect("at least one model");
    Ok(FitReport {
        ks_poisson: ks[0],
        ks_goe: ks[1],
        ks_gue: ks[2],
        mean_r_tilde,
        n_ratios: ensemble.len(),
        drop_count: ensemble.drop_count(),
        best_fit,
        low_statistics: ensemble.len() < LOW_STATISTICS_THRESHOLD,
    })
}
