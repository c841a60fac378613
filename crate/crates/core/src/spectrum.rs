//! Entanglement spectra over line bipartitions and Rényi entropies (in bits).
//!
//! For a cut `c`, subsystem A is qubits `0..c` (the low bits of the basis
//! index) and B is qubits `c..n`. Reshaping the amplitudes as the
//! `2^{n_B} x 2^{n_A}` matrix `M[b][a] = phi[b * 2^{n_A} + a]` gives the
//! Schmidt coefficients as singular values of `M`; their squares are the
//! eigenvalues of `rho_A`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid_arg, Result};
use crate::qstate::StateVector;

/// A line cut between qubit `cut - 1` and qubit `cut`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n_qubits: usize,
    cut: usize,
}

impl Bipartition {
    pub fn new(n_qubits: usize, cut: usize) -> Result<Self> {
        if cut == 0 || cut >= n_qubits {
            return Err(invalid_arg(format!(
                "cut {cut} outside 1..={} for {n_qubits} qubits",
                n_qubits.saturating_sub(1)
            )));
        }
        Ok(Self { n_qubits, cut })
    }

    /// The cut at `n / 2`.
    pub fn half(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, n_qubits / 2)
    }

    /// All `n - 1` line cuts in order.
    pub fn all(n_qubits: usize) -> impl Iterator<Item = Bipartition> {
        (1..n_qubits).map(move |cut| Bipartition { n_qubits, cut })
    }

    pub fn cut(&self) -> usize {
        self.cut
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_a(&self) -> usize {
        self.cut
    }

    pub fn n_b(&self) -> usize {
        self.n_qubits - self.cut
    }

    /// Number of Schmidt coefficients, `2^{min(n_A, n_B)}`.
    pub fn schmidt_dim(&self) -> usize {
        1 << self.n_a().min(self.n_b())
    }
}

/// Absolute threshold on `lambda` below which a level counts as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTolerance(f64);

impl RankTolerance {
    pub const DEFAULT: RankTolerance = RankTolerance(1e-12);

    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1e-6) {
            return Err(invalid_arg(format!(
                "rank tolerance {epsilon} outside (0, 1e-6)"
            )));
        }
        Ok(Self(epsilon))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for RankTolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Eigenvalues of a reduced density matrix, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementSpectrum {
    values: Vec<f64>,
}

impl EntanglementSpectrum {
    /// Clamps negatives to zero and sorts descending; does not rescale.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid_arg("empty spectrum"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid_arg(format!("non-finite eigenvalue {v}")));
        }
        for v in &mut values {
            *v = v.max(0.0);
        }
        values.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Levels strictly above `tol`, in descending order.
    pub fn retained(&self, tol: RankTolerance) -> &[f64] {
        let k = self.values.partition_point(|&v| v > tol.value());
        &self.values[..k]
    }

    pub fn rank(&self, tol: RankTolerance) -> usize {
        self.retained(tol).len()
    }
}

/// Spectrum of `rho_A` for the bipartition `part`, from the singular values
/// of the reshaped amplitude matrix.
pub fn entanglement_spectrum(
    state: &StateVector,
    part: Bipartition,
) -> Result<EntanglementSpectrum> {
    if part.n_qubits() != state.n_qubits() {
        return Err(invalid_arg(format!(
            "bipartition of {} qubits used on a {}-qubit state",
            part.n_qubits(),
            state.n_qubits()
        )));
    }
    let values = schmidt_values(state.amplitudes(), part.n_a(), part.n_b());
    EntanglementSpectrum::from_values(values)
}

/// Squared singular values of the `2^{n_B} x 2^{n_A}` reshape of `amps`.
fn schmidt_values(amps: &[Complex64], n_a: usize, n_b: usize) -> Vec<f64> {
    // column-major with 2^{n_A} rows: entry (a, b) = amps[a + b * 2^{n_A}], i.e. M^T
    let m = DMatrix::from_column_slice(1 << n_a, 1 << n_b, amps);
    m.singular_values_unordered()
        .iter()
        .map(|s| s * s)
        .collect()
}

/// Rényi entropy `S_q = log2(sum lambda^q) / (1 - q)` in bits, with the
/// `q -> 0` and `q -> 1` limits `log2(rank)` and `-sum lambda log2 lambda`.
/// Levels at or below `tol` are skipped.
pub fn renyi_entropy(spec: &EntanglementSpectrum, q: f64, tol: RankTolerance) -> Result<f64> {
    if !(q >= 0.0) {
        return Err(invalid_arg(format!("Renyi order {q} must be >= 0")));
    }
    Ok(renyi_of_levels(spec.retained(tol), q))
}

pub(crate) fn renyi_of_levels(levels: &[f64], q: f64) -> f64 {
    if levels.is_empty() {
        return 0.0;
    }
    // Rounding can push a pure state's entropy a few ulps below zero.
    let s = if q == 0.0 {
        (levels.len() as f64).log2()
    } else if q == 1.0 {
        -levels.iter().map(|&l| l * l.log2()).sum::<f64>()
    } else if q.is_infinite() {
        -levels[0].log2()
    } else {
        levels.iter().map(|&l| l.powf(q)).sum::<f64>().log2() / (1.0 - q)
    };
    s.max(0.0)
}

/// `S_q` at every line cut, in cut order.
pub fn cut_entropies(state: &StateVector, q: f64, tol: RankTolerance) -> Result<Vec<f64>> {
    if state.n_qubits() < 2 {
        return Err(invalid_arg("line cuts need at least two qubits"));
    }
    Bipartition::all(state.n_qubits())
        .map(|p| renyi_entropy(&entanglement_spectrum(state, p)?, q, tol))
        .collect()
}

/// Arithmetic mean of `S_q` over the `n - 1` line cuts.
pub fn mean_cut_entropy(state: &StateVector, q: f64, tol: RankTolerance) -> Result<f64> {
    let s = cut_entropies(state, q, tol)?;
    Ok(s.iter().sum::<f64>() / s.len() as f64)
}

/// `S_0` and `S_1` of one spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EntropyPair {
    pub s0: f64,
    pub s1: f64,
}

impl EntropyPair {
    pub fn of(spec: &EntanglementSpectrum, tol: RankTolerance) -> Self {
        let levels = spec.retained(tol);
        Self {
            s0: renyi_of_levels(levels, 0.0),
            s1: renyi_of_levels(levels, 1.0),
        }
    }

    pub fn at(state: &StateVector, part: Bipartition, tol: RankTolerance) -> Result<Self> {
        Ok(Self::of(&entanglement_spectrum(state, part)?, tol))
    }
}
