//! Dense n-qubit pure states and in-place gate kernels.
//!
//! Basis index `k` encodes `|x_{n-1} ... x_0>` with qubit `j` stored in bit `j`
//! of `k` (little-endian). Every module in the crate shares this convention.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid_arg, Result};

/// Largest register the dense representation accepts (2^24 amplitudes, 256 MiB).
pub const MAX_QUBITS: usize = 24;

/// Tolerance on `|<psi|psi> - 1|` that every state must satisfy.
pub const NORM_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Single-qubit gate kinds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate1Q {
    H,
    /// `P(pi/4)`.
    T,
    /// `P(pi/2)`.
    S,
    Not,
    /// `diag(1, e^{i delta})`, angle in radians.
    Phase(f64),
}

impl Gate1Q {
    /// Phase angle if the gate is diagonal.
    pub fn phase_angle(self) -> Option<f64> {
        match self {
            Gate1Q::T => Some(FRAC_PI_4),
            Gate1Q::S => Some(FRAC_PI_2),
            Gate1Q::Phase(d) => Some(d),
            Gate1Q::H | Gate1Q::Not => None,
        }
    }

    /// The 2x2 unitary, row-major: `m[row][col]`.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        match self {
            Gate1Q::H => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            Gate1Q::Not => [[ZERO, ONE], [ONE, ZERO]],
            g => {
                let d = g.phase_angle().expect("diagonal gate");
                [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, d)]]
            }
        }
    }

    pub fn inverse(self) -> Gate1Q {
        match self {
            Gate1Q::H | Gate1Q::Not => self,
            g => Gate1Q::Phase(-g.phase_angle().expect("diagonal gate")),
        }
    }
}

/// Controlled-NOT on two distinct qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gate2Q {
    pub control: usize,
    pub target: usize,
}

impl Gate2Q {
    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        if control == target {
            return Err(invalid_arg(format!(
                "CNOT control and target must differ (both {control})"
            )));
        }
        Ok(Gate2Q { control, target })
    }
}

/// A gate bound to the qubit(s) it acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    One { kind: Gate1Q, qubit: usize },
    Cnot(Gate2Q),
}

impl Gate {
    pub fn one(kind: Gate1Q, qubit: usize) -> Self {
        Gate::One { kind, qubit }
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Gate2Q::cnot(control, target).map(Gate::Cnot)
    }

    /// Qubits the gate touches, first operand first.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::One { qubit, .. } => vec![qubit],
            Gate::Cnot(g) => vec![g.control, g.target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot(_))
    }

    /// Gate that undoes `self`. H, NOT and CNOT are involutions;
    /// `P(delta)` inverts to `P(-delta)`.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::One { kind, qubit } => Gate::One {
                kind: kind.inverse(),
                qubit,
            },
            Gate::Cnot(g) => Gate::Cnot(g),
        }
    }
}

/// Free-function spelling of [`Gate::inverse`].
pub fn inverse_gate(gate: &Gate) -> Gate {
    gate.inverse()
}

impl fmt::Display for Gate1Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate1Q::H => f.write_str("H"),
            Gate1Q::T => f.write_str("T"),
            Gate1Q::S => f.write_str("S"),
            Gate1Q::Not => f.write_str("NOT"),
            // shortest round-trip representation, so parsing gives back the same bits
            Gate1Q::Phase(d) => write!(f, "P:{d:?}"),
        }
    }
}

/// A pure state of `n` qubits stored as `2^n` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state `|k>`.
    pub fn basis(n_qubits: usize, k: usize) -> Result<Self> {
        check_register(n_qubits)?;
        if k >= 1 << n_qubits {
            return Err(invalid_arg(format!(
                "basis index {k} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[k] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Factorized state `prod_j (cos(theta_j)|0>_j + sin(theta_j)|1>_j)`;
    /// `thetas[j]` belongs to qubit `j`.
    pub fn product(thetas: &[f64]) -> Result<Self> {
        if thetas.is_empty() {
            return Err(invalid_arg("product state needs at least one angle"));
        }
        let n = thetas.len();
        check_register(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        amps.push(ONE);
        // grow one qubit at a time; the new qubit becomes the highest bit so far
        for &theta in thetas {
            let (s, c) = theta.sin_cos();
            let len = amps.len();
            amps.extend_from_within(..len);
            for a in &mut amps[..len] {
                *a *= c;
            }
            for a in &mut amps[len..] {
                *a *= s;
            }
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// Wraps caller-provided amplitudes; the length must be a power of two and
    /// the vector must be normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(invalid_arg(format!(
                "amplitude count {len} is not 2^n with n >= 1"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let state = Self { n_qubits, amps };
        let dev = (state.norm_sqr() - 1.0).abs();
        if dev > NORM_TOLERANCE {
            return Err(invalid_arg(format!(
                "state is not normalized (|norm^2 - 1| = {dev:e})"
            )));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability that `qubit` reads 1.
    pub fn marginal_one(&self, qubit: usize) -> f64 {
        let bit = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(k, _)| k & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Largest componentwise `|a_k - b_k|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.n_qubits, other.n_qubits, "register size mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply_1q(&mut self, gate: Gate1Q, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(invalid_arg(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        apply_1q_to_slice(&mut self.amps, gate, qubit);
        self.debug_check_norm();
        Ok(())
    }

    pub fn apply_2q(&mut self, gate: Gate2Q) -> Result<()> {
        let Gate2Q { control, target } = gate;
        if control == target {
            return Err(invalid_arg(format!(
                "CNOT control and target must differ (both {control})"
            )));
        }
        if control >= self.n_qubits || target >= self.n_qubits {
            return Err(invalid_arg(format!(
                "CNOT({control},{target}) out of range for {} qubits",
                self.n_qubits
            )));
        }
        apply_cnot_to_slice(&mut self.amps, control, target);
        self.debug_check_norm();
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::One { kind, qubit } => self.apply_1q(kind, qubit),
            Gate::Cnot(g) => self.apply_2q(g),
        }
    }

    fn debug_check_norm(&self) {
        debug_assert!(
            (self.norm_sqr() - 1.0).abs() < NORM_TOLERANCE,
            "gate kernel broke normalization: {}",
            self.norm_sqr()
        );
    }
}

fn check_register(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(invalid_arg(format!(
            "register size {n} outside supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Applies a one-qubit gate to a raw amplitude buffer of length `2^n`.
///
/// Pairs `(k, k | 2^qubit)` with bit `qubit` clear are each touched once, so
/// the buffer need not be normalized.
pub fn apply_1q_to_slice(amps: &mut [Complex64], gate: Gate1Q, qubit: usize) {
    let stride = 1usize << qubit;
    debug_assert!(stride < amps.len());
    match gate {
        Gate1Q::Not => {
            for block in amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                lo.swap_with_slice(hi);
            }
        }
        Gate1Q::H => {
            for block in amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * FRAC_1_SQRT_2;
                    *b = (x - y) * FRAC_1_SQRT_2;
                }
            }
        }
        g => {
            let phase = Complex64::from_polar(1.0, g.phase_angle().expect("diagonal gate"));
            for block in amps.chunks_exact_mut(2 * stride) {
                for b in &mut block[stride..] {
                    *b *= phase;
                }
            }
        }
    }
}

/// Swaps the target bit of every amplitude whose control bit is set.
pub fn apply_cnot_to_slice(amps: &mut [Complex64], control: usize, target: usize) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    for k in 0..amps.len() {
        // visit each pair once, from its member with the target bit clear
        if k & cbit != 0 && k & tbit == 0 {
            amps.swap(k, k | tbit);
        }
    }
}
