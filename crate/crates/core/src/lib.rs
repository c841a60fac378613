//! Dense state-vector simulation of random qubit circuits together with the
//! analysis needed to relate entanglement reversibility to entanglement
//! spectrum statistics.
//!
//! * [`qstate`] holds the amplitudes and the in-place gate kernels.
//! * [`circuit`] defines gate sets, random circuit sampling ("heating") and
//!   the text circuit format.
//! * [`spectrum`] computes entanglement spectra over line bipartitions and
//!   Rényi entropies.
//! * [`cooling`] is the Metropolis disentangling search.
//! * [`spacings`] turns spectra into spacing ratios and compares them with
//!   the Poisson and Wigner-Dyson surmises.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod cooling;
pub mod error;
pub mod qstate;
pub mod quadrature;
pub mod rng;
pub mod spacings;
pub mod spectrum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
