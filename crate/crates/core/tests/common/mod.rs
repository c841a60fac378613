#![allow(dead_code)]

use entcool_core::qstate::StateVector;
use entcool_core::rng::RngStream;
use entcool_core::Complex64;

/// Standard normal draw by Box-Muller.
pub fn normal(rng: &mut RngStream) -> f64 {
    let u1 = 1.0 - rng.uniform();
    let u2 = rng.uniform();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Unnormalized complex Gaussian vector of length `2^n`.
pub fn gaussian_amplitudes(n: usize, rng: &mut RngStream) -> Vec<Complex64> {
    (0..1usize << n)
        .map(|_| Complex64::new(normal(rng), normal(rng)))
        .collect()
}

/// Haar-like random pure state.
pub fn random_state(n: usize, rng: &mut RngStream) -> StateVector {
    let mut amps = gaussian_amplitudes(n, rng);
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).unwrap()
}

pub fn random_thetas(n: usize, rng: &mut RngStream) -> Vec<f64> {
    (0..n)
        .map(|_| rng.uniform_in(0.0, std::f64::consts::PI))
        .collect()
}

/// Dense `rho_A` for subsystem A = qubits `0..n_a`, traced over the rest.
pub fn partial_trace_low(amps: &[Complex64], n_a: usize) -> Vec<Vec<Complex64>> {
    let da = 1usize << n_a;
    let db = amps.len() / da;
    let mut rho = vec![vec![Complex64::new(0.0, 0.0); da]; da];
    for b in 0..db {
        for a in 0..da {
            let x = amps[b * da + a];
            for a2 in 0..da {
                rho[a][a2] += x * amps[b * da + a2].conj();
            }
        }
    }
    rho
}

/// Dense `rho_B` for subsystem B = qubits `n_a..n`, traced over A.
pub fn partial_trace_high(amps: &[Complex64], n_a: usize) -> Vec<Vec<Complex64>> {
    let da = 1usize << n_a;
    let db = amps.len() / da;
    let mut rho = vec![vec![Complex64::new(0.0, 0.0); db]; db];
    for b in 0..db {
        for b2 in 0..db {
            rho[b][b2] = (0..da)
                .map(|a| amps[b * da + a] * amps[b2 * da + a].conj())
                .sum();
        }
    }
    rho
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted descending.
pub fn hermitian_eigenvalues(mut a: Vec<Vec<Complex64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm_sqr())
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let theta = (a[q][q].re - a[p][p].re) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = D P with D = diag(1, conj(phase)) on (p, q)
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * jpp + y * jqp;
                    row[q] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = jpp.conj() * x + jqp.conj() * y;
                    a[q][k] = jpq.conj() * x + jqq.conj() * y;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    ev.sort_unstable_by(|x, y| y.total_cmp(x));
    ev
}
