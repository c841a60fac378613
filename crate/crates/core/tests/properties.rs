//! Invariants of the state kernels, entropies and spacing ratios.

mod common;

use common::{gaussian_amplitudes, random_state, random_thetas};
use entcool_core::circuit::{heat, GateSet};
use entcool_core::qstate::{apply_1q_to_slice, Gate, Gate1Q, StateVector};
use entcool_core::rng::RngStream;
use entcool_core::spacings::{spacing_ratios, DEFAULT_DEGENERATE_GAP};
use entcool_core::spectrum::{
    cut_entropies, entanglement_spectrum, renyi_entropy, Bipartition, EntanglementSpectrum,
    RankTolerance,
};
use entcool_core::Complex64;
use proptest::prelude::*;

const TOL: RankTolerance = RankTolerance::DEFAULT;

fn gate1q() -> impl Strategy<Value = Gate1Q> {
    prop_oneof![
        Just(Gate1Q::H),
        Just(Gate1Q::T),
        Just(Gate1Q::S),
        Just(Gate1Q::Not),
        (-6.3f64..6.3).prop_map(Gate1Q::Phase),
    ]
}

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    prop_oneof![
        (gate1q(), 0..n).prop_map(|(k, q)| Gate::one(k, q)),
        (0..n, 1..n).prop_map(move |(c, d)| Gate::cnot(c, (c + d) % n).unwrap()),
    ]
}

#[test]
fn norm_is_preserved_over_many_gates() {
    let mut rng = RngStream::new(8);
    let mut s = random_state(8, &mut rng);
    let set = GateSet::custom(vec![
        "CNOT".parse().unwrap(),
        "H".parse().unwrap(),
        "T".parse().unwrap(),
        "S".parse().unwrap(),
        "NOT".parse().unwrap(),
        "P:0.377".parse().unwrap(),
    ])
    .unwrap();
    let mut worst: f64 = 0.0;
    heat(&mut s, &set, 1000, &mut rng, |_, st, _| {
        worst = worst.max((st.norm_sqr() - 1.0).abs());
    })
    .unwrap();
    assert!(worst < 1e-10, "{worst}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reversed_inverse_sequence_restores_state(
        gates in prop::collection::vec(gate(6), 0..512),
        seed in any::<u64>(),
    ) {
        let mut rng = RngStream::new(seed);
        let start = random_state(6, &mut rng);
        let mut s = start.clone();
        for g in &gates {
            s.apply(g).unwrap();
        }
        for g in gates.iter().rev() {
            s.apply(&g.inverse()).unwrap();
        }
        prop_assert!(s.max_abs_diff(&start) < 1e-8);
    }

    #[test]
    fn one_qubit_kernel_is_linear(
        g in gate1q(), q in 0usize..5, seed in any::<u64>(),
        a in (-2.0f64..2.0, -2.0f64..2.0), b in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        let mut rng = RngStream::new(seed);
        let x = gaussian_amplitudes(5, &mut rng);
        let y = gaussian_amplitudes(5, &mut rng);
        let (a, b) = (Complex64::new(a.0, a.1), Complex64::new(b.0, b.1));
        let mut mix: Vec<Complex64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let (mut gx, mut gy) = (x.clone(), y.clone());
        apply_1q_to_slice(&mut mix, g, q);
        apply_1q_to_slice(&mut gx, g, q);
        apply_1q_to_slice(&mut gy, g, q);
        for k in 0..mix.len() {
            prop_assert!((mix[k] - (a * gx[k] + b * gy[k])).norm() < 1e-12);
        }
    }

    #[test]
    fn gates_leave_other_marginals_alone(g in gate(6), seed in any::<u64>()) {
        let mut rng = RngStream::new(seed);
        let mut s = random_state(6, &mut rng);
        let before: Vec<f64> = (0..6).map(|q| s.marginal_one(q)).collect();
        s.apply(&g).unwrap();
        let touched = g.qubits();
        // a CNOT changes only its target's marginal
        let changed = if g.is_two_qubit() { vec![touched[1]] } else { touched };
        for q in (0..6).filter(|q| !changed.contains(q)) {
            prop_assert!((s.marginal_one(q) - before[q]).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_properties(n in 2usize..=7, seed in any::<u64>(), depth in 0usize..80) {
        let mut rng = RngStream::new(seed);
        let mut s = StateVector::product(&random_thetas(n, &mut rng)).unwrap();
        heat(&mut s, &GateSet::cnot_h_t(), depth, &mut rng, |_, _, _| {}).unwrap();
        for part in Bipartition::all(n) {
            let spec = entanglement_spectrum(&s, part).unwrap();
            prop_assert!((spec.trace() - 1.0).abs() < 1e-9);
            prop_assert!(spec.values().windows(2).all(|w| w[0] >= w[1]));
            let bound = part.n_a().min(part.n_b()) as f64;
            let qs = [0.0, 0.5, 1.0, 2.0, 3.0, 10.0];
            let ent: Vec<f64> = qs.iter().map(|&q| renyi_entropy(&spec, q, TOL).unwrap()).collect();
            for w in ent.windows(2) {
                prop_assert!(w[0] >= w[1] - 1e-9, "{:?}", ent);
            }
            prop_assert!(ent[0] <= bound + 1e-9);
        }
    }

    #[test]
    fn one_qubit_gates_do_not_change_cut_entropies(
        seed in any::<u64>(), g in gate1q(), q in 0usize..6,
    ) {
        let mut rng = RngStream::new(seed);
        let mut s = StateVector::product(&random_thetas(6, &mut rng)).unwrap();
        heat(&mut s, &GateSet::cnot_h_t(), 40, &mut rng, |_, _, _| {}).unwrap();
        let before = cut_entropies(&s, 1.0, TOL).unwrap();
        s.apply_1q(g, q).unwrap();
        let after = cut_entropies(&s, 1.0, TOL).unwrap();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn ratios_are_scale_free(
        mut levels in prop::collection::vec(1e-3f64..1.0, 3..40),
        scale in prop::sample::select(vec![0.5, 2.0, 4.0, 0.25, 8.0]),
    ) {
        levels.sort_unstable_by(|a, b| b.total_cmp(a));
        let tol = RankTolerance::new(1e-15).unwrap();
        let base = spacing_ratios(&EntanglementSpectrum::from_values(levels.clone()).unwrap(), tol, 0.0);
        let scaled: Vec<f64> = levels.iter().map(|l| l * scale).collect();
        let other = spacing_ratios(&EntanglementSpectrum::from_values(scaled).unwrap(), tol, 0.0);
        // powers of two rescale exactly in floating point
        prop_assert_eq!(base, other);
    }

    #[test]
    fn ratio_count_bookkeeping(levels in prop::collection::vec(
        prop::sample::select(vec![0.3, 0.2, 0.1, 0.05, 0.05, 0.01, 1e-13, 0.0]), 1..30)
    ) {
        let spec = EntanglementSpectrum::from_values(levels).unwrap();
        let r = spacing_ratios(&spec, TOL, DEFAULT_DEGENERATE_GAP);
        let kept = spec.rank(TOL);
        prop_assert_eq!(r.ratios.len(), kept.saturating_sub(2) - r.drop_count);
        prop_assert!(r.ratios.iter().all(|x| x.is_finite() && *x > 0.0));
    }
}
