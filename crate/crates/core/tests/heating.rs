//! Heating runs: determinism, the Bell example, and circuit round trips.

mod common;

use common::random_thetas;
use entcool_core::circuit::{heat, Circuit, GateKind, GateSet};
use entcool_core::qstate::{Gate, Gate1Q, StateVector};
use entcool_core::rng::{Purpose, RngStream};
use entcool_core::spectrum::{cut_entropies, entanglement_spectrum, Bipartition, RankTolerance};

#[test]
fn seeded_heat_is_bitwise_reproducible() {
    let run = || {
        let mut rng = RngStream::derive(42, Purpose::Heating, 7);
        let mut s = StateVector::product(&random_thetas(10, &mut rng)).unwrap();
        let c = heat(&mut s, &GateSet::cnot_h_t(), 300, &mut rng, |_, _, _| {}).unwrap();
        (c, s)
    };
    let (c1, s1) = run();
    let (c2, s2) = run();
    assert_eq!(c1, c2);
    assert_eq!(c1.len(), 300);
    let bits = |s: &StateVector| {
        s.amplitudes()
            .iter()
            .flat_map(|a| [a.re.to_bits(), a.im.to_bits()])
            .collect::<Vec<_>>()
    };
    assert_eq!(bits(&s1), bits(&s2));
}

#[test]
fn bell_state_from_a_seeded_two_gate_heat() {
    let set = GateSet::custom(vec![GateKind::Cnot, GateKind::One(Gate1Q::H)]).unwrap();
    let want = [Gate::one(Gate1Q::H, 0), Gate::cnot(0, 1).unwrap()];
    // find the first seed whose two draws are H(0) then CNOT(0, 1)
    let seed = (0..10_000u64)
        .find(|&seed| {
            let mut s = StateVector::zero(2).unwrap();
            let c = heat(&mut s, &set, 2, &mut RngStream::new(seed), |_, _, _| {}).unwrap();
            c.gates() == want
        })
        .expect("some seed draws the Bell circuit");
    let mut s = StateVector::zero(2).unwrap();
    heat(&mut s, &set, 2, &mut RngStream::new(seed), |_, _, _| {}).unwrap();
    let spec = entanglement_spectrum(&s, Bipartition::new(2, 1).unwrap()).unwrap();
    assert!((spec.values()[0] - 0.5).abs() < 1e-14);
    assert!((spec.values()[1] - 0.5).abs() < 1e-14);
}

#[test]
fn heat_then_inverse_returns_to_product_state() {
    for (i, set) in [
        GateSet::cnot_h_t(),
        GateSet::cnot_h_s(),
        GateSet::cnot_h_not(),
    ]
    .iter()
    .enumerate()
    {
        let mut rng = RngStream::derive(3, Purpose::Heating, i as u32);
        let start = StateVector::product(&random_thetas(8, &mut rng)).unwrap();
        let mut s = start.clone();
        let c = heat(&mut s, set, 512, &mut rng, |_, _, _| {}).unwrap();
        c.inverse().apply_to(&mut s).unwrap();
        assert!(s.max_abs_diff(&start) < 1e-8);
        for e in cut_entropies(&s, 1.0, RankTolerance::DEFAULT).unwrap() {
            assert!(e.abs() < 1e-9, "{e}");
        }
    }
}

#[test]
fn replayed_text_circuit_reproduces_state() {
    let mut rng = RngStream::new(5);
    let thetas = random_thetas(6, &mut rng);
    let mut s = StateVector::product(&thetas).unwrap();
    let c = heat(&mut s, &GateSet::cnot_h_t(), 200, &mut rng, |_, _, _| {}).unwrap();
    let replay = Circuit::parse(&c.inverse().to_text()).unwrap();
    replay.apply_to(&mut s).unwrap();
    let start = StateVector::product(&thetas).unwrap();
    assert!(s.max_abs_diff(&start) < 1e-10);
}
