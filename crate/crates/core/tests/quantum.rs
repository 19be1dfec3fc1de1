mod common;

use aquakern::quantum::{
    apply_amplitude_damping, apply_depolarizing, DensityMatrix, Gate, NoiseKind, Observable, QuantumState,
};
use common::*;
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::Rng;

fn random_circuit(seed: u64, n: usize, depth: usize) -> Vec<Gate<f64>> {
    let mut r = rng(seed);
    (0..depth).map(|_| random_gate(&mut r, n)).collect()
}

fn random_pauli(seed: u64, n: usize) -> String {
    let mut r = rng(seed ^ 0x9e37);
    (0..n).map(|_| ['I', 'X', 'Y', 'Z'][r.random_range(0..4)]).collect()
}

fn run(gates: &[Gate<f64>], n: usize) -> QuantumState<f64> {
    let mut s = QuantumState::zero(n).unwrap();
    s.apply_all(gates).unwrap();
    s
}

fn oracle_state(gates: &[Gate<f64>], n: usize) -> Vec<C> {
    let mut e0 = vec![C::new(0.0, 0.0); 1 << n];
    e0[0] = C::new(1.0, 0.0);
    matvec(&circuit_matrix(gates, n), &e0)
}

fn oracle_expectation(psi: &[C], pauli: &str) -> f64 {
    let o = pauli_string(pauli);
    psi.iter().zip(matvec(&o, psi)).map(|(a, b)| a.conj() * b).sum::<C>().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn statevector_matches_dense_product(seed in any::<u64>(), n in 1usize..=4, depth in 0usize..16) {
        let gates = random_circuit(seed, n, depth);
        let got = run(&gates, n);
        let want = oracle_state(&gates, n);
        for (g, w) in got.amplitudes().iter().zip(&want) {
            prop_assert!((g - w).norm() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn dense_oracle_is_unitary(seed in any::<u64>(), n in 1usize..=3, depth in 1usize..10) {
        let u = circuit_matrix(&random_circuit(seed, n, depth), n);
        prop_assert!(max_abs_diff(&matmul(&dagger(&u), &u), &identity(1 << n)) < 1e-12);
    }

    #[test]
    fn evolution_preserves_norm(seed in any::<u64>(), n in 1usize..=5, depth in 0usize..30) {
        let s = run(&random_circuit(seed, n, depth), n);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((s.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_circuit_returns_to_start(seed in any::<u64>(), n in 1usize..=4, depth in 0usize..16) {
        let gates = random_circuit(seed, n, depth);
        let mut s = run(&gates, n);
        let undo: Vec<Gate<f64>> = gates.iter().rev().map(Gate::inverse).collect();
        s.apply_all(&undo).unwrap();
        prop_assert!((s.amplitudes()[0] - C::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pauli_expectation_matches_dense(seed in any::<u64>(), n in 1usize..=4, depth in 0usize..12) {
        let gates = random_circuit(seed, n, depth);
        let pauli = random_pauli(seed, n);
        let obs: Observable = pauli.parse().unwrap();
        let got = run(&gates, n).expectation(&obs).unwrap();
        let want = oracle_expectation(&oracle_state(&gates, n), &pauli);
        prop_assert!((got - want).abs() < 1e-12, "{pauli}: {got} vs {want}");
        prop_assert!(got.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn density_tracks_pure_state(seed in any::<u64>(), n in 1usize..=4, depth in 0usize..12) {
        let gates = random_circuit(seed, n, depth);
        let pure = run(&gates, n);
        let mut rho = DensityMatrix::from_state(&QuantumState::zero(n).unwrap());
        for g in &gates {
            rho.apply(g).unwrap();
        }
        let direct = DensityMatrix::from_state(&pure);
        let diff = rho.entries().iter().zip(direct.entries()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-12);
        let obs: Observable = random_pauli(seed, n).parse().unwrap();
        prop_assert!((rho.expectation(&obs).unwrap() - pure.expectation(&obs).unwrap()).abs() < 1e-12);
        prop_assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn channels_keep_density_matrices_physical(
        seed in any::<u64>(),
        n in 1usize..=3,
        p in 0.0f64..=1.0,
        gamma in 0.0f64..=1.0,
    ) {
        let gates = random_circuit(seed, n, 8);
        let mut rho = DensityMatrix::from_state(&run(&gates, n));
        for q in 0..n {
            rho = apply_depolarizing(&rho, p, q).unwrap();
            rho = apply_amplitude_damping(&rho, gamma, q).unwrap();
        }
        prop_assert!((rho.trace() - C::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(rho.hermiticity_residual() < 1e-12);
        prop_assert!(rho.min_eigenvalue() > -1e-10);
        prop_assert!(rho.purity() <= 1.0 + 1e-12);
    }
}

#[test]
fn depolarizing_scales_bloch_vector() {
    // (1 − p)ρ + p I/2 shrinks every Pauli expectation by (1 − p)
    let mut s = QuantumState::<f64>::zero(1).unwrap();
    s.apply_all(&[Gate::Ry { target: 0, angle: 0.7 }, Gate::Rz { target: 0, angle: 1.9 }]).unwrap();
    let rho = DensityMatrix::from_state(&s);
    for p in [0.0, 0.1, 0.5, 0.9, 1.0] {
        let out = apply_depolarizing(&rho, p, 0).unwrap();
        for axis in ["X", "Y", "Z"] {
            let obs: Observable = axis.parse().unwrap();
            let want = (1.0 - p) * rho.expectation(&obs).unwrap();
            assert!((out.expectation(&obs).unwrap() - want).abs() < 1e-12, "p={p} {axis}");
        }
    }
}

#[test]
fn amplitude_damping_relaxes_population_and_coherence() {
    // on |+⟩: ⟨Z⟩ → γ, ⟨X⟩ → √(1 − γ)
    let mut plus = QuantumState::<f64>::zero(1).unwrap();
    plus.apply(&Gate::H { target: 0 }).unwrap();
    let rho = DensityMatrix::from_state(&plus);
    for gamma in [0.0, 0.2, 0.5, 0.75, 1.0] {
        let out = apply_amplitude_damping(&rho, gamma, 0).unwrap();
        let z = out.expectation(&"Z".parse().unwrap()).unwrap();
        let x = out.expectation(&"X".parse().unwrap()).unwrap();
        assert!((z - gamma).abs() < 1e-12);
        assert!((x - (1.0f64 - gamma).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn local_channel_leaves_other_qubits_alone() {
    // |1⟩ on qubit 0, |+⟩ on qubit 1; fully damp qubit 0 only
    let mut s = QuantumState::<f64>::zero(2).unwrap();
    s.apply_all(&[Gate::X { target: 0 }, Gate::H { target: 1 }]).unwrap();
    let out = apply_amplitude_damping(&DensityMatrix::from_state(&s), 1.0, 0).unwrap();
    assert!((out.expectation(&"ZI".parse().unwrap()).unwrap() - 1.0).abs() < 1e-12);
    assert!((out.expectation(&"IX".parse().unwrap()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn kraus_sets_match_declared_kinds() {
    assert_eq!(NoiseKind::Depolarizing { p: 0.3 }.kraus_operators().len(), 4);
    assert_eq!(NoiseKind::AmplitudeDamping { gamma: 0.3 }.kraus_operators().len(), 2);
    assert!(NoiseKind::Depolarizing { p: 1.5f64 }.validate().is_err());
    assert!(NoiseKind::AmplitudeDamping { gamma: -0.1f64 }.validate().is_err());
}

#[test]
fn little_endian_basis_indexing() {
    // X on qubit 1 of 3 sets bit 1: index 2
    let mut s = QuantumState::<f64>::zero(3).unwrap();
    s.apply(&Gate::X { target: 1 }).unwrap();
    assert_eq!(s.probabilities()[2], 1.0);
    let mut t = QuantumState::<f64>::zero(2).unwrap();
    t.apply_all(&[Gate::X { target: 0 }, Gate::Cnot { control: 0, target: 1 }]).unwrap();
    assert_eq!(t.probabilities()[3], 1.0);
}
