use serde::{Deserialize, Serialize};

use crate::encoding::cnot_ring;
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, Gate, NoiseChannel, NoiseKind, Observable, QuantumState, RotationKind};
use crate::scalar::Real;

fn default_rotations() -> Vec<RotationKind> {
    vec![RotationKind::Y, RotationKind::Z]
}

fn default_true() -> bool {
    true
}

/// Layered hardware-efficient ansatz: per-qubit rotations, then an optional CNOT ring.
///
/// Parameter `l·n·R + q·R + r` drives rotation `r` on qubit `q` in layer `l`.
/// Zero layers is accepted and leaves the encoded state untouched.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub num_qubits: usize,
    pub layers: usize,
    #[serde(default = "default_rotations")]
    pub rotation_pattern: Vec<RotationKind>,
    #[serde(default = "default_true")]
    pub entangler: bool,
}

impl AnsatzSpec {
    pub fn new(num_qubits: usize, layers: usize) -> Self {
        Self {
            num_qubits,
            layers,
            rotation_pattern: default_rotations(),
            entangler: true,
        }
    }

    pub fn with_rotations(mut self, rotations: Vec<RotationKind>) -> Self {
        self.rotation_pattern = rotations;
        self
    }

    pub fn with_entangler(mut self, entangler: bool) -> Self {
        self.entangler = entangler;
        self
    }

    pub fn params_per_layer(&self) -> usize {
        self.num_qubits * self.rotation_pattern.len()
    }

    pub fn param_count(&self) -> usize {
        self.layers * self.params_per_layer()
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 {
            return Err(Error::InvalidSpec("ansatz needs at least one qubit".into()));
        }
        crate::quantum::check_qubits(self.num_qubits)?;
        if self.rotation_pattern.is_empty() && self.layers > 0 {
            return Err(Error::InvalidSpec("ansatz rotation pattern is empty".into()));
        }
        Ok(())
    }

    /// Gates of one layer given that layer's slice of parameters.
    pub fn layer_gates<T: Real>(&self, params: &[T]) -> Vec<Gate<T>> {
        let r = self.rotation_pattern.len();
        let mut gates = Vec::with_capacity(params.len() + self.num_qubits);
        for q in 0..self.num_qubits {
            for (k, &kind) in self.rotation_pattern.iter().enumerate() {
                gates.push(Gate::rotation(kind, q, params[q * r + k]));
            }
        }
        if self.entangler {
            gates.extend(cnot_ring::<T>(self.num_qubits));
        }
        gates
    }
}

/// Runs the ansatz on an encoded state and measures each observable.
///
/// Without noise this is a pure-state simulation; with noise the state is
/// promoted to a density matrix and every channel hits every qubit after
/// each layer.
pub(crate) fn evolve_and_measure<T: Real>(
    encoded: &QuantumState<T>,
    ansatz: &AnsatzSpec,
    circuit: &[T],
    noise: &[NoiseKind<T>],
    observables: &[Observable],
) -> Result<Vec<T>> {
    let per_layer = ansatz.params_per_layer();
    if noise.is_empty() {
        let mut state = encoded.clone();
        for l in 0..ansatz.layers {
            let gates = ansatz.layer_gates(&circuit[l * per_layer..(l + 1) * per_layer]);
            state.apply_all(&gates)?;
        }
        return observables.iter().map(|o| state.expectation(o)).collect();
    }
    let mut rho = DensityMatrix::from_state(encoded);
    for l in 0..ansatz.layers {
        for g in ansatz.layer_gates(&circuit[l * per_layer..(l + 1) * per_layer]) {
            rho.apply(&g)?;
        }
        for kind in noise {
            for q in 0..ansatz.num_qubits {
                rho = NoiseChannel::new(*kind, q)?.apply(&rho)?;
            }
        }
    }
    observables.iter().map(|o| rho.expectation(o)).collect()
}

/// Central-difference shift rule for every circuit parameter.
///
/// Row `k` holds (E(θ + π/2 e_k) − E(θ − π/2 e_k))/2 for each observable.
pub(crate) fn shift_jacobian<T: Real>(
    encoded: &QuantumState<T>,
    ansatz: &AnsatzSpec,
    circuit: &[T],
    noise: &[NoiseKind<T>],
    observables: &[Observable],
) -> Result<Vec<Vec<T>>> {
    let shift = T::FRAC_PI_2();
    let half = T::lit(0.5);
    let mut theta = circuit.to_vec();
    let mut rows = Vec::with_capacity(circuit.len());
    for k in 0..circuit.len() {
        let original = theta[k];
        theta[k] = original + shift;
        let plus = evolve_and_measure(encoded, ansatz, &theta, noise, observables)?;
        theta[k] = original - shift;
        let minus = evolve_and_measure(encoded, ansatz, &theta, noise, observables)?;
        theta[k] = original;
        rows.push(plus.iter().zip(&minus).map(|(p, m)| (*p - *m) * half).collect());
    }
    Ok(rows)
}
