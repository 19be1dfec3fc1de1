//! Dense state-vector and density-matrix simulation.
//!
//! Qubit ordering is little-endian throughout: qubit `q` is bit `q` of the
//! basis-state index, so on two qubits index `1` is qubit 0 set and qubit 1
//! clear. Kets written `|q0 q1 ...⟩` in docs list qubit 0 first.

mod density;
mod gate;
mod noise;
mod observable;
mod state;

pub use density::DensityMatrix;
pub use gate::{Gate, RotationKind};
pub use noise::{NoiseChannel, NoiseKind};
pub use observable::{Observable, Pauli};
pub use state::{QuantumState, MAX_QUBITS};

use crate::error::Result;
use crate::scalar::Real;

pub(crate) fn check_qubits(num_qubits: usize) -> Result<()> {
    state::check_qubit_count(num_qubits)
}

pub(crate) fn state_max_qubits() -> usize {
    MAX_QUBITS
}

/// Tolerance for normalization and trace checks, widened for `f32`.
pub(crate) fn state_tolerance<T: Real>() -> T {
    (T::epsilon() * T::lit(1e3)).max(T::lit(1e-10))
}

/// Applies `gate` to `state`, returning the evolved state.
pub fn apply_gate<T: Real>(state: &QuantumState<T>, gate: &Gate<T>) -> Result<QuantumState<T>> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// ⟨ψ|Ô|ψ⟩ for a Pauli-product observable.
pub fn expectation<T: Real>(state: &QuantumState<T>, obs: &Observable) -> Result<T> {
    state.expectation(obs)
}

/// The pure-state density matrix |ψ⟩⟨ψ|.
pub fn state_to_density<T: Real>(state: &QuantumState<T>) -> DensityMatrix<T> {
    DensityMatrix::from_state(state)
}

/// Local depolarizing channel on `target`: ρ ↦ (1−p)ρ + p·(I/2 ⊗ Tr_target ρ).
pub fn apply_depolarizing<T: Real>(
    rho: &DensityMatrix<T>,
    p: T,
    target: usize,
) -> Result<DensityMatrix<T>> {
    NoiseChannel::new(NoiseKind::Depolarizing { p }, target)?.apply(rho)
}

/// Amplitude damping on `target`: ρ ↦ E₀ρE₀† + E₁ρE₁†.
pub fn apply_amplitude_damping<T: Real>(
    rho: &DensityMatrix<T>,
    gamma: T,
    target: usize,
) -> Result<DensityMatrix<T>> {
    NoiseChannel::new(NoiseKind::AmplitudeDamping { gamma }, target)?.apply(rho)
}

/// Tr(ρÔ).
pub fn expectation_density<T: Real>(rho: &DensityMatrix<T>, obs: &Observable) -> Result<T> {
    rho.expectation(obs)
}
