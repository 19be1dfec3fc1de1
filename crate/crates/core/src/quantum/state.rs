use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::gate::{apply_single_qubit, cnot_image, Gate};
use super::observable::Observable;
use super::state_tolerance;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// Normalized pure state over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumState<T> {
    num_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> QuantumState<T> {
    /// The ground state |0…0⟩.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    /// Computational basis state |index⟩.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps an amplitude vector, checking its length is a power of two and
    /// its norm is one.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "amplitude vector length {len} is not a power of two ≥ 2"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        let state = Self {
            num_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - T::one()).abs() > state_tolerance::<T>() {
            return Err(Error::InvalidInput(format!(
                "amplitudes are not normalized (Σ|a|² = {norm})"
            )));
        }
        Ok(state)
    }

    /// Builds a state from amplitudes that are normalized by construction.
    pub(crate) fn from_normalized_unchecked(amplitudes: Vec<Complex<T>>) -> Self {
        debug_assert!(amplitudes.len().is_power_of_two());
        let num_qubits = amplitudes.len().trailing_zeros() as usize;
        Self {
            num_qubits,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidInput(format!(
                "inner product of {}-qubit and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            }))
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate<T>) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let dim = self.dim();
        match *gate {
            Gate::Cnot { control, target } => {
                for i in 0..dim {
                    let j = cnot_image(i, control, target);
                    if j > i {
                        self.amplitudes.swap(i, j);
                    }
                }
            }
            _ => {
                let m = gate
                    .single_qubit_matrix()
                    .expect("non-CNOT gates have a 2x2 matrix");
                apply_single_qubit(&mut self.amplitudes, dim, 0, 1, gate.target(), &m);
            }
        }
        Ok(())
    }

    /// Applies each gate of `gates` in order.
    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate<T>>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// ⟨ψ|Ô|ψ⟩.
    pub fn expectation(&self, obs: &Observable) -> Result<T> {
        obs.check_qubits(self.num_qubits)?;
        let (flip, _, _) = obs.masks();
        let phase = obs.phase_fn::<T>();
        let value = self
            .amplitudes
            .iter()
            .enumerate()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (b, a)| {
                acc + self.amplitudes[b ^ flip].conj() * phase(b) * a
            });
        Ok(value.re)
    }
}

pub(crate) fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(Error::InvalidInput(format!(
            "qubit count {num_qubits} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}
