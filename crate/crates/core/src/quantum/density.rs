use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::gate::{apply_single_qubit, cnot_image, Gate};
use super::observable::Observable;
use super::state::{check_qubit_count, QuantumState};
use super::state_tolerance;
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::scalar::Real;

/// Mixed state ρ, stored row-major as a `2^n × 2^n` complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix<T> {
    num_qubits: usize,
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn from_state(state: &QuantumState<T>) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(amps[r] * amps[c].conj());
            }
        }
        Self {
            num_qubits: state.num_qubits(),
            dim,
            entries,
        }
    }

    /// I / 2^n.
    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut entries = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        let v = T::one() / T::from_usize_lossy(dim);
        for i in 0..dim {
            entries[i * dim + i] = Complex::new(v, T::zero());
        }
        Ok(Self {
            num_qubits,
            dim,
            entries,
        })
    }

    /// Wraps row-major entries, checking Hermiticity, unit trace and positivity.
    pub fn from_entries(num_qubits: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for {num_qubits} qubits, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let rho = Self {
            num_qubits,
            dim,
            entries,
        };
        let tol = state_tolerance::<T>();
        if rho.hermiticity_residual() > tol {
            return Err(Error::InvalidInput("density matrix is not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidInput(format!("density matrix trace is {tr}")));
        }
        if rho.min_eigenvalue() < -T::lit(1e-9).max(tol) {
            return Err(Error::InvalidInput(
                "density matrix is not positive semidefinite".into(),
            ));
        }
        Ok(rho)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.entries[i * self.dim + i]
        })
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// max |ρ_rc − conj(ρ_cr)|.
    pub fn hermiticity_residual(&self) -> T {
        let mut worst = T::zero();
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.entries, self.dim)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// ρ ↦ UρU† for `gate`, in place.
    pub fn apply(&mut self, gate: &Gate<T>) -> Result<()> {
        gate.validate(self.num_qubits)?;
        match *gate {
            Gate::Cnot { control, target } => {
                let dim = self.dim;
                let old = self.entries.clone();
                for r in 0..dim {
                    let pr = cnot_image(r, control, target);
                    for c in 0..dim {
                        let pc = cnot_image(c, control, target);
                        self.entries[r * dim + c] = old[pr * dim + pc];
                    }
                }
            }
            _ => {
                let m = gate
                    .single_qubit_matrix()
                    .expect("non-CNOT gates have a 2x2 matrix");
                self.conjugate_by(&m, gate.target());
            }
        }
        Ok(())
    }

    /// ρ ↦ MρM† with `M` acting on qubit `target` (not necessarily unitary).
    pub(crate) fn conjugate_by(&mut self, m: &[Complex<T>; 4], target: usize) {
        let dim = self.dim;
        for col in 0..dim {
            apply_single_qubit(&mut self.entries, dim, col, dim, target, m);
        }
        let mc = [m[0].conj(), m[1].conj(), m[2].conj(), m[3].conj()];
        for row in 0..dim {
            apply_single_qubit(&mut self.entries, dim, row * dim, 1, target, &mc);
        }
    }

    /// Σ_k E_k ρ E_k† with each Kraus operator acting on `target`.
    pub fn apply_kraus(&self, operators: &[[Complex<T>; 4]], target: usize) -> Result<Self> {
        if target >= self.num_qubits {
            return Err(Error::InvalidInput(format!(
                "target qubit {target} out of range for {} qubits",
                self.num_qubits
            )));
        }
        let mut acc = vec![Complex::new(T::zero(), T::zero()); self.entries.len()];
        for op in operators {
            let mut term = self.clone();
            term.conjugate_by(op, target);
            for (a, t) in acc.iter_mut().zip(&term.entries) {
                *a = *a + t;
            }
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            dim: self.dim,
            entries: acc,
        })
    }

    /// (1 − p)ρ + p·(I/2 ⊗ Tr_target ρ), computed directly.
    pub(crate) fn depolarize_local(&self, p: T, target: usize) -> Self {
        let dim = self.dim;
        let bit = 1usize << target;
        let half = T::lit(0.5);
        let keep = T::one() - p;
        let mut entries = Vec::with_capacity(self.entries.len());
        for r in 0..dim {
            for c in 0..dim {
                let scaled = self.entries[r * dim + c] * keep;
                let v = if (r ^ c) & bit == 0 {
                    let (r0, c0) = (r & !bit, c & !bit);
                    let reduced = self.get(r0, c0) + self.get(r0 | bit, c0 | bit);
                    scaled + reduced * (p * half)
                } else {
                    scaled
                };
                entries.push(v);
            }
        }
        Self {
            num_qubits: self.num_qubits,
            dim,
            entries,
        }
    }

    /// Tr(ρÔ).
    pub fn expectation(&self, obs: &Observable) -> Result<T> {
        obs.check_qubits(self.num_qubits)?;
        let (flip, _, _) = obs.masks();
        let phase = obs.phase_fn::<T>();
        let value = (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, r| {
            acc + self.get(r, r ^ flip) * phase(r)
        });
        Ok(value.re)
    }

    /// Like [`expectation`](Self::expectation) but also returns the imaginary residue.
    pub fn expectation_complex(&self, obs: &Observable) -> Result<Complex<T>> {
        obs.check_qubits(self.num_qubits)?;
        let (flip, _, _) = obs.masks();
        let phase = obs.phase_fn::<T>();
        Ok((0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, r| {
            acc + self.get(r, r ^ flip) * phase(r)
        }))
    }
}
