use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Axis of a single-qubit rotation R_ν(θ) = exp(−iθν/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RotationKind {
    #[serde(rename = "RX")]
    X,
    #[serde(rename = "RY")]
    Y,
    #[serde(rename = "RZ")]
    Z,
}

/// A gate from the simulator's fixed gate set.
///
/// Rotations carry an angle in radians; the others carry none.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE")]
pub enum Gate<T> {
    Rx { target: usize, angle: T },
    Ry { target: usize, angle: T },
    Rz { target: usize, angle: T },
    H { target: usize },
    X { target: usize },
    Cnot { control: usize, target: usize },
}

impl<T: Real> Gate<T> {
    pub fn rotation(kind: RotationKind, target: usize, angle: T) -> Self {
        match kind {
            RotationKind::X => Gate::Rx { target, angle },
            RotationKind::Y => Gate::Ry { target, angle },
            RotationKind::Z => Gate::Rz { target, angle },
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::Rx { target, .. }
            | Gate::Ry { target, .. }
            | Gate::Rz { target, .. }
            | Gate::H { target }
            | Gate::X { target }
            | Gate::Cnot { target, .. } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::Cnot { control, .. } => Some(control),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<T> {
        match *self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => Some(angle),
            _ => None,
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let target = self.target();
        if target >= num_qubits {
            return Err(Error::InvalidGate(format!(
                "target qubit {target} out of range for {num_qubits} qubits"
            )));
        }
        if let Some(control) = self.control() {
            if control >= num_qubits {
                return Err(Error::InvalidGate(format!(
                    "control qubit {control} out of range for {num_qubits} qubits"
                )));
            }
            if control == target {
                return Err(Error::InvalidGate(format!(
                    "control and target coincide on qubit {target}"
                )));
            }
        }
        if let Some(angle) = self.angle() {
            if !angle.is_finite() {
                return Err(Error::InvalidGate("rotation angle is not finite".into()));
            }
        }
        Ok(())
    }

    /// Row-major 2×2 matrix `[m00, m01, m10, m11]` for single-qubit gates.
    pub fn single_qubit_matrix(&self) -> Option<[Complex<T>; 4]> {
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let half = T::lit(0.5);
        match *self {
            Gate::Rx { angle, .. } => {
                let (s, c) = (angle * half).sin_cos();
                let c = Complex::new(c, T::zero());
                let mis = Complex::new(T::zero(), -s);
                Some([c, mis, mis, c])
            }
            Gate::Ry { angle, .. } => {
                let (s, c) = (angle * half).sin_cos();
                Some([
                    Complex::new(c, T::zero()),
                    Complex::new(-s, T::zero()),
                    Complex::new(s, T::zero()),
                    Complex::new(c, T::zero()),
                ])
            }
            Gate::Rz { angle, .. } => {
                let (s, c) = (angle * half).sin_cos();
                Some([Complex::new(c, -s), zero, zero, Complex::new(c, s)])
            }
            Gate::H { .. } => {
                let r = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
                Some([r, r, r, -r])
            }
            Gate::X { .. } => Some([zero, one, one, zero]),
            Gate::Cnot { .. } => None,
        }
    }

    /// The inverse gate.
    pub fn inverse(&self) -> Self {
        match *self {
            Gate::Rx { target, angle } => Gate::Rx { target, angle: -angle },
            Gate::Ry { target, angle } => Gate::Ry { target, angle: -angle },
            Gate::Rz { target, angle } => Gate::Rz { target, angle: -angle },
            g => g,
        }
    }
}

/// Applies a 2×2 matrix to the qubit `target` of a strided complex vector of
/// logical length `2^n`: element `k` lives at `data[offset + k * step]`.
pub(crate) fn apply_single_qubit<T: Real>(
    data: &mut [Complex<T>],
    len: usize,
    offset: usize,
    step: usize,
    target: usize,
    m: &[Complex<T>; 4],
) {
    let stride = 1usize << target;
    for base in (0..len).step_by(stride << 1) {
        for k in base..base + stride {
            let i0 = offset + k * step;
            let i1 = offset + (k | stride) * step;
            let a = data[i0];
            let b = data[i1];
            data[i0] = m[0] * a + m[1] * b;
            data[i1] = m[2] * a + m[3] * b;
        }
    }
}

/// Basis-index permutation implemented by CNOT (an involution).
#[inline]
pub(crate) fn cnot_image(index: usize, control: usize, target: usize) -> usize {
    if index >> control & 1 == 1 {
        index ^ (1 << target)
    } else {
        index
    }
}
