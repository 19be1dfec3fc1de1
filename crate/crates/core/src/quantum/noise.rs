use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use crate::error::{check_probability, Result};
use crate::scalar::Real;

/// Single-qubit noise process, independent of where it is applied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind<T> {
    /// With probability `p` the qubit is replaced by the maximally mixed state.
    Depolarizing { p: T },
    /// Relaxation |1⟩ → |0⟩ with probability `gamma`.
    AmplitudeDamping { gamma: T },
}

impl<T: Real> NoiseKind<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseKind::Depolarizing { p } => check_probability("depolarizing p", p.as_f64()),
            NoiseKind::AmplitudeDamping { gamma } => {
                check_probability("amplitude-damping gamma", gamma.as_f64())
            }
        }
    }

    /// Kraus operators as row-major 2×2 matrices.
    ///
    /// Depolarizing uses {√(1−3p/4) I, √(p/4) X, √(p/4) Y, √(p/4) Z}, which
    /// reproduces (1−p)ρ + p I/2 on a single qubit.
    pub fn kraus_operators(&self) -> Vec<[Complex<T>; 4]> {
        let z = Complex::new(T::zero(), T::zero());
        let re = |v: T| Complex::new(v, T::zero());
        match *self {
            NoiseKind::Depolarizing { p } => {
                let a = (T::one() - T::lit(0.75) * p).sqrt();
                let b = (p * T::lit(0.25)).sqrt();
                let ib = Complex::new(T::zero(), b);
                vec![
                    [re(a), z, z, re(a)],
                    [z, re(b), re(b), z],
                    [z, -ib, ib, z],
                    [re(b), z, z, re(-b)],
                ]
            }
            NoiseKind::AmplitudeDamping { gamma } => vec![
                [re(T::one()), z, z, re((T::one() - gamma).sqrt())],
                [z, re(gamma.sqrt()), z, z],
            ],
        }
    }
}

/// A noise process bound to a target qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseChannel<T> {
    #[serde(flatten)]
    pub kind: NoiseKind<T>,
    pub target: usize,
}

impl<T: Real> NoiseChannel<T> {
    pub fn new(kind: NoiseKind<T>, target: usize) -> Result<Self> {
        kind.validate()?;
        Ok(Self { kind, target })
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        self.kind.validate()?;
        if self.target >= rho.num_qubits() {
            return Err(crate::error::Error::InvalidInput(format!(
                "noise target {} out of range for {} qubits",
                self.target,
                rho.num_qubits()
            )));
        }
        match self.kind {
            NoiseKind::Depolarizing { p } => Ok(rho.depolarize_local(p, self.target)),
            NoiseKind::AmplitudeDamping { .. } => {
                rho.apply_kraus(&self.kind.kraus_operators(), self.target)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::quantum::{
        apply_amplitude_damping, apply_depolarizing, expectation_density, Gate, Observable,
        QuantumState,
    };

    fn pure(index: usize) -> DensityMatrix<f64> {
        DensityMatrix::from_state(&QuantumState::basis(1, index).unwrap())
    }

    fn diag(rho: &DensityMatrix<f64>) -> Vec<f64> {
        (0..rho.dim()).map(|i| rho.get(i, i).re).collect()
    }

    #[test]
    fn depolarizing_examples() {
        let rho = pure(0);
        assert_eq!(apply_depolarizing(&rho, 0.0, 0).unwrap(), rho);
        let full = apply_depolarizing(&rho, 1.0, 0).unwrap();
        assert_eq!(diag(&full), vec![0.5, 0.5]);
        let weak = apply_depolarizing(&rho, 0.05, 0).unwrap();
        let d = diag(&weak);
        assert!((d[0] - 0.975).abs() < 1e-15 && (d[1] - 0.025).abs() < 1e-15);
        assert!(weak.get(0, 1).norm() == 0.0);
        let z: Observable = "Z".parse().unwrap();
        assert!((expectation_density(&weak, &z).unwrap() - 0.95).abs() < 1e-15);
    }

    #[test]
    fn amplitude_damping_examples() {
        let rho = pure(1);
        assert_eq!(apply_amplitude_damping(&rho, 0.0, 0).unwrap(), rho);
        let full = apply_amplitude_damping(&rho, 1.0, 0).unwrap();
        assert_eq!(diag(&full), vec![1.0, 0.0]);
        let weak = apply_amplitude_damping(&rho, 0.02, 0).unwrap();
        let d = diag(&weak);
        assert!((d[0] - 0.02).abs() < 1e-15 && (d[1] - 0.98).abs() < 1e-15);
    }

    #[test]
    fn probabilities_out_of_range() {
        let rho = pure(0);
        assert!(matches!(
            apply_depolarizing(&rho, 1.5, 0),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(matches!(
            apply_amplitude_damping(&rho, -0.1, 0),
            Err(Error::InvalidProbability { .. })
        ));
    }

    #[test]
    fn depolarizing_kraus_matches_direct_formula() {
        let mut s = QuantumState::<f64>::zero(2).unwrap();
        s.apply(&Gate::Ry { target: 0, angle: 0.9 }).unwrap();
        s.apply(&Gate::Cnot { control: 0, target: 1 }).unwrap();
        s.apply(&Gate::Rx { target: 1, angle: -0.4 }).unwrap();
        let rho = DensityMatrix::from_state(&s);
        for p in [0.0, 0.05, 0.3, 1.0] {
            for target in 0..2 {
                let kind = NoiseKind::Depolarizing { p };
                let via_kraus = rho.apply_kraus(&kind.kraus_operators(), target).unwrap();
                let direct = rho.depolarize_local(p, target);
                for (a, b) in via_kraus.entries().iter().zip(direct.entries()) {
                    assert!((a - b).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn channel_json_shape() {
        let ch = NoiseChannel::new(NoiseKind::AmplitudeDamping { gamma: 0.02 }, 1).unwrap();
        let s = serde_json::to_string(&ch).unwrap();
        assert_eq!(s, r#"{"kind":"amplitude_damping","gamma":0.02,"target":1}"#);
    }
}
