use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Tensor product of single-qubit Pauli factors, one per qubit.
///
/// The string form lists factors by qubit index: character `k` acts on qubit
/// `k`, so `"ZI"` measures Z on qubit 0 of a two-qubit register.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observable {
    paulis: Vec<Pauli>,
}

impl Observable {
    pub fn new(paulis: Vec<Pauli>) -> Result<Self> {
        if paulis.is_empty() {
            return Err(Error::InvalidObservable("observable acts on zero qubits".into()));
        }
        Ok(Self { paulis })
    }

    /// Z on qubit `qubit`, identity elsewhere.
    pub fn z(num_qubits: usize, qubit: usize) -> Result<Self> {
        if qubit >= num_qubits {
            return Err(Error::InvalidObservable(format!(
                "qubit {qubit} out of range for {num_qubits} qubits"
            )));
        }
        let mut paulis = vec![Pauli::I; num_qubits];
        paulis[qubit] = Pauli::Z;
        Self::new(paulis)
    }

    pub fn num_qubits(&self) -> usize {
        self.paulis.len()
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.paulis
    }

    pub(crate) fn check_qubits(&self, num_qubits: usize) -> Result<()> {
        if self.num_qubits() != num_qubits {
            return Err(Error::InvalidObservable(format!(
                "observable on {} qubits applied to a {num_qubits}-qubit register",
                self.num_qubits()
            )));
        }
        Ok(())
    }

    /// Bit-flip mask and sign mask: Ô|b⟩ = i^{#Y} · (−1)^{popcount(b & sign)} |b ⊕ flip⟩.
    pub(crate) fn masks(&self) -> (usize, usize, u32) {
        let mut flip = 0usize;
        let mut sign = 0usize;
        let mut ys = 0u32;
        for (q, p) in self.paulis.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    sign |= 1 << q;
                    ys += 1;
                }
                Pauli::Z => sign |= 1 << q,
            }
        }
        (flip, sign, ys)
    }

    /// ⟨flipped(b)|Ô|b⟩ as a function of `b`.
    pub(crate) fn phase_fn<T: Real>(&self) -> impl Fn(usize) -> Complex<T> {
        let (_, sign, ys) = self.masks();
        let base = match ys % 4 {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        };
        move |b: usize| {
            if (b & sign).count_ones().is_multiple_of(2) {
                base
            } else {
                -base
            }
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.paulis {
            let c = match p {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let paulis = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::InvalidObservable(format!(
                    "unknown Pauli factor '{other}' in \"{s}\""
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(paulis)
    }
}

impl Serialize for Observable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
