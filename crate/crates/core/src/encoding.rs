//! Classical-to-quantum encodings and the feature-map circuit used by the
//! quantum kernel.
//!
//! Angle encoding puts feature `x_q` on qubit `q` as `cos x_q|0⟩ + sin x_q|1⟩`.
//! Amplitude encoding zero-pads `x` to `2^n` entries and normalizes it. The
//! feature map optionally follows each encoding layer with a CNOT ring and
//! repeats (re-encoding) the pattern `repetitions` times.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Gate, QuantumState};
use crate::scalar::Real;

/// A finite, nonempty real feature vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct FeatureVector<T>(Vec<T>);

impl<T: Real> FeatureVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("empty feature vector".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "feature {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, other: &Self) -> T {
        self.0.iter().zip(&other.0).map(|(a, b)| *a * *b).sum()
    }

    pub fn squared_distance(&self, other: &Self) -> T {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (*a - *b) * (*a - *b))
            .sum()
    }
}

impl<T: Real> TryFrom<Vec<T>> for FeatureVector<T> {
    type Error = Error;

    fn try_from(values: Vec<T>) -> Result<Self> {
        Self::new(values)
    }
}

impl<T> From<FeatureVector<T>> for Vec<T> {
    fn from(v: FeatureVector<T>) -> Self {
        v.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingScheme {
    Angle,
    Amplitude,
}

fn one() -> usize {
    1
}

/// How a feature vector becomes a quantum state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureMapSpec {
    pub scheme: EncodingScheme,
    pub num_qubits: usize,
    #[serde(default)]
    pub entangling: bool,
    #[serde(default = "one")]
    pub repetitions: usize,
}

impl FeatureMapSpec {
    /// Plain angle encoding, one qubit per feature.
    pub fn angle(num_features: usize) -> Self {
        Self {
            scheme: EncodingScheme::Angle,
            num_qubits: num_features,
            entangling: false,
            repetitions: 1,
        }
    }

    /// Plain amplitude encoding on the fewest qubits that hold `num_features`.
    pub fn amplitude(num_features: usize) -> Self {
        Self {
            scheme: EncodingScheme::Amplitude,
            num_qubits: amplitude_qubits(num_features),
            entangling: false,
            repetitions: 1,
        }
    }

    pub fn with_entangling(mut self, entangling: bool) -> Self {
        self.entangling = entangling;
        self
    }

    pub fn with_repetitions(mut self, repetitions: usize) -> Self {
        self.repetitions = repetitions;
        self
    }

    /// Structural checks that do not depend on the data.
    pub fn validate(&self) -> Result<()> {
        if self.num_qubits == 0 {
            return Err(Error::InvalidSpec("feature map needs at least one qubit".into()));
        }
        if self.num_qubits > crate::quantum::state_max_qubits() {
            return Err(Error::InvalidSpec(format!(
                "feature map on {} qubits exceeds the simulator limit",
                self.num_qubits
            )));
        }
        if self.repetitions == 0 {
            return Err(Error::InvalidSpec("feature map repetitions must be ≥ 1".into()));
        }
        Ok(())
    }

    /// Checks the spec against a feature length.
    pub fn validate_for(&self, num_features: usize) -> Result<()> {
        self.validate()?;
        match self.scheme {
            EncodingScheme::Angle if self.num_qubits != num_features => {
                Err(Error::InvalidSpec(format!(
                    "angle encoding needs one qubit per feature: {} qubits for {num_features} features",
                    self.num_qubits
                )))
            }
            EncodingScheme::Amplitude if (1usize << self.num_qubits) < num_features => {
                Err(Error::InvalidSpec(format!(
                    "amplitude encoding on {} qubits holds at most {} features, got {num_features}",
                    self.num_qubits,
                    1usize << self.num_qubits
                )))
            }
            _ => Ok(()),
        }
    }
}

pub(crate) fn amplitude_qubits(num_features: usize) -> usize {
    let mut n = 1;
    while (1usize << n) < num_features {
        n += 1;
    }
    n
}

/// ⊗_q (cos x_q |0⟩ + sin x_q |1⟩).
pub fn encode_angle<T: Real>(x: &FeatureVector<T>) -> Result<QuantumState<T>> {
    crate::quantum::check_qubits(x.len())?;
    let mut amps = vec![Complex::new(T::one(), T::zero())];
    for &v in x.values() {
        let (s, c) = v.sin_cos();
        let mut next = Vec::with_capacity(amps.len() * 2);
        next.extend(amps.iter().map(|a| *a * c));
        next.extend(amps.iter().map(|a| *a * s));
        amps = next;
    }
    Ok(QuantumState::from_normalized_unchecked(amps))
}

/// x zero-padded to the smallest power of two (at least 2) and L2-normalized.
pub fn encode_amplitude<T: Real>(x: &FeatureVector<T>) -> Result<QuantumState<T>> {
    encode_amplitude_on(x, amplitude_qubits(x.len()))
}

fn encode_amplitude_on<T: Real>(x: &FeatureVector<T>, num_qubits: usize) -> Result<QuantumState<T>> {
    let dim = 1usize << num_qubits;
    let unit = normalized_padded(x, dim)?;
    Ok(QuantumState::from_normalized_unchecked(
        unit.into_iter().map(|v| Complex::new(v, T::zero())).collect(),
    ))
}

fn normalized_padded<T: Real>(x: &FeatureVector<T>, dim: usize) -> Result<Vec<T>> {
    // scale by the max magnitude first so huge or tiny inputs do not over/underflow
    let max = x.values().iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if max == T::zero() {
        return Err(Error::CannotNormalize);
    }
    let scaled: Vec<T> = x.values().iter().map(|v| *v / max).collect();
    let norm = scaled.iter().map(|v| *v * *v).sum::<T>().sqrt();
    let mut out: Vec<T> = scaled.into_iter().map(|v| v / norm).collect();
    out.resize(dim, T::zero());
    Ok(out)
}

/// One step of the feature-map circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum MapOp<T> {
    /// RY(2·x_q) on every qubit q.
    AngleLayer(Vec<T>),
    /// Householder reflection sending |0…0⟩ to the real unit vector held.
    AmplitudeLayer(Vec<T>),
    Gate(Gate<T>),
}

/// CNOT ring: qubit i controls i+1 for i < n−1, closed by (n−1) → 0 when n ≥ 3.
pub fn cnot_ring<T: Real>(num_qubits: usize) -> Vec<Gate<T>> {
    let mut gates: Vec<Gate<T>> = (0..num_qubits.saturating_sub(1))
        .map(|i| Gate::Cnot {
            control: i,
            target: i + 1,
        })
        .collect();
    if num_qubits >= 3 {
        gates.push(Gate::Cnot {
            control: num_qubits - 1,
            target: 0,
        });
    }
    gates
}

/// The feature-map circuit U(x) with U(x)|0…0⟩ = |ψ(x)⟩.
pub fn feature_map_circuit<T: Real>(x: &FeatureVector<T>, spec: &FeatureMapSpec) -> Result<Vec<MapOp<T>>> {
    spec.validate_for(x.len())?;
    let layer = match spec.scheme {
        EncodingScheme::Angle => MapOp::AngleLayer(x.values().to_vec()),
        EncodingScheme::Amplitude => {
            MapOp::AmplitudeLayer(normalized_padded(x, 1usize << spec.num_qubits)?)
        }
    };
    let ring = if spec.entangling {
        cnot_ring(spec.num_qubits)
    } else {
        Vec::new()
    };
    let mut ops = Vec::new();
    for _ in 0..spec.repetitions {
        ops.push(layer.clone());
        ops.extend(ring.iter().copied().map(MapOp::Gate));
    }
    Ok(ops)
}

fn apply_op<T: Real>(state: &mut QuantumState<T>, op: &MapOp<T>, inverse: bool) -> Result<()> {
    match op {
        MapOp::AngleLayer(xs) => {
            let two = T::lit(2.0);
            for (q, &v) in xs.iter().enumerate() {
                let angle = if inverse { -two * v } else { two * v };
                state.apply(&Gate::Ry { target: q, angle })?;
            }
        }
        MapOp::AmplitudeLayer(unit) => householder(state, unit),
        MapOp::Gate(g) => state.apply(&if inverse { g.inverse() } else { *g })?,
    }
    Ok(())
}

/// Applies H = I − 2vvᵀ/(vᵀv) with v = e₀ − u; H is its own inverse and maps e₀ to u.
fn householder<T: Real>(state: &mut QuantumState<T>, unit: &[T]) {
    let mut v: Vec<T> = unit.iter().map(|u| -*u).collect();
    v[0] = v[0] + T::one();
    let vv: T = v.iter().map(|a| *a * *a).sum();
    if vv == T::zero() {
        return;
    }
    let amps = state.amplitudes();
    let proj = v
        .iter()
        .zip(amps)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (vi, a)| acc + *a * *vi);
    let factor = proj * (T::lit(2.0) / vv);
    let next: Vec<Complex<T>> = amps
        .iter()
        .zip(&v)
        .map(|(a, vi)| *a - factor * *vi)
        .collect();
    *state = QuantumState::from_normalized_unchecked(next);
}

/// |ψ(x)⟩ for the given feature map.
///
/// The first encoding layer is the plain encoder output; any ring and later
/// repetitions are applied as gates on top of it.
pub fn feature_map_state<T: Real>(x: &FeatureVector<T>, spec: &FeatureMapSpec) -> Result<QuantumState<T>> {
    let ops = feature_map_circuit(x, spec)?;
    let mut state = match spec.scheme {
        EncodingScheme::Angle => encode_angle(x)?,
        EncodingScheme::Amplitude => encode_amplitude_on(x, spec.num_qubits)?,
    };
    for op in &ops[1..] {
        apply_op(&mut state, op, false)?;
    }
    Ok(state)
}

/// U(z)† |ψ⟩, undoing the feature-map circuit of `z`.
pub fn apply_inverse_feature_map<T: Real>(
    state: &mut QuantumState<T>,
    z: &FeatureVector<T>,
    spec: &FeatureMapSpec,
) -> Result<()> {
    let ops = feature_map_circuit(z, spec)?;
    for op in ops.iter().rev() {
        apply_op(state, op, true)?;
    }
    Ok(())
}
