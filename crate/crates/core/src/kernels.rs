//! Classical and quantum kernels and the Gram matrices built from them.
//!
//! The quantum kernel is the state fidelity K(x, z) = |⟨ψ(x)|ψ(z)⟩|² between
//! feature-map states. It is evaluated exactly from the simulated amplitudes
//! by default, or estimated from a finite number of shots of the inversion
//! test (prepare ψ(x), undo the feature map of z, count all-zero outcomes).

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{apply_inverse_feature_map, feature_map_state, FeatureMapSpec, FeatureVector};
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::quantum::QuantumState;
use crate::rng::pair_seed;
use crate::scalar::Real;

/// Which kernel to evaluate, with its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelSpec<T> {
    /// xᵀz
    Linear,
    /// (β xᵀz + r)^D
    Polynomial { beta: T, r: T, degree: u32 },
    /// exp(−β‖x − z‖²)
    Rbf { beta: T },
    /// |⟨ψ(x)|ψ(z)⟩|²; `shots = None` evaluates exactly.
    Quantum {
        feature_map: FeatureMapSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shots: Option<u64>,
        #[serde(default)]
        seed: u64,
    },
}

impl<T: Real> KernelSpec<T> {
    /// Polynomial kernel with the default β = 1, r = 0, D = 3.
    pub fn polynomial_default() -> Self {
        KernelSpec::Polynomial {
            beta: T::one(),
            r: T::zero(),
            degree: 3,
        }
    }

    /// Exact quantum kernel over `feature_map`.
    pub fn quantum(feature_map: FeatureMapSpec) -> Self {
        KernelSpec::Quantum {
            feature_map,
            shots: None,
            seed: 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Linear => "linear",
            KernelSpec::Polynomial { .. } => "polynomial",
            KernelSpec::Rbf { .. } => "rbf",
            KernelSpec::Quantum { .. } => "quantum",
        }
    }

    /// Whether K(x, x) = 1 for every x.
    pub fn has_unit_diagonal(&self) -> bool {
        matches!(
            self,
            KernelSpec::Rbf { .. } | KernelSpec::Quantum { shots: None, .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Polynomial { beta, r, degree } => {
                if !(*beta > T::zero() && beta.is_finite()) {
                    return Err(Error::InvalidSpec(format!("polynomial beta must be > 0, got {beta}")));
                }
                if !r.is_finite() {
                    return Err(Error::InvalidSpec("polynomial r must be finite".into()));
                }
                if *degree == 0 {
                    return Err(Error::InvalidSpec("polynomial degree must be ≥ 1".into()));
                }
                Ok(())
            }
            KernelSpec::Rbf { beta } => {
                if !(*beta > T::zero() && beta.is_finite()) {
                    return Err(Error::InvalidSpec(format!("rbf beta must be > 0, got {beta}")));
                }
                Ok(())
            }
            KernelSpec::Quantum {
                feature_map, shots, ..
            } => {
                if *shots == Some(0) {
                    return Err(Error::InvalidSpec("shots must be ≥ 1 when given".into()));
                }
                feature_map.validate()
            }
        }
    }
}

/// β = 1 / (d · Var(all feature entries)), falling back to 1 for constant data.
pub fn rbf_beta_heuristic<T: Real>(xs: &[FeatureVector<T>]) -> T {
    let values: Vec<T> = xs.iter().flat_map(|x| x.values().iter().copied()).collect();
    if values.is_empty() {
        return T::one();
    }
    let d = T::from_usize_lossy(xs[0].len());
    let n = T::from_usize_lossy(values.len());
    let mean = values.iter().copied().sum::<T>() / n;
    let var = values.iter().map(|v| (*v - mean) * (*v - mean)).sum::<T>() / n;
    if var > T::zero() {
        T::one() / (d * var)
    } else {
        T::one()
    }
}

/// K(x, z). Shot-based quantum kernels draw from a stream seeded by the spec's seed.
pub fn kernel_value<T: Real>(x: &FeatureVector<T>, z: &FeatureVector<T>, spec: &KernelSpec<T>) -> Result<T> {
    spec.validate()?;
    let seed = match spec {
        KernelSpec::Quantum { seed, .. } => *seed,
        _ => 0,
    };
    kernel_value_seeded(x, z, spec, seed)
}

fn kernel_value_seeded<T: Real>(
    x: &FeatureVector<T>,
    z: &FeatureVector<T>,
    spec: &KernelSpec<T>,
    stream_seed: u64,
) -> Result<T> {
    check_same_len(x, z)?;
    match spec {
        KernelSpec::Linear => Ok(x.dot(z)),
        KernelSpec::Polynomial { beta, r, degree } => Ok(powi(*beta * x.dot(z) + *r, *degree)),
        KernelSpec::Rbf { beta } => Ok((-*beta * x.squared_distance(z)).exp()),
        KernelSpec::Quantum {
            feature_map,
            shots: None,
            ..
        } => {
            let a = feature_map_state(x, feature_map)?;
            let b = feature_map_state(z, feature_map)?;
            a.fidelity(&b)
        }
        KernelSpec::Quantum {
            feature_map,
            shots: Some(shots),
            ..
        } => {
            let p0 = inversion_test_probability(x, z, feature_map)?;
            Ok(estimate_from_shots(p0, *shots, stream_seed))
        }
    }
}

fn powi<T: Real>(base: T, degree: u32) -> T {
    match i32::try_from(degree) {
        Ok(d) => base.powi(d),
        Err(_) => base.powf(T::from_u32(degree).unwrap_or_else(T::max_value)),
    }
}

/// Probability of the all-zeros outcome after U(z)†U(x)|0…0⟩.
pub fn inversion_test_probability<T: Real>(
    x: &FeatureVector<T>,
    z: &FeatureVector<T>,
    feature_map: &FeatureMapSpec,
) -> Result<T> {
    let mut state = feature_map_state(x, feature_map)?;
    apply_inverse_feature_map(&mut state, z, feature_map)?;
    Ok(state.amplitudes()[0].norm_sqr())
}

fn estimate_from_shots<T: Real>(p0: T, shots: u64, seed: u64) -> T {
    let p = p0.as_f64().clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = Binomial::new(shots, p)
        .expect("probability clamped to [0, 1]")
        .sample(&mut rng);
    T::lit(hits as f64 / shots as f64)
}

fn check_same_len<T: Real>(x: &FeatureVector<T>, z: &FeatureVector<T>) -> Result<()> {
    if x.len() != z.len() {
        return Err(Error::InvalidInput(format!(
            "feature length mismatch: {} vs {}",
            x.len(),
            z.len()
        )));
    }
    Ok(())
}

fn check_uniform<T: Real>(xs: &[FeatureVector<T>], len: usize) -> Result<()> {
    if let Some((i, x)) = xs.iter().enumerate().find(|(_, x)| x.len() != len) {
        return Err(Error::InvalidInput(format!(
            "ragged input: point {i} has {} features, expected {len}",
            x.len()
        )));
    }
    Ok(())
}

/// Symmetric Gram matrix together with the kernel that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix<T> {
    entries: Array2<T>,
    spec: KernelSpec<T>,
}

/// Numerical health of a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GramDiagnostics {
    pub size: usize,
    pub min_eigenvalue: f64,
    pub symmetry_residual: f64,
    pub max_diagonal_deviation: f64,
}

impl<T: Real> KernelMatrix<T> {
    /// Wraps a precomputed square matrix.
    pub fn from_entries(entries: Array2<T>, spec: KernelSpec<T>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "Gram matrix must be square and nonempty, got {}×{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(Self { entries, spec })
    }

    pub fn entries(&self) -> &Array2<T> {
        &self.entries
    }

    pub fn spec(&self) -> &KernelSpec<T> {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[[i, j]]
    }

    /// max |K_ij − K_ji|.
    pub fn symmetry_residual(&self) -> T {
        let n = self.size();
        let mut worst = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.entries[[i, j]] - self.entries[[j, i]]).abs());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> T {
        symmetric_eigenvalues(&self.entries)
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    pub fn diagnostics(&self) -> GramDiagnostics {
        let n = self.size();
        let max_diagonal_deviation = if self.spec.has_unit_diagonal() {
            (0..n)
                .map(|i| (self.entries[[i, i]] - T::one()).abs().as_f64())
                .fold(0.0, f64::max)
        } else {
            0.0
        };
        GramDiagnostics {
            size: n,
            min_eigenvalue: self.min_eigenvalue().as_f64(),
            symmetry_residual: self.symmetry_residual().as_f64(),
            max_diagonal_deviation,
        }
    }
}

/// Gram matrix K_ij = K(x_i, x_j), computed on the upper triangle and mirrored.
///
/// Entries are evaluated in parallel; shot-based entries draw from a stream
/// seeded by `(spec seed, i, j)`, so the result does not depend on scheduling.
pub fn gram_matrix<T: Real>(xs: &[FeatureVector<T>], spec: &KernelSpec<T>) -> Result<KernelMatrix<T>> {
    spec.validate()?;
    if xs.is_empty() {
        return Err(Error::InvalidInput("Gram matrix of an empty point list".into()));
    }
    check_uniform(xs, xs[0].len())?;
    let n = xs.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();

    let values: Vec<T> = match spec {
        KernelSpec::Quantum {
            feature_map,
            shots: None,
            ..
        } => {
            let states = xs
                .par_iter()
                .map(|x| feature_map_state(x, feature_map))
                .collect::<Result<Vec<QuantumState<T>>>>()?;
            pairs
                .par_iter()
                .map(|&(i, j)| states[i].fidelity(&states[j]))
                .collect::<Result<Vec<T>>>()?
        }
        _ => {
            let root = quantum_seed(spec);
            pairs
                .par_iter()
                .map(|&(i, j)| kernel_value_seeded(&xs[i], &xs[j], spec, pair_seed(root, i, j)))
                .collect::<Result<Vec<T>>>()?
        }
    };

    let mut entries = Array2::zeros((n, n));
    for (&(i, j), v) in pairs.iter().zip(values) {
        entries[[i, j]] = v;
        entries[[j, i]] = v;
    }
    Ok(KernelMatrix {
        entries,
        spec: spec.clone(),
    })
}

/// Rectangular matrix with entry (i, j) = K(train_i, test_j).
pub fn cross_gram<T: Real>(
    xs_train: &[FeatureVector<T>],
    xs_test: &[FeatureVector<T>],
    spec: &KernelSpec<T>,
) -> Result<Array2<T>> {
    spec.validate()?;
    let (m, n) = (xs_train.len(), xs_test.len());
    if let Some(first) = xs_train.first().or_else(|| xs_test.first()) {
        check_uniform(xs_train, first.len())?;
        check_uniform(xs_test, first.len())?;
    }
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let values: Vec<T> = match spec {
        KernelSpec::Quantum {
            feature_map,
            shots: None,
            ..
        } => {
            let train = xs_train
                .par_iter()
                .map(|x| feature_map_state(x, feature_map))
                .collect::<Result<Vec<_>>>()?;
            let test = xs_test
                .par_iter()
                .map(|x| feature_map_state(x, feature_map))
                .collect::<Result<Vec<_>>>()?;
            pairs
                .par_iter()
                .map(|&(i, j)| train[i].fidelity(&test[j]))
                .collect::<Result<Vec<T>>>()?
        }
        _ => {
            // distinct stream family from the training Gram matrix
            let root = quantum_seed(spec) ^ 0xC2B2_AE3D_27D4_EB4F;
            pairs
                .par_iter()
                .map(|&(i, j)| {
                    kernel_value_seeded(&xs_train[i], &xs_test[j], spec, pair_seed(root, i, j))
                })
                .collect::<Result<Vec<T>>>()?
        }
    };
    Ok(Array2::from_shape_vec((m, n), values).expect("m·n values"))
}

fn quantum_seed<T>(spec: &KernelSpec<T>) -> u64 {
    match spec {
        KernelSpec::Quantum { seed, .. } => *seed,
        _ => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn fv(v: &[f64]) -> FeatureVector<f64> {
        FeatureVector::new(v.to_vec()).unwrap()
    }

    fn angle_kernel(n: usize) -> KernelSpec<f64> {
        KernelSpec::quantum(FeatureMapSpec::angle(n))
    }

    #[test]
    fn classical_examples() {
        let (x, z) = (fv(&[1.0, 2.0]), fv(&[3.0, 4.0]));
        assert_eq!(kernel_value(&x, &z, &KernelSpec::Linear).unwrap(), 11.0);
        for beta in [0.01, 1.0, 37.0] {
            assert_eq!(kernel_value(&x, &x, &KernelSpec::Rbf { beta }).unwrap(), 1.0);
        }
        let poly = KernelSpec::Polynomial {
            beta: 1.0,
            r: 0.0,
            degree: 2,
        };
        let ones = fv(&[1.0, 1.0]);
        assert_eq!(kernel_value(&ones, &ones, &poly).unwrap(), 4.0);
    }

    #[test]
    fn quantum_examples() {
        let k = angle_kernel(1);
        assert!(kernel_value(&fv(&[0.0]), &fv(&[FRAC_PI_2]), &k).unwrap() < 1e-30);
        // Π cos(x_i − z_i) overlap gives cos²(π/4) = 0.5
        let v = kernel_value(&fv(&[0.0]), &fv(&[FRAC_PI_4]), &k).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let (x, z) = (fv(&[1.0]), fv(&[1.0, 2.0]));
        assert!(matches!(
            kernel_value(&x, &z, &KernelSpec::Linear),
            Err(Error::InvalidInput(_))
        ));
        let zero_shots = KernelSpec::Quantum {
            feature_map: FeatureMapSpec::angle(1),
            shots: Some(0),
            seed: 0,
        };
        assert!(matches!(
            kernel_value(&x, &x, &zero_shots),
            Err(Error::InvalidSpec(_))
        ));
        assert!(KernelSpec::Rbf { beta: 0.0 }.validate().is_err());
        assert!(KernelSpec::Polynomial { beta: 1.0, r: 0.0, degree: 0 }.validate().is_err());
        assert!(gram_matrix(&[x.clone(), z], &KernelSpec::Linear).is_err());
        assert!(gram_matrix::<f64>(&[], &KernelSpec::Linear).is_err());
    }

    #[test]
    fn gram_examples() {
        let one = gram_matrix(&[fv(&[0.3, 0.1])], &KernelSpec::Rbf { beta: 2.0 }).unwrap();
        assert_eq!(one.entries().as_slice().unwrap(), &[1.0]);
        let g = gram_matrix(&[fv(&[0.0]), fv(&[FRAC_PI_2])], &angle_kernel(1)).unwrap();
        assert_eq!(g.get(0, 0), 1.0);
        assert_eq!(g.get(1, 1), 1.0);
        assert!(g.get(0, 1) < 1e-30 && g.get(1, 0) < 1e-30);
    }

    #[test]
    fn cross_gram_examples() {
        let xs = vec![fv(&[0.1, 0.5]), fv(&[0.9, -0.2]), fv(&[0.4, 0.4])];
        for spec in [
            KernelSpec::Linear,
            KernelSpec::Rbf { beta: 0.7 },
            KernelSpec::polynomial_default(),
            angle_kernel(2),
        ] {
            let g = gram_matrix(&xs, &spec).unwrap();
            let c = cross_gram(&xs, &xs, &spec).unwrap();
            assert_eq!(g.entries(), &c);
        }
        let c = cross_gram(&xs[..1], &xs[1..2], &KernelSpec::Linear).unwrap();
        assert_eq!(c.dim(), (1, 1));
        assert_eq!(c[[0, 0]], kernel_value(&xs[0], &xs[1], &KernelSpec::Linear).unwrap());
        let test = vec![fv(&[0.0, 1.0]), fv(&[2.0, 0.5])];
        let spec = KernelSpec::Rbf { beta: 0.3 };
        let c = cross_gram(&xs, &test, &spec).unwrap();
        assert_eq!(c.dim(), (3, 2));
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(c[[i, j]], kernel_value(&xs[i], &test[j], &spec).unwrap());
            }
        }
    }

    #[test]
    fn inversion_test_matches_exact_overlap() {
        let spec = FeatureMapSpec::angle(3).with_entangling(true).with_repetitions(2);
        let (x, z) = (fv(&[0.2, 1.1, -0.4]), fv(&[0.9, 0.3, 0.5]));
        let exact = kernel_value(&x, &z, &KernelSpec::quantum(spec)).unwrap();
        let inv = inversion_test_probability(&x, &z, &spec).unwrap();
        assert!((exact - inv).abs() < 1e-12);
    }

    #[test]
    fn shot_estimates_are_reproducible() {
        let spec = KernelSpec::Quantum {
            feature_map: FeatureMapSpec::angle(2),
            shots: Some(1000),
            seed: 9,
        };
        let xs = vec![fv(&[0.1, 0.2]), fv(&[0.7, 0.3]), fv(&[1.2, 0.0])];
        let a = gram_matrix(&xs, &spec).unwrap();
        let b = gram_matrix(&xs, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(0, 0), 1.0);
    }

    #[test]
    fn rbf_heuristic() {
        let xs = vec![fv(&[0.0, 2.0]), fv(&[2.0, 0.0])];
        // entries {0,2,2,0}: variance 1, d = 2
        assert!((rbf_beta_heuristic(&xs) - 0.5).abs() < 1e-15);
        assert_eq!(rbf_beta_heuristic(&[fv(&[3.0, 3.0])]), 1.0);
    }

    #[test]
    fn spec_json_shapes() {
        let s: KernelSpec<f64> = serde_json::from_str(r#"{"kind":"rbf","beta":0.5}"#).unwrap();
        assert_eq!(s, KernelSpec::Rbf { beta: 0.5 });
        let q: KernelSpec<f64> = serde_json::from_str(
            r#"{"kind":"quantum","feature_map":{"scheme":"angle","num_qubits":3}}"#,
        )
        .unwrap();
        assert_eq!(q, KernelSpec::quantum(FeatureMapSpec::angle(3)));
    }

    proptest! {
        #[test]
        fn degree_one_polynomial_is_linear(
            x in prop::collection::vec(-5.0f64..5.0, 4),
            z in prop::collection::vec(-5.0f64..5.0, 4),
        ) {
            let poly = KernelSpec::Polynomial { beta: 1.0, r: 0.0, degree: 1 };
            let (x, z) = (fv(&x), fv(&z));
            prop_assert_eq!(
                kernel_value(&x, &z, &poly).unwrap(),
                kernel_value(&x, &z, &KernelSpec::Linear).unwrap()
            );
        }

        #[test]
        fn exact_quantum_kernel_in_unit_interval(
            x in prop::collection::vec(-3.0f64..3.0, 3),
            z in prop::collection::vec(-3.0f64..3.0, 3),
            entangling in any::<bool>(),
        ) {
            let k = KernelSpec::quantum(FeatureMapSpec::angle(3).with_entangling(entangling));
            let (x, z) = (fv(&x), fv(&z));
            let v = kernel_value(&x, &z, &k).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
            prop_assert!((kernel_value(&x, &x, &k).unwrap() - 1.0).abs() < 1e-10);
        }
    }
}
