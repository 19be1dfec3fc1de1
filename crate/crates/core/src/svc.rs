//! Soft-margin support vector classifier trained on a precomputed kernel.
//!
//! The dual problem
//!
//! ```text
//! max_α  Σ α_i − ½ Σ_ij α_i α_j y_i y_j K_ij
//! s.t.   Σ α_i y_i = 0,  0 ≤ α_i ≤ C
//! ```
//!
//! is solved by sequential minimal optimization: each step picks the maximal
//! KKT-violating pair (the first index maximizes −y_t ∇_t over the "up" set,
//! the second is the partner with the largest error gap |E_i − E_j|) and
//! solves the two-variable subproblem in closed form. When a step makes no
//! progress the partner is redrawn from the violating set with the seeded RNG.
//!
//! Labels are `i8` values in {−1, +1}. `sign(0)` is taken as +1.

use ndarray::Array2;
use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use crate::encoding::FeatureVector;
use crate::error::{Error, Result};
use crate::kernels::{cross_gram, gram_matrix, kernel_value, KernelMatrix, KernelSpec};
use crate::rng::{stage_rng, Stage};
use crate::scalar::Real;

/// Lower bound on the curvature of a two-variable subproblem.
const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmTrainConfig<T> {
    /// Box constraint C.
    #[serde(rename = "C")]
    pub c: T,
    /// Stop once the maximal KKT violation drops to this value.
    pub tolerance: T,
    /// Iteration budget in units of n pair updates.
    pub max_passes: usize,
    pub seed: u64,
}

impl<T: Real> Default for SvmTrainConfig<T> {
    fn default() -> Self {
        Self {
            c: T::one(),
            tolerance: T::lit(1e-3),
            max_passes: 1000,
            seed: 0,
        }
    }
}

impl<T: Real> SvmTrainConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.c > T::zero() && self.c.is_finite()) {
            problems.push(format!("C must be > 0, got {}", self.c));
        }
        if !(self.tolerance > T::zero() && self.tolerance.is_finite()) {
            problems.push(format!("tolerance must be > 0, got {}", self.tolerance));
        }
        if self.max_passes == 0 {
            problems.push("max_passes must be ≥ 1".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(problems.join("; ")))
        }
    }
}

/// Output of the dual solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmSolution<T> {
    pub alphas: Vec<T>,
    pub bias: T,
    pub support_indices: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    /// Dual objective Σα − ½αᵀQα at the returned point.
    pub objective: T,
}

/// Trained classifier: dual coefficients plus everything needed to score new points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SvmModel<T> {
    pub alphas: Vec<T>,
    pub bias: T,
    pub support_indices: Vec<usize>,
    pub labels: Vec<i8>,
    pub kernel_spec: KernelSpec<T>,
    pub training_points: Vec<FeatureVector<T>>,
}

fn check_labels(labels: &[i8]) -> Result<()> {
    if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
        return Err(Error::InvalidInput(format!("label {bad} is not in {{-1, +1}}")));
    }
    let pos = labels.contains(&1);
    let neg = labels.contains(&-1);
    if !(pos && neg) {
        return Err(Error::DegenerateProblem(
            "both classes must be present to train an SVM".into(),
        ));
    }
    Ok(())
}

#[inline]
fn sign<T: Real>(y: i8) -> T {
    if y > 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Dual objective Σα − ½ Σ_ij α_i α_j y_i y_j K_ij.
pub fn dual_objective<T: Real>(gram: &Array2<T>, labels: &[i8], alphas: &[T]) -> T {
    let n = alphas.len();
    let mut quad = T::zero();
    for i in 0..n {
        if alphas[i] == T::zero() {
            continue;
        }
        for j in 0..n {
            quad = quad + alphas[i] * alphas[j] * sign::<T>(labels[i]) * sign::<T>(labels[j]) * gram[[i, j]];
        }
    }
    alphas.iter().copied().sum::<T>() - T::lit(0.5) * quad
}

/// Largest KKT violation of (α, b): for α_i = 0 need y f ≥ 1, for
/// 0 < α_i < C need y f = 1, for α_i = C need y f ≤ 1.
pub fn kkt_violation<T: Real>(gram: &Array2<T>, labels: &[i8], alphas: &[T], bias: T, c: T) -> T {
    let n = alphas.len();
    let mut worst = T::zero();
    for i in 0..n {
        let f = (0..n).fold(bias, |acc, j| {
            acc + alphas[j] * sign::<T>(labels[j]) * gram[[j, i]]
        });
        let margin = sign::<T>(labels[i]) * f - T::one();
        let v = if alphas[i] <= T::zero() {
            (-margin).max(T::zero())
        } else if alphas[i] >= c {
            margin.max(T::zero())
        } else {
            margin.abs()
        };
        worst = worst.max(v);
    }
    worst
}

/// Solves the dual on a precomputed Gram matrix.
pub fn train_svm<T: Real>(
    gram: &KernelMatrix<T>,
    labels: &[i8],
    config: &SvmTrainConfig<T>,
) -> Result<SvmSolution<T>> {
    config.validate()?;
    let n = gram.size();
    if labels.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} labels for a {n}×{n} Gram matrix",
            labels.len()
        )));
    }
    check_labels(labels)?;
    let k = gram.entries();
    let c = config.c;
    let tau = T::lit(TAU);
    let y: Vec<T> = labels.iter().map(|&l| sign(l)).collect();
    let q = |i: usize, j: usize| y[i] * y[j] * k[[i, j]];

    let mut alpha = vec![T::zero(); n];
    // gradient of ½αᵀQα − Σα
    let mut grad = vec![-T::one(); n];
    let mut rng = stage_rng(config.seed, Stage::SvmSolver);
    let max_iter = config.max_passes.saturating_mul(n.max(1));
    let mut iterations = 0;
    let mut converged = false;

    let in_up = |a: T, yt: T| (yt > T::zero() && a < c) || (yt < T::zero() && a > T::zero());
    let in_low = |a: T, yt: T| (yt > T::zero() && a > T::zero()) || (yt < T::zero() && a < c);

    while iterations < max_iter {
        let mut i_sel = None;
        let mut m = T::neg_infinity();
        let mut j_sel = None;
        let mut big_m = T::infinity();
        for t in 0..n {
            let v = -y[t] * grad[t];
            if in_up(alpha[t], y[t]) && v > m {
                m = v;
                i_sel = Some(t);
            }
            if in_low(alpha[t], y[t]) && v < big_m {
                big_m = v;
                j_sel = Some(t);
            }
        }
        let (Some(i), Some(mut j)) = (i_sel, j_sel) else {
            converged = true;
            break;
        };
        if m - big_m <= config.tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        let mut changed = update_pair(i, j, &mut alpha, &mut grad, &y, k, c, tau, &q);
        if !changed {
            let candidates: Vec<usize> = (0..n)
                .filter(|&t| t != i && in_low(alpha[t], y[t]) && -y[t] * grad[t] < m - config.tolerance)
                .collect();
            if let Some(&alt) = candidates.choose(&mut rng) {
                j = alt;
                changed = update_pair(i, j, &mut alpha, &mut grad, &y, k, c, tau, &q);
            }
        }
        if !changed {
            log::warn!("SMO stalled at iteration {iterations}; stopping early");
            break;
        }
    }
    if !converged {
        log::warn!("SMO hit its iteration budget ({max_iter}) before reaching tolerance");
    }

    let bias = compute_bias(&alpha, &grad, &y, c);
    let support_indices = (0..n).filter(|&t| alpha[t] > T::zero()).collect();
    let objective = dual_objective(k, labels, &alpha);
    Ok(SvmSolution {
        alphas: alpha,
        bias,
        support_indices,
        iterations,
        converged,
        objective,
    })
}

#[allow(clippy::too_many_arguments)]
fn update_pair<T: Real>(
    i: usize,
    j: usize,
    alpha: &mut [T],
    grad: &mut [T],
    y: &[T],
    k: &Array2<T>,
    c: T,
    tau: T,
    q: &impl Fn(usize, usize) -> T,
) -> bool {
    let (old_i, old_j) = (alpha[i], alpha[j]);
    let mut quad = k[[i, i]] + k[[j, j]] - T::lit(2.0) * k[[i, j]];
    if quad <= T::zero() {
        quad = tau;
    }
    let (mut ai, mut aj) = (old_i, old_j);
    if y[i] != y[j] {
        let delta = (-grad[i] - grad[j]) / quad;
        let diff = ai - aj;
        ai = ai + delta;
        aj = aj + delta;
        if diff > T::zero() {
            if aj < T::zero() {
                aj = T::zero();
                ai = diff;
            }
        } else if ai < T::zero() {
            ai = T::zero();
            aj = -diff;
        }
        if diff > T::zero() {
            if ai > c {
                ai = c;
                aj = c - diff;
            }
        } else if aj > c {
            aj = c;
            ai = c + diff;
        }
    } else {
        let delta = (grad[i] - grad[j]) / quad;
        let sum = ai + aj;
        ai = ai - delta;
        aj = aj + delta;
        if sum > c {
            if ai > c {
                ai = c;
                aj = sum - c;
            }
        } else if aj < T::zero() {
            aj = T::zero();
            ai = sum;
        }
        if sum > c {
            if aj > c {
                aj = c;
                ai = sum - c;
            }
        } else if ai < T::zero() {
            ai = T::zero();
            aj = sum;
        }
    }
    ai = ai.max(T::zero()).min(c);
    aj = aj.max(T::zero()).min(c);
    let (di, dj) = (ai - old_i, aj - old_j);
    if di == T::zero() && dj == T::zero() {
        return false;
    }
    alpha[i] = ai;
    alpha[j] = aj;
    for (t, g) in grad.iter_mut().enumerate() {
        *g = *g + q(t, i) * di + q(t, j) * dj;
    }
    true
}

/// Mean of −y_t ∇_t over free vectors, or the midpoint of the feasible interval.
fn compute_bias<T: Real>(alpha: &[T], grad: &[T], y: &[T], c: T) -> T {
    let mut sum = T::zero();
    let mut free = 0usize;
    let mut upper = T::infinity();
    let mut lower = T::neg_infinity();
    for t in 0..alpha.len() {
        let v = -y[t] * grad[t];
        if alpha[t] > T::zero() && alpha[t] < c {
            sum = sum + v;
            free += 1;
            continue;
        }
        // α at a bound pins b from one side
        let at_upper = alpha[t] >= c;
        let bounds_from_above = (y[t] > T::zero()) == at_upper;
        if bounds_from_above {
            upper = upper.min(v);
        } else {
            lower = lower.max(v);
        }
    }
    if free > 0 {
        sum / T::from_usize_lossy(free)
    } else if upper.is_finite() && lower.is_finite() {
        (upper + lower) * T::lit(0.5)
    } else if upper.is_finite() {
        upper
    } else if lower.is_finite() {
        lower
    } else {
        T::zero()
    }
}

/// `sign(score)` with sign(0) = +1.
pub fn sign_label<T: Real>(score: T) -> i8 {
    if score >= T::zero() {
        1
    } else {
        -1
    }
}

impl<T: Real> SvmModel<T> {
    pub fn from_solution(
        solution: SvmSolution<T>,
        labels: Vec<i8>,
        training_points: Vec<FeatureVector<T>>,
        kernel_spec: KernelSpec<T>,
    ) -> Result<Self> {
        let n = solution.alphas.len();
        if labels.len() != n || training_points.len() != n {
            return Err(Error::InvalidInput(format!(
                "solution has {n} coefficients but {} labels and {} points",
                labels.len(),
                training_points.len()
            )));
        }
        Ok(Self {
            alphas: solution.alphas,
            bias: solution.bias,
            support_indices: solution.support_indices,
            labels,
            kernel_spec,
            training_points,
        })
    }

    /// Builds the Gram matrix of `points` under `spec`, trains, and packages the model.
    pub fn fit(
        points: Vec<FeatureVector<T>>,
        labels: Vec<i8>,
        spec: KernelSpec<T>,
        config: &SvmTrainConfig<T>,
    ) -> Result<Self> {
        let gram = gram_matrix(&points, &spec)?;
        let solution = train_svm(&gram, &labels, config)?;
        Self::from_solution(solution, labels, points, spec)
    }

    pub fn num_features(&self) -> usize {
        self.training_points.first().map_or(0, |p| p.len())
    }

    fn check_point(&self, x: &FeatureVector<T>) -> Result<()> {
        if x.len() != self.num_features() {
            return Err(Error::InvalidInput(format!(
                "point has {} features, model expects {}",
                x.len(),
                self.num_features()
            )));
        }
        Ok(())
    }

    /// f(x) = Σ_{i ∈ SV} α_i y_i K(x_i, x) + b.
    pub fn decision_value(&self, x: &FeatureVector<T>) -> Result<T> {
        self.check_point(x)?;
        self.support_indices.iter().try_fold(self.bias, |acc, &i| {
            let k = kernel_value(&self.training_points[i], x, &self.kernel_spec)?;
            Ok(acc + self.alphas[i] * sign::<T>(self.labels[i]) * k)
        })
    }

    /// Decision values for a batch, evaluating kernels in parallel.
    pub fn decision_values(&self, xs: &[FeatureVector<T>]) -> Result<Vec<T>> {
        if xs.is_empty() {
            return Ok(Vec::new());
        }
        for x in xs {
            self.check_point(x)?;
        }
        let svs: Vec<FeatureVector<T>> = self
            .support_indices
            .iter()
            .map(|&i| self.training_points[i].clone())
            .collect();
        if svs.is_empty() {
            return Ok(vec![self.bias; xs.len()]);
        }
        let k = cross_gram(&svs, xs, &self.kernel_spec)?;
        Ok((0..xs.len())
            .map(|j| {
                self.support_indices
                    .iter()
                    .enumerate()
                    .fold(self.bias, |acc, (row, &i)| {
                        acc + self.alphas[i] * sign::<T>(self.labels[i]) * k[[row, j]]
                    })
            })
            .collect())
    }

    pub fn predict(&self, xs: &[FeatureVector<T>]) -> Result<Vec<i8>> {
        Ok(self
            .decision_values(xs)?
            .into_iter()
            .map(sign_label)
            .collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Free-function form of [`SvmModel::decision_value`].
pub fn decision_value<T: Real>(model: &SvmModel<T>, x: &FeatureVector<T>) -> Result<T> {
    model.decision_value(x)
}

/// Free-function form of [`SvmModel::predict`].
pub fn predict<T: Real>(model: &SvmModel<T>, xs: &[FeatureVector<T>]) -> Result<Vec<i8>> {
    model.predict(xs)
}
