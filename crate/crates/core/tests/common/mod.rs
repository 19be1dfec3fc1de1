//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's numerics: gates are rebuilt as dense
//! matrices from their textbook definitions, and the SVM dual is solved by
//! plain projected gradient ascent.

#![allow(dead_code)]

use aquakern::encoding::FeatureVector;
use aquakern::quantum::Gate;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fv(v: &[f64]) -> FeatureVector<f64> {
    FeatureVector::new(v.to_vec()).unwrap()
}

pub fn random_points(rng: &mut impl Rng, n: usize, d: usize, lo: f64, hi: f64) -> Vec<FeatureVector<f64>> {
    (0..n).map(|_| fv(&(0..d).map(|_| rng.random_range(lo..hi)).collect::<Vec<_>>())).collect()
}

/// Labels in {-1, +1} with both classes present.
pub fn random_labels(rng: &mut impl Rng, n: usize) -> Vec<i8> {
    loop {
        let y: Vec<i8> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        if y.contains(&1) && y.contains(&-1) {
            return y;
        }
    }
}

/// Π cos²(x_i − z_i): the fidelity of two product states RY(2x)|0⟩.
pub fn cos2_product(x: &[f64], z: &[f64]) -> f64 {
    x.iter().zip(z).map(|(a, b)| (a - b).cos().powi(2)).product()
}

// ---- dense linear algebra ----

pub type Mat = Vec<Vec<C>>;

pub fn identity(dim: usize) -> Mat {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }).collect())
        .collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![C::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == C::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn matvec(a: &Mat, v: &[C]) -> Vec<C> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Embeds a 2×2 matrix `m` on qubit `q` of an `n`-qubit register (bit q of the index).
pub fn embed(m: [[C; 2]; 2], q: usize, n: usize) -> Mat {
    let dim = 1 << n;
    let mut out = vec![vec![C::new(0.0, 0.0); dim]; dim];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if (i & !(1 << q)) == (j & !(1 << q)) {
                *cell = m[(i >> q) & 1][(j >> q) & 1];
            }
        }
    }
    out
}

pub fn pauli_matrix(c: char) -> [[C; 2]; 2] {
    let (o, l, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    match c {
        'I' => [[l, o], [o, l]],
        'X' => [[o, l], [l, o]],
        'Y' => [[o, -i], [i, o]],
        'Z' => [[l, o], [o, -l]],
        _ => panic!("not a Pauli: {c}"),
    }
}

/// Dense matrix of a Pauli string; character k acts on qubit k.
pub fn pauli_string(s: &str) -> Mat {
    let n = s.chars().count();
    s.chars()
        .enumerate()
        .fold(identity(1 << n), |acc, (q, c)| matmul(&embed(pauli_matrix(c), q, n), &acc))
}

pub fn gate_matrix(g: &Gate<f64>, n: usize) -> Mat {
    let z = C::new(0.0, 0.0);
    let r = |v: f64| C::new(v, 0.0);
    let rot = |theta: f64| ((theta / 2.0).cos(), (theta / 2.0).sin());
    match *g {
        Gate::Rx { target, angle } => {
            let (c, s) = rot(angle);
            embed([[r(c), C::new(0.0, -s)], [C::new(0.0, -s), r(c)]], target, n)
        }
        Gate::Ry { target, angle } => {
            let (c, s) = rot(angle);
            embed([[r(c), r(-s)], [r(s), r(c)]], target, n)
        }
        Gate::Rz { target, angle } => {
            let (c, s) = rot(angle);
            embed([[C::new(c, -s), z], [z, C::new(c, s)]], target, n)
        }
        Gate::H { target } => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            embed([[r(h), r(h)], [r(h), r(-h)]], target, n)
        }
        Gate::X { target } => embed(pauli_matrix('X'), target, n),
        Gate::Cnot { control, target } => {
            let dim = 1 << n;
            let mut out = vec![vec![z; dim]; dim];
            for (j, _) in (0..dim).enumerate() {
                let i = if (j >> control) & 1 == 1 { j ^ (1 << target) } else { j };
                out[i][j] = r(1.0);
            }
            out
        }
    }
}

pub fn circuit_matrix(gates: &[Gate<f64>], n: usize) -> Mat {
    gates.iter().fold(identity(1 << n), |acc, g| matmul(&gate_matrix(g, n), &acc))
}

pub fn random_gate(rng: &mut impl Rng, n: usize) -> Gate<f64> {
    let target = rng.random_range(0..n);
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    match rng.random_range(0..6) {
        0 => Gate::Rx { target, angle },
        1 => Gate::Ry { target, angle },
        2 => Gate::Rz { target, angle },
        3 => Gate::H { target },
        4 => Gate::X { target },
        _ if n > 1 => {
            let control = (target + rng.random_range(1..n)) % n;
            Gate::Cnot { control, target }
        }
        _ => Gate::H { target },
    }
}

// ---- SVM dual oracle ----

/// Σα − ½ Σ α_i α_j y_i y_j K_ij.
pub fn dual_value(k: &[Vec<f64>], y: &[i8], a: &[f64]) -> f64 {
    let n = a.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += a[i] * a[j] * f64::from(y[i]) * f64::from(y[j]) * k[i][j];
        }
    }
    a.iter().sum::<f64>() - 0.5 * quad
}

/// Euclidean projection onto {0 ≤ α ≤ C, yᵀα = 0}: α_i = clip(v_i − λ y_i), λ by bisection.
pub fn project(v: &[f64], y: &[i8], c: f64) -> Vec<f64> {
    let at = |lambda: f64| -> Vec<f64> {
        v.iter().zip(y).map(|(vi, yi)| (vi - lambda * f64::from(*yi)).clamp(0.0, c)).collect()
    };
    let residual = |lambda: f64| -> f64 { at(lambda).iter().zip(y).map(|(a, yi)| a * f64::from(*yi)).sum() };
    // residual is non-increasing in λ
    let span = v.iter().fold(0.0f64, |m, x| m.max(x.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-span, span);
    // 80 halvings shrink the bracket below f64 resolution
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Maximises the dual by accelerated projected gradient ascent; returns (α, objective).
pub fn projected_gradient_dual(k: &[Vec<f64>], y: &[i8], c: f64, iters: usize) -> (Vec<f64>, f64) {
    let n = y.len();
    let q: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| f64::from(y[i]) * f64::from(y[j]) * k[i][j]).collect()).collect();
    // Lipschitz bound: Frobenius norm ≥ spectral norm
    let lip = q.iter().flatten().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
    let step = 1.0 / lip;
    let grad = |a: &[f64]| -> Vec<f64> {
        (0..n).map(|i| 1.0 - (0..n).map(|j| q[i][j] * a[j]).sum::<f64>()).collect()
    };
    let mut a = vec![0.0; n];
    let mut z = a.clone();
    let mut t = 1.0f64;
    for _ in 0..iters {
        let g = grad(&z);
        let next = project(&z.iter().zip(&g).map(|(zi, gi)| zi + step * gi).collect::<Vec<_>>(), y, c);
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let moved = next.iter().zip(&a).map(|(n, o)| (n - o).abs()).fold(0.0, f64::max);
        z = next.iter().zip(&a).map(|(n, o)| n + (t - 1.0) / t_next * (n - o)).collect();
        a = next;
        t = t_next;
        if moved < 1e-14 {
            // momentum can pin an extrapolated point to a vertex; only stop at a
            // genuine fixed point of the plain projected-gradient map
            let g = grad(&a);
            let plain = project(&a.iter().zip(&g).map(|(ai, gi)| ai + step * gi).collect::<Vec<_>>(), y, c);
            if plain.iter().zip(&a).all(|(p, ai)| (p - ai).abs() < 1e-14) {
                break;
            }
            z = a.clone();
            t = 1.0;
        }
    }
    let obj = dual_value(k, y, &a);
    (a, obj)
}
