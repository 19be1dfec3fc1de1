//! Small dense eigenvalue routines used for PSD diagnostics.

use ndarray::Array2;
use num_complex::Complex;

use crate::scalar::Real;

/// Eigenvalues of a real symmetric matrix, ascending.
///
/// Computed in `f64` by nalgebra's symmetric eigensolver; the input is
/// symmetrized first so tiny asymmetries do not matter.
pub fn symmetric_eigenvalues<T: Real>(matrix: &Array2<T>) -> Vec<T> {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| 0.5 * (matrix[[i, j]].as_f64() + matrix[[j, i]].as_f64()));
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig.into_iter().map(T::lit).collect()
}

/// Eigenvalues of a Hermitian matrix given row-major, ascending.
///
/// Uses the real embedding `[[A, -B], [B, A]]` of `H = A + iB`, whose spectrum
/// is the spectrum of `H` with every eigenvalue doubled.
pub fn hermitian_eigenvalues<T: Real>(entries: &[Complex<T>], dim: usize) -> Vec<T> {
    assert_eq!(entries.len(), dim * dim);
    let mut real = Array2::<T>::zeros((2 * dim, 2 * dim));
    for r in 0..dim {
        for c in 0..dim {
            let z = entries[r * dim + c];
            real[[r, c]] = z.re;
            real[[r + dim, c + dim]] = z.re;
            real[[r, c + dim]] = -z.im;
            real[[r + dim, c]] = z.im;
        }
    }
    let doubled = symmetric_eigenvalues(&real);
    doubled.into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn diagonal_matrix() {
        let m = array![[3.0, 0.0], [0.0, -1.0]];
        assert_eq!(symmetric_eigenvalues(&m), vec![-1.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let m = array![[2.0, 1.0], [1.0, 2.0]];
        let e: Vec<f64> = symmetric_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trace_is_preserved() {
        let m = array![[4.0, 1.0, 0.5], [1.0, 3.0, -0.2], [0.5, -0.2, 1.0]];
        let e: Vec<f64> = symmetric_eigenvalues(&m);
        let s: f64 = e.iter().sum();
        assert!((s - 8.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_pauli_y() {
        let i = Complex::new(0.0, 1.0);
        let z = Complex::new(0.0, 0.0);
        let y = vec![z, -i, i, z];
        let e: Vec<f64> = hermitian_eigenvalues(&y, 2);
        assert!((e[0] + 1.0).abs() < 1e-12);
        assert!((e[1] - 1.0).abs() < 1e-12);
    }
}
