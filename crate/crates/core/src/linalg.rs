//! Dense eigensolver wrappers used as numerical oracles.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::scalar::Real;

/// Smallest eigenvalue of a symmetric matrix.
///
/// Only the lower triangle is trusted; the input is symmetrized first so
/// roundoff asymmetry in callers does not leak into the result.
pub fn symmetric_min_eigenvalue<T: Real>(m: &DMatrix<T>) -> T {
    let sym = symmetrize(m);
    let eig = sym.symmetric_eigen();
    eig.eigenvalues
        .iter()
        .copied()
        .fold(T::max_value().unwrap(), |acc, v| acc.min(v))
}

/// All eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues<T: Real>(m: &DMatrix<T>) -> Vec<T> {
    let mut vals: Vec<T> = symmetrize(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalue"));
    vals
}

/// Eigenvalues of a general real square matrix via real Schur form.
pub fn eigenvalues<T: Real>(m: &DMatrix<T>) -> Vec<Complex<T>> {
    m.clone().complex_eigenvalues().iter().copied().collect()
}

/// Largest real part among the eigenvalues of `m`.
pub fn spectral_abscissa<T: Real>(m: &DMatrix<T>) -> T {
    eigenvalues(m)
        .into_iter()
        .map(|z| z.re)
        .fold(T::min_value().unwrap(), |acc, v| acc.max(v))
}

pub(crate) fn symmetrize<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.transpose()) * T::lit(0.5)
}

/// `D M + Mᵀ D` for diagonal `D` given by its entries.
pub(crate) fn diagonal_lyapunov_form<T: Real>(m: &DMatrix<T>, d: &[T]) -> DMatrix<T> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| d[i] * m[(i, j)] + m[(j, i)] * d[j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn min_eigenvalue_of_diagonal() {
        let m = DMatrix::from_row_slice(3, 3, &[3.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 5.0]);
        assert_abs_diff_eq!(symmetric_min_eigenvalue(&m), -2.0, epsilon = 1e-14);
    }

    #[test]
    fn rotation_eigenvalues_are_imaginary() {
        let m = DMatrix::<f64>::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let eig = eigenvalues(&m);
        assert_eq!(eig.len(), 2);
        for z in eig {
            assert_abs_diff_eq!(z.re, 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(z.im.abs(), 1.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(spectral_abscissa(&m), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn lyapunov_form_matches_dense_product() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -3.0, 4.0]);
        let d = [2.0, 5.0];
        let dm = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d));
        let expected = &dm * &m + m.transpose() * &dm;
        assert_eq!(diagonal_lyapunov_form(&m, &d), expected);
    }
}
