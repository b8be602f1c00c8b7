//! Closed-form eigenstructure of the normalized cyclic matrix.
//!
//! After the diagonal similarity built in [`crate::certificate`], the cyclic
//! matrix becomes `M = I + r·S` where `S` is the cyclic down-shift with
//! corner entry `(-1)^{n+1}`. For odd `n` this is circulant, for even `n`
//! skew-circulant, and both are diagonalized by Fourier-type vectors.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpectrum<T> {
    pub n: usize,
    pub r: T,
    /// `λ_k = 1 + r·e^{iθ_k}` for `k = 1..n`.
    pub eigenvalues: Vec<Complex<T>>,
    /// Unit-norm eigenvectors, `v_k[j] = e^{-ijθ_k}/√n`.
    pub eigenvectors: Vec<Vec<Complex<T>>>,
    /// `1 - r·cos(π/n)`.
    pub min_real_part: T,
}

/// Phase `θ_k` of the `k`-th eigenvalue (`k` is 1-based).
pub fn eigen_angle<T: Real>(n: usize, k: usize) -> T {
    let nn = T::usize(n);
    let base = T::two_pi() * T::usize(k) / nn;
    if n % 2 == 1 {
        base
    } else {
        base + T::PI() / nn
    }
}

/// The normalized matrix: ones on the diagonal, `r` on the subdiagonal and
/// `(-1)^{n+1}·r` in the top-right corner. For `n = 1` the corner and the
/// diagonal coincide, giving `[1 + r]`.
pub fn normalized_matrix<T: Real>(r: T, n: usize) -> DMatrix<T> {
    let mut m = DMatrix::identity(n, n);
    let corner = if n % 2 == 1 { r } else { -r };
    m[(0, n - 1)] += corner;
    for i in 1..n {
        m[(i, i - 1)] = r;
    }
    m
}

fn polar<T: Real>(modulus: T, theta: T) -> Complex<T> {
    Complex::new(modulus * theta.cos(), modulus * theta.sin())
}

fn check_args<T: Real>(r: T, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::NonPositive { name: "r", value: r.f64() });
    }
    Ok(())
}

pub fn circulant_spectrum<T: Real>(r: T, n: usize) -> Result<CirculantSpectrum<T>> {
    check_args(r, n)?;
    let scale = T::one() / T::usize(n).sqrt();
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for k in 1..=n {
        let theta = eigen_angle::<T>(n, k);
        eigenvalues.push(Complex::new(T::one(), T::zero()) + polar(r, theta));
        let v = (0..n)
            .map(|j| polar(scale, -theta * T::usize(j)))
            .collect();
        eigenvectors.push(v);
    }
    Ok(CirculantSpectrum {
        n,
        r,
        eigenvalues,
        eigenvectors,
        min_real_part: T::one() - r * (T::PI() / T::usize(n)).cos(),
    })
}

impl<T: Real> CirculantSpectrum<T> {
    /// Minimum of `Re λ_k` over the enumerated eigenvalues.
    pub fn enumerated_min_real_part(&self) -> T {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(T::max_value().unwrap(), |a, b| a.min(b))
    }

    /// `max_k ‖M v_k − λ_k v_k‖₂` against the dense normalized matrix.
    pub fn max_residual(&self) -> T {
        let m = normalized_matrix(self.r, self.n);
        let mut worst = T::zero();
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let mut sq = T::zero();
            for i in 0..self.n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for j in 0..self.n {
                    let mij = m[(i, j)];
                    if mij != T::zero() {
                        acc += v[j] * mij;
                    }
                }
                sq += (acc - v[i] * *lambda).norm_sqr();
            }
            worst = worst.max(sq.sqrt());
        }
        worst
    }

    /// `max |(V*V − I)_{ij}|` for `V = [v₁ … vₙ]`.
    pub fn unitarity_error(&self) -> T {
        let mut worst = T::zero();
        for (a, va) in self.eigenvectors.iter().enumerate() {
            for (b, vb) in self.eigenvectors.iter().enumerate() {
                let dot = va
                    .iter()
                    .zip(vb)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y);
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - Complex::new(target, T::zero())).norm_sqr().sqrt());
            }
        }
        worst
    }
}

/// Smallest eigenvalue of `½(M + Mᵀ)`, in closed form: `1 − r·cos(π/n)`.
pub fn symmetric_part_min_eig<T: Real>(r: T, n: usize) -> Result<T> {
    check_args(r, n)?;
    Ok(T::one() - r * (T::PI() / T::usize(n)).cos())
}

/// Dense-eigensolver counterpart of [`symmetric_part_min_eig`].
pub fn symmetric_part_min_eig_dense<T: Real>(r: T, n: usize) -> Result<T> {
    check_args(r, n)?;
    Ok(linalg::symmetric_min_eigenvalue(&normalized_matrix(r, n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn unit_radius_odd() {
        let s = circulant_spectrum(1.0, 3).unwrap();
        let third = 2.0 * std::f64::consts::PI / 3.0;
        let expected = [
            Complex::new(1.0 + third.cos(), third.sin()),
            Complex::new(1.0 + (2.0 * third).cos(), (2.0 * third).sin()),
            Complex::new(2.0, 0.0),
        ];
        for (z, e) in s.eigenvalues.iter().zip(expected) {
            assert_abs_diff_eq!((z - e).norm(), 0.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(s.min_real_part, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.enumerated_min_real_part(), 0.5, epsilon = 1e-12);
        assert!(s.max_residual() < 1e-12);

        let dense = linalg::eigenvalues(&normalized_matrix(1.0, 3));
        for e in expected {
            assert!(dense.iter().any(|z| (z - e).norm() < 1e-12));
        }
    }

    #[test]
    fn unit_radius_even() {
        let s = circulant_spectrum(1.0, 4).unwrap();
        assert_abs_diff_eq!(s.min_real_part, 0.29289321881345254, epsilon = 1e-15);
        assert_abs_diff_eq!(s.enumerated_min_real_part(), s.min_real_part, epsilon = 1e-12);
        let dense = linalg::eigenvalues(&normalized_matrix(1.0, 4));
        for z in &s.eigenvalues {
            assert!(dense.iter().any(|d| (d - z).norm() < 1e-12));
        }
        assert!(s.max_residual() < 1e-12);
        assert!(s.unitarity_error() < 1e-12);
    }

    #[test]
    fn vanishing_radius() {
        let s = circulant_spectrum(1e-12, 7).unwrap();
        for z in &s.eigenvalues {
            assert_abs_diff_eq!(z.re, 1.0, epsilon = 1e-11);
        }
        assert_abs_diff_eq!(s.min_real_part, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn single_entry() {
        let s = circulant_spectrum(2.5, 1).unwrap();
        assert_abs_diff_eq!(s.eigenvalues[0].re, 3.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[0].im, 0.0, epsilon = 1e-14);
        assert_eq!(normalized_matrix(2.5, 1)[(0, 0)], 3.5);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert_eq!(circulant_spectrum(1.0, 0), Err(Error::ZeroDimension));
        assert!(matches!(circulant_spectrum(0.0, 3), Err(Error::NonPositive { .. })));
        assert!(matches!(circulant_spectrum(-1.0, 3), Err(Error::NonPositive { .. })));
        assert!(symmetric_part_min_eig(-0.5, 2).is_err());
    }

    #[test]
    fn symmetric_part_examples() {
        assert_abs_diff_eq!(symmetric_part_min_eig(2.0, 3).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(symmetric_part_min_eig(1.0, 2).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            symmetric_part_min_eig(0.5, 6).unwrap(),
            0.5669872981077807,
            epsilon = 1e-15
        );
        for (r, n) in [(2.0, 3), (1.0, 2), (0.5, 6)] {
            assert_abs_diff_eq!(
                symmetric_part_min_eig(r, n).unwrap(),
                symmetric_part_min_eig_dense(r, n).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn corner_sign_alternates() {
        for n in 2..=12 {
            let m = normalized_matrix(0.7, n);
            let expected = if n % 2 == 1 { 0.7 } else { -0.7 };
            assert_eq!(m[(0, n - 1)], expected, "n = {n}");
        }
    }

    proptest! {
        #[test]
        fn eigenpairs_hold(r in 1e-3f64..5.0, n in 1usize..=64) {
            let s = circulant_spectrum(r, n).unwrap();
            prop_assert!(s.max_residual() <= 1e-10);
            prop_assert!(s.unitarity_error() <= 1e-10);
            prop_assert!((s.enumerated_min_real_part() - s.min_real_part).abs() <= 1e-12);
        }
    }
}
