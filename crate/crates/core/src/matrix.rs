//! Cyclic interconnection matrices and the secant condition.
//!
//! The matrix class has `-1` on the diagonal, the positive gains
//! `γ₂..γₙ` on the subdiagonal and `-γ₁` in the top-right corner, i.e. the
//! linearization of a ring of first-order blocks closed through a single
//! negative feedback.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;

/// Positive loop gains `γ₁..γₙ`, `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GainVector<T> {
    gains: Vec<T>,
}

impl<T: Real> GainVector<T> {
    pub fn new(gains: Vec<T>) -> Result<Self> {
        if gains.is_empty() {
            return Err(Error::EmptyGains);
        }
        for (index, &g) in gains.iter().enumerate() {
            // `!(g > 0)` also rejects NaN.
            if !(g > T::zero()) || !g.is_finite() {
                return Err(Error::NonPositiveGain { index, value: g.f64() });
            }
        }
        Ok(Self { gains })
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[T] {
        &self.gains
    }

    pub fn product(&self) -> T {
        self.gains.iter().fold(T::one(), |acc, &g| acc * g)
    }

    /// Geometric mean `(γ₁···γₙ)^{1/n}`.
    ///
    /// Falls back to a log-sum when the plain product under- or overflows.
    pub fn geometric_mean(&self) -> T {
        let n = T::usize(self.len());
        let p = self.product();
        if p.is_finite() && p > T::zero() {
            return p.powf(T::one() / n);
        }
        let log_sum = self.gains.iter().fold(T::zero(), |acc, &g| acc + g.ln());
        (log_sum / n).exp()
    }

    /// Cyclic left rotation by `k` positions.
    pub fn rotated(&self, k: usize) -> Self {
        let mut gains = self.gains.clone();
        let n = gains.len();
        gains.rotate_left(k % n);
        Self { gains }
    }

    pub fn into_vec(self) -> Vec<T> {
        self.gains
    }
}

/// Dense realization of the cyclic matrix for a gain vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicMatrix<T: Real> {
    entries: DMatrix<T>,
}

impl<T: Real> CyclicMatrix<T> {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<T> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.entries[(row, col)]
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.entries
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    /// `T·A` for the diagonal `T = diag(scale)`.
    pub fn scale_rows(&self, scale: &[T]) -> Result<DMatrix<T>> {
        if scale.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: scale.len() });
        }
        let mut m = self.entries.clone();
        for (i, &s) in scale.iter().enumerate() {
            m.row_mut(i).scale_mut(s);
        }
        Ok(m)
    }
}

/// Builds the cyclic matrix; a single gain closes the block on itself, giving `[-1 - γ₁]`.
pub fn build_cyclic_matrix<T: Real>(gains: &GainVector<T>) -> CyclicMatrix<T> {
    let g = gains.as_slice();
    let n = g.len();
    let mut a = DMatrix::from_diagonal_element(n, n, -T::one());
    if n == 1 {
        a[(0, 0)] -= g[0];
    } else {
        a[(0, n - 1)] = -g[0];
        for i in 1..n {
            a[(i, i - 1)] = g[i];
        }
    }
    CyclicMatrix { entries: a }
}

/// Outcome of the secant test `γ₁···γₙ < sec(π/n)ⁿ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecantReport<T> {
    pub n: usize,
    pub product: T,
    /// Geometric mean of the gains.
    pub r: T,
    /// `1 - r·cos(π/n)`; positive exactly when the condition holds.
    pub margin: T,
    pub satisfied: bool,
}

impl<T: Real> SecantReport<T> {
    /// `sec(π/n)ⁿ`, or `None` when the bound is infinite (`n ≤ 2`).
    pub fn bound(&self) -> Option<T> {
        secant_bound(self.n)
    }

    pub fn to_f64(&self) -> SecantReport<f64> {
        SecantReport {
            n: self.n,
            product: self.product.f64(),
            r: self.r.f64(),
            margin: self.margin.f64(),
            satisfied: self.satisfied,
        }
    }
}

/// `sec(π/n)ⁿ` for `n ≥ 3`; `None` for `n ≤ 2`, where the condition is vacuous.
pub fn secant_bound<T: Real>(n: usize) -> Option<T> {
    if n <= 2 {
        return None;
    }
    let c = (T::PI() / T::usize(n)).cos();
    Some((T::one() / c).powi(n as i32))
}

pub fn secant_report<T: Real>(gains: &GainVector<T>) -> SecantReport<T> {
    let n = gains.len();
    let r = gains.geometric_mean();
    let margin = T::one() - r * (T::PI() / T::usize(n)).cos();
    SecantReport { n, product: gains.product(), r, margin, satisfied: margin > T::zero() }
}

/// Largest real part over the eigenvalues of the cyclic matrix.
///
/// The characteristic polynomial is `(λ + 1)ⁿ + γ₁···γₙ = 0`, so the
/// eigenvalues are `-1 + r·ω` with `ωⁿ = -1`, the rightmost at
/// `ω = e^{±iπ/n}`.
pub fn hurwitz_margin<T: Real>(gains: &GainVector<T>) -> T {
    let n = gains.len();
    -T::one() + gains.geometric_mean() * (T::PI() / T::usize(n)).cos()
}

/// Same quantity as [`hurwitz_margin`], computed by a dense eigensolver.
pub fn hurwitz_margin_dense<T: Real>(gains: &GainVector<T>) -> T {
    linalg::spectral_abscissa(build_cyclic_matrix(gains).entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn gv(g: &[f64]) -> GainVector<f64> {
        GainVector::new(g.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_gains() {
        assert_eq!(GainVector::<f64>::new(vec![]), Err(Error::EmptyGains));
        assert!(matches!(
            GainVector::new(vec![1.0, -1.0]),
            Err(Error::NonPositiveGain { index: 1, .. })
        ));
        assert!(GainVector::new(vec![0.0]).is_err());
        assert!(GainVector::new(vec![f64::NAN]).is_err());
        assert!(GainVector::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn unit_gain_matrix() {
        let a = build_cyclic_matrix(&gv(&[1.0, 1.0, 1.0]));
        assert_eq!(
            a.to_rows(),
            vec![vec![-1.0, 0.0, -1.0], vec![1.0, -1.0, 0.0], vec![0.0, 1.0, -1.0]]
        );
    }

    #[test]
    fn last_gain_on_last_row() {
        let a = build_cyclic_matrix(&gv(&[1.0, 1.0, 8.0]));
        assert_eq!(
            a.to_rows(),
            vec![vec![-1.0, 0.0, -1.0], vec![1.0, -1.0, 0.0], vec![0.0, 8.0, -1.0]]
        );
    }

    #[test]
    fn single_block_self_loop() {
        let a = build_cyclic_matrix(&gv(&[5.0]));
        assert_eq!(a.to_rows(), vec![vec![-6.0]]);
    }

    #[test]
    fn two_block_loop() {
        let a = build_cyclic_matrix(&gv(&[2.0, 3.0]));
        assert_eq!(a.to_rows(), vec![vec![-1.0, -2.0], vec![3.0, -1.0]]);
    }

    #[test]
    fn secant_unit_gains() {
        let rep = secant_report(&gv(&[1.0, 1.0, 1.0]));
        assert_eq!(rep.n, 3);
        assert_abs_diff_eq!(rep.product, 1.0);
        assert_abs_diff_eq!(rep.margin, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.bound().unwrap(), 8.0, epsilon = 1e-12);
        assert!(rep.satisfied);
    }

    #[test]
    fn secant_boundary_is_not_satisfied() {
        let rep = secant_report(&gv(&[2.0, 2.0, 2.0]));
        assert_abs_diff_eq!(rep.product, 8.0);
        assert!(rep.margin.abs() < 1e-15);
        assert!(!rep.satisfied);

        let s = 2f64.sqrt();
        let rep = secant_report(&gv(&[s, s, s, s]));
        assert_abs_diff_eq!(rep.product, 4.0, epsilon = 1e-14);
        assert!(rep.margin.abs() < 1e-15);
        assert!(!rep.satisfied);
    }

    #[test]
    fn secant_small_loops_always_pass() {
        let rep = secant_report(&gv(&[5.0]));
        assert_abs_diff_eq!(rep.margin, 6.0, epsilon = 1e-14);
        assert!(rep.satisfied);
        assert!(rep.bound().is_none());

        let rep = secant_report(&gv(&[1e6, 1e6]));
        assert!(rep.satisfied);
        assert!(rep.bound().is_none());
    }

    #[test]
    fn hurwitz_examples() {
        assert_abs_diff_eq!(hurwitz_margin(&gv(&[2.0, 2.0, 2.0])), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(hurwitz_margin(&gv(&[1.0, 1.0, 1.0])), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(hurwitz_margin(&gv(&[5.0])), -6.0, epsilon = 1e-14);
    }

    #[test]
    fn hurwitz_closed_form_matches_dense() {
        for g in [
            vec![5.0],
            vec![0.3, 7.0],
            vec![1.0, 1.0, 1.0],
            vec![4.0, 1.0, 1.0],
            vec![0.5, 2.0, 1.5, 0.9, 3.0],
        ] {
            let g = gv(&g);
            assert_abs_diff_eq!(hurwitz_margin(&g), hurwitz_margin_dense(&g), epsilon = 1e-10);
        }
    }

    #[test]
    fn rotation_preserves_report() {
        let g = gv(&[0.5, 2.0, 1.5, 0.9]);
        let base = secant_report(&g);
        for k in 0..4 {
            let rep = secant_report(&g.rotated(k));
            assert_abs_diff_eq!(rep.margin, base.margin, epsilon = 1e-15);
            assert_eq!(rep.satisfied, base.satisfied);
        }
    }

    #[test]
    fn single_precision_path() {
        let g = GainVector::<f32>::new(vec![1.0, 1.0, 1.0]).unwrap();
        let rep = secant_report(&g);
        assert!((rep.margin - 0.5).abs() < 1e-6);
        assert!((hurwitz_margin_dense(&g) + 0.5).abs() < 1e-5);
    }
}
