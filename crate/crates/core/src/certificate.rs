//! Constructive diagonal Lyapunov certificates.
//!
//! For gains satisfying the secant condition the diagonal
//! `Δ = diag(1, -γ₂/r, γ₂γ₃/r², …)` turns the cyclic matrix into
//! `-Δ⁻¹AΔ = M` (see [`crate::spectral::normalized_matrix`]), whose symmetric
//! part is positive definite. Then `D = Δ⁻²` gives
//! `DA + AᵀD = -Δ⁻¹(M + Mᵀ)Δ⁻¹ < 0`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{build_cyclic_matrix, secant_report, CyclicMatrix, GainVector, SecantReport};
use crate::scalar::Real;

/// Default lower bound the verified negativity margin must clear.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default relative headroom over the IFP threshold when no `δ` is given.
pub const DEFAULT_IFP_HEADROOM: f64 = 0.01;

/// The similarity scaling `Δ`, with alternating signs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingDelta<T> {
    pub r: T,
    pub diag: Vec<T>,
}

impl<T: Real> ScalingDelta<T> {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_matrix(&self) -> DMatrix<T> {
        DMatrix::from_diagonal(&DVector::from_row_slice(&self.diag))
    }

    /// `-Δ⁻¹AΔ` computed entrywise.
    pub fn transform(&self, a: &CyclicMatrix<T>) -> DMatrix<T> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| -a.get(i, j) * self.diag[j] / self.diag[i])
    }

    /// `Δ⁻²`, the diagonal of the certificate.
    pub fn certificate_diagonal(&self) -> Vec<T> {
        self.diag.iter().map(|&x| T::one() / (x * x)).collect()
    }
}

pub fn build_delta<T: Real>(gains: &GainVector<T>) -> ScalingDelta<T> {
    let g = gains.as_slice();
    let r = gains.geometric_mean();
    let mut diag = Vec::with_capacity(g.len());
    diag.push(T::one());
    for &gi in &g[1..] {
        let prev = *diag.last().unwrap();
        diag.push(-prev * gi / r);
    }
    ScalingDelta { r, diag }
}

/// A positive diagonal `D` with `DA + AᵀD < 0`, verified numerically.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalCertificate<T> {
    pub delta: ScalingDelta<T>,
    pub d: Vec<T>,
    /// Smallest eigenvalue of `-(DA + AᵀD)`.
    pub negativity_margin: T,
    pub secant: SecantReport<T>,
}

impl<T: Real> DiagonalCertificate<T> {
    /// Decay rate `ε` in `yᵀDAy ≤ -ε|y|²`, i.e. half the negativity margin.
    pub fn epsilon(&self) -> T {
        self.negativity_margin * T::lit(0.5)
    }
}

pub fn build_certificate<T: Real>(
    gains: &GainVector<T>,
    tolerance: T,
) -> Result<DiagonalCertificate<T>> {
    let secant = secant_report(gains);
    if !secant.satisfied {
        return Err(Error::SecantViolated(secant.to_f64()));
    }
    let delta = build_delta(gains);
    let d = delta.certificate_diagonal();
    let negativity_margin = verify_certificate(&build_cyclic_matrix(gains), &d)?;
    if !(negativity_margin > tolerance) {
        return Err(Error::VerificationFailed {
            margin: negativity_margin.f64(),
            tolerance: tolerance.f64(),
        });
    }
    Ok(DiagonalCertificate { delta, d, negativity_margin, secant })
}

/// Smallest eigenvalue of `-(DA + AᵀD)`; positive means `d` certifies `a`.
pub fn verify_certificate<T: Real>(a: &CyclicMatrix<T>, d: &[T]) -> Result<T> {
    verify_diagonal_certificate(a.entries(), d)
}

/// [`verify_certificate`] for an arbitrary square matrix.
pub fn verify_diagonal_certificate<T: Real>(a: &DMatrix<T>, d: &[T]) -> Result<T> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), actual: a.ncols() });
    }
    if d.len() != a.nrows() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), actual: d.len() });
    }
    if let Some(&bad) = d.iter().find(|&&x| !(x > T::zero())) {
        return Err(Error::NonPositive { name: "certificate entry", value: bad.f64() });
    }
    let form = linalg::diagonal_lyapunov_form(a, d);
    Ok(linalg::symmetric_min_eigenvalue(&(-form)))
}

/// `γ₁···γₙ·cos(π/(n+1))^{n+1}`: feedforward gains above this render the
/// cascade input-feedforward passive.
pub fn ifp_threshold<T: Real>(gains: &GainVector<T>) -> T {
    let m = gains.len() + 1;
    let c = (T::PI() / T::usize(m)).cos();
    gains.product() * c.powi(m as i32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IfpReport<T> {
    pub gains: GainVector<T>,
    pub delta_threshold: T,
    pub delta: T,
    /// `diag(δ, d₁, …, dₙ)`.
    pub d_tilde: Vec<T>,
    /// Smallest eigenvalue of `-(D̃Ã + ÃᵀD̃)` over the full `(u, y)` vector.
    pub negativity_margin: T,
    /// Half the margin: the `ε` usable in `V̇ ≤ -ε|y|² + δu² + u·yₙ`.
    pub epsilon: T,
}

impl<T: Real> IfpReport<T> {
    /// Storage weights `d₁..dₙ` of the cascade blocks.
    pub fn weights(&self) -> &[T] {
        &self.d_tilde[1..]
    }
}

/// Gains `(1/δ, γ₁, …, γₙ)` of the augmented cyclic matrix `Ã`.
pub fn augmented_gains<T: Real>(gains: &GainVector<T>, delta: T) -> Result<GainVector<T>> {
    if !(delta > T::zero()) {
        return Err(Error::NonPositive { name: "delta", value: delta.f64() });
    }
    let mut g = Vec::with_capacity(gains.len() + 1);
    g.push(T::one() / delta);
    g.extend_from_slice(gains.as_slice());
    GainVector::new(g)
}

pub fn ifp_certificate<T: Real>(
    gains: &GainVector<T>,
    delta: T,
    tolerance: T,
) -> Result<IfpReport<T>> {
    let threshold = ifp_threshold(gains);
    if !(delta > threshold) {
        return Err(Error::ThresholdViolated { delta: delta.f64(), threshold: threshold.f64() });
    }
    let aug = augmented_gains(gains, delta)?;
    let cert = build_certificate(&aug, tolerance)?;
    // Uniform positive scaling keeps the sign of the form; pin the first weight to δ.
    let scale = delta / cert.d[0];
    let d_tilde: Vec<T> = cert.d.iter().map(|&x| x * scale).collect();
    let negativity_margin = verify_certificate(&build_cyclic_matrix(&aug), &d_tilde)?;
    Ok(IfpReport {
        gains: gains.clone(),
        delta_threshold: threshold,
        delta,
        d_tilde,
        negativity_margin,
        epsilon: negativity_margin * T::lit(0.5),
    })
}

/// Absorbs a `[0, κ]` sector nonlinearity into the last (linear first-order)
/// block: `(γ₁, …, γₙ₋₁, κ·γₙ)`.
pub fn popov_gains<T: Real>(gains: &GainVector<T>, kappa: T) -> Result<GainVector<T>> {
    if !(kappa > T::zero()) || !kappa.is_finite() {
        return Err(Error::NonPositive { name: "kappa", value: kappa.f64() });
    }
    let mut g = gains.as_slice().to_vec();
    *g.last_mut().unwrap() *= kappa;
    GainVector::new(g)
}

/// Relaxed (composite block) and conservative (`κ` as an extra block) secant tests.
#[derive(Debug, Clone, PartialEq)]
pub struct PopovComparison<T> {
    pub effective_gains: GainVector<T>,
    pub relaxed: SecantReport<T>,
    pub conservative: SecantReport<T>,
}

pub fn popov_comparison<T: Real>(gains: &GainVector<T>, kappa: T) -> Result<PopovComparison<T>> {
    let effective_gains = popov_gains(gains, kappa)?;
    let relaxed = secant_report(&effective_gains);
    let mut extended = gains.as_slice().to_vec();
    extended.push(kappa);
    let conservative = secant_report(&GainVector::new(extended)?);
    Ok(PopovComparison { effective_gains, relaxed, conservative })
}
