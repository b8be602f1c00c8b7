//! Diagonal stability of cyclic interconnections.
//!
//! The crate decides whether the cyclic matrix of a ring of output-strictly
//! passive blocks admits a diagonal Lyapunov function (the secant condition),
//! builds that diagonal certificate explicitly, extends it to Popov-type
//! loops and to the passivity shortage of cascades, and simulates the
//! corresponding block interconnections while monitoring their dissipation
//! inequalities.
//!
//! All numerics are generic over [`Real`]; the aliases below pin the common
//! double- and single-precision instantiations.

pub mod certificate;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod scalar;
pub mod simulation;
pub mod spectral;

pub use certificate::{
    augmented_gains, build_certificate, build_delta, ifp_certificate, ifp_threshold,
    popov_comparison, popov_gains, verify_certificate, verify_diagonal_certificate,
    DiagonalCertificate, IfpReport, PopovComparison, ScalingDelta, DEFAULT_IFP_HEADROOM,
    DEFAULT_TOLERANCE,
};
pub use error::{Error, Result};
pub use matrix::{
    build_cyclic_matrix, hurwitz_margin, hurwitz_margin_dense, secant_bound, secant_report,
    CyclicMatrix, GainVector, SecantReport,
};
pub use scalar::Real;
pub use spectral::{
    circulant_spectrum, symmetric_part_min_eig, symmetric_part_min_eig_dense, CirculantSpectrum,
};

pub type GainVectorF64 = GainVector<f64>;
pub type GainVectorF32 = GainVector<f32>;
pub type CyclicMatrixF64 = CyclicMatrix<f64>;
pub type CyclicMatrixF32 = CyclicMatrix<f32>;
pub type SecantReportF64 = SecantReport<f64>;
pub type DiagonalCertificateF64 = DiagonalCertificate<f64>;
pub type DiagonalCertificateF32 = DiagonalCertificate<f32>;
pub type IfpReportF64 = IfpReport<f64>;
pub type CirculantSpectrumF64 = CirculantSpectrum<f64>;
pub type BlockSpecF64 = simulation::BlockSpec<f64>;
pub type InterconnectionSpecF64 = simulation::InterconnectionSpec<f64>;
pub type TrajectoryF64 = simulation::Trajectory<f64>;
