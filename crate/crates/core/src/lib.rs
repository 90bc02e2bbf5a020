//! Spectral analysis of symmetric saddle-point matrices `W = [A B; Bᵀ C]`.
//!
//! The crate decides whether the spectral radius of `W` is itself an
//! eigenvalue (equivalently `λ_max(W) + λ_min(W) ≥ 0`), checks the sufficient
//! condition `λ_min(A) + λ_min(C) ≥ 0`, and evaluates classical interval
//! enclosures of the spectrum. Two Stokes discretizations provide the large
//! test systems.

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod random;
pub mod saddle;
pub mod stokes;
pub mod suite;
pub mod tables;

pub use bounds::{
    analyze, analyze_report, bilinear_extremum, explicit_spectrum_eta, rusten_winther_bounds,
    silvester_wathen_bounds, sum_lower_bound_check, BilinearExtremum, BoundOutcome, EtaSpectrum, Interval, ReportRecord,
    SpectralSummary, SpectrumBounds, SumBoundCheck, Theorem, Variant,
};
pub use error::{Certificate, Error, Result};
pub use linalg::{EigPair, LanczosOptions, RectMatrix, SymMatrix, Which};
pub use saddle::{Inertia, SaddleSystem, ValidationOptions};
pub use stokes::{assemble, expected_dims, Method, StokesGridSpec, StokesSystem};
