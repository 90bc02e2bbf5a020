//! Shared fixtures for the kernel benchmarks.

use saddlespec_core::stokes::{assemble, Method, StokesGridSpec};
use saddlespec_core::SaddleSystem;

/// Assembled Stokes system for one grid, panicking on invalid input.
pub fn stokes(method: Method, ne: usize, tau: f64) -> SaddleSystem {
    assemble(&StokesGridSpec::new(method, ne, tau))
        .expect("benchmark grid assembles")
        .system
}

/// Deterministic vector of length `n` with entries in `[-1, 1]`.
pub fn probe(n: usize) -> Vec<f64> {
    (0..n).map(|i| ((i as f64) * 0.618_033_988_75).fract() * 2.0 - 1.0).collect()
}
