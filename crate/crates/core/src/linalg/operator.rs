//! Matrix-free symmetric operators consumed by the Krylov solver.

use crate::linalg::sparse::{RectMatrix, SymMatrix};

/// A symmetric linear map known only through its action.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// Writes `M x` into `y`; both slices have length [`dim`](Self::dim).
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// An interval guaranteed to contain the whole spectrum.
    fn spectral_enclosure(&self) -> (f64, f64);
}

impl LinearOperator for SymMatrix {
    fn dim(&self) -> usize {
        self.order()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_into(x, y);
    }

    fn spectral_enclosure(&self) -> (f64, f64) {
        self.gershgorin()
    }
}

/// `BᵀB - alpha * C` applied without forming the product.
pub struct GramOperator<'a> {
    b: &'a RectMatrix,
    c: Option<(&'a SymMatrix, f64)>,
    scratch_len: usize,
}

impl<'a> GramOperator<'a> {
    /// Plain Gram operator `BᵀB`.
    pub fn new(b: &'a RectMatrix) -> Self {
        GramOperator {
            b,
            c: None,
            scratch_len: b.rows(),
        }
    }

    /// `BᵀB - alpha * C`.
    pub fn with_block(b: &'a RectMatrix, c: &'a SymMatrix, alpha: f64) -> Self {
        assert_eq!(c.order(), b.cols());
        GramOperator {
            b,
            c: Some((c, alpha)),
            scratch_len: b.rows(),
        }
    }
}

impl LinearOperator for GramOperator<'_> {
    fn dim(&self) -> usize {
        self.b.cols()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut t = vec![0.0; self.scratch_len];
        self.b.apply_into(x, &mut t);
        self.b.apply_transpose_into(&t, y);
        if let Some((c, alpha)) = self.c {
            let mut cx = vec![0.0; x.len()];
            c.apply_into(x, &mut cx);
            for (yi, ci) in y.iter_mut().zip(cx) {
                *yi -= alpha * ci;
            }
        }
    }

    fn spectral_enclosure(&self) -> (f64, f64) {
        let hi = self.b.gram_upper_bound();
        match self.c {
            None => (0.0, hi),
            Some((c, alpha)) => {
                let (clo, chi) = c.gershgorin();
                let (lo_c, hi_c) = if alpha >= 0.0 {
                    (-alpha * chi, -alpha * clo)
                } else {
                    (-alpha * clo, -alpha * chi)
                };
                (lo_c, hi + hi_c)
            }
        }
    }
}

/// `M - sigma * I`.
pub(crate) struct Shifted<'a, Op: ?Sized> {
    pub inner: &'a Op,
    pub sigma: f64,
}

impl<Op: LinearOperator + ?Sized> LinearOperator for Shifted<'_, Op> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.inner.apply(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi -= self.sigma * xi;
        }
    }

    fn spectral_enclosure(&self) -> (f64, f64) {
        let (lo, hi) = self.inner.spectral_enclosure();
        (lo - self.sigma, hi - self.sigma)
    }
}
