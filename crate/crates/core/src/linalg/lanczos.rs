//! Thick-restart Lanczos for one extreme eigenpair of a symmetric operator.
//!
//! Every new Krylov vector is orthogonalized twice against the whole basis
//! (classical Gram-Schmidt, repeated), and the projected matrix is assembled
//! from those projection coefficients, so the Ritz residual of a pair `(θ, y)`
//! is exactly `|β · y_last|`. When the basis fills up, the half of the Ritz
//! vectors nearest the wanted end is kept and expansion resumes from the
//! current residual direction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::dense::{symmetric_eigen, DenseSym};
use crate::linalg::operator::{LinearOperator, Shifted};
use crate::linalg::sparse::SymMatrix;

const DEFAULT_BASIS: usize = 100;
const CHECK_EVERY: usize = 10;

/// Which end of the spectrum to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Largest,
    Smallest,
}

/// Solver controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Residual tolerance relative to the Gershgorin scale of the operator.
    pub tol: f64,
    /// Budget of operator applications.
    pub max_iter: usize,
    /// Krylov basis size before a restart; `0` picks `min(order, 100)`.
    pub basis: usize,
    /// Seed of the start vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-10,
            max_iter: 5000,
            basis: 0,
            seed: 0x5add_1e5e,
        }
    }
}

impl LanczosOptions {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        LanczosOptions {
            tol,
            max_iter,
            ..Self::default()
        }
    }
}

/// An eigenvalue with a unit eigenvector and solver diagnostics.
#[derive(Debug, Clone)]
pub struct EigPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// True residual norm `‖Mv - λv‖`.
    pub residual: f64,
    /// Operator applications spent.
    pub iterations: usize,
}

/// Extreme eigenpair of a sparse symmetric matrix.
pub fn extremal_eig(m: &SymMatrix, which: Which, tol: f64, max_iter: usize) -> Result<EigPair> {
    extremal_eig_op(m, which, &LanczosOptions::new(tol, max_iter))
}

/// Extreme eigenpair of any symmetric operator.
pub fn extremal_eig_op<Op: LinearOperator + ?Sized>(
    op: &Op,
    which: Which,
    opts: &LanczosOptions,
) -> Result<EigPair> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "extremal eigenvalue of an order-0 operator".into(),
        ));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let (lo, hi) = op.spectral_enclosure();
    let scale = lo.abs().max(hi.abs());
    let sigma = match which {
        Which::Smallest => hi,
        Which::Largest => lo,
    };
    let shifted = Shifted { inner: op, sigma };
    match run(&shifted, which, scale, opts) {
        Ok(mut pair) => {
            pair.value += sigma;
            Ok(pair)
        }
        Err(Error::NotConverged {
            best,
            residual,
            iterations,
        }) => Err(Error::NotConverged {
            best: best + sigma,
            residual,
            iterations,
        }),
        Err(e) => Err(e),
    }
}

struct Basis {
    n: usize,
    data: Vec<f64>,
}

impl Basis {
    fn vec(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn vec_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    /// Orthogonalizes `w` against vectors `0..count` twice, accumulating the
    /// projection coefficients into `coef`.
    fn orthogonalize(&self, count: usize, w: &mut [f64], coef: &mut [f64]) {
        coef[..count].fill(0.0);
        for _ in 0..2 {
            for (i, c) in coef.iter_mut().enumerate().take(count) {
                let d = dot(self.vec(i), w);
                *c += d;
                axpy(-d, self.vec(i), w);
            }
        }
    }

    /// `Σ_l y[l] v_l` over the first `y.len()` vectors.
    fn combine(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (l, &yl) in y.iter().enumerate() {
            axpy(yl, self.vec(l), &mut out);
        }
        out
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

struct Ritz {
    theta: f64,
    y: Vec<f64>,
    residual_estimate: f64,
}

/// Ritz pair at the wanted end of the leading `size x size` block of `h`.
fn wanted_ritz(h: &DenseSym, size: usize, beta: f64, which: Which) -> (Ritz, Vec<usize>, Vec<f64>, Vec<f64>) {
    let block = DenseSym::from_fn(size, |i, j| h.get(i, j));
    let eig = symmetric_eigen(&block);
    let order: Vec<usize> = match which {
        Which::Smallest => (0..size).collect(),
        Which::Largest => (0..size).rev().collect(),
    };
    let k = order[0];
    let y = eig.vector(k).unwrap().to_vec();
    let ritz = Ritz {
        theta: eig.values[k],
        residual_estimate: (beta * y[size - 1]).abs(),
        y,
    };
    (ritz, order, eig.values, eig.vectors.unwrap())
}

fn run<Op: LinearOperator + ?Sized>(
    op: &Op,
    which: Which,
    scale: f64,
    opts: &LanczosOptions,
) -> Result<EigPair> {
    let n = op.dim();
    let p = if opts.basis == 0 {
        n.min(DEFAULT_BASIS)
    } else {
        n.min(opts.basis.max(2))
    };
    let target = opts.tol * scale;
    let breakdown = (1e-13f64).min(0.01 * opts.tol) * scale;

    let mut basis = Basis {
        n,
        data: vec![0.0; (p + 1) * n],
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (n as u64).rotate_left(17));
    {
        let v0 = basis.vec_mut(0);
        for x in v0.iter_mut() {
            *x = rng.random_range(-1.0..1.0);
        }
        let nv = norm(v0);
        v0.iter_mut().for_each(|x| *x /= nv);
    }

    let mut h = DenseSym::zeros(p);
    let mut coef = vec![0.0; p];
    let mut w = vec![0.0; n];
    let mut start = 0usize;
    let mut applies = 0usize;

    loop {
        let mut j = start;
        while j < p {
            op.apply(basis.vec(j), &mut w);
            applies += 1;
            basis.orthogonalize(j + 1, &mut w, &mut coef);
            for (i, &c) in coef.iter().enumerate().take(j + 1) {
                h.set(i, j, c);
            }
            let beta = norm(&w);
            let broke = beta <= breakdown;
            let full = j + 1 == p;
            let due = (j + 1 - start) % CHECK_EVERY == 0 || full || broke || applies >= opts.max_iter;

            if due {
                let (ritz, order, values, vectors) = wanted_ritz(&h, j + 1, beta, which);
                if ritz.residual_estimate <= target || broke {
                    return Ok(finish(op, &basis, ritz, applies));
                }
                if applies >= opts.max_iter {
                    return Err(Error::NotConverged {
                        best: ritz.theta,
                        residual: ritz.residual_estimate,
                        iterations: applies,
                    });
                }
                if full {
                    if p == n {
                        // Whole space spanned; rounding alone kept the estimate up.
                        return Ok(finish(op, &basis, ritz, applies));
                    }
                    w.iter_mut().for_each(|x| *x /= beta);
                    start = restart(&mut basis, &mut h, &order, &values, &vectors, &w, p);
                    break;
                }
            }
            let next = basis.vec_mut(j + 1);
            for (d, s) in next.iter_mut().zip(&w) {
                *d = s / beta;
            }
            j += 1;
        }
    }
}

/// Keeps the Ritz vectors nearest the wanted end and appends the normalized
/// residual direction; returns the index at which expansion resumes.
fn restart(
    basis: &mut Basis,
    h: &mut DenseSym,
    order: &[usize],
    values: &[f64],
    vectors: &[f64],
    residual_dir: &[f64],
    p: usize,
) -> usize {
    let keep = (p / 2).max(1).min(p - 1);
    let mut kept = Vec::with_capacity(keep * basis.n);
    for &k in order.iter().take(keep) {
        kept.extend(basis.combine(&vectors[k * p..(k + 1) * p]));
    }
    basis.data[..keep * basis.n].copy_from_slice(&kept);
    basis.vec_mut(keep).copy_from_slice(residual_dir);
    *h = DenseSym::zeros(p);
    for (i, &k) in order.iter().take(keep).enumerate() {
        h.set(i, i, values[k]);
    }
    keep
}

fn finish<Op: LinearOperator + ?Sized>(op: &Op, basis: &Basis, ritz: Ritz, applies: usize) -> EigPair {
    let mut x = basis.combine(&ritz.y);
    let nx = norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut mx = vec![0.0; x.len()];
    op.apply(&x, &mut mx);
    let theta = dot(&x, &mx);
    axpy(-theta, &x, &mut mx);
    EigPair {
        value: theta,
        residual: norm(&mx),
        vector: x,
        iterations: applies + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::dense_full_spectrum;

    fn path_laplacian(n: usize) -> SymMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        SymMatrix::from_triplets(n, t).unwrap()
    }

    #[test]
    fn diagonal_extremes() {
        let m = SymMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let hi = extremal_eig(&m, Which::Largest, 1e-12, 100).unwrap();
        let lo = extremal_eig(&m, Which::Smallest, 1e-12, 100).unwrap();
        assert!((hi.value - 3.0).abs() < 1e-12);
        assert!((lo.value - 1.0).abs() < 1e-12);
        assert!((norm(&hi.vector) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = SymMatrix::from_triplets(2, [(0, 0, 2.0), (0, 1, 1.0), (1, 1, 2.0)]).unwrap();
        assert!((extremal_eig(&m, Which::Largest, 1e-12, 50).unwrap().value - 3.0).abs() < 1e-12);
        assert!((extremal_eig(&m, Which::Smallest, 1e-12, 50).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn order_zero_and_bad_tol_rejected() {
        let z = SymMatrix::zeros(0);
        assert!(extremal_eig(&z, Which::Largest, 1e-10, 10).is_err());
        let m = SymMatrix::identity(2);
        assert!(extremal_eig(&m, Which::Largest, 0.0, 10).is_err());
    }

    #[test]
    fn scalar_and_zero_matrices() {
        let s = SymMatrix::from_diagonal(&[-4.0]);
        assert_eq!(extremal_eig(&s, Which::Smallest, 1e-10, 10).unwrap().value, -4.0);
        let z = SymMatrix::zeros(5);
        assert_eq!(extremal_eig(&z, Which::Largest, 1e-10, 10).unwrap().value, 0.0);
    }

    #[test]
    fn restarted_run_matches_closed_form() {
        let n = 400;
        let m = path_laplacian(n);
        let opts = LanczosOptions {
            basis: 60,
            ..LanczosOptions::new(1e-10, 20000)
        };
        let theta = std::f64::consts::PI / (n as f64 + 1.0);
        let want_lo = 2.0 - 2.0 * theta.cos();
        let want_hi = 2.0 + 2.0 * theta.cos();
        let lo = extremal_eig_op(&m, Which::Smallest, &opts).unwrap();
        let hi = extremal_eig_op(&m, Which::Largest, &opts).unwrap();
        assert!((hi.value - want_hi).abs() < 1e-8, "{} vs {want_hi}", hi.value);
        assert!((lo.value - want_lo).abs() < 1e-8, "{} vs {want_lo}", lo.value);
        assert!(lo.residual <= 1e-9 * 4.0);
    }

    #[test]
    fn budget_exhaustion_reports_best_iterate() {
        let m = path_laplacian(3000);
        let opts = LanczosOptions {
            basis: 20,
            ..LanczosOptions::new(1e-14, 40)
        };
        match extremal_eig_op(&m, Which::Smallest, &opts) {
            Err(Error::NotConverged { best, iterations, .. }) => {
                assert!(best > 0.0 && best < 4.0);
                assert_eq!(iterations, 40);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn agrees_with_dense_oracle() {
        let m = path_laplacian(150).affine(0.0, 1.0);
        let spec = dense_full_spectrum(&m).unwrap();
        let lo = extremal_eig(&m, Which::Smallest, 1e-10, 1000).unwrap();
        let hi = extremal_eig(&m, Which::Largest, 1e-10, 1000).unwrap();
        assert!((lo.value - spec[0]).abs() < 1e-8 * 4.0);
        assert!((hi.value - spec[149]).abs() < 1e-8 * 4.0);
    }

    #[test]
    fn repeated_calls_are_bit_identical() {
        let m = path_laplacian(500);
        let a = extremal_eig(&m, Which::Smallest, 1e-10, 5000).unwrap();
        let b = extremal_eig(&m, Which::Smallest, 1e-10, 5000).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
