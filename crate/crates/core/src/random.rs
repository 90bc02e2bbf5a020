//! Random saddle-point instances for the property suites.
//!
//! `A = QΛQᵀ` with log-uniform positive `Λ` and `Q` from a QR factorization of
//! a Gaussian matrix; `C` is built the same way with a nonpositive spectrum in
//! which each eigenvalue is exactly zero with probability 0.3; `B` is Gaussian,
//! optionally a product of two thin Gaussian factors to force a given rank.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{RectMatrix, SymMatrix};
use crate::saddle::{SaddleSystem, ValidationOptions};

/// Probability that an eigenvalue of a random `C` is exactly zero.
pub const C_ZERO_PROB: f64 = 0.3;

/// How to draw the `C` block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CKind {
    Zero,
    /// Eigenvalues in `[-10^hi, 0]`, log-uniform magnitudes, some exact zeros.
    SemiNegative,
    /// Eigenvalues in `[-λ_min(A), 0]`, so `λ_min(A) + λ_min(C) ≥ 0`; with
    /// probability 0.1 the bound is attained.
    ConditionHolds,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub m: usize,
    pub n: usize,
    /// Rank of `B`; `None` draws a plain Gaussian (full rank almost surely).
    pub rank: Option<usize>,
    pub c: CKind,
    /// `log10` range of the eigenvalues of `A` (and magnitudes of `C`).
    pub log10_range: (f64, f64),
}

impl RandomSpec {
    pub fn new(m: usize, n: usize, c: CKind) -> Self {
        RandomSpec {
            m,
            n,
            rank: None,
            c,
            log10_range: (-2.0, 1.0),
        }
    }
}

/// Row-major `k x k` orthogonal matrix from Gram-Schmidt on Gaussian columns.
pub fn random_orthogonal<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(k);
    while q.len() < k {
        let mut v: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..2 {
            for u in &q {
                let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
            }
        }
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-8 {
            q.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    let mut out = vec![0.0; k * k];
    for (col, u) in q.iter().enumerate() {
        for (row, &x) in u.iter().enumerate() {
            out[row * k + col] = x;
        }
    }
    out
}

/// `Q diag(lambda) Qᵀ` for a random orthogonal `Q`.
pub fn with_spectrum<R: Rng + ?Sized>(lambda: &[f64], rng: &mut R) -> SymMatrix {
    let k = lambda.len();
    let q = random_orthogonal(k, rng);
    let mut t = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            let v: f64 = (0..k).map(|l| q[i * k + l] * lambda[l] * q[j * k + l]).sum();
            t.push((i, j, v));
        }
    }
    SymMatrix::from_triplets(k, t).expect("indices in range")
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    10f64.powf(rng.random_range(lo..=hi))
}

/// Gaussian `m x n` matrix of the requested rank.
pub fn random_rect<R: Rng + ?Sized>(m: usize, n: usize, rank: Option<usize>, rng: &mut R) -> RectMatrix {
    let mut gauss = |rows: usize, cols: usize| -> Vec<f64> {
        (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect()
    };
    match rank {
        None => RectMatrix::from_dense(m, n, &gauss(m, n)).expect("sizes match"),
        Some(r) => {
            let left = gauss(m, r);
            let right = gauss(r, n);
            let mut data = vec![0.0; m * n];
            for i in 0..m {
                for j in 0..n {
                    data[i * n + j] = (0..r).map(|l| left[i * r + l] * right[l * n + j]).sum();
                }
            }
            RectMatrix::from_dense(m, n, &data).expect("sizes match")
        }
    }
}

/// Spectrum and matrix of a random `A`.
pub fn random_spd<R: Rng + ?Sized>(k: usize, range: (f64, f64), rng: &mut R) -> (Vec<f64>, SymMatrix) {
    let lambda: Vec<f64> = (0..k).map(|_| log_uniform(rng, range)).collect();
    let a = with_spectrum(&lambda, rng);
    (lambda, a)
}

/// A random negative semidefinite matrix with eigenvalues in `[-bound, 0]`.
pub fn random_seminegative<R: Rng + ?Sized>(k: usize, bound: f64, range: (f64, f64), rng: &mut R) -> SymMatrix {
    let lambda: Vec<f64> = (0..k)
        .map(|_| {
            if rng.random_bool(C_ZERO_PROB) {
                0.0
            } else {
                -log_uniform(rng, range).min(bound)
            }
        })
        .collect();
    with_spectrum(&lambda, rng)
}

pub fn random_system<R: Rng + ?Sized>(spec: &RandomSpec, rng: &mut R) -> Result<SaddleSystem> {
    let (lambda, a) = random_spd(spec.m, spec.log10_range, rng);
    let b = random_rect(spec.m, spec.n, spec.rank, rng);
    let c = match spec.c {
        CKind::Zero => None,
        CKind::SemiNegative => Some(random_seminegative(spec.n, f64::INFINITY, spec.log10_range, rng)),
        CKind::ConditionHolds => {
            let lmin = lambda.iter().copied().fold(f64::INFINITY, f64::min);
            let mut mu: Vec<f64> = (0..spec.n)
                .map(|_| {
                    if rng.random_bool(C_ZERO_PROB) {
                        0.0
                    } else {
                        -lmin * rng.random_range(0.0..1.0)
                    }
                })
                .collect();
            if rng.random_bool(0.1) {
                mu[0] = -lmin;
            }
            Some(with_spectrum(&mu, rng))
        }
    };
    SaddleSystem::new(a, b, c, &ValidationOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dense_full_spectrum, numerical_rank, singular_values};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthogonal_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let k = 7;
        let q = random_orthogonal(k, &mut rng);
        for i in 0..k {
            for j in 0..k {
                let d: f64 = (0..k).map(|l| q[l * k + i] * q[l * k + j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn prescribed_spectrum_is_reproduced() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lambda = [-3.0, 0.0, 0.5, 2.0];
        let m = with_spectrum(&lambda, &mut rng);
        let s = dense_full_spectrum(&m).unwrap();
        for (x, y) in s.iter().zip(lambda) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_truncation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = random_rect(12, 8, Some(3), &mut rng);
        assert_eq!(numerical_rank(&singular_values(&b).unwrap()), 3);
        let z = random_rect(4, 2, Some(0), &mut rng);
        assert!(z.is_zero());
    }

    #[test]
    fn condition_kind_keeps_condition() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let sys = random_system(&RandomSpec::new(6, 4, CKind::ConditionHolds), &mut rng).unwrap();
            let a = dense_full_spectrum(sys.a()).unwrap()[0];
            let c = sys.c().map(|c| dense_full_spectrum(c).unwrap()[0]).unwrap_or(0.0);
            assert!(a + c >= -1e-12 * a.abs().max(1.0));
        }
    }
}
