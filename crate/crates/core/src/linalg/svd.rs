//! Singular values of rectangular matrices.

use crate::error::{Error, Result};
use crate::linalg::dense::DENSE_CAP;
use crate::linalg::lanczos::{extremal_eig_op, LanczosOptions, Which};
use crate::linalg::operator::GramOperator;
use crate::linalg::sparse::RectMatrix;

/// Relative threshold below which a singular value counts as zero.
pub const RANK_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 80;
const MAX_DENSE_ENTRIES: usize = 4_000_000;

/// Singular values in descending order, `min(rows, cols)` of them, with
/// values below `RANK_TOL * σ_max` snapped to zero.
///
/// Computed by one-sided Jacobi on the columns of `B` (or `Bᵀ`, whichever is
/// narrower), which keeps small singular values accurate relative to `σ_max`.
pub fn singular_values(b: &RectMatrix) -> Result<Vec<f64>> {
    let (m, n) = (b.rows(), b.cols());
    let k = m.min(n);
    if k > DENSE_CAP || m * n > MAX_DENSE_ENTRIES {
        return Err(Error::DenseCapExceeded {
            order: k,
            cap: DENSE_CAP,
        });
    }
    let (len, count) = if m >= n { (m, n) } else { (n, m) };
    let mut cols = vec![0.0; len * count];
    for (r, c, v) in b.entries() {
        if m >= n {
            cols[c * len + r] = v;
        } else {
            cols[r * len + c] = v;
        }
    }
    let mut sv = one_sided_jacobi(&mut cols, len, count);
    sv.sort_by(|a, b| b.total_cmp(a));
    let cut = RANK_TOL * sv.first().copied().unwrap_or(0.0);
    for s in sv.iter_mut() {
        if *s <= cut {
            *s = 0.0;
        }
    }
    Ok(sv)
}

fn one_sided_jacobi(a: &mut [f64], len: usize, count: usize) -> Vec<f64> {
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..count {
            for j in i + 1..count {
                let (head, tail) = a.split_at_mut(j * len);
                let ai = &mut head[i * len..(i + 1) * len];
                let aj = &mut tail[..len];
                let alpha = dot(ai, ai);
                let beta = dot(aj, aj);
                let gamma = dot(ai, aj);
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in ai.iter_mut().zip(aj.iter_mut()) {
                    let (p, q) = (*x, *y);
                    *x = c * p - s * q;
                    *y = s * p + c * q;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    a.chunks_exact(len.max(1))
        .take(count)
        .map(|col| dot(col, col).sqrt())
        .collect()
}

/// Number of singular values above `RANK_TOL * σ_max`.
pub fn numerical_rank(sv: &[f64]) -> usize {
    sv.iter().filter(|&&s| s > 0.0).count()
}

/// Extreme eigenvalues `(λ_max, λ_min)` of `BᵀB`, i.e. `(σ_1², σ_n²)`, by the
/// Krylov solver; usable at any size.
pub fn gram_extremes(b: &RectMatrix, opts: &LanczosOptions) -> Result<(f64, f64)> {
    let op = GramOperator::new(b);
    let hi = extremal_eig_op(&op, Which::Largest, opts)?.value;
    let lo = extremal_eig_op(&op, Which::Smallest, opts)?.value;
    Ok((hi.max(0.0), lo.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn diagonal_rectangle() {
        let b = RectMatrix::from_dense(3, 2, &[3.0, 0.0, 0.0, 4.0, 0.0, 0.0]).unwrap();
        assert!(close(&singular_values(&b).unwrap(), &[4.0, 3.0], 1e-14));
    }

    #[test]
    fn unit_column() {
        let b = RectMatrix::from_dense(2, 1, &[1.0, 0.0]).unwrap();
        assert_eq!(singular_values(&b).unwrap(), vec![1.0]);
    }

    #[test]
    fn rank_one_square() {
        let b = RectMatrix::from_dense(2, 2, &[1.0; 4]).unwrap();
        let sv = singular_values(&b).unwrap();
        assert!(close(&sv, &[2.0, 0.0], 1e-14));
        assert_eq!(numerical_rank(&sv), 1);
    }

    #[test]
    fn wide_matrix_uses_rows() {
        let b = RectMatrix::from_dense(1, 3, &[0.0, 3.0, 4.0]).unwrap();
        assert!(close(&singular_values(&b).unwrap(), &[5.0], 1e-14));
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(singular_values(&RectMatrix::zeros(3, 2)).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn gram_extremes_of_diagonal() {
        let b = RectMatrix::from_dense(3, 2, &[3.0, 0.0, 0.0, 4.0, 0.0, 0.0]).unwrap();
        let (hi, lo) = gram_extremes(&b, &LanczosOptions::default()).unwrap();
        assert!((hi - 16.0).abs() < 1e-9 && (lo - 9.0).abs() < 1e-9);
    }
}
