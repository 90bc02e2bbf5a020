//! Envelope (skyline) Cholesky used as a positive-definiteness test.

use crate::linalg::sparse::SymMatrix;

/// Outcome of attempting `M = UᵀU`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CholeskyOutcome {
    /// Every pivot exceeded the floor; `min_pivot` is the smallest one.
    Factored { min_pivot: f64 },
    /// Elimination stopped at `index`, where the pivot was `value`.
    Failed { index: usize, value: f64 },
}

/// Factors `m` within its column envelope, failing at the first pivot
/// `d_j ≤ pivot_floor`.
pub fn skyline_cholesky(m: &SymMatrix, pivot_floor: f64) -> CholeskyOutcome {
    let n = m.order();
    let first = m.column_heights();
    let mut offset = vec![0usize; n + 1];
    for j in 0..n {
        offset[j + 1] = offset[j] + (j - first[j] + 1);
    }
    let mut u = vec![0.0; offset[n]];
    for (r, c, v) in m.entries() {
        u[offset[c] + (r - first[c])] = v;
    }

    let mut min_pivot = f64::INFINITY;
    for j in 0..n {
        let fj = first[j];
        for i in fj..j {
            let fi = first[i];
            let k0 = fi.max(fj);
            let col_i = &u[offset[i] + (k0 - fi)..offset[i] + (i - fi)];
            let col_j = &u[offset[j] + (k0 - fj)..offset[j] + (i - fj)];
            let s: f64 = col_i.iter().zip(col_j).map(|(a, b)| a * b).sum();
            let uii = u[offset[i] + (i - fi)];
            let pos = offset[j] + (i - fj);
            u[pos] = (u[pos] - s) / uii;
        }
        let col = &u[offset[j]..offset[j] + (j - fj)];
        let d = u[offset[j] + (j - fj)] - col.iter().map(|x| x * x).sum::<f64>();
        if !(d > pivot_floor) {
            return CholeskyOutcome::Failed { index: j, value: d };
        }
        min_pivot = min_pivot.min(d);
        u[offset[j] + (j - fj)] = d.sqrt();
    }
    CholeskyOutcome::Factored { min_pivot }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_spd_tridiagonal() {
        let mut t = Vec::new();
        for i in 0..50 {
            t.push((i, i, 2.0));
            if i + 1 < 50 {
                t.push((i, i + 1, -1.0));
            }
        }
        let m = SymMatrix::from_triplets(50, t).unwrap();
        match skyline_cholesky(&m, 0.0) {
            CholeskyOutcome::Factored { min_pivot } => {
                // Pivots of the path Laplacian are (k+1)/k.
                assert!((min_pivot - 51.0 / 50.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reports_failing_pivot() {
        let m = SymMatrix::from_triplets(3, [(0, 0, 1.0), (1, 1, 1.0), (1, 2, 2.0), (2, 2, 1.0)])
            .unwrap();
        assert_eq!(
            skyline_cholesky(&m, 0.0),
            CholeskyOutcome::Failed {
                index: 2,
                value: -3.0
            }
        );
        let z = SymMatrix::from_diagonal(&[0.0]);
        assert!(matches!(skyline_cholesky(&z, 0.0), CholeskyOutcome::Failed { index: 0, .. }));
    }

    #[test]
    fn dense_matrix_matches_determinant() {
        let m = SymMatrix::from_dense(3, &[4.0, 2.0, 1.0, 2.0, 5.0, 3.0, 1.0, 3.0, 6.0]).unwrap();
        assert!(matches!(skyline_cholesky(&m, 0.0), CholeskyOutcome::Factored { .. }));
    }
}
