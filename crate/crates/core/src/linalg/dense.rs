//! Dense symmetric matrices and two independent full eigensolvers.
//!
//! [`jacobi_eigen`] is the reference oracle: slow, simple and accurate.
//! [`symmetric_eigen`] (Householder tridiagonalization followed by implicit
//! QL) serves the small projected problems inside the Krylov solver, so the
//! oracle and the iterative path share no eigenvalue code.

use crate::error::{Error, Result};
use crate::linalg::sparse::SymMatrix;

/// Largest order accepted by the dense routines.
pub const DENSE_CAP: usize = 1000;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_OFF: f64 = 1e-12;

/// Full row-major storage of a symmetric matrix; `set` writes both halves.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSym {
    n: usize,
    data: Vec<f64>,
}

impl DenseSym {
    pub fn zeros(n: usize) -> Self {
        DenseSym {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        self.data
            .chunks_exact(self.n.max(1))
            .take(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn to_sparse(&self) -> SymMatrix {
        SymMatrix::from_dense(self.n, &self.data).expect("square data")
    }
}

/// Eigenvalues in ascending order, optionally with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// Column-major: eigenvector `k` occupies `vectors[k*n..(k+1)*n]`.
    pub vectors: Option<Vec<f64>>,
}

impl SymEigen {
    pub fn vector(&self, k: usize) -> Option<&[f64]> {
        let n = self.values.len();
        self.vectors.as_ref().map(|v| &v[k * n..(k + 1) * n])
    }

    fn sorted(values: Vec<f64>, vectors: Option<Vec<f64>>) -> Self {
        let n = values.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let vals = idx.iter().map(|&k| values[k]).collect();
        let vecs = vectors.map(|v| {
            let mut out = Vec::with_capacity(n * n);
            for &k in &idx {
                out.extend_from_slice(&v[k * n..(k + 1) * n]);
            }
            out
        });
        SymEigen {
            values: vals,
            vectors: vecs,
        }
    }
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
/// `1e-12 * ‖M‖_F`.
pub fn jacobi_eigen(m: &DenseSym, want_vectors: bool) -> SymEigen {
    let n = m.n;
    let mut a = m.data.clone();
    // Row k of `vt` is the current approximation of eigenvector k.
    let mut vt = want_vectors.then(|| DenseSym::identity(n).data);
    let target = JACOBI_REL_OFF * m.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let (lo, hi) = a.split_at_mut(q * n);
                let row_p = &mut lo[p * n..(p + 1) * n];
                let row_q = &mut hi[..n];
                for k in 0..n {
                    let (xp, xq) = (row_p[k], row_q[k]);
                    row_p[k] = c * xp - s * xq;
                    row_q[k] = s * xp + c * xq;
                }
                row_p[p] = app - t * apq;
                row_q[q] = aqq + t * apq;
                row_p[q] = 0.0;
                row_q[p] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        a[k * n + p] = a[p * n + k];
                        a[k * n + q] = a[q * n + k];
                    }
                }

                if let Some(v) = vt.as_mut() {
                    let (lo, hi) = v.split_at_mut(q * n);
                    let vp = &mut lo[p * n..(p + 1) * n];
                    let vq = &mut hi[..n];
                    for k in 0..n {
                        let (xp, xq) = (vp[k], vq[k]);
                        vp[k] = c * xp - s * xq;
                        vq[k] = s * xp + c * xq;
                    }
                }
            }
        }
    }
    let values = (0..n).map(|i| a[i * n + i]).collect();
    SymEigen::sorted(values, vt)
}

/// Householder reduction to tridiagonal form followed by implicit QL with
/// eigenvectors.
pub fn symmetric_eigen(m: &DenseSym) -> SymEigen {
    let n = m.n;
    if n == 0 {
        return SymEigen {
            values: Vec::new(),
            vectors: Some(Vec::new()),
        };
    }
    // Column-major working storage: entry (row r, col c) lives at v[c*n + r].
    let mut v = m.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    tridiagonal_ql(n, &mut v, &mut d, &mut e);
    SymEigen::sorted(d, Some(v))
}

fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |r: usize, c: usize| c * n + r;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for x in e.iter_mut().take(i) {
                *x = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn tridiagonal_ql(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d.iter_mut().skip(l + 2) {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = v.split_at_mut((i + 1) * n);
                    let col_i = &mut lo[i * n..];
                    let col_i1 = &mut hi[..n];
                    for k in 0..n {
                        let h = col_i1[k];
                        col_i1[k] = s * col_i[k] + c * h;
                        col_i[k] = c * col_i[k] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

/// All eigenvalues of `m` in ascending order, from the Jacobi oracle.
pub fn dense_full_spectrum(m: &SymMatrix) -> Result<Vec<f64>> {
    if m.order() > DENSE_CAP {
        return Err(Error::DenseCapExceeded {
            order: m.order(),
            cap: DENSE_CAP,
        });
    }
    Ok(jacobi_eigen(&m.to_dense(), false).values)
}
