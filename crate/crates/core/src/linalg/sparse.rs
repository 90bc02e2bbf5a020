//! Compressed sparse storage for symmetric and rectangular matrices.
//!
//! Both types are immutable after construction. Entries are kept row-major
//! with ascending column indices, duplicates summed in input order and exact
//! zeros dropped. Products walk the stored entries in that same order, which
//! makes repeated products bit-identical regardless of the caller's threading.

use crate::error::{Error, Result};
use crate::linalg::dense::DenseSym;

/// Sorts triplets by position, sums duplicates in input order and drops zeros.
fn compress(
    rows: usize,
    mut triplets: Vec<(usize, usize, f64)>,
) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    triplets.sort_by_key(|&(r, c, _)| (r, c));
    let mut row_ptr = vec![0usize; rows + 1];
    let mut cols = Vec::with_capacity(triplets.len());
    let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
    let mut last: Option<(usize, usize)> = None;
    let mut row_of = Vec::with_capacity(triplets.len());
    for (r, c, v) in triplets {
        if last == Some((r, c)) {
            *vals.last_mut().unwrap() += v;
        } else {
            cols.push(c);
            vals.push(v);
            row_of.push(r);
            last = Some((r, c));
        }
    }
    let mut keep_cols = Vec::with_capacity(cols.len());
    let mut keep_vals = Vec::with_capacity(vals.len());
    for ((r, c), v) in row_of.into_iter().zip(cols).zip(vals) {
        if v != 0.0 {
            row_ptr[r + 1] += 1;
            keep_cols.push(c);
            keep_vals.push(v);
        }
    }
    for r in 0..rows {
        row_ptr[r + 1] += row_ptr[r];
    }
    (row_ptr, keep_cols, keep_vals)
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Dimension(format!(
            "{what}: vector has length {got}, expected {want}"
        )));
    }
    Ok(())
}

/// Symmetric matrix holding only its upper triangle (`row <= col`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SymMatrix {
    /// Builds a symmetric matrix from `(row, col, value)` triplets.
    ///
    /// Each triplet stands for both `(row, col)` and `(col, row)`, so either
    /// triangle may be supplied; triplets landing on the same upper-triangle
    /// position are summed.
    pub fn from_triplets<I>(order: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut upper = Vec::new();
        for (r, c, v) in triplets {
            if r >= order || c >= order {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows: order,
                    cols: order,
                });
            }
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite entry {v} at ({r}, {c})"
                )));
            }
            upper.push((r.min(c), r.max(c), v));
        }
        let (row_ptr, cols, vals) = compress(order, upper);
        Ok(SymMatrix {
            order,
            row_ptr,
            cols,
            vals,
        })
    }

    pub fn zeros(order: usize) -> Self {
        SymMatrix {
            order,
            row_ptr: vec![0; order + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_diagonal(&vec![1.0; order])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self::from_triplets(diag.len(), diag.iter().enumerate().map(|(i, &v)| (i, i, v)))
            .expect("diagonal entries are always in range")
    }

    /// Reads the upper triangle of a full row-major square array.
    pub fn from_dense(order: usize, data: &[f64]) -> Result<Self> {
        check_len("dense symmetric data", data.len(), order * order)?;
        let mut t = Vec::new();
        for i in 0..order {
            for j in i..order {
                t.push((i, j, data[i * order + j]));
            }
        }
        Self::from_triplets(order, t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of stored upper-triangle entries.
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// Stored entries `(row, col, value)` with `row <= col`, in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.order).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = (i.min(j), i.max(j));
        let span = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match span.binary_search(&c) {
            Ok(k) => self.vals[self.row_ptr[r] + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs_diagonal(&self) -> f64 {
        self.diagonal().iter().fold(0.0, |m, d| m.max(d.abs()))
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries()
            .map(|(r, c, v)| if r == c { v * v } else { 2.0 * v * v })
            .sum::<f64>()
            .sqrt()
    }

    /// `y = M x`, summing in ascending stored-entry order.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("symmetric matvec", x.len(), self.order)?;
        let mut y = vec![0.0; self.order];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// Unchecked form of [`matvec`](Self::matvec) writing into `y`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.order);
        debug_assert_eq!(y.len(), self.order);
        y.fill(0.0);
        for r in 0..self.order {
            let xr = x[r];
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k];
                let v = self.vals[k];
                if c == r {
                    acc += v * xr;
                } else {
                    acc += v * x[c];
                    y[c] += v * xr;
                }
            }
            y[r] += acc;
        }
    }

    /// Gershgorin enclosure `[lo, hi]` of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        if self.order == 0 {
            return (0.0, 0.0);
        }
        let mut radius = vec![0.0; self.order];
        let mut diag = vec![0.0; self.order];
        for (r, c, v) in self.entries() {
            if r == c {
                diag[r] = v;
            } else {
                radius[r] += v.abs();
                radius[c] += v.abs();
            }
        }
        let lo = diag
            .iter()
            .zip(&radius)
            .map(|(d, r)| d - r)
            .fold(f64::INFINITY, f64::min);
        let hi = diag
            .iter()
            .zip(&radius)
            .map(|(d, r)| d + r)
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self::from_triplets(self.order, self.entries().map(|(r, c, v)| (r, c, alpha * v)))
            .expect("scaling keeps indices in range")
    }

    /// `alpha * I + beta * M`.
    pub fn affine(&self, alpha: f64, beta: f64) -> Self {
        let diag = (0..self.order).map(|i| (i, i, alpha));
        Self::from_triplets(
            self.order,
            self.entries().map(|(r, c, v)| (r, c, beta * v)).chain(diag),
        )
        .expect("affine combination keeps indices in range")
    }

    pub fn to_dense(&self) -> DenseSym {
        let mut d = DenseSym::zeros(self.order);
        for (r, c, v) in self.entries() {
            d.set(r, c, v);
        }
        d
    }

    /// Index of the first stored entry in each column of the upper triangle,
    /// i.e. the envelope used by the skyline factorization.
    pub(crate) fn column_heights(&self) -> Vec<usize> {
        let mut first: Vec<usize> = (0..self.order).collect();
        for (r, c, _) in self.entries() {
            first[c] = first[c].min(r);
        }
        first
    }
}

/// General `rows x cols` matrix stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RectMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
}

impl RectMatrix {
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut t = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "non-finite entry {v} at ({r}, {c})"
                )));
            }
            t.push((r, c, v));
        }
        let (row_ptr, col_idx, vals) = compress(rows, t);
        Ok(RectMatrix {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RectMatrix {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Builds from a row-major dense array.
    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        check_len("dense rectangular data", data.len(), rows * cols)?;
        Self::from_triplets(
            rows,
            cols,
            (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j, data[i * cols + j]))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.col_idx[k], self.vals[k]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let span = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
        match span.binary_search(&j) {
            Ok(k) => self.vals[self.row_ptr[i] + k],
            Err(_) => 0.0,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.vals.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> RectMatrix {
        RectMatrix::from_triplets(self.cols, self.rows, self.entries().map(|(r, c, v)| (c, r, v)))
            .expect("transpose keeps indices in range")
    }

    /// `B x` for `x` of length `cols`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("rectangular matvec", x.len(), self.cols)?;
        let mut y = vec![0.0; self.rows];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// `Bᵀ y` for `y` of length `rows`.
    pub fn matvec_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("transposed matvec", y.len(), self.rows)?;
        let mut x = vec![0.0; self.cols];
        self.apply_transpose_into(y, &mut x);
        Ok(x)
    }

    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        for r in 0..self.rows {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.col_idx[k]];
            }
            y[r] = acc;
        }
    }

    pub fn apply_transpose_into(&self, y: &[f64], x: &mut [f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(x.len(), self.cols);
        x.fill(0.0);
        for r in 0..self.rows {
            let yr = y[r];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                x[self.col_idx[k]] += self.vals[k] * yr;
            }
        }
    }

    /// Dense Gram matrix `BᵀB`, accumulated row by row of `B`.
    pub fn gram_dense(&self) -> DenseSym {
        let mut g = DenseSym::zeros(self.cols);
        for r in 0..self.rows {
            let span = self.row_ptr[r]..self.row_ptr[r + 1];
            for a in span.clone() {
                for b in span.clone() {
                    let (i, j) = (self.col_idx[a], self.col_idx[b]);
                    if i <= j {
                        let v = g.get(i, j) + self.vals[a] * self.vals[b];
                        g.set(i, j, v);
                    }
                }
            }
        }
        g
    }

    /// Upper bound on `λ_max(BᵀB)` from the row sums of `|B|ᵀ|B|`.
    pub fn gram_upper_bound(&self) -> f64 {
        let mut row_abs = vec![0.0; self.rows];
        for (r, _, v) in self.entries() {
            row_abs[r] += v.abs();
        }
        let mut col = vec![0.0; self.cols];
        for (r, c, v) in self.entries() {
            col[c] += v.abs() * row_abs[r];
        }
        col.into_iter().fold(0.0, f64::max)
    }
}
