//! Matrix storage and eigen/singular-value computation.

pub mod cholesky;
pub mod dense;
pub mod lanczos;
pub mod mtx;
pub mod operator;
pub mod sparse;
pub mod svd;

pub use cholesky::{skyline_cholesky, CholeskyOutcome};
pub use dense::{dense_full_spectrum, jacobi_eigen, symmetric_eigen, DenseSym, SymEigen, DENSE_CAP};
pub use lanczos::{extremal_eig, extremal_eig_op, EigPair, LanczosOptions, Which};
pub use operator::{GramOperator, LinearOperator};
pub use sparse::{RectMatrix, SymMatrix};
pub use svd::{gram_extremes, numerical_rank, singular_values, RANK_TOL};
