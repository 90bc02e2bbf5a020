//! The validated block system `W = [A B; Bᵀ C]`.

mod bundle;

pub use bundle::{read_bundle, write_bundle_dir, write_bundle_file, Bundle, BundleHeader};

use crate::error::{Certificate, Error, Result};
use crate::linalg::{
    dense_full_spectrum, extremal_eig, skyline_cholesky, CholeskyOutcome, RectMatrix, SymMatrix,
    Which, DENSE_CAP,
};

/// Knobs for [`SaddleSystem::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    /// Relative slack of the definiteness checks, scaled by the largest
    /// diagonal magnitude of the block under test.
    pub definiteness_tol: f64,
    /// Accept systems with fewer velocity than pressure unknowns.
    pub allow_m_lt_n: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            definiteness_tol: 1e-10,
            allow_m_lt_n: false,
        }
    }
}

/// Counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

/// A saddle-point system with `A` positive definite and `C` negative
/// semidefinite. A zero `C` block is stored as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleSystem {
    a: SymMatrix,
    b: RectMatrix,
    c: Option<SymMatrix>,
}

const EIG_TOL: f64 = 1e-12;
const EIG_MAX_ITER: usize = 20_000;

fn extreme(m: &SymMatrix, which: Which) -> Result<f64> {
    if m.order() <= DENSE_CAP {
        let s = dense_full_spectrum(m)?;
        return Ok(match which {
            Which::Smallest => s[0],
            Which::Largest => s[s.len() - 1],
        });
    }
    Ok(extremal_eig(m, which, EIG_TOL, EIG_MAX_ITER)?.value)
}

/// Verifies that `a` is positive definite beyond `tol * max|a_ii|`.
pub fn check_positive_definite(a: &SymMatrix, tol: f64) -> std::result::Result<(), Certificate> {
    let floor = tol * a.max_abs_diagonal();
    match skyline_cholesky(a, floor) {
        CholeskyOutcome::Factored { .. } => Ok(()),
        CholeskyOutcome::Failed { index, value } if value < -floor => {
            Err(Certificate::Pivot { index, value })
        }
        CholeskyOutcome::Failed { index, value } => match extreme(a, Which::Smallest) {
            Ok(lmin) if lmin > floor => Ok(()),
            Ok(lmin) => Err(Certificate::Eigenvalue {
                value: lmin,
                tolerance: floor,
            }),
            Err(_) => Err(Certificate::Pivot { index, value }),
        },
    }
}

/// Verifies `λ_max(c) ≤ tol * max|c_ii|` by factoring `tol·scale·I − c`.
pub fn check_negative_semidefinite(c: &SymMatrix, tol: f64) -> std::result::Result<(), Certificate> {
    let scale = c.max_abs_diagonal();
    let slack = tol * scale;
    let shifted = c.affine(slack, -1.0);
    match skyline_cholesky(&shifted, 0.0) {
        CholeskyOutcome::Factored { .. } => Ok(()),
        CholeskyOutcome::Failed { index, value } => {
            if value < -slack.max(f64::MIN_POSITIVE) {
                return Err(Certificate::Pivot { index, value });
            }
            match extreme(c, Which::Largest) {
                Ok(lmax) if lmax <= slack => Ok(()),
                Ok(lmax) => Err(Certificate::Eigenvalue {
                    value: lmax,
                    tolerance: slack,
                }),
                Err(_) => Err(Certificate::Pivot { index, value }),
            }
        }
    }
}

impl SaddleSystem {
    /// Validates the blocks and builds the system.
    pub fn new(
        a: SymMatrix,
        b: RectMatrix,
        c: Option<SymMatrix>,
        opts: &ValidationOptions,
    ) -> Result<Self> {
        let (m, n) = (a.order(), b.cols());
        if m == 0 || n == 0 {
            return Err(Error::Dimension("blocks must be nonempty".into()));
        }
        if b.rows() != m {
            return Err(Error::Dimension(format!(
                "B has {} rows but A has order {m}",
                b.rows()
            )));
        }
        if let Some(c) = &c {
            if c.order() != n {
                return Err(Error::Dimension(format!(
                    "C has order {} but B has {n} columns",
                    c.order()
                )));
            }
        }
        if m < n && !opts.allow_m_lt_n {
            return Err(Error::ColumnsExceedRows { m, n });
        }
        check_positive_definite(&a, opts.definiteness_tol)
            .map_err(|certificate| Error::NotPositiveDefinite { certificate })?;
        let c = c.filter(|c| !c.is_zero());
        if let Some(c) = &c {
            check_negative_semidefinite(c, opts.definiteness_tol)
                .map_err(|certificate| Error::NotNegativeSemidefinite { certificate })?;
        }
        Ok(SaddleSystem { a, b, c })
    }

    pub fn m(&self) -> usize {
        self.a.order()
    }

    pub fn n(&self) -> usize {
        self.b.cols()
    }

    pub fn order(&self) -> usize {
        self.m() + self.n()
    }

    pub fn a(&self) -> &SymMatrix {
        &self.a
    }

    pub fn b(&self) -> &RectMatrix {
        &self.b
    }

    /// The `C` block, or `None` when it is zero.
    pub fn c(&self) -> Option<&SymMatrix> {
        self.c.as_ref()
    }

    pub fn c_is_zero(&self) -> bool {
        self.c.is_none()
    }

    /// The full matrix `W` in symmetric storage.
    pub fn assemble_w(&self) -> SymMatrix {
        let m = self.m();
        let a = self.a.entries();
        let b = self.b.entries().map(|(r, c, v)| (r, m + c, v));
        let c = self
            .c
            .iter()
            .flat_map(|c| c.entries().map(move |(r, col, v)| (m + r, m + col, v)));
        SymMatrix::from_triplets(self.order(), a.chain(b).chain(c))
            .expect("blocks were validated against each other")
    }

    /// `⟨x, Ax⟩ + 2⟨x, By⟩ + ⟨y, Cy⟩`.
    pub fn quadratic_form(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != self.m() || y.len() != self.n() {
            return Err(Error::Dimension(format!(
                "quadratic form needs lengths ({}, {}), got ({}, {})",
                self.m(),
                self.n(),
                x.len(),
                y.len()
            )));
        }
        let dot = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(a, b)| a * b).sum::<f64>();
        let ax = self.a.matvec(x)?;
        let by = self.b.matvec(y)?;
        let cy = match &self.c {
            Some(c) => dot(y, &c.matvec(y)?),
            None => 0.0,
        };
        Ok(dot(x, &ax) + 2.0 * dot(x, &by) + cy)
    }

    /// Eigenvalue sign counts of `W` from the dense oracle, with zero
    /// threshold `1e-10 · max|λ|`.
    pub fn inertia(&self) -> Result<Inertia> {
        let spectrum = dense_full_spectrum(&self.assemble_w())?;
        Ok(inertia_of(&spectrum))
    }
}

pub(crate) fn inertia_of(spectrum: &[f64]) -> Inertia {
    let scale = spectrum.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cut = 1e-10 * scale;
    let mut out = Inertia {
        positive: 0,
        zero: 0,
        negative: 0,
    };
    for &v in spectrum {
        if v > cut {
            out.positive += 1;
        } else if v < -cut {
            out.negative += 1;
        } else {
            out.zero += 1;
        }
    }
    out
}
