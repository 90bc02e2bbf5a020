//! Quasi-Perron-Frobenius verdicts, the eigenvalue-sum lower bound, the
//! bilinear extremum of `B`, the closed-form spectrum of `[ηI B; Bᵀ 0]` and
//! the two interval enclosures of the spectrum of `W`.

mod report;

pub use report::{analyze_report, BoundOutcome, ReportRecord};
pub(crate) use report::{csv_field, num};

use crate::error::{Error, Result};
use crate::linalg::{
    extremal_eig, extremal_eig_op, jacobi_eigen, singular_values, GramOperator, LanczosOptions,
    RectMatrix, SymMatrix, Which, DENSE_CAP, RANK_TOL,
};
use crate::saddle::SaddleSystem;

/// Relative width of the band around `S = 0` treated as a tie.
pub const TIE_TOL: f64 = 1e-9;

/// Extreme eigenvalues of `W` and what they say about the spectral radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSummary {
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub rho: f64,
    /// `λ_max + λ_min`.
    pub s: f64,
    /// The spectral radius is an eigenvalue: `S ≥ -tie`.
    pub quasi_pf: bool,
    /// `S > tie`, so `λ_max` strictly dominates `|λ_min|`.
    pub quasi_pf_strict: bool,
    /// `|S|` within the tie band.
    pub boundary: bool,
    pub lambda_min_a: f64,
    pub lambda_min_c: f64,
    /// `λ_min(A) + λ_min(C)`.
    pub condition_value: f64,
    /// The sufficient condition `λ_min(A) + λ_min(C) ≥ 0` (up to the tie band).
    pub condition_holds: bool,
}

impl SpectralSummary {
    pub fn from_parts(lambda_max: f64, lambda_min: f64, lambda_min_a: f64, lambda_min_c: f64) -> Self {
        let rho = lambda_max.max(-lambda_min);
        let s = lambda_max + lambda_min;
        let tie = TIE_TOL * rho;
        let condition_value = lambda_min_a + lambda_min_c;
        SpectralSummary {
            lambda_max,
            lambda_min,
            rho,
            s,
            quasi_pf: s >= -tie,
            quasi_pf_strict: s > tie,
            boundary: s.abs() < tie,
            lambda_min_a,
            lambda_min_c,
            condition_value,
            condition_holds: condition_value >= -tie,
        }
    }

    /// The tie tolerance `1e-9 · ρ`.
    pub fn tie(&self) -> f64 {
        TIE_TOL * self.rho
    }

    /// `'+'`, `'-'` or `'0'` for a tie.
    pub fn sign(&self) -> char {
        if self.boundary {
            '0'
        } else if self.s > 0.0 {
            '+'
        } else {
            '-'
        }
    }
}

fn lambda(m: &SymMatrix, which: Which, opts: &LanczosOptions) -> Result<f64> {
    Ok(extremal_eig_op(m, which, opts)?.value)
}

/// Extreme eigenvalues of `W`, `A` and `C` by the Krylov solver.
pub fn analyze(sys: &SaddleSystem, opts: &LanczosOptions) -> Result<SpectralSummary> {
    let w = sys.assemble_w();
    let lmax = lambda(&w, Which::Largest, opts)?;
    let lmin = lambda(&w, Which::Smallest, opts)?;
    let lmin_a = lambda(sys.a(), Which::Smallest, opts)?;
    let lmin_c = match sys.c() {
        Some(c) => lambda(c, Which::Smallest, opts)?,
        None => 0.0,
    };
    Ok(SpectralSummary::from_parts(lmax, lmin, lmin_a, lmin_c))
}

/// `λ_max(W) + λ_min(W) ≥ λ_min(A) + λ_min(C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl SumBoundCheck {
    pub fn from_summary(s: &SpectralSummary) -> Self {
        SumBoundCheck {
            lhs: s.s,
            rhs: s.condition_value,
            holds: s.s >= s.condition_value - s.tie(),
        }
    }
}

pub fn sum_lower_bound_check(sys: &SaddleSystem, opts: &LanczosOptions) -> Result<SumBoundCheck> {
    Ok(SumBoundCheck::from_summary(&analyze(sys, opts)?))
}

/// Maximizer of `xᵀBy` over `‖x‖² + ‖y‖² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearExtremum {
    /// `σ_max(B) / 2`.
    pub max_value: f64,
    pub x_star: Vec<f64>,
    pub y_star: Vec<f64>,
}

impl BilinearExtremum {
    /// The minimum `-σ_max/2`, attained at `(-x*, y*)`.
    pub fn min_value(&self) -> f64 {
        -self.max_value
    }

    pub fn minimizer(&self) -> (Vec<f64>, Vec<f64>) {
        (self.x_star.iter().map(|v| -v).collect(), self.y_star.clone())
    }
}

/// Builds `x* = u/√2`, `y* = v/√2` from the top singular pair `(u, v)`.
pub fn bilinear_extremum(b: &RectMatrix, opts: &LanczosOptions) -> Result<BilinearExtremum> {
    let (m, n) = (b.rows(), b.cols());
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("B must be nonempty".into()));
    }
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let unit = |len: usize| {
        let mut e = vec![0.0; len];
        e[0] = half;
        e
    };
    if b.is_zero() {
        return Ok(BilinearExtremum {
            max_value: 0.0,
            x_star: unit(m),
            y_star: unit(n),
        });
    }
    let v = if n <= DENSE_CAP {
        let eig = jacobi_eigen(&b.gram_dense(), true);
        eig.vector(n - 1).unwrap().to_vec()
    } else {
        extremal_eig_op(&GramOperator::new(b), Which::Largest, opts)?.vector
    };
    let bv = b.matvec(&v)?;
    let sigma = bv.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(BilinearExtremum {
        max_value: 0.5 * sigma,
        x_star: bv.iter().map(|x| half * x / sigma).collect(),
        y_star: v.iter().map(|x| half * x).collect(),
    })
}

/// One pair of eigenvalues `½(η ± √(η² + 4σ²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaPair {
    pub sigma: f64,
    pub plus: f64,
    pub minus: f64,
}

/// Closed-form spectrum of `[ηI B; Bᵀ 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaSpectrum {
    pub eta: f64,
    pub m: usize,
    pub n: usize,
    pub rank_defect: usize,
    pub zero_mult: usize,
    /// `m - n + r` copies of `η`.
    pub eta_mult: usize,
    pub pairs: Vec<EtaPair>,
}

impl EtaSpectrum {
    /// All `m + n` eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.zero_mult];
        out.extend(std::iter::repeat_n(self.eta, self.eta_mult));
        for p in &self.pairs {
            out.push(p.plus);
            out.push(p.minus);
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// The multiplicity of `η` as the formula is commonly printed,
    /// `m - n - r`, which undercounts by `2r`.
    pub fn printed_eta_mult(&self) -> i64 {
        self.m as i64 - self.n as i64 - self.rank_defect as i64
    }
}

/// `½(a - √(a² + 4q))` without cancellation, for `a > 0` and `q ≥ 0`.
fn lower_root(a: f64, q: f64) -> f64 {
    -2.0 * q / (a + (a * a + 4.0 * q).sqrt())
}

fn upper_root(a: f64, q: f64) -> f64 {
    0.5 * (a + (a * a + 4.0 * q).sqrt())
}

pub fn explicit_spectrum_eta(eta: f64, b: &RectMatrix) -> Result<EtaSpectrum> {
    if !(eta > 0.0) {
        return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
    }
    let (m, n) = (b.rows(), b.cols());
    let sv = singular_values(b)?;
    let rank = sv.iter().filter(|&&s| s > 0.0).count();
    let r = n - rank;
    let pairs = sv
        .iter()
        .filter(|&&s| s > 0.0)
        .map(|&s| EtaPair {
            sigma: s,
            plus: upper_root(eta, s * s),
            minus: lower_root(eta, s * s),
        })
        .collect();
    Ok(EtaSpectrum {
        eta,
        m,
        n,
        rank_defect: r,
        zero_mult: r,
        eta_mult: m - rank,
        pairs,
    })
}

/// A closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    RustenWinther,
    SilvesterWathen,
}

impl Theorem {
    pub fn name(&self) -> &'static str {
        match self {
            Theorem::RustenWinther => "rusten_winther",
            Theorem::SilvesterWathen => "silvester_wathen",
        }
    }
}

/// Which endpoint formulas of the enclosure with a nonzero `C` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// The endpoints as usually printed, kept for auditing.
    AsPrinted,
    /// Endpoints with a containment guarantee.
    Corrected,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::AsPrinted => "as_printed",
            Variant::Corrected => "corrected",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as_printed" | "as-printed" => Ok(Variant::AsPrinted),
            "corrected" => Ok(Variant::Corrected),
            other => Err(Error::InvalidArgument(format!(
                "unknown variant '{other}' (expected as_printed or corrected)"
            ))),
        }
    }
}

/// Intervals claimed to cover the negative and positive eigenvalues of `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumBounds {
    pub neg: Interval,
    pub pos: Interval,
    pub variant: Variant,
    pub theorem: Theorem,
}

impl SpectrumBounds {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.neg.contains(x, tol) || self.pos.contains(x, tol)
    }

    /// Eigenvalues falling outside both intervals.
    pub fn violations(&self, spectrum: &[f64], tol: f64) -> Vec<f64> {
        spectrum
            .iter()
            .copied()
            .filter(|&x| !self.contains(x, tol))
            .collect()
    }
}

/// `(σ_1², σ_n²)` of `B`, from the dense SVD when it fits.
fn gram_extremes(b: &RectMatrix, opts: &LanczosOptions) -> Result<(f64, f64)> {
    match singular_values(b) {
        Ok(sv) => {
            let s1 = sv[0];
            let sn = if b.cols() <= b.rows() { sv[sv.len() - 1] } else { 0.0 };
            Ok((s1 * s1, sn * sn))
        }
        Err(Error::DenseCapExceeded { .. }) => crate::linalg::gram_extremes(b, opts),
        Err(e) => Err(e),
    }
}

/// Smallest eigenvalue of `BᵀB - alpha·C` with a resolution floor below which
/// it counts as zero.
fn gram_block_min(
    b: &RectMatrix,
    c: Option<&SymMatrix>,
    alpha: f64,
    opts: &LanczosOptions,
) -> Result<(f64, f64)> {
    let n = b.cols();
    let zero = SymMatrix::zeros(n);
    let c = c.unwrap_or(&zero);
    if n <= DENSE_CAP {
        let mut g = b.gram_dense();
        for (r, col, v) in c.entries() {
            g.set(r, col, g.get(r, col) - alpha * v);
        }
        let vals = jacobi_eigen(&g, false).values;
        let top = vals[n - 1].abs().max(f64::MIN_POSITIVE);
        return Ok((vals[0], RANK_TOL * top));
    }
    let op = GramOperator::with_block(b, c, alpha);
    let lo = extremal_eig_op(&op, Which::Smallest, opts)?.value;
    let hi = extremal_eig_op(&op, Which::Largest, opts)?.value;
    Ok((lo, RANK_TOL.max(100.0 * opts.tol) * hi.abs()))
}

fn a_extremes(sys: &SaddleSystem, opts: &LanczosOptions) -> Result<(f64, f64)> {
    let a = sys.a();
    Ok((
        extremal_eig(a, Which::Smallest, opts.tol, opts.max_iter)?.value,
        extremal_eig(a, Which::Largest, opts.tol, opts.max_iter)?.value,
    ))
}

/// Enclosure for `C = 0` and `B` of full column rank.
pub fn rusten_winther_bounds(sys: &SaddleSystem, opts: &LanczosOptions) -> Result<SpectrumBounds> {
    let theorem = "rusten_winther";
    if !sys.c_is_zero() {
        return Err(Error::HypothesisViolated {
            theorem,
            hypothesis: "C = 0".into(),
        });
    }
    let b = sys.b();
    let (s1, sn) = gram_extremes(b, opts)?;
    let floor = if b.cols() <= DENSE_CAP && b.rows() * b.cols() <= 4_000_000 {
        0.0
    } else {
        RANK_TOL.max(100.0 * opts.tol) * s1
    };
    if b.cols() > b.rows() || !(sn > floor) {
        return Err(Error::HypothesisViolated {
            theorem,
            hypothesis: "B full-column rank".into(),
        });
    }
    let (am, a1) = a_extremes(sys, opts)?;
    Ok(SpectrumBounds {
        neg: Interval {
            lo: lower_root(am, s1),
            hi: lower_root(a1, sn),
        },
        pos: Interval {
            lo: am,
            hi: upper_root(a1, s1),
        },
        variant: Variant::Corrected,
        theorem: Theorem::RustenWinther,
    })
}

/// Enclosure for a general negative semidefinite `C` with `BᵀB - C` positive
/// definite.
pub fn silvester_wathen_bounds(
    sys: &SaddleSystem,
    variant: Variant,
    opts: &LanczosOptions,
) -> Result<SpectrumBounds> {
    let b = sys.b();
    let c = sys.c();
    let (gap, floor) = gram_block_min(b, c, 1.0, opts)?;
    if !(gap > floor) {
        return Err(Error::HypothesisViolated {
            theorem: "silvester_wathen",
            hypothesis: "B^T B - C positive definite".into(),
        });
    }
    let (am, a1) = a_extremes(sys, opts)?;
    let (s1, _) = gram_extremes(b, opts)?;
    let (cmin, cmax) = match c {
        Some(c) => (
            extremal_eig_op(c, Which::Smallest, opts)?.value,
            extremal_eig_op(c, Which::Largest, opts)?.value.min(0.0),
        ),
        None => (0.0, 0.0),
    };
    let neg = match variant {
        Variant::AsPrinted => {
            // Smallest eigenvalue of C - BᵀB is minus the largest of BᵀB - C.
            let top = match c {
                Some(c) => extremal_eig_op(&GramOperator::with_block(b, c, 1.0), Which::Largest, opts)?.value,
                None => s1,
            };
            let d = cmax - am;
            Interval {
                lo: 0.5 * (cmax + am - (d * d + 4.0 * s1).sqrt()),
                hi: lower_root(a1, top * top),
            }
        }
        Variant::Corrected => {
            let (gamma, _) = gram_block_min(b, c, a1, opts)?;
            let d = am - cmin;
            Interval {
                lo: 0.5 * (cmin + am - (d * d + 4.0 * s1).sqrt()),
                hi: lower_root(a1, gamma.max(0.0)),
            }
        }
    };
    Ok(SpectrumBounds {
        neg,
        pos: Interval {
            lo: am,
            hi: upper_root(a1, s1),
        },
        variant,
        theorem: Theorem::SilvesterWathen,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense_full_spectrum;
    use crate::saddle::ValidationOptions;

    fn sys(a: &[f64], m: usize, b: &[f64], n: usize, c: Option<&[f64]>) -> SaddleSystem {
        SaddleSystem::new(
            SymMatrix::from_dense(m, a).unwrap(),
            RectMatrix::from_dense(m, n, b).unwrap(),
            c.map(|c| SymMatrix::from_dense(n, c).unwrap()),
            &ValidationOptions::default(),
        )
        .unwrap()
    }

    fn opts() -> LanczosOptions {
        LanczosOptions::default()
    }

    const GOLD: f64 = 1.618_033_988_749_895;

    #[test]
    fn scalar_summary() {
        let s = analyze(&sys(&[2.0], 1, &[1.0], 1, Some(&[0.0])), &opts()).unwrap();
        let r = 2f64.sqrt();
        assert!((s.lambda_max - (1.0 + r)).abs() < 1e-12);
        assert!((s.lambda_min - (1.0 - r)).abs() < 1e-12);
        assert!((s.s - 2.0).abs() < 1e-12);
        assert!(s.quasi_pf_strict && s.quasi_pf && !s.boundary);
        assert_eq!(s.sign(), '+');
        assert_eq!(s.rho, s.lambda_max);
    }

    #[test]
    fn negative_sum_fails_verdict() {
        let s = analyze(&sys(&[0.01], 1, &[1.0], 1, Some(&[-2.0])), &opts()).unwrap();
        assert!((s.s + 1.99).abs() < 1e-12);
        assert!(!s.quasi_pf && !s.quasi_pf_strict);
        assert!(!s.condition_holds);
        assert_eq!(s.sign(), '-');
    }

    #[test]
    fn tie_is_flagged_as_boundary() {
        let s = SpectralSummary::from_parts(1.0, -1.0 + 1e-12, 1.0, -1.0);
        assert!(s.boundary && s.quasi_pf && !s.quasi_pf_strict);
        assert_eq!(s.sign(), '0');
    }

    #[test]
    fn sum_bound_examples() {
        let zero_b = SaddleSystem::new(
            SymMatrix::identity(1),
            RectMatrix::zeros(1, 1),
            None,
            &ValidationOptions::default(),
        )
        .unwrap();
        let c = sum_lower_bound_check(&zero_b, &opts()).unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-12 && (c.rhs - 1.0).abs() < 1e-12 && c.holds);
        let c = sum_lower_bound_check(&sys(&[2.0], 1, &[1.0], 1, None), &opts()).unwrap();
        assert!((c.lhs - 2.0).abs() < 1e-12 && (c.rhs - 2.0).abs() < 1e-12 && c.holds);
    }

    #[test]
    fn bilinear_examples() {
        let e = bilinear_extremum(&RectMatrix::from_dense(1, 1, &[3.0]).unwrap(), &opts()).unwrap();
        assert!((e.max_value - 1.5).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.x_star[0].abs() - h).abs() < 1e-14 && (e.y_star[0].abs() - h).abs() < 1e-14);
        let b = RectMatrix::from_dense(3, 2, &[3.0, 0.0, 0.0, 4.0, 0.0, 0.0]).unwrap();
        let e = bilinear_extremum(&b, &opts()).unwrap();
        assert!((e.max_value - 2.0).abs() < 1e-14);
        let by = b.matvec(&e.y_star).unwrap();
        let val: f64 = e.x_star.iter().zip(&by).map(|(a, b)| a * b).sum();
        assert!((val - 2.0).abs() < 1e-14);
        assert_eq!(e.min_value(), -2.0);
        let z = bilinear_extremum(&RectMatrix::zeros(2, 2), &opts()).unwrap();
        assert_eq!(z.max_value, 0.0);
        let nx: f64 = z.x_star.iter().chain(&z.y_star).map(|v| v * v).sum();
        assert!((nx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eta_spectrum_examples() {
        let e = explicit_spectrum_eta(2.0, &RectMatrix::zeros(2, 1)).unwrap();
        assert_eq!(e.eigenvalues(), vec![0.0, 2.0, 2.0]);
        assert_eq!((e.rank_defect, e.eta_mult, e.printed_eta_mult()), (1, 2, 0));
        let e = explicit_spectrum_eta(1.0, &RectMatrix::from_dense(2, 1, &[1.0, 0.0]).unwrap()).unwrap();
        let ev = e.eigenvalues();
        let want = [1.0 - GOLD, 1.0, GOLD];
        for (x, y) in ev.iter().zip(want) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!(explicit_spectrum_eta(0.0, &RectMatrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn rusten_winther_identity_example() {
        let s = sys(&[1.0, 0.0, 0.0, 1.0], 2, &[1.0, 0.0], 1, None);
        let bnd = rusten_winther_bounds(&s, &opts()).unwrap();
        assert!((bnd.neg.lo - (1.0 - GOLD)).abs() < 1e-12);
        assert!((bnd.neg.hi - (1.0 - GOLD)).abs() < 1e-12);
        assert!((bnd.pos.lo - 1.0).abs() < 1e-12);
        assert!((bnd.pos.hi - GOLD).abs() < 1e-12);
        let spec = dense_full_spectrum(&s.assemble_w()).unwrap();
        assert!(bnd.violations(&spec, 1e-12).is_empty());
    }

    #[test]
    fn rusten_winther_scalar_is_tight() {
        let (eta, sigma) = (0.7, 1.3);
        let s = sys(&[eta], 1, &[sigma], 1, None);
        let bnd = rusten_winther_bounds(&s, &opts()).unwrap();
        let spec = dense_full_spectrum(&s.assemble_w()).unwrap();
        assert!((bnd.neg.lo - spec[0]).abs() < 1e-12 && (bnd.neg.hi - spec[0]).abs() < 1e-12);
        assert!((bnd.pos.hi - spec[1]).abs() < 1e-12);
        assert!((bnd.pos.lo - eta).abs() < 1e-12);
    }

    #[test]
    fn rusten_winther_hypotheses() {
        let rank_def = sys(&[1.0, 0.0, 0.0, 1.0], 2, &[1.0, 1.0, 1.0, 1.0], 2, None);
        let err = rusten_winther_bounds(&rank_def, &opts()).unwrap_err();
        assert_eq!(err.to_string(), "rusten_winther not applicable: hypothesis B full-column rank");
        let with_c = sys(&[1.0], 1, &[1.0], 1, Some(&[-1.0]));
        assert!(matches!(
            rusten_winther_bounds(&with_c, &opts()),
            Err(Error::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn silvester_wathen_four_by_four() {
        let s = sys(
            &[1.0, 0.0, 0.0, 1.0],
            2,
            &[1.0, 0.0, 0.0, 0.0],
            2,
            Some(&[0.0, 0.0, 0.0, -1.0]),
        );
        let spec = dense_full_spectrum(&s.assemble_w()).unwrap();
        let want = [-1.0, 1.0 - GOLD, 1.0, GOLD];
        for (x, y) in spec.iter().zip(want) {
            assert!((x - y).abs() < 1e-12);
        }
        let corr = silvester_wathen_bounds(&s, Variant::Corrected, &opts()).unwrap();
        assert!((corr.neg.lo + 2f64.sqrt()).abs() < 1e-12);
        assert!((corr.neg.hi - (1.0 - GOLD)).abs() < 1e-12);
        assert!(corr.violations(&spec, 1e-9).is_empty());
        let printed = silvester_wathen_bounds(&s, Variant::AsPrinted, &opts()).unwrap();
        let bad = printed.violations(&spec, 1e-9);
        assert_eq!(bad.len(), 1);
        assert!((bad[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn silvester_wathen_matches_rusten_winther_without_c() {
        let s = sys(&[2.0, 0.5, 0.5, 1.0], 2, &[1.0, 0.3, -0.2, 0.8], 2, None);
        let rw = rusten_winther_bounds(&s, &opts()).unwrap();
        let sw = silvester_wathen_bounds(&s, Variant::Corrected, &opts()).unwrap();
        assert!((rw.neg.lo - sw.neg.lo).abs() < 1e-12);
        assert!((rw.pos.hi - sw.pos.hi).abs() < 1e-12);
        assert!((rw.pos.lo - sw.pos.lo).abs() < 1e-12);
    }

    #[test]
    fn silvester_wathen_rank_deficient_b_with_c() {
        let s = sys(&[1.0], 1, &[0.0], 1, Some(&[-1.0]));
        let bnd = silvester_wathen_bounds(&s, Variant::Corrected, &opts()).unwrap();
        assert!((bnd.neg.lo + 1.0).abs() < 1e-12);
        assert!(bnd.contains(-1.0, 1e-12) && bnd.contains(1.0, 1e-12));
        let singular = sys(&[1.0, 0.0, 0.0, 1.0], 2, &[1.0, 0.0], 1, None);
        let fine = silvester_wathen_bounds(&singular, Variant::Corrected, &opts());
        assert!(fine.is_ok());
        let bad = sys(&[1.0, 0.0, 0.0, 1.0], 2, &[1.0, 1.0, 1.0, 1.0], 2, None);
        assert!(matches!(
            silvester_wathen_bounds(&bad, Variant::Corrected, &opts()),
            Err(Error::HypothesisViolated { .. })
        ));
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("corrected".parse::<Variant>().unwrap(), Variant::Corrected);
        assert_eq!("as_printed".parse::<Variant>().unwrap(), Variant::AsPrinted);
        assert!("other".parse::<Variant>().is_err());
    }
}
