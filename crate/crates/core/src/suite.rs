//! Randomized property suites over the whole crate.
//!
//! Every instance draws from its own ChaCha stream derived from the suite seed,
//! the property tag and the instance index, so results do not depend on the
//! number of worker threads. Instances run in parallel and are reduced in
//! index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bounds::{
    analyze, bilinear_extremum, explicit_spectrum_eta, rusten_winther_bounds, silvester_wathen_bounds,
    SpectralSummary, SpectrumBounds, SumBoundCheck, Variant, TIE_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{
    dense_full_spectrum, extremal_eig, numerical_rank, singular_values, LanczosOptions, RectMatrix,
    SymMatrix, Which,
};
use crate::random::{random_rect, random_system, CKind, RandomSpec};
use crate::saddle::{check_negative_semidefinite, SaddleSystem, ValidationOptions};
use crate::stokes::{assemble, expected_dims, Method, StokesGridSpec};

/// Knobs shared by all suites.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub lanczos: LanczosOptions,
    /// Added to the largest eigenvalue returned by the dense oracle. Nonzero
    /// values exist to show that the suites can fail.
    pub oracle_perturbation: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 20_240_601,
            lanczos: LanczosOptions::default(),
            oracle_perturbation: 0.0,
        }
    }
}

impl SuiteConfig {
    pub fn with_seed(seed: u64) -> Self {
        SuiteConfig {
            seed,
            ..Default::default()
        }
    }

    fn rng(&self, tag: u64, index: usize) -> ChaCha8Rng {
        let mixed = self.seed
            ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15)
            ^ (index as u64).wrapping_mul(0xd1b5_4a32_d192_ed03);
        ChaCha8Rng::seed_from_u64(mixed)
    }

    /// Full ascending spectrum, with the configured perturbation applied.
    pub fn oracle(&self, m: &SymMatrix) -> Result<Vec<f64>> {
        let mut spec = dense_full_spectrum(m)?;
        if let Some(top) = spec.last_mut() {
            *top += self.oracle_perturbation;
        }
        Ok(spec)
    }
}

/// Outcome of one property over all of its instances.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// Informational audits never fail the suite.
    pub informational: bool,
    pub detail: String,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.informational || self.violations == 0
    }

    pub fn status(&self) -> &'static str {
        match (self.informational, self.violations) {
            (true, _) => "INFO",
            (false, 0) => "PASS",
            _ => "FAIL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(PropertyReport::passed)
    }

    pub fn get(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.properties {
            out.push_str(&format!(
                "{:<4} {:<34} checked {:>6}  violations {:>4}  {}\n",
                p.status(),
                p.name,
                p.checked,
                p.violations,
                p.detail
            ));
        }
        let failed = self.properties.iter().filter(|p| !p.passed()).count();
        out.push_str(&format!(
            "{} properties, {} failed\n",
            self.properties.len(),
            failed
        ));
        out
    }
}

/// Per-instance verdict: `Ok(None)` holds, `Ok(Some(msg))` is a violation,
/// `Err` is a computation failure and also counts as a violation.
type Check = Result<Option<String>>;

fn tally(name: &'static str, results: Vec<Check>) -> PropertyReport {
    let checked = results.len();
    let mut violations = 0;
    let mut first = None;
    for (i, r) in results.into_iter().enumerate() {
        let msg = match r {
            Ok(None) => continue,
            Ok(Some(msg)) => msg,
            Err(e) => format!("error: {e}"),
        };
        violations += 1;
        first.get_or_insert(format!("first at instance {i}: {msg}"));
    }
    PropertyReport {
        name,
        checked,
        violations,
        informational: false,
        detail: first.unwrap_or_default(),
    }
}

fn run_instances<F>(count: usize, f: F) -> Vec<Check>
where
    F: Fn(usize) -> Check + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

fn small_dims<R: Rng>(rng: &mut R, max_m: usize) -> (usize, usize) {
    let m = rng.random_range(1..=max_m);
    let n = rng.random_range(1..=m);
    (m, n)
}

fn random_rank<R: Rng>(rng: &mut R, n: usize) -> Option<usize> {
    if rng.random_bool(0.3) {
        Some(rng.random_range(0..n))
    } else {
        None
    }
}

fn unit_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nv > 1e-12 {
            return v.into_iter().map(|x| x / nv).collect();
        }
    }
}

fn spectrum_scale(spec: &[f64]) -> f64 {
    spec.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(f64::MIN_POSITIVE)
}

/// Systems satisfying `λ_min(A) + λ_min(C) ≥ 0` are quasi-PF, and strictly
/// so when the inequality is strict.
pub fn condition_implies_quasi_pf(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(1, i);
        let (m, n) = small_dims(&mut rng, 30);
        let c = if rng.random_bool(0.2) { CKind::Zero } else { CKind::ConditionHolds };
        let sys = random_system(&RandomSpec::new(m, n, c), &mut rng)?;
        let s = analyze(&sys, &cfg.lanczos)?;
        if !s.quasi_pf {
            return Ok(Some(format!("S = {:e} with condition {:e}", s.s, s.condition_value)));
        }
        let strict = s.condition_value > s.tie();
        if strict && !(s.quasi_pf_strict && s.lambda_max != -s.lambda_min) {
            return Ok(Some(format!("S = {:e} not strictly positive", s.s)));
        }
        Ok(None)
    });
    tally("condition_implies_quasi_pf", results)
}

/// With `C = 0` the property always holds strictly.
pub fn zero_c_strict(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(2, i);
        let (m, n) = small_dims(&mut rng, 30);
        let spec = RandomSpec {
            rank: random_rank(&mut rng, n),
            ..RandomSpec::new(m, n, CKind::Zero)
        };
        let sys = random_system(&spec, &mut rng)?;
        let s = analyze(&sys, &cfg.lanczos)?;
        Ok((!s.quasi_pf_strict).then(|| format!("S = {:e}", s.s)))
    });
    tally("zero_c_strict", results)
}

/// `λ_max(W) + λ_min(W) ≥ λ_min(A) + λ_min(C)` on arbitrary valid systems.
pub fn sum_lower_bound(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(3, i);
        let (m, n) = small_dims(&mut rng, 30);
        let c = [CKind::Zero, CKind::SemiNegative, CKind::ConditionHolds][rng.random_range(0..3)];
        let spec = RandomSpec {
            rank: random_rank(&mut rng, n),
            ..RandomSpec::new(m, n, c)
        };
        let sys = random_system(&spec, &mut rng)?;
        let check = SumBoundCheck::from_summary(&analyze(&sys, &cfg.lanczos)?);
        Ok((!check.holds).then(|| format!("lhs {:e} < rhs {:e}", check.lhs, check.rhs)))
    });
    tally("sum_lower_bound", results)
}

/// Quasi-PF from `S` agrees with `ρ(W)` being an eigenvalue of `W`.
pub fn radius_is_eigenvalue(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(4, i);
        let (m, n) = small_dims(&mut rng, 20);
        let sys = random_system(&RandomSpec::new(m, n, CKind::SemiNegative), &mut rng)?;
        let spec = cfg.oracle(&sys.assemble_w())?;
        let (lo, hi) = (spec[0], spec[spec.len() - 1]);
        let s = SpectralSummary::from_parts(hi, lo, 0.0, 0.0);
        let rho = spec_rho(&spec);
        let radius_attained = hi >= rho - s.tie();
        Ok((radius_attained != s.quasi_pf).then(|| format!("S = {:e}, ρ = {rho:e}, λ_max = {hi:e}", s.s)))
    });
    tally("radius_is_eigenvalue", results)
}

fn spec_rho(spec: &[f64]) -> f64 {
    spec.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// The closed-form spectrum of `[ηI B; Bᵀ 0]` matches the dense oracle.
pub fn eta_spectrum_matches_oracle(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(5, i);
        let (m, n) = small_dims(&mut rng, 20);
        let rank = if rng.random_bool(0.5) {
            Some(rng.random_range(0..=n))
        } else {
            None
        };
        let eta = 10f64.powf(rng.random_range(-2.0..=1.0));
        let b = random_rect(m, n, rank, &mut rng);
        let closed = explicit_spectrum_eta(eta, &b)?.eigenvalues();
        let sys = SaddleSystem::new(SymMatrix::identity(m).scaled(eta), b, None, &ValidationOptions::default())?;
        let dense = cfg.oracle(&sys.assemble_w())?;
        if closed.len() != dense.len() {
            return Ok(Some(format!("{} closed-form values vs {}", closed.len(), dense.len())));
        }
        let tol = 1e-10 * spectrum_scale(&dense).max(1.0);
        let worst = closed
            .iter()
            .zip(&dense)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        Ok((worst > tol).then(|| format!("max deviation {worst:e}")))
    });
    tally("eta_spectrum_matches_oracle", results)
}

fn containment(bounds: &SpectrumBounds, spec: &[f64]) -> Option<String> {
    let tol = TIE_TOL * spectrum_scale(spec).max(1.0);
    let bad = bounds.violations(spec, tol);
    (!bad.is_empty()).then(|| {
        format!(
            "{} eigenvalues outside neg [{:e}, {:e}] pos [{:e}, {:e}], e.g. {:e}",
            bad.len(),
            bounds.neg.lo,
            bounds.neg.hi,
            bounds.pos.lo,
            bounds.pos.hi,
            bad[0]
        )
    })
}

/// The enclosure for `C = 0`, full-rank `B` covers the whole spectrum.
pub fn rusten_winther_containment(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(6, i);
        let (m, n) = small_dims(&mut rng, 25);
        let sys = random_system(&RandomSpec::new(m, n, CKind::Zero), &mut rng)?;
        let bounds = rusten_winther_bounds(&sys, &cfg.lanczos)?;
        Ok(containment(&bounds, &cfg.oracle(&sys.assemble_w())?))
    });
    tally("rusten_winther_containment", results)
}

/// Draws systems until `BᵀB - C` is positive definite; returns the system
/// and its bounds.
fn qualifying_sw<R: Rng>(
    rng: &mut R,
    variant: Variant,
    opts: &LanczosOptions,
) -> Result<(SaddleSystem, SpectrumBounds)> {
    for _ in 0..100 {
        let (m, n) = small_dims(rng, 25);
        let spec = RandomSpec {
            rank: random_rank(rng, n),
            ..RandomSpec::new(m, n, CKind::SemiNegative)
        };
        let sys = random_system(&spec, rng)?;
        match silvester_wathen_bounds(&sys, variant, opts) {
            Ok(b) => return Ok((sys, b)),
            Err(Error::HypothesisViolated { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InvalidArgument("no qualifying instance in 100 draws".into()))
}

/// The corrected enclosure for general `C` covers the whole spectrum.
pub fn silvester_wathen_containment(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(7, i);
        let (sys, bounds) = qualifying_sw(&mut rng, Variant::Corrected, &cfg.lanczos)?;
        Ok(containment(&bounds, &cfg.oracle(&sys.assemble_w())?))
    });
    tally("silvester_wathen_containment", results)
}

/// The 4x4 system on which the as-printed enclosure misses `-1`.
pub fn as_printed_counterexample() -> SaddleSystem {
    let a = SymMatrix::identity(2);
    let b = RectMatrix::from_dense(2, 2, &[1.0, 0.0, 0.0, 0.0]).expect("2x2");
    let c = SymMatrix::from_diagonal(&[0.0, -1.0]);
    SaddleSystem::new(a, b, Some(c), &ValidationOptions::default()).expect("valid system")
}

/// Counts instances the as-printed enclosure fails to cover, starting with
/// the 4x4 counterexample. Never fails the suite.
pub fn as_printed_audit(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let counter = as_printed_counterexample();
    let first: Check = (|| {
        let b = silvester_wathen_bounds(&counter, Variant::AsPrinted, &cfg.lanczos)?;
        Ok(containment(&b, &cfg.oracle(&counter.assemble_w())?))
    })();
    let mut results = vec![first];
    results.extend(run_instances(count, |i| {
        let mut rng = cfg.rng(8, i);
        let (sys, bounds) = qualifying_sw(&mut rng, Variant::AsPrinted, &cfg.lanczos)?;
        Ok(containment(&bounds, &cfg.oracle(&sys.assemble_w())?))
    }));
    let counter_missed = matches!(results[0], Ok(Some(_)));
    let mut report = tally("as_printed_audit", results);
    report.informational = true;
    report.detail = format!(
        "4x4 counterexample {}; {}",
        if counter_missed { "not contained" } else { "contained" },
        report.detail
    );
    report
}

/// The constructed maximizer attains `σ_max/2` with the `√2/2` split.
pub fn bilinear_maximizer(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(9, i);
        let m = rng.random_range(1..=12);
        let n = rng.random_range(1..=12);
        let b = random_rect(m, n, None, &mut rng);
        let ext = bilinear_extremum(&b, &cfg.lanczos)?;
        let sigma = singular_values(&b)?[0];
        let by = b.matvec(&ext.y_star)?;
        let value: f64 = ext.x_star.iter().zip(&by).map(|(a, b)| a * b).sum();
        let nx = ext.x_star.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ny = ext.y_star.iter().map(|v| v * v).sum::<f64>().sqrt();
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let tol = 1e-10 * sigma.max(1.0);
        if (value - sigma / 2.0).abs() > tol || (ext.max_value - sigma / 2.0).abs() > tol {
            return Ok(Some(format!("value {value:e} vs σ/2 = {:e}", sigma / 2.0)));
        }
        if (nx - half).abs() > 1e-10 || (ny - half).abs() > 1e-10 {
            return Ok(Some(format!("norms {nx} and {ny}")));
        }
        Ok(None)
    });
    tally("bilinear_maximizer", results)
}

/// Random points of the unit sphere never beat `σ_max/2` in either direction.
pub fn bilinear_sampling(cfg: &SuiteConfig, samples: usize) -> PropertyReport {
    let mut rng = cfg.rng(10, 0);
    let b = random_rect(8, 3, None, &mut rng);
    let ext = match bilinear_extremum(&b, &cfg.lanczos) {
        Ok(e) => e,
        Err(e) => return tally("bilinear_sampling", vec![Err(e)]),
    };
    let chunks = 16;
    let per = samples.div_ceil(chunks);
    let results: Vec<Check> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = cfg.rng(10, k + 1);
            let mut worst = 0.0f64;
            for _ in 0..per.min(samples.saturating_sub(k * per)) {
                let z = unit_vector(&mut rng, 11);
                let by = b.matvec(&z[8..])?;
                let v: f64 = z[..8].iter().zip(&by).map(|(a, b)| a * b).sum();
                worst = worst.max(v.abs());
            }
            Ok((worst > ext.max_value + 1e-12).then(|| format!("sample reached {worst:e}")))
        })
        .collect();
    let mut report = tally("bilinear_sampling", results);
    report.checked = samples;
    report
}

/// `n_pos = m` and `n_zero + n_neg = n` for every valid system.
pub fn inertia_split(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(11, i);
        let (m, n) = small_dims(&mut rng, 30);
        let c = [CKind::Zero, CKind::SemiNegative, CKind::ConditionHolds][rng.random_range(0..3)];
        let spec = RandomSpec {
            rank: random_rank(&mut rng, n),
            ..RandomSpec::new(m, n, c)
        };
        let sys = random_system(&spec, &mut rng)?;
        let inertia = sys.inertia()?;
        let ok = inertia.positive == m && inertia.zero + inertia.negative == n;
        Ok((!ok).then(|| format!("{inertia:?} for m = {m}, n = {n}")))
    });
    tally("inertia_split", results)
}

/// `F(x, y)` agrees with `zᵀWz` and stays within the Rayleigh bounds.
pub fn quadratic_form_rayleigh(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(12, i);
        let (m, n) = small_dims(&mut rng, 20);
        let sys = random_system(&RandomSpec::new(m, n, CKind::SemiNegative), &mut rng)?;
        let w = sys.assemble_w();
        let spec = cfg.oracle(&w)?;
        let scale = spectrum_scale(&spec);
        let z = unit_vector(&mut rng, m + n);
        let f = sys.quadratic_form(&z[..m], &z[m..])?;
        let wz = w.matvec(&z)?;
        let direct: f64 = z.iter().zip(&wz).map(|(a, b)| a * b).sum();
        if (f - direct).abs() > 1e-12 * scale.max(1.0) {
            return Ok(Some(format!("F = {f:e} vs zᵀWz = {direct:e}")));
        }
        let slack = 1e-12 * scale.max(1.0);
        let inside = spec[0] - slack <= f && f <= spec[spec.len() - 1] + slack;
        Ok((!inside).then(|| format!("F = {f:e} outside [{:e}, {:e}]", spec[0], spec[spec.len() - 1])))
    });
    tally("quadratic_form_rayleigh", results)
}

fn random_symmetric<R: Rng>(rng: &mut R, order: usize) -> SymMatrix {
    let density = rng.random_range(0.05..=1.0);
    let mut t = Vec::new();
    for i in 0..order {
        for j in i..order {
            if i == j || rng.random_bool(density) {
                t.push((i, j, rng.sample::<f64, _>(StandardNormal)));
            }
        }
    }
    SymMatrix::from_triplets(order, t).expect("indices in range")
}

/// Krylov extremes agree with the dense oracle on matrices of order ≤ 200
/// and on Stokes systems of order at most `stokes_max_order`.
pub fn solver_cross_validation(cfg: &SuiteConfig, count: usize, stokes_max_order: usize) -> PropertyReport {
    let mut results = run_instances(count, |i| {
        let mut rng = cfg.rng(13, i);
        let m = if rng.random_bool(0.5) {
            let order = rng.random_range(1..=200);
            random_symmetric(&mut rng, order)
        } else {
            let (m, n) = small_dims(&mut rng, 120);
            random_system(&RandomSpec::new(m, n, CKind::SemiNegative), &mut rng)?.assemble_w()
        };
        compare_extremes(cfg, &m)
    });
    let stokes: Vec<(Method, usize)> = [(Method::P1P0, 2), (Method::P1P0, 4), (Method::P1P0, 7)]
        .into_iter()
        .chain([(Method::Q1P0Stab, 4), (Method::Q1P0Stab, 8), (Method::Q1P0Stab, 13)])
        .collect();
    let cases: Vec<(Method, usize, f64)> = stokes
        .iter()
        .filter(|&&(method, ne)| {
            let (m, n) = expected_dims(&StokesGridSpec::new(method, ne, 1.0));
            m + n <= stokes_max_order
        })
        .flat_map(|&(method, ne)| [0.01, 1.0, 10.0].map(|tau| (method, ne, tau)))
        .collect();
    results.extend(cases.par_iter().map(|&(method, ne, tau)| {
        let sys = assemble(&StokesGridSpec::new(method, ne, tau))?;
        compare_extremes(cfg, &sys.system.assemble_w())
    }).collect::<Vec<_>>());
    tally("solver_cross_validation", results)
}

fn compare_extremes(cfg: &SuiteConfig, m: &SymMatrix) -> Check {
    let spec = cfg.oracle(m)?;
    let scale = spectrum_scale(&spec);
    let lo = extremal_eig(m, Which::Smallest, cfg.lanczos.tol, cfg.lanczos.max_iter)?.value;
    let hi = extremal_eig(m, Which::Largest, cfg.lanczos.tol, cfg.lanczos.max_iter)?.value;
    let err = (lo - spec[0]).abs().max((hi - spec[spec.len() - 1]).abs());
    Ok((err > 1e-8 * scale).then(|| format!("order {}: deviation {err:e} at scale {scale:e}", m.order())))
}

/// Eigenvalue sum equals the trace and sum of squares equals `‖M‖_F²`.
pub fn oracle_trace_identities(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(14, i);
        let order = rng.random_range(1..=80);
        let m = random_symmetric(&mut rng, order);
        let spec = cfg.oracle(&m)?;
        let f = m.frobenius_norm();
        let tol = 1e-10 * f.max(f64::MIN_POSITIVE);
        let sum: f64 = spec.iter().sum();
        let sq: f64 = spec.iter().map(|v| v * v).sum();
        if (sum - m.trace()).abs() > tol {
            return Ok(Some(format!("sum {sum:e} vs trace {:e}", m.trace())));
        }
        Ok(((sq - f * f).abs() > tol * f.max(1.0)).then(|| format!("squares {sq:e} vs {:e}", f * f)))
    });
    tally("oracle_trace_identities", results)
}

/// Nonzero singular values of `B` and `Bᵀ` coincide.
pub fn singular_values_transpose(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(15, i);
        let m = rng.random_range(1..=50);
        let n = rng.random_range(1..=30);
        let rank = random_rank(&mut rng, m.min(n));
        let b = random_rect(m, n, rank, &mut rng);
        let s = singular_values(&b)?;
        let t = singular_values(&b.transpose())?;
        let (rs, rt) = (numerical_rank(&s), numerical_rank(&t));
        if rs != rt {
            return Ok(Some(format!("ranks {rs} and {rt}")));
        }
        let tol = 1e-10 * s.first().copied().unwrap_or(0.0).max(1.0);
        let worst = s[..rs].iter().zip(&t[..rt]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok((worst > tol).then(|| format!("deviation {worst:e}")))
    });
    tally("singular_values_transpose", results)
}

/// Repeated products are bit-identical.
pub fn matvec_determinism(cfg: &SuiteConfig, count: usize) -> PropertyReport {
    let results = run_instances(count, |i| {
        let mut rng = cfg.rng(16, i);
        let order = rng.random_range(1..=150);
        let m = random_symmetric(&mut rng, order);
        let x: Vec<f64> = (0..order).map(|_| rng.sample(StandardNormal)).collect();
        let b = random_rect(order, rng.random_range(1..=order), None, &mut rng);
        let same = m.matvec(&x)?.iter().zip(&m.matvec(&x)?).all(|(a, b)| a.to_bits() == b.to_bits())
            && b.matvec_transpose(&x)?.iter().zip(&b.matvec_transpose(&x)?).all(|(a, b)| a.to_bits() == b.to_bits());
        Ok((!same).then(|| "products differ between calls".to_string()))
    });
    tally("matvec_determinism", results)
}

/// Sizes, τ-scaling, definiteness and rank facts of the small Stokes grids.
pub fn stokes_structure(cfg: &SuiteConfig) -> PropertyReport {
    let cases: Vec<(Method, usize)> = (2..=8)
        .flat_map(|ne| [(Method::P1P0, ne), (Method::Q1P0Stab, ne)])
        .collect();
    let results: Vec<Check> = cases
        .par_iter()
        .map(|&(method, ne)| {
            let base = StokesGridSpec {
                allow_m_lt_n: true,
                ..StokesGridSpec::new(method, ne, 1.0)
            };
            let one = assemble(&base)?;
            let scaled = assemble(&StokesGridSpec { tau: 7.5, ..base })?;
            let sys = &one.system;
            if (sys.m(), sys.n()) != expected_dims(&base) {
                return Ok(Some(format!("{method} ne={ne}: dims {}x{}", sys.m(), sys.n())));
            }
            let a_scaled = sys.a().entries().all(|(i, j, v)| (scaled.system.a().get(i, j) - 7.5 * v).abs() <= 1e-14 * v.abs().max(1.0));
            if !a_scaled || scaled.system.b() != sys.b() || scaled.system.c() != sys.c() {
                return Ok(Some(format!("{method} ne={ne}: τ enters outside A")));
            }
            if let Some(c) = sys.c() {
                let top = *cfg.oracle(c)?.last().unwrap();
                if top > 1e-12 || check_negative_semidefinite(c, 1e-10).is_err() {
                    return Ok(Some(format!("{method} ne={ne}: λ_max(C) = {top:e}")));
                }
            }
            let w = sys.assemble_w();
            let symmetric = w.entries().all(|(i, j, v)| w.get(j, i) == v);
            if !symmetric {
                return Ok(Some(format!("{method} ne={ne}: W not symmetric")));
            }
            if method == Method::P1P0 {
                let sv = singular_values(sys.b())?;
                if numerical_rank(&sv) != sys.n() {
                    return Ok(Some(format!("{method} ne={ne}: B rank deficient")));
                }
            }
            Ok(None)
        })
        .collect();
    tally("stokes_structure", results)
}

/// Instance counts for each suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteSizes {
    pub condition: usize,
    pub zero_c: usize,
    pub sum_bound: usize,
    pub radius: usize,
    pub eta: usize,
    pub rusten_winther: usize,
    pub silvester_wathen: usize,
    pub as_printed: usize,
    pub bilinear: usize,
    pub bilinear_samples: usize,
    pub inertia: usize,
    pub quadratic_form: usize,
    pub cross_validation: usize,
    /// Largest Stokes system included in the cross-validation.
    pub cross_validation_stokes_order: usize,
    pub trace: usize,
    pub singular: usize,
    pub matvec: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        SuiteSizes {
            condition: 500,
            zero_c: 500,
            sum_bound: 500,
            radius: 200,
            eta: 100,
            rusten_winther: 200,
            silvester_wathen: 200,
            as_printed: 200,
            bilinear: 100,
            bilinear_samples: 100_000,
            inertia: 200,
            quadratic_form: 200,
            cross_validation: 100,
            cross_validation_stokes_order: 500,
            trace: 100,
            singular: 100,
            matvec: 50,
        }
    }
}

pub fn run_all(cfg: &SuiteConfig, sizes: &SuiteSizes) -> SuiteReport {
    SuiteReport {
        properties: vec![
            condition_implies_quasi_pf(cfg, sizes.condition),
            zero_c_strict(cfg, sizes.zero_c),
            sum_lower_bound(cfg, sizes.sum_bound),
            radius_is_eigenvalue(cfg, sizes.radius),
            eta_spectrum_matches_oracle(cfg, sizes.eta),
            rusten_winther_containment(cfg, sizes.rusten_winther),
            silvester_wathen_containment(cfg, sizes.silvester_wathen),
            as_printed_audit(cfg, sizes.as_printed),
            bilinear_maximizer(cfg, sizes.bilinear),
            bilinear_sampling(cfg, sizes.bilinear_samples),
            inertia_split(cfg, sizes.inertia),
            quadratic_form_rayleigh(cfg, sizes.quadratic_form),
            solver_cross_validation(cfg, sizes.cross_validation, sizes.cross_validation_stokes_order),
            oracle_trace_identities(cfg, sizes.trace),
            singular_values_transpose(cfg, sizes.singular),
            matvec_determinism(cfg, sizes.matvec),
            stokes_structure(cfg),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SuiteSizes {
        SuiteSizes {
            condition: 20,
            zero_c: 20,
            sum_bound: 20,
            radius: 10,
            eta: 10,
            rusten_winther: 10,
            silvester_wathen: 10,
            as_printed: 10,
            bilinear: 10,
            bilinear_samples: 2000,
            inertia: 10,
            quadratic_form: 10,
            cross_validation: 5,
            cross_validation_stokes_order: 200,
            trace: 10,
            singular: 10,
            matvec: 5,
        }
    }

    #[test]
    fn small_run_passes() {
        let report = run_all(&SuiteConfig::default(), &tiny());
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = SuiteConfig::with_seed(7);
        let a = sum_lower_bound(&cfg, 15);
        let b = sum_lower_bound(&cfg, 15);
        assert_eq!(a, b);
    }

    #[test]
    fn audit_flags_counterexample() {
        let r = as_printed_audit(&SuiteConfig::default(), 3);
        assert!(r.informational && r.passed());
        assert!(r.detail.starts_with("4x4 counterexample not contained"), "{}", r.detail);
        assert!(r.violations >= 1);
    }

    #[test]
    fn perturbed_oracle_is_caught() {
        let cfg = SuiteConfig {
            oracle_perturbation: 1e-3,
            ..Default::default()
        };
        assert!(!eta_spectrum_matches_oracle(&cfg, 5).passed());
        assert!(!oracle_trace_identities(&cfg, 5).passed());
    }

    #[test]
    fn report_text_lists_status() {
        let r = PropertyReport {
            name: "x",
            checked: 3,
            violations: 1,
            informational: false,
            detail: "boom".into(),
        };
        let text = SuiteReport { properties: vec![r] }.to_text();
        assert!(text.starts_with("FAIL x"));
        assert!(text.ends_with("1 properties, 1 failed\n"));
    }
}
