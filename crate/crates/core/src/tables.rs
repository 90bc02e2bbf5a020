//! Extremal spectra of the two Stokes families over the reference grid and
//! viscosity sweeps, compared against published reference values.
//!
//! Only the Krylov solver is used, so the largest grids (order about 10⁴)
//! never touch the dense oracle. Rows at or above [`TableOptions::relaxed_order`]
//! run with a looser tolerance and a larger iteration budget. A row whose
//! solver exhausts its budget keeps the best iterate and is flagged as
//! unconverged instead of being dropped.

use rayon::prelude::*;

use crate::bounds::{csv_field, num, SpectralSummary};
use crate::error::{Error, Result};
use crate::linalg::{extremal_eig_op, LanczosOptions, SymMatrix, Which};
use crate::stokes::{assemble, Method, StokesGridSpec};

/// One published row of the P1-P0 sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Ref {
    pub ne: usize,
    pub m: usize,
    pub n: usize,
    pub tau: f64,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub s: f64,
}

/// One published row of the stabilized Q1-P0 sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table2Ref {
    pub ne: usize,
    pub m: usize,
    pub n: usize,
    pub tau: f64,
    pub lambda_min_a: f64,
    pub lambda_min_c: f64,
    pub lambda_max: f64,
    pub lambda_min: f64,
    pub sign: char,
}

const fn t1(ne: usize, m: usize, n: usize, tau: f64, lambda_max: f64, lambda_min: f64, s: f64) -> Table1Ref {
    Table1Ref { ne, m, n, tau, lambda_max, lambda_min, s }
}

#[allow(clippy::too_many_arguments)]
const fn t2(
    ne: usize,
    m: usize,
    n: usize,
    tau: f64,
    lambda_min_a: f64,
    lambda_min_c: f64,
    lambda_max: f64,
    lambda_min: f64,
    sign: char,
) -> Table2Ref {
    Table2Ref { ne, m, n, tau, lambda_min_a, lambda_min_c, lambda_max, lambda_min, sign }
}

/// Published P1-P0 extremes, eight decimals as printed.
pub const TABLE1: [Table1Ref; 16] = [
    t1(4, 98, 31, 0.01, 1.05196296, -1.01134827, 0.04061469),
    t1(4, 98, 31, 0.1, 1.26859883, -0.85462817, 0.41397066),
    t1(4, 98, 31, 1.0, 7.70326732, -0.28324435, 7.42002296),
    t1(4, 98, 31, 10.0, 76.95595469, -0.03142832, 76.92452637),
    t1(8, 450, 127, 0.01, 1.02820054, -0.98803749, 0.04016306),
    t1(8, 450, 127, 0.1, 1.24330881, -0.83351936, 0.40978945),
    t1(8, 450, 127, 1.0, 7.92507966, -0.27501021, 7.65006945),
    t1(8, 450, 127, 10.0, 79.23160501, -0.03050241, 79.20110260),
    t1(16, 1922, 511, 0.01, 1.02227690, -0.98222993, 0.04004697),
    t1(16, 1922, 511, 0.1, 1.23699045, -0.82827314, 0.40871731),
    t1(16, 1922, 511, 1.0, 7.98122610, -0.27297216, 7.70825394),
    t1(16, 1922, 511, 10.0, 79.80743778, -0.03027091, 79.77716688),
    t1(32, 7938, 2047, 0.01, 1.02079719, -0.98077944, 0.04001776),
    t1(32, 7938, 2047, 0.1, 1.23541129, -0.82696361, 0.40844768),
    t1(32, 7938, 2047, 1.0, 7.99530382, -0.27246396, 7.72283987),
    t1(32, 7938, 2047, 10.0, 79.95183045, -0.03021301, 79.92161743),
];

/// Published stabilized Q1-P0 values; extremes to six decimals as printed.
pub const TABLE2: [Table2Ref; 18] = [
    t2(8, 98, 63, 0.01, 0.002968, -0.120235, 0.233826, -0.257780, '-'),
    t2(8, 98, 63, 0.1, 0.029676, -0.120235, 0.486079, -0.167876, '+'),
    t2(8, 98, 63, 1.0, 0.296756, -0.120235, 3.819638, -0.121470, '+'),
    t2(8, 98, 63, 10.0, 2.967561, -0.120235, 38.048896, -0.120354, '+'),
    t2(16, 450, 255, 1e-3, 0.000076, -0.030950, 0.118361, -0.130019, '-'),
    t2(16, 450, 255, 0.01, 0.000764, -0.030950, 0.138775, -0.114891, '+'),
    t2(16, 450, 255, 0.1, 0.007637, -0.030950, 0.429370, -0.050061, '+'),
    t2(16, 450, 255, 1.0, 0.076367, -0.030950, 3.953115, -0.031047, '+'),
    t2(32, 1922, 1023, 1e-4, 0.000002, -0.007794, 0.060633, -0.064140, '-'),
    t2(32, 1922, 1023, 1e-3, 0.000019, -0.007794, 0.062515, -0.062434, '+'),
    t2(32, 1922, 1023, 0.01, 0.000192, -0.007794, 0.084063, -0.048097, '+'),
    t2(32, 1922, 1023, 0.1, 0.001923, -0.007794, 0.408153, -0.013340, '+'),
    t2(32, 1922, 1023, 1.0, 0.019230, -0.007794, 3.988164, -0.007800, '+'),
    t2(64, 7938, 4095, 1e-4, 4.816e-07, -0.001952, 0.030950, -0.031527, '-'),
    t2(64, 7938, 4095, 1e-3, 0.000005, -0.001952, 0.032840, -0.029820, '+'),
    t2(64, 7938, 4095, 0.01, 0.000048, -0.001952, 0.056839, -0.017847, '+'),
    t2(64, 7938, 4095, 0.1, 0.000482, -0.001952, 0.402099, -0.003396, '+'),
    t2(64, 7938, 4095, 1.0, 0.004816, -0.001952, 3.997034, -0.001952, '+'),
];

/// Solver settings and optional row filters.
#[derive(Debug, Clone, PartialEq)]
pub struct TableOptions {
    pub lanczos: LanczosOptions,
    /// Systems of at least this order use the relaxed settings below.
    pub relaxed_order: usize,
    pub relaxed_tol: f64,
    pub relaxed_max_iter: usize,
    /// Keep only rows with these grid sizes (empty keeps all).
    pub ne: Vec<usize>,
    /// Keep only rows with these viscosities (empty keeps all).
    pub tau: Vec<f64>,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            lanczos: LanczosOptions::default(),
            relaxed_order: 5000,
            relaxed_tol: 1e-8,
            relaxed_max_iter: 20_000,
            ne: Vec::new(),
            tau: Vec::new(),
        }
    }
}

impl TableOptions {
    fn selects(&self, ne: usize, tau: f64) -> bool {
        (self.ne.is_empty() || self.ne.contains(&ne))
            && (self.tau.is_empty() || self.tau.iter().any(|&t| (t - tau).abs() <= 1e-12 * tau.abs()))
    }

    /// The settings a system of the given order is solved with.
    pub fn solver_for(&self, order: usize) -> LanczosOptions {
        if order >= self.relaxed_order {
            LanczosOptions {
                tol: self.lanczos.tol.max(self.relaxed_tol),
                max_iter: self.lanczos.max_iter.max(self.relaxed_max_iter),
                ..self.lanczos.clone()
            }
        } else {
            self.lanczos.clone()
        }
    }
}

/// An extreme eigenvalue with its convergence status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extreme {
    pub value: f64,
    pub residual: f64,
    pub converged: bool,
}

/// Runs the Krylov solver, keeping the best iterate on budget exhaustion.
pub fn extreme(m: &SymMatrix, which: Which, opts: &LanczosOptions) -> Result<Extreme> {
    match extremal_eig_op(m, which, opts) {
        Ok(p) => Ok(Extreme {
            value: p.value,
            residual: p.residual,
            converged: true,
        }),
        Err(Error::NotConverged { best, residual, .. }) => Ok(Extreme {
            value: best,
            residual,
            converged: false,
        }),
        Err(e) => Err(e),
    }
}

fn convergence_note(labels: &[(&str, &Extreme)]) -> String {
    labels
        .iter()
        .filter(|(_, e)| !e.converged)
        .map(|(name, e)| format!("{name} unconverged (residual {:.2e})", e.residual))
        .collect::<Vec<_>>()
        .join("; ")
}

fn rel_dev(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Values {
    pub m: usize,
    pub n: usize,
    pub lambda_max: Extreme,
    pub lambda_min: Extreme,
    pub summary: SpectralSummary,
}

impl Table1Values {
    pub fn converged(&self) -> bool {
        self.lambda_max.converged && self.lambda_min.converged
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub reference: Table1Ref,
    /// The computed values, or the message of the error that stopped the row.
    pub result: std::result::Result<Table1Values, String>,
}

impl Table1Row {
    /// `S(W) > 0` beyond the tie tolerance.
    pub fn positive(&self) -> bool {
        self.result.as_ref().is_ok_and(|v| v.summary.quasi_pf_strict)
    }

    pub fn dev_lambda_max(&self) -> Option<f64> {
        let v = self.result.as_ref().ok()?;
        Some(rel_dev(v.lambda_max.value, self.reference.lambda_max))
    }

    pub fn dev_lambda_min(&self) -> Option<f64> {
        let v = self.result.as_ref().ok()?;
        Some(rel_dev(v.lambda_min.value, self.reference.lambda_min))
    }

    pub fn dev_s(&self) -> Option<f64> {
        let v = self.result.as_ref().ok()?;
        Some(rel_dev(v.summary.s, self.reference.s))
    }
}

fn table1_row(r: &Table1Ref, opts: &TableOptions) -> Result<Table1Values> {
    let sys = assemble(&StokesGridSpec::new(Method::P1P0, r.ne, r.tau))?;
    let w = sys.system.assemble_w();
    let solver = opts.solver_for(w.order());
    let lambda_max = extreme(&w, Which::Largest, &solver)?;
    let lambda_min = extreme(&w, Which::Smallest, &solver)?;
    Ok(Table1Values {
        m: sys.system.m(),
        n: sys.system.n(),
        summary: SpectralSummary::from_parts(lambda_max.value, lambda_min.value, 0.0, 0.0),
        lambda_max,
        lambda_min,
    })
}

/// Computes the selected P1-P0 rows in reference order.
pub fn compute_table1(opts: &TableOptions) -> Vec<Table1Row> {
    let refs: Vec<Table1Ref> = TABLE1.iter().copied().filter(|r| opts.selects(r.ne, r.tau)).collect();
    refs.par_iter()
        .map(|r| Table1Row {
            reference: *r,
            result: table1_row(r, opts).map_err(|e| e.to_string()),
        })
        .collect()
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub const TABLE1_HEADER: &str = "m,n,tau,lambda_max_W,lambda_min_W,S,positive_S,\
ref_lambda_max_W,ref_lambda_min_W,ref_S,rel_dev_lambda_max,rel_dev_lambda_min,rel_dev_S,converged,note";

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from(TABLE1_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.reference;
        let (m, n) = row.result.as_ref().map(|v| (v.m, v.n)).unwrap_or((r.m, r.n));
        let v = row.result.as_ref().ok();
        let note = match &row.result {
            Ok(v) => convergence_note(&[("lambda_max", &v.lambda_max), ("lambda_min", &v.lambda_min)]),
            Err(e) => e.clone(),
        };
        let fields = [
            m.to_string(),
            n.to_string(),
            num(r.tau),
            opt(v.map(|v| v.lambda_max.value)),
            opt(v.map(|v| v.lambda_min.value)),
            opt(v.map(|v| v.summary.s)),
            if row.positive() { "PASS" } else { "FAIL" }.to_string(),
            num(r.lambda_max),
            num(r.lambda_min),
            num(r.s),
            opt(row.dev_lambda_max()),
            opt(row.dev_lambda_min()),
            opt(row.dev_s()),
            v.is_some_and(Table1Values::converged).to_string(),
            note,
        ];
        out.push_str(&fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn table1_text(rows: &[Table1Row]) -> String {
    let mut out = format!(
        "{:>5} {:>5} {:>6} {:>14} {:>14} {:>14} {:>5} {:>9} {:>9}\n",
        "m", "n", "tau", "lambda_max(W)", "lambda_min(W)", "S(W)", "S>0", "dev_max", "dev_min"
    );
    for row in rows {
        let r = &row.reference;
        match &row.result {
            Ok(v) => out.push_str(&format!(
                "{:>5} {:>5} {:>6} {:>14.8} {:>14.8} {:>14.8} {:>5} {:>9.2e} {:>9.2e}{}\n",
                v.m,
                v.n,
                r.tau,
                v.lambda_max.value,
                v.lambda_min.value,
                v.summary.s,
                if row.positive() { "PASS" } else { "FAIL" },
                row.dev_lambda_max().unwrap_or(f64::NAN),
                row.dev_lambda_min().unwrap_or(f64::NAN),
                if v.converged() { "" } else { "  (unconverged)" }
            )),
            Err(e) => out.push_str(&format!("{:>5} {:>5} {:>6} error: {e}\n", r.m, r.n, r.tau)),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table2Values {
    pub m: usize,
    pub n: usize,
    pub lambda_min_a: Extreme,
    pub lambda_min_c: Extreme,
    pub lambda_max: Extreme,
    pub lambda_min: Extreme,
    pub summary: SpectralSummary,
}

impl Table2Values {
    pub fn converged(&self) -> bool {
        [self.lambda_min_a, self.lambda_min_c, self.lambda_max, self.lambda_min]
            .iter()
            .all(|e| e.converged)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table2Row {
    pub reference: Table2Ref,
    pub result: std::result::Result<Table2Values, String>,
}

impl Table2Row {
    pub fn sign(&self) -> Option<char> {
        self.result.as_ref().ok().map(|v| v.summary.sign())
    }

    pub fn sign_matches(&self) -> bool {
        self.sign() == Some(self.reference.sign)
    }

    /// The sufficient condition fails yet `S(W) > 0`.
    pub fn unexpected(&self) -> bool {
        self.result
            .as_ref()
            .is_ok_and(|v| v.summary.condition_value < 0.0 && v.summary.sign() == '+')
    }

    pub fn dev_lambda_min_c(&self) -> Option<f64> {
        let v = self.result.as_ref().ok()?;
        Some((v.lambda_min_c.value - self.reference.lambda_min_c).abs())
    }

    pub fn dev_lambda_max(&self) -> Option<f64> {
        let v = self.result.as_ref().ok()?;
        Some(rel_dev(v.lambda_max.value, self.reference.lambda_max))
    }

    pub fn dev_lambda_min(&self) -> Option<f64> {
        let v = self.result.as_ref().ok()?;
        Some(rel_dev(v.lambda_min.value, self.reference.lambda_min))
    }
}

fn table2_row(r: &Table2Ref, opts: &TableOptions) -> Result<Table2Values> {
    let sys = assemble(&StokesGridSpec::new(Method::Q1P0Stab, r.ne, r.tau))?;
    let s = &sys.system;
    let w = s.assemble_w();
    let solver = opts.solver_for(w.order());
    let lambda_max = extreme(&w, Which::Largest, &solver)?;
    let lambda_min = extreme(&w, Which::Smallest, &solver)?;
    let lambda_min_a = extreme(s.a(), Which::Smallest, &solver)?;
    let lambda_min_c = match s.c() {
        Some(c) => extreme(c, Which::Smallest, &solver)?,
        None => Extreme {
            value: 0.0,
            residual: 0.0,
            converged: true,
        },
    };
    Ok(Table2Values {
        m: s.m(),
        n: s.n(),
        summary: SpectralSummary::from_parts(
            lambda_max.value,
            lambda_min.value,
            lambda_min_a.value,
            lambda_min_c.value,
        ),
        lambda_min_a,
        lambda_min_c,
        lambda_max,
        lambda_min,
    })
}

/// Computes the selected stabilized Q1-P0 rows in reference order.
pub fn compute_table2(opts: &TableOptions) -> Vec<Table2Row> {
    let refs: Vec<Table2Ref> = TABLE2.iter().copied().filter(|r| opts.selects(r.ne, r.tau)).collect();
    refs.par_iter()
        .map(|r| Table2Row {
            reference: *r,
            result: table2_row(r, opts).map_err(|e| e.to_string()),
        })
        .collect()
}

pub const TABLE2_HEADER: &str = "m,n,tau,lambda_min_A,lambda_min_C,lambda_max_W,lambda_min_W,S,sign,\
ref_sign,sign_match,condition_value,unexpected,ref_lambda_min_A,ref_lambda_min_C,ref_lambda_max_W,\
ref_lambda_min_W,abs_dev_lambda_min_C,rel_dev_lambda_max,rel_dev_lambda_min,converged,note";

pub fn table2_csv(rows: &[Table2Row]) -> String {
    let mut out = String::from(TABLE2_HEADER);
    out.push('\n');
    for row in rows {
        let r = &row.reference;
        let (m, n) = row.result.as_ref().map(|v| (v.m, v.n)).unwrap_or((r.m, r.n));
        let v = row.result.as_ref().ok();
        let note = match &row.result {
            Ok(v) => convergence_note(&[
                ("lambda_min_A", &v.lambda_min_a),
                ("lambda_min_C", &v.lambda_min_c),
                ("lambda_max", &v.lambda_max),
                ("lambda_min", &v.lambda_min),
            ]),
            Err(e) => e.clone(),
        };
        let fields = [
            m.to_string(),
            n.to_string(),
            num(r.tau),
            opt(v.map(|v| v.lambda_min_a.value)),
            opt(v.map(|v| v.lambda_min_c.value)),
            opt(v.map(|v| v.lambda_max.value)),
            opt(v.map(|v| v.lambda_min.value)),
            opt(v.map(|v| v.summary.s)),
            row.sign().map(String::from).unwrap_or_default(),
            r.sign.to_string(),
            row.sign_matches().to_string(),
            opt(v.map(|v| v.summary.condition_value)),
            row.unexpected().to_string(),
            num(r.lambda_min_a),
            num(r.lambda_min_c),
            num(r.lambda_max),
            num(r.lambda_min),
            opt(row.dev_lambda_min_c()),
            opt(row.dev_lambda_max()),
            opt(row.dev_lambda_min()),
            v.is_some_and(Table2Values::converged).to_string(),
            note,
        ];
        out.push_str(&fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn table2_text(rows: &[Table2Row]) -> String {
    let mut out = format!(
        "{:>5} {:>5} {:>7} {:>11} {:>11} {:>11} {:>11} {:>4} {:>4} {:>10}\n",
        "m", "n", "tau", "lmin(A)", "lmin(C)", "lmax(W)", "lmin(W)", "S", "ref", "unexpected"
    );
    for row in rows {
        let r = &row.reference;
        match &row.result {
            Ok(v) => out.push_str(&format!(
                "{:>5} {:>5} {:>7} {:>11.6} {:>11.6} {:>11.6} {:>11.6} {:>4} {:>4} {:>10}{}\n",
                v.m,
                v.n,
                r.tau,
                v.lambda_min_a.value,
                v.lambda_min_c.value,
                v.lambda_max.value,
                v.lambda_min.value,
                v.summary.sign(),
                r.sign,
                if row.unexpected() { "yes" } else { "" },
                if v.converged() { "" } else { "  (unconverged)" }
            )),
            Err(e) => out.push_str(&format!("{:>5} {:>5} {:>7} error: {e}\n", r.m, r.n, r.tau)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stokes::expected_dims;

    #[test]
    fn reference_sizes_match_grid_formulas() {
        for r in &TABLE1 {
            assert_eq!(expected_dims(&StokesGridSpec::new(Method::P1P0, r.ne, r.tau)), (r.m, r.n));
            assert!((r.lambda_max + r.lambda_min - r.s).abs() < 2e-8);
        }
        for r in &TABLE2 {
            assert_eq!(expected_dims(&StokesGridSpec::new(Method::Q1P0Stab, r.ne, r.tau)), (r.m, r.n));
        }
    }

    #[test]
    fn reference_unexpected_rows() {
        let count = TABLE2
            .iter()
            .filter(|r| r.lambda_min_a + r.lambda_min_c < 0.0 && r.sign == '+')
            .count();
        assert_eq!(count, 9);
    }

    #[test]
    fn filters_select_rows() {
        let opts = TableOptions {
            ne: vec![4],
            tau: vec![10.0],
            ..Default::default()
        };
        let rows = compute_table1(&opts);
        assert_eq!(rows.len(), 1);
        let v = rows[0].result.as_ref().unwrap();
        assert!((v.lambda_max.value - 76.95595469).abs() / 76.95595469 < 1e-2);
        assert!(rows[0].positive());
    }

    #[test]
    fn smallest_q1_grid_row() {
        let opts = TableOptions {
            ne: vec![8],
            tau: vec![0.01, 0.1],
            ..Default::default()
        };
        let rows = compute_table2(&opts);
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert!(row.sign_matches(), "{row:?}");
            assert!(row.dev_lambda_min_c().unwrap() < 1e-3);
        }
        assert!(!rows[0].unexpected());
        assert!(rows[1].unexpected());
    }

    #[test]
    fn csv_is_stable_and_complete() {
        let opts = TableOptions {
            ne: vec![4],
            ..Default::default()
        };
        let a = table1_csv(&compute_table1(&opts));
        let b = table1_csv(&compute_table1(&opts));
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], TABLE1_HEADER);
        assert!(lines[1].starts_with("98,31,0.01000000,"));
        assert_eq!(lines[1].split(',').count(), TABLE1_HEADER.split(',').count());
    }

    #[test]
    fn relaxed_settings_apply_only_to_large_orders() {
        let opts = TableOptions::default();
        assert_eq!(opts.solver_for(4999).tol, 1e-10);
        assert_eq!(opts.solver_for(9985).tol, 1e-8);
        assert_eq!(opts.solver_for(9985).max_iter, 20_000);
    }

    #[test]
    fn budget_exhaustion_keeps_best_iterate() {
        let m = SymMatrix::from_diagonal(&(1..=300).map(|k| k as f64).collect::<Vec<_>>());
        let opts = LanczosOptions {
            basis: 4,
            ..LanczosOptions::new(1e-14, 8)
        };
        let e = extreme(&m, Which::Largest, &opts).unwrap();
        assert!(!e.converged);
        assert!(e.value <= 300.0 && e.value > 1.0);
    }
}
