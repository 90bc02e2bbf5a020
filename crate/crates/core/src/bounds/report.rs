use std::fmt::Write as _;

use crate::bounds::{
    analyze, rusten_winther_bounds, silvester_wathen_bounds, SpectralSummary, SpectrumBounds,
    SumBoundCheck, Variant,
};
use crate::error::{Error, Result};
use crate::linalg::LanczosOptions;
use crate::saddle::SaddleSystem;

/// Result of trying one enclosure theorem on a system.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundOutcome {
    Applicable {
        bounds: SpectrumBounds,
        /// Both computed extremes of `W` fall inside the intervals.
        contains_extremes: bool,
    },
    NotApplicable(String),
}

impl BoundOutcome {
    fn from_result(r: Result<SpectrumBounds>, summary: &SpectralSummary) -> Result<Self> {
        match r {
            Ok(bounds) => {
                let tol = summary.tie();
                Ok(BoundOutcome::Applicable {
                    contains_extremes: bounds.contains(summary.lambda_max, tol)
                        && bounds.contains(summary.lambda_min, tol),
                    bounds,
                })
            }
            Err(Error::HypothesisViolated { hypothesis, .. }) => {
                Ok(BoundOutcome::NotApplicable(format!("not applicable: hypothesis {hypothesis}")))
            }
            Err(e) => Err(e),
        }
    }

    fn status(&self) -> String {
        match self {
            BoundOutcome::Applicable {
                contains_extremes: true,
                ..
            } => "contains extremes".into(),
            BoundOutcome::Applicable { .. } => "VIOLATED".into(),
            BoundOutcome::NotApplicable(reason) => reason.clone(),
        }
    }

    fn endpoints(&self) -> [Option<f64>; 4] {
        match self {
            BoundOutcome::Applicable { bounds, .. } => [
                Some(bounds.neg.lo),
                Some(bounds.neg.hi),
                Some(bounds.pos.lo),
                Some(bounds.pos.hi),
            ],
            BoundOutcome::NotApplicable(_) => [None; 4],
        }
    }
}

/// Everything the analysis says about one system.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRecord {
    pub m: usize,
    pub n: usize,
    pub tau: Option<f64>,
    pub summary: SpectralSummary,
    pub sum_check: SumBoundCheck,
    pub rusten_winther: BoundOutcome,
    pub silvester_wathen: BoundOutcome,
    pub variant: Variant,
}

/// Runs the verdict, the sum bound and both enclosures. Hypothesis failures of
/// an enclosure become a "not applicable" note rather than an error.
pub fn analyze_report(
    sys: &SaddleSystem,
    tau: Option<f64>,
    variant: Variant,
    opts: &LanczosOptions,
) -> Result<ReportRecord> {
    let summary = analyze(sys, opts)?;
    let rw = BoundOutcome::from_result(rusten_winther_bounds(sys, opts), &summary)?;
    let sw = BoundOutcome::from_result(silvester_wathen_bounds(sys, variant, opts), &summary)?;
    Ok(ReportRecord {
        m: sys.m(),
        n: sys.n(),
        tau,
        summary,
        sum_check: SumBoundCheck::from_summary(&summary),
        rusten_winther: rw,
        silvester_wathen: sw,
        variant,
    })
}

pub(crate) fn num(x: f64) -> String {
    format!("{x:.8}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl ReportRecord {
    pub fn csv_header() -> &'static str {
        "m,n,tau,lambda_min_A,lambda_min_C,lambda_max_W,lambda_min_W,S,sign,\
         condition_value,condition_holds,quasi_pf,quasi_pf_strict,boundary,sum_bound_holds,\
         rw_neg_lo,rw_neg_hi,rw_pos_lo,rw_pos_hi,rw_status,\
         sw_variant,sw_neg_lo,sw_neg_hi,sw_pos_lo,sw_pos_hi,sw_status"
    }

    pub fn to_csv_row(&self) -> String {
        let s = &self.summary;
        let mut fields = vec![
            self.m.to_string(),
            self.n.to_string(),
            opt_num(self.tau),
            num(s.lambda_min_a),
            num(s.lambda_min_c),
            num(s.lambda_max),
            num(s.lambda_min),
            num(s.s),
            s.sign().to_string(),
            num(s.condition_value),
            s.condition_holds.to_string(),
            s.quasi_pf.to_string(),
            s.quasi_pf_strict.to_string(),
            s.boundary.to_string(),
            self.sum_check.holds.to_string(),
        ];
        fields.extend(self.rusten_winther.endpoints().map(opt_num));
        fields.push(self.rusten_winther.status());
        fields.push(self.variant.name().to_string());
        fields.extend(self.silvester_wathen.endpoints().map(opt_num));
        fields.push(self.silvester_wathen.status());
        fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",")
    }

    pub fn to_text(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        let _ = writeln!(out, "system            m = {}, n = {}", self.m, self.n);
        if let Some(t) = self.tau {
            let _ = writeln!(out, "tau               {}", num(t));
        }
        let _ = writeln!(out, "lambda_min(A)     {}", num(s.lambda_min_a));
        let _ = writeln!(out, "lambda_min(C)     {}", num(s.lambda_min_c));
        let _ = writeln!(out, "lambda_max(W)     {}", num(s.lambda_max));
        let _ = writeln!(out, "lambda_min(W)     {}", num(s.lambda_min));
        let _ = writeln!(out, "rho(W)            {}", num(s.rho));
        let _ = writeln!(out, "S(W)              {}  sign {}", num(s.s), s.sign());
        let _ = writeln!(
            out,
            "quasi-PF          {}  (strict {}, boundary {})",
            s.quasi_pf, s.quasi_pf_strict, s.boundary
        );
        let _ = writeln!(
            out,
            "condition value   {}  (holds {})",
            num(s.condition_value),
            s.condition_holds
        );
        let _ = writeln!(
            out,
            "sum lower bound   {} >= {}  ({})",
            num(self.sum_check.lhs),
            num(self.sum_check.rhs),
            if self.sum_check.holds { "holds" } else { "FAILS" }
        );
        for (name, outcome) in [
            ("rusten_winther", &self.rusten_winther),
            ("silvester_wathen", &self.silvester_wathen),
        ] {
            match outcome {
                BoundOutcome::Applicable { bounds, .. } => {
                    let _ = writeln!(
                        out,
                        "{name:<17} [{}, {}] U [{}, {}]  variant {}  {}",
                        num(bounds.neg.lo),
                        num(bounds.neg.hi),
                        num(bounds.pos.lo),
                        num(bounds.pos.hi),
                        bounds.variant.name(),
                        outcome.status()
                    );
                }
                BoundOutcome::NotApplicable(reason) => {
                    let _ = writeln!(out, "{name:<17} {reason}");
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{RectMatrix, SymMatrix};
    use crate::saddle::ValidationOptions;

    #[test]
    fn scalar_report() {
        let sys = SaddleSystem::new(
            SymMatrix::from_diagonal(&[2.0]),
            RectMatrix::from_dense(1, 1, &[1.0]).unwrap(),
            None,
            &ValidationOptions::default(),
        )
        .unwrap();
        let r = analyze_report(&sys, None, Variant::Corrected, &LanczosOptions::default()).unwrap();
        assert!(r.summary.quasi_pf_strict);
        let row = r.to_csv_row();
        assert_eq!(
            row.split(',').count(),
            ReportRecord::csv_header().split(',').count()
        );
        assert!(row.starts_with("1,1,,2.00000000,0.00000000,2.41421356,-0.41421356,2.00000000,+,"));
        assert!(matches!(r.rusten_winther, BoundOutcome::Applicable { contains_extremes: true, .. }));
        assert!(r.to_text().contains("S(W)              2.00000000  sign +"));
    }

    #[test]
    fn rank_deficient_is_not_applicable() {
        let sys = SaddleSystem::new(
            SymMatrix::identity(2),
            RectMatrix::from_dense(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap(),
            None,
            &ValidationOptions::default(),
        )
        .unwrap();
        let r = analyze_report(&sys, Some(1.0), Variant::Corrected, &LanczosOptions::default()).unwrap();
        assert_eq!(
            r.rusten_winther,
            BoundOutcome::NotApplicable("not applicable: hypothesis B full-column rank".into())
        );
        assert!(r.to_csv_row().contains(",,,,not applicable: hypothesis B full-column rank,"));
    }
}
