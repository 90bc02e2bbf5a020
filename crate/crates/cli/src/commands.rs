use std::fmt::Write as _;
use std::path::Path;

use saddlespec_core::linalg::{dense_full_spectrum, DENSE_CAP};
use saddlespec_core::saddle::{read_bundle, write_bundle_dir, write_bundle_file};
use saddlespec_core::suite::{run_all, SuiteConfig, SuiteSizes};
use saddlespec_core::tables::{
    compute_table1, compute_table2, table1_csv, table1_text, table2_csv, table2_text, TableOptions,
};
use saddlespec_core::{
    analyze_report, assemble, rusten_winther_bounds, silvester_wathen_bounds, Error, LanczosOptions,
    SaddleSystem, SpectrumBounds, StokesGridSpec, ValidationOptions, Variant,
};

use crate::args::{Cli, Command, Common, Format, GridArgs};
use crate::Failure;

type Outcome = Result<(), Failure>;

pub fn run(cli: Cli) -> Outcome {
    let common = &cli.common;
    validate_common(common)?;
    match &cli.command {
        Command::Gen { grid, single_file } => gen(common, grid, *single_file),
        Command::Analyze { bundle } => analyze(common, bundle),
        Command::Bounds { bundle } => bounds(common, bundle),
        Command::Table1 { grid } => table1(common, grid),
        Command::Table2 { grid } => table2(common, grid),
        Command::Selftest {
            seed,
            mutate_oracle,
            quick,
        } => selftest(common, *seed, *mutate_oracle, *quick),
    }
}

fn validate_common(c: &Common) -> Outcome {
    if !(c.tol > 0.0 && c.tol.is_finite()) {
        return Err(Failure::Config(format!("--tol must be positive, got {}", c.tol)));
    }
    if c.max_iter == 0 {
        return Err(Failure::Config("--max-iter must be at least 1".into()));
    }
    Ok(())
}

fn validate_grid(g: &GridArgs) -> Outcome {
    if let Some(&ne) = g.ne.iter().find(|&&ne| ne < 2) {
        return Err(Failure::Config(format!("--ne must be at least 2, got {ne}")));
    }
    if let Some(&t) = g.tau.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Failure::Config(format!("--tau must be positive, got {t}")));
    }
    Ok(())
}

fn lanczos(c: &Common) -> LanczosOptions {
    LanczosOptions::new(c.tol, c.max_iter)
}

fn validation(c: &Common) -> ValidationOptions {
    ValidationOptions {
        allow_m_lt_n: c.allow_m_lt_n,
        ..Default::default()
    }
}

fn emit(c: &Common, text: &str) -> Outcome {
    match &c.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(c: &Common, grid: &GridArgs, single_file: bool) -> Outcome {
    validate_grid(grid)?;
    let method = grid
        .method
        .ok_or_else(|| Failure::Config("gen needs --method".into()))?;
    let (&[ne], &[tau]) = (grid.ne.as_slice(), grid.tau.as_slice()) else {
        return Err(Failure::Config("gen needs exactly one --ne and one --tau".into()));
    };
    let out = c
        .out
        .as_ref()
        .ok_or_else(|| Failure::Config("gen needs --out".into()))?;
    let spec = StokesGridSpec {
        allow_m_lt_n: c.allow_m_lt_n,
        ..StokesGridSpec::new(method, ne, tau)
    };
    let sys = assemble(&spec)?;
    let header = sys.header();
    if single_file {
        write_bundle_file(out, &header, &sys.system)?;
    } else {
        write_bundle_dir(out, &header, &sys.system)?;
    }
    eprintln!(
        "wrote {} (m = {}, n = {})",
        out.display(),
        sys.system.m(),
        sys.system.n()
    );
    Ok(())
}

fn load(c: &Common, path: &Path) -> Result<(SaddleSystem, Option<f64>), Failure> {
    let bundle = read_bundle(path, &validation(c))?;
    Ok((bundle.system, bundle.header.tau))
}

fn analyze(c: &Common, path: &Path) -> Outcome {
    let (sys, tau) = load(c, path)?;
    let record = analyze_report(&sys, tau, c.variant, &lanczos(c))?;
    let text = match c.format {
        Format::Csv => format!("{}\n{}\n", saddlespec_core::ReportRecord::csv_header(), record.to_csv_row()),
        Format::Text => record.to_text(),
    };
    emit(c, &text)
}

/// One enclosure with the eigenvalues it misses, when the full spectrum is
/// affordable.
struct Audit {
    label: String,
    bounds: Result<SpectrumBounds, String>,
    checked: Option<usize>,
    outside: Vec<f64>,
    binding: bool,
}

fn audit(
    label: String,
    r: saddlespec_core::Result<SpectrumBounds>,
    spectrum: Option<&[f64]>,
    binding: bool,
) -> Result<Audit, Failure> {
    let bounds = match r {
        Ok(b) => Ok(b),
        Err(Error::HypothesisViolated { hypothesis, .. }) => Err(format!("not applicable: hypothesis {hypothesis}")),
        Err(e) => return Err(e.into()),
    };
    let (checked, outside) = match (&bounds, spectrum) {
        (Ok(b), Some(s)) => {
            let scale = s.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            (Some(s.len()), b.violations(s, 1e-9 * scale))
        }
        _ => (None, Vec::new()),
    };
    Ok(Audit {
        label,
        bounds,
        checked,
        outside,
        binding,
    })
}

fn bounds(c: &Common, path: &Path) -> Outcome {
    let (sys, _) = load(c, path)?;
    let opts = lanczos(c);
    let spectrum = if sys.order() <= DENSE_CAP {
        Some(dense_full_spectrum(&sys.assemble_w())?)
    } else {
        None
    };
    let sp = spectrum.as_deref();
    let audits = [
        audit("rusten_winther".into(), rusten_winther_bounds(&sys, &opts), sp, true)?,
        audit(
            format!("silvester_wathen/{}", c.variant.name()),
            silvester_wathen_bounds(&sys, c.variant, &opts),
            sp,
            c.variant == Variant::Corrected,
        )?,
    ];
    let mut out = String::new();
    match c.format {
        Format::Csv => {
            out.push_str("theorem,neg_lo,neg_hi,pos_lo,pos_hi,status,checked,outside\n");
            for a in &audits {
                let (ends, status) = match &a.bounds {
                    Ok(b) => (
                        [b.neg.lo, b.neg.hi, b.pos.lo, b.pos.hi].map(|v| format!("{v:.8}")),
                        if a.outside.is_empty() { "contained" } else { "violated" }.to_string(),
                    ),
                    Err(reason) => (Default::default(), reason.clone()),
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},\"{}\",{},{}",
                    a.label,
                    ends[0],
                    ends[1],
                    ends[2],
                    ends[3],
                    status,
                    a.checked.map(|k| k.to_string()).unwrap_or_default(),
                    a.outside.len()
                );
            }
        }
        Format::Text => {
            for a in &audits {
                match &a.bounds {
                    Ok(b) => {
                        let _ = writeln!(
                            out,
                            "{:<28} neg [{:.8}, {:.8}]  pos [{:.8}, {:.8}]",
                            a.label, b.neg.lo, b.neg.hi, b.pos.lo, b.pos.hi
                        );
                        match a.checked {
                            Some(k) if a.outside.is_empty() => {
                                let _ = writeln!(out, "{:<28} all {k} eigenvalues contained", "");
                            }
                            Some(k) => {
                                let _ = writeln!(
                                    out,
                                    "{:<28} {} of {k} eigenvalues outside, e.g. {:.8}",
                                    "",
                                    a.outside.len(),
                                    a.outside[0]
                                );
                            }
                            None => {
                                let _ = writeln!(out, "{:<28} order above {DENSE_CAP}, spectrum not audited", "");
                            }
                        }
                    }
                    Err(reason) => {
                        let _ = writeln!(out, "{:<28} {reason}", a.label);
                    }
                }
            }
        }
    }
    emit(c, &out)?;
    match audits.iter().find(|a| a.binding && !a.outside.is_empty()) {
        Some(a) => Err(Failure::Property(format!("{} enclosure misses {} eigenvalues", a.label, a.outside.len()))),
        None => Ok(()),
    }
}

fn table_options(c: &Common, grid: &GridArgs) -> Result<TableOptions, Failure> {
    validate_grid(grid)?;
    if grid.method.is_some() {
        return Err(Failure::Config("tables fix their discretization; drop --method".into()));
    }
    Ok(TableOptions {
        lanczos: lanczos(c),
        ne: grid.ne.clone(),
        tau: grid.tau.clone(),
        ..Default::default()
    })
}

fn no_rows() -> Failure {
    Failure::Config("--ne/--tau select no reference rows".into())
}

fn table1(c: &Common, grid: &GridArgs) -> Outcome {
    let rows = compute_table1(&table_options(c, grid)?);
    if rows.is_empty() {
        return Err(no_rows());
    }
    let text = match c.format {
        Format::Csv => table1_csv(&rows),
        Format::Text => table1_text(&rows),
    };
    emit(c, &text)?;
    let bad = rows.iter().filter(|r| !r.positive()).count();
    if bad > 0 {
        return Err(Failure::Property(format!("{bad} rows without S(W) > 0")));
    }
    Ok(())
}

fn table2(c: &Common, grid: &GridArgs) -> Outcome {
    let rows = compute_table2(&table_options(c, grid)?);
    if rows.is_empty() {
        return Err(no_rows());
    }
    let text = match c.format {
        Format::Csv => table2_csv(&rows),
        Format::Text => table2_text(&rows),
    };
    emit(c, &text)?;
    let bad = rows.iter().filter(|r| !r.sign_matches()).count();
    if bad > 0 {
        return Err(Failure::Property(format!("{bad} rows with a sign differing from the reference")));
    }
    Ok(())
}

fn quick_sizes() -> SuiteSizes {
    SuiteSizes {
        condition: 25,
        zero_c: 25,
        sum_bound: 25,
        radius: 10,
        eta: 10,
        rusten_winther: 10,
        silvester_wathen: 10,
        as_printed: 10,
        bilinear: 10,
        bilinear_samples: 5000,
        inertia: 10,
        quadratic_form: 10,
        cross_validation: 10,
        cross_validation_stokes_order: 200,
        trace: 10,
        singular: 10,
        matvec: 5,
    }
}

fn selftest(c: &Common, seed: u64, mutate: f64, quick: bool) -> Outcome {
    if !mutate.is_finite() {
        return Err(Failure::Config("--mutate-oracle must be finite".into()));
    }
    let cfg = SuiteConfig {
        seed,
        lanczos: lanczos(c),
        oracle_perturbation: mutate,
    };
    let sizes = if quick { quick_sizes() } else { SuiteSizes::default() };
    let report = run_all(&cfg, &sizes);
    let text = match c.format {
        Format::Csv => {
            let mut s = String::from("property,status,checked,violations,detail\n");
            for p in &report.properties {
                let _ = writeln!(
                    s,
                    "{},{},{},{},\"{}\"",
                    p.name,
                    p.status(),
                    p.checked,
                    p.violations,
                    p.detail.replace('"', "\"\"")
                );
            }
            s
        }
        Format::Text => report.to_text(),
    };
    emit(c, &text)?;
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.properties.iter().filter(|p| !p.passed()).map(|p| p.name).collect();
        Err(Failure::Property(format!("failed: {}", failed.join(", "))))
    }
}
