//! Block Matrix Market bundles: a directory holding `header.toml`, `A.mtx`,
//! `B.mtx` and optionally `C.mtx`, or the same sections concatenated into one
//! file under `%%Section` markers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::mtx;
use crate::saddle::{SaddleSystem, ValidationOptions};

const FILE_MAGIC: &str = "%%SaddleBundle 1";
const SECTION: &str = "%%Section";

/// Metadata stored next to the blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleHeader {
    pub m: usize,
    pub n: usize,
    /// Viscosity already applied to `A`, when the system came from a flow model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ne: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Original indices of the velocity unknowns removed before assembly.
    #[serde(default)]
    pub deleted_velocity_dofs: Vec<usize>,
    /// Original indices of the pressure unknowns removed before assembly.
    #[serde(default)]
    pub deleted_pressure_dofs: Vec<usize>,
}

impl BundleHeader {
    /// Minimal header for a system with no generator metadata.
    pub fn plain(sys: &SaddleSystem, provenance: impl Into<String>) -> Self {
        BundleHeader {
            m: sys.m(),
            n: sys.n(),
            tau: None,
            provenance: provenance.into(),
            method: None,
            ne: None,
            beta: None,
            deleted_velocity_dofs: Vec::new(),
            deleted_pressure_dofs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Bundle {
    pub header: BundleHeader,
    pub system: SaddleSystem,
}

fn header_text(header: &BundleHeader) -> String {
    toml::to_string(header).expect("header fields are plain data")
}

pub fn write_bundle_dir(dir: &Path, header: &BundleHeader, sys: &SaddleSystem) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let put = |name: &str, text: String| {
        let p = dir.join(name);
        std::fs::write(&p, text).map_err(|e| Error::io(&p, e))
    };
    put("header.toml", header_text(header))?;
    put("A.mtx", mtx::sym_to_string(sys.a()))?;
    put("B.mtx", mtx::rect_to_string(sys.b()))?;
    let c_path = dir.join("C.mtx");
    match sys.c() {
        Some(c) => put("C.mtx", mtx::sym_to_string(c))?,
        None if c_path.exists() => std::fs::remove_file(&c_path).map_err(|e| Error::io(&c_path, e))?,
        None => {}
    }
    Ok(())
}

pub fn write_bundle_file(path: &Path, header: &BundleHeader, sys: &SaddleSystem) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "{FILE_MAGIC}");
    let _ = writeln!(out, "{SECTION} header");
    out.push_str(&header_text(header));
    let _ = writeln!(out, "{SECTION} A");
    out.push_str(&mtx::sym_to_string(sys.a()));
    let _ = writeln!(out, "{SECTION} B");
    out.push_str(&mtx::rect_to_string(sys.b()));
    if let Some(c) = sys.c() {
        let _ = writeln!(out, "{SECTION} C");
        out.push_str(&mtx::sym_to_string(c));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// One named chunk of input together with where it came from.
struct Part {
    path: PathBuf,
    offset: usize,
    text: String,
}

/// Reads either bundle layout and validates the resulting system.
pub fn read_bundle(path: &Path, opts: &ValidationOptions) -> Result<Bundle> {
    let (header, a, b, c) = if path.is_dir() {
        let load = |name: &str| -> Result<Option<Part>> {
            let p = path.join(name);
            if !p.exists() {
                return Ok(None);
            }
            let text = std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
            Ok(Some(Part {
                path: p,
                offset: 0,
                text,
            }))
        };
        let need = |name: &str| -> Result<Part> {
            load(name)?.ok_or_else(|| Error::parse(path.join(name), 0, "required bundle member is missing"))
        };
        (need("header.toml")?, need("A.mtx")?, need("B.mtx")?, load("C.mtx")?)
    } else {
        split_file(path)?
    };

    let parsed: BundleHeader = toml::from_str(&header.text).map_err(|e| {
        let line = e
            .span()
            .map(|s| header.text[..s.start].lines().count().max(1))
            .unwrap_or(1);
        Error::parse(&header.path, header.offset + line, e.message().to_string())
    })?;
    let a_m = mtx::parse_sym(&a.text, &a.path, a.offset)?;
    let b_m = mtx::parse_rect(&b.text, &b.path, b.offset)?;
    let c_m = c
        .map(|c| mtx::parse_sym(&c.text, &c.path, c.offset))
        .transpose()?;
    if parsed.m != a_m.order() || parsed.n != b_m.cols() {
        return Err(Error::parse(
            &header.path,
            header.offset + 1,
            format!(
                "header declares m={}, n={} but blocks give m={}, n={}",
                parsed.m,
                parsed.n,
                a_m.order(),
                b_m.cols()
            ),
        ));
    }
    let system = SaddleSystem::new(a_m, b_m, c_m, opts)?;
    Ok(Bundle {
        header: parsed,
        system,
    })
}

fn split_file(path: &Path) -> Result<(Part, Part, Part, Option<Part>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == FILE_MAGIC => {}
        _ => return Err(Error::parse(path, 1, format!("expected '{FILE_MAGIC}'"))),
    }
    let mut parts: Vec<(String, Part)> = Vec::new();
    for (i, line) in lines {
        if let Some(name) = line.strip_prefix(SECTION) {
            let name = name.trim().to_string();
            if parts.iter().any(|(n, _)| *n == name) {
                return Err(Error::parse(path, i + 1, format!("duplicate section '{name}'")));
            }
            parts.push((
                name,
                Part {
                    path: path.to_path_buf(),
                    offset: i + 1,
                    text: String::new(),
                },
            ));
        } else if let Some((_, part)) = parts.last_mut() {
            part.text.push_str(line);
            part.text.push('\n');
        } else if !line.trim().is_empty() {
            return Err(Error::parse(path, i + 1, "content before the first section"));
        }
    }
    let mut take = |name: &str| {
        parts
            .iter()
            .position(|(n, _)| n == name)
            .map(|k| parts.swap_remove(k).1)
    };
    let missing = |name: &str| Error::parse(path, 0, format!("missing section '{name}'"));
    let header = take("header").ok_or_else(|| missing("header"))?;
    let a = take("A").ok_or_else(|| missing("A"))?;
    let b = take("B").ok_or_else(|| missing("B"))?;
    let c = take("C");
    if let Some((name, part)) = parts.first() {
        return Err(Error::parse(path, part.offset, format!("unknown section '{name}'")));
    }
    Ok((header, a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{RectMatrix, SymMatrix};

    fn sample(with_c: bool) -> SaddleSystem {
        SaddleSystem::new(
            SymMatrix::from_dense(2, &[2.0, 0.5, 0.5, 3.0]).unwrap(),
            RectMatrix::from_dense(2, 1, &[1.0, -0.25]).unwrap(),
            with_c.then(|| SymMatrix::from_diagonal(&[-0.1])),
            &ValidationOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn directory_round_trip() {
        let tmp = tempfile::tempdir().unwrap();
        for with_c in [true, false] {
            let sys = sample(with_c);
            let mut header = BundleHeader::plain(&sys, "unit test");
            header.tau = Some(0.1);
            header.deleted_pressure_dofs = vec![4];
            write_bundle_dir(tmp.path(), &header, &sys).unwrap();
            assert_eq!(tmp.path().join("C.mtx").exists(), with_c);
            let back = read_bundle(tmp.path(), &ValidationOptions::default()).unwrap();
            assert_eq!(back.system, sys);
            assert_eq!(back.header, header);
        }
    }

    #[test]
    fn single_file_round_trip() {
        let tmp = tempfile::tempdir().unwrap();
        let p = tmp.path().join("sys.bundle");
        let sys = sample(true);
        let header = BundleHeader::plain(&sys, "unit test");
        write_bundle_file(&p, &header, &sys).unwrap();
        let back = read_bundle(&p, &ValidationOptions::default()).unwrap();
        assert_eq!(back.system, sys);
    }

    #[test]
    fn malformed_section_points_at_line() {
        let tmp = tempfile::tempdir().unwrap();
        let p = tmp.path().join("bad.bundle");
        let text = "%%SaddleBundle 1\n%%Section header\nm = 1\nn = 1\nprovenance = \"x\"\n\
                    %%Section A\n%%MatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 oops\n\
                    %%Section B\n%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n";
        std::fs::write(&p, text).unwrap();
        match read_bundle(&p, &ValidationOptions::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_mismatch_and_missing_member() {
        let tmp = tempfile::tempdir().unwrap();
        let sys = sample(false);
        let mut header = BundleHeader::plain(&sys, "x");
        header.m = 5;
        write_bundle_dir(tmp.path(), &header, &sys).unwrap();
        assert!(matches!(
            read_bundle(tmp.path(), &ValidationOptions::default()),
            Err(Error::Parse { .. })
        ));
        std::fs::remove_file(tmp.path().join("B.mtx")).unwrap();
        let err = read_bundle(tmp.path(), &ValidationOptions::default()).unwrap_err();
        assert!(err.to_string().contains("B.mtx"));
    }
}
