//! Matrix Market exchange format, coordinate real variants.
//!
//! Symmetric matrices are written as their lower triangle, the customary
//! orientation of the format. On input either triangle is accepted. Values are
//! written with the shortest decimal that parses back to the same `f64`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::sparse::{RectMatrix, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

struct Parsed {
    rows: usize,
    cols: usize,
    symmetry: Symmetry,
    entries: Vec<(usize, usize, f64)>,
}

pub fn sym_to_string(m: &SymMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
    let _ = writeln!(out, "{} {} {}", m.order(), m.order(), m.nnz());
    for (r, c, v) in m.entries() {
        let _ = writeln!(out, "{} {} {v:e}", c + 1, r + 1);
    }
    out
}

pub fn rect_to_string(b: &RectMatrix) -> String {
    let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{} {} {}", b.rows(), b.cols(), b.nnz());
    for (r, c, v) in b.entries() {
        let _ = writeln!(out, "{} {} {v:e}", r + 1, c + 1);
    }
    out
}

/// Parses a symmetric matrix. `line_offset` is added to reported line numbers
/// so that sections embedded in a larger file point at the right place.
pub fn parse_sym(text: &str, path: &Path, line_offset: usize) -> Result<SymMatrix> {
    let p = parse(text, path, line_offset)?;
    if p.rows != p.cols {
        return Err(Error::parse(
            path,
            line_offset + 1,
            format!("symmetric matrix must be square, got {}x{}", p.rows, p.cols),
        ));
    }
    match p.symmetry {
        Symmetry::Symmetric => SymMatrix::from_triplets(p.rows, p.entries),
        Symmetry::General => {
            let full = RectMatrix::from_triplets(p.rows, p.cols, p.entries)?;
            for (r, c, v) in full.entries() {
                if full.get(c, r) != v {
                    return Err(Error::parse(
                        path,
                        line_offset + 1,
                        format!("general matrix is not symmetric at ({}, {})", r + 1, c + 1),
                    ));
                }
            }
            SymMatrix::from_triplets(p.rows, full.entries().filter(|&(r, c, _)| r <= c))
        }
    }
}

pub fn parse_rect(text: &str, path: &Path, line_offset: usize) -> Result<RectMatrix> {
    let p = parse(text, path, line_offset)?;
    match p.symmetry {
        Symmetry::General => RectMatrix::from_triplets(p.rows, p.cols, p.entries),
        Symmetry::Symmetric => {
            let mirrored = p
                .entries
                .iter()
                .filter(|&&(r, c, _)| r != c)
                .map(|&(r, c, v)| (c, r, v))
                .collect::<Vec<_>>();
            RectMatrix::from_triplets(p.rows, p.cols, p.entries.into_iter().chain(mirrored))
        }
    }
}

pub fn read_sym(path: &Path) -> Result<SymMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sym(&text, path, 0)
}

pub fn read_rect(path: &Path) -> Result<RectMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_rect(&text, path, 0)
}

pub fn write_sym(path: &Path, m: &SymMatrix) -> Result<()> {
    std::fs::write(path, sym_to_string(m)).map_err(|e| Error::io(path, e))
}

pub fn write_rect(path: &Path, b: &RectMatrix) -> Result<()> {
    std::fs::write(path, rect_to_string(b)).map_err(|e| Error::io(path, e))
}

fn parse(text: &str, path: &Path, line_offset: usize) -> Result<Parsed> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1 + line_offset, l));
    let err = |line: usize, msg: String| Error::parse(path, line, msg);

    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(line_offset + 1, "empty input".into()))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(err(hline, format!("expected a %%MatrixMarket header, found {header:?}")));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(err(hline, "only 'matrix coordinate' files are supported".into()));
    }
    if tokens[3] != "real" && tokens[3] != "integer" && tokens[3] != "double" {
        return Err(err(hline, format!("unsupported field '{}'", tokens[3])));
    }
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(err(hline, format!("unsupported symmetry '{other}'"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sline, size) = body
        .next()
        .ok_or_else(|| err(hline, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(sline, format!("bad size line {size:?}: {e}")))?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(err(sline, format!("size line needs three integers, found {size:?}")));
    };

    let mut entries = Vec::with_capacity(nnz);
    for (lno, line) in body {
        let mut it = line.split_whitespace();
        let (Some(i), Some(j), Some(v), None) = (it.next(), it.next(), it.next(), it.next()) else {
            return Err(err(lno, format!("expected 'row col value', found {line:?}")));
        };
        let i: usize = i.parse().map_err(|e| err(lno, format!("bad row index: {e}")))?;
        let j: usize = j.parse().map_err(|e| err(lno, format!("bad column index: {e}")))?;
        let v: f64 = v.parse().map_err(|e| err(lno, format!("bad value: {e}")))?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(err(lno, format!("index ({i}, {j}) outside {rows}x{cols}")));
        }
        if !v.is_finite() {
            return Err(err(lno, format!("non-finite value {v}")));
        }
        entries.push((i - 1, j - 1, v));
    }
    if entries.len() != nnz {
        return Err(err(
            sline,
            format!("size line announces {nnz} entries but {} were found", entries.len()),
        ));
    }
    Ok(Parsed {
        rows,
        cols,
        symmetry,
        entries,
    })
}
