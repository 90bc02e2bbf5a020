//! Saddle-point systems from two mixed finite element discretizations of the
//! Stokes problem `-τΔu + ∇p = f`, `div u = 0` on the unit square with
//! homogeneous Dirichlet velocity.
//!
//! * `P1-P0`: the unit square is cut into `ne × ne` squares, each split along
//!   its rising diagonal into two coarse triangles; every coarse triangle is
//!   refined into four. Velocity is piecewise linear on the fine mesh, pressure
//!   constant per coarse triangle, and `C = 0`.
//! * `Q1-P0` (stabilized): bilinear velocity and constant pressure on
//!   `ne × ne` squares, with `C = -β h² L` where `L` is the cell-neighbour
//!   graph Laplacian.
//!
//! Boundary velocity unknowns are removed by deleting their rows and columns,
//! and the last pressure unknown is deleted to pin the pressure constant.
//! Unknowns are ordered x-velocity block, y-velocity block, then pressure; grid
//! nodes run fastest in x. The coupling block has entries
//! `B_{(k,i),T} = -∫_T ∂φ_i/∂x_k`.

use crate::error::{Error, Result};
use crate::linalg::{RectMatrix, SymMatrix};
use crate::saddle::{BundleHeader, SaddleSystem, ValidationOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    P1P0,
    Q1P0Stab,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::P1P0 => "p1p0",
            Method::Q1P0Stab => "q1p0_stab",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p1p0" | "p1-p0" => Ok(Method::P1P0),
            "q1p0_stab" | "q1p0-stab" | "q1p0" => Ok(Method::Q1P0Stab),
            other => Err(Error::InvalidArgument(format!(
                "unknown method '{other}' (expected p1p0 or q1p0_stab)"
            ))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which discretization to build, on how fine a grid, with which viscosity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesGridSpec {
    pub method: Method,
    pub ne: usize,
    pub tau: f64,
    /// Stabilization weight of the `Q1-P0` pressure block.
    pub beta: f64,
    /// Accept `m < n`, which only happens for `Q1-P0` at `ne = 2`.
    pub allow_m_lt_n: bool,
}

impl StokesGridSpec {
    pub fn new(method: Method, ne: usize, tau: f64) -> Self {
        StokesGridSpec {
            method,
            ne,
            tau,
            beta: 1.0,
            allow_m_lt_n: false,
        }
    }
}

/// An assembled system plus the bookkeeping of the eliminated unknowns.
#[derive(Debug, Clone)]
pub struct StokesSystem {
    pub spec: StokesGridSpec,
    pub system: SaddleSystem,
    pub deleted_velocity_dofs: Vec<usize>,
    pub deleted_pressure_dofs: Vec<usize>,
}

impl StokesSystem {
    pub fn header(&self) -> BundleHeader {
        BundleHeader {
            m: self.system.m(),
            n: self.system.n(),
            tau: Some(self.spec.tau),
            provenance: format!(
                "stokes {} ne={} tau={}",
                self.spec.method, self.spec.ne, self.spec.tau
            ),
            method: Some(self.spec.method.name().to_string()),
            ne: Some(self.spec.ne),
            beta: (self.spec.method == Method::Q1P0Stab).then_some(self.spec.beta),
            deleted_velocity_dofs: self.deleted_velocity_dofs.clone(),
            deleted_pressure_dofs: self.deleted_pressure_dofs.clone(),
        }
    }
}

/// `(m, n)` of the system `spec` describes.
pub fn expected_dims(spec: &StokesGridSpec) -> (usize, usize) {
    let ne = spec.ne;
    match spec.method {
        Method::P1P0 => (2 * (2 * ne - 1).pow(2), 2 * ne * ne - 1),
        Method::Q1P0Stab => (2 * (ne - 1).pow(2), ne * ne - 1),
    }
}

pub fn assemble(spec: &StokesGridSpec) -> Result<StokesSystem> {
    match spec.method {
        Method::P1P0 => assemble_p1p0(spec),
        Method::Q1P0Stab => assemble_q1p0_stab(spec),
    }
}

fn check_spec(spec: &StokesGridSpec, method: Method) -> Result<()> {
    if spec.method != method {
        return Err(Error::InvalidArgument(format!(
            "spec asks for {} but {} assembly was called",
            spec.method, method
        )));
    }
    if spec.ne < 2 {
        return Err(Error::InvalidArgument(format!("ne must be at least 2, got {}", spec.ne)));
    }
    if !(spec.tau > 0.0) || !spec.tau.is_finite() {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {}", spec.tau)));
    }
    if !(spec.beta >= 0.0) || !spec.beta.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "beta must be nonnegative, got {}",
            spec.beta
        )));
    }
    Ok(())
}

/// Numbering of the interior nodes of a `(side+1)²` node grid.
struct InteriorGrid {
    side: usize,
}

impl InteriorGrid {
    fn count(&self) -> usize {
        (self.side - 1).pow(2)
    }

    fn index(&self, i: usize, j: usize) -> Option<usize> {
        let s = self.side;
        (i > 0 && j > 0 && i < s && j < s).then(|| (j - 1) * (s - 1) + (i - 1))
    }

    /// Original indices, in the two-component numbering, of the boundary nodes.
    fn boundary_dofs(&self) -> Vec<usize> {
        let s = self.side;
        let nodes = (s + 1) * (s + 1);
        let mut out = Vec::new();
        for comp in 0..2 {
            for j in 0..=s {
                for i in 0..=s {
                    if self.index(i, j).is_none() {
                        out.push(comp * nodes + j * (s + 1) + i);
                    }
                }
            }
        }
        out
    }
}

fn finish(
    spec: &StokesGridSpec,
    a_half: Vec<(usize, usize, f64)>,
    grid: &InteriorGrid,
    b_entries: Vec<(usize, usize, f64)>,
    cells: usize,
    c: Option<SymMatrix>,
) -> Result<StokesSystem> {
    let k = grid.count();
    let a = SymMatrix::from_triplets(
        2 * k,
        a_half
            .iter()
            .flat_map(|&(r, c, v)| [(r, c, spec.tau * v), (k + r, k + c, spec.tau * v)]),
    )?;
    let kept = cells - 1;
    let b = RectMatrix::from_triplets(2 * k, kept, b_entries.into_iter().filter(|&(_, c, _)| c < kept))?;
    let opts = ValidationOptions {
        allow_m_lt_n: spec.allow_m_lt_n,
        ..ValidationOptions::default()
    };
    let system = SaddleSystem::new(a, b, c, &opts)?;
    Ok(StokesSystem {
        spec: *spec,
        system,
        deleted_velocity_dofs: grid.boundary_dofs(),
        deleted_pressure_dofs: vec![kept],
    })
}

/// Gradients of the three linear basis functions and the area of a triangle.
fn p1_gradients(p: [(f64, f64); 3]) -> ([(f64, f64); 3], f64) {
    let [(x0, y0), (x1, y1), (x2, y2)] = p;
    let d = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
    let g = [
        ((y1 - y2) / d, (x2 - x1) / d),
        ((y2 - y0) / d, (x0 - x2) / d),
        ((y0 - y1) / d, (x1 - x0) / d),
    ];
    (g, 0.5 * d.abs())
}

/// Fine triangles of the lower-right and upper-left coarse triangles of one
/// coarse square, in fine-grid offsets from its lower-left corner.
const LOWER_RIGHT: [[(usize, usize); 3]; 4] = [
    [(0, 0), (1, 0), (1, 1)],
    [(1, 0), (2, 0), (2, 1)],
    [(1, 1), (2, 1), (2, 2)],
    [(1, 0), (2, 1), (1, 1)],
];
const UPPER_LEFT: [[(usize, usize); 3]; 4] = [
    [(0, 0), (1, 1), (0, 1)],
    [(1, 1), (2, 2), (1, 2)],
    [(0, 1), (1, 2), (0, 2)],
    [(0, 1), (1, 1), (1, 2)],
];

pub fn assemble_p1p0(spec: &StokesGridSpec) -> Result<StokesSystem> {
    check_spec(spec, Method::P1P0)?;
    let ne = spec.ne;
    let nf = 2 * ne;
    let hf = 1.0 / nf as f64;
    let grid = InteriorGrid { side: nf };
    let k = grid.count();
    let mut a = Vec::new();
    let mut b = Vec::new();

    for cj in 0..ne {
        for ci in 0..ne {
            let lower_right = 2 * (cj * ne + ci);
            for (cell, tris) in [(lower_right, &LOWER_RIGHT), (lower_right + 1, &UPPER_LEFT)] {
                for tri in tris {
                    let nodes = tri.map(|(di, dj)| (2 * ci + di, 2 * cj + dj));
                    // Stiffness in grid units is mesh-size independent in 2D.
                    let (g, area) = p1_gradients(nodes.map(|(i, j)| (i as f64, j as f64)));
                    for (ia, &(i, j)) in nodes.iter().enumerate() {
                        let Some(ra) = grid.index(i, j) else { continue };
                        // ∫_t ∂φ/∂x = area · grad, rescaled from grid to physical units.
                        b.push((ra, cell, -area * g[ia].0 * hf));
                        b.push((k + ra, cell, -area * g[ia].1 * hf));
                        for (ib, &(i2, j2)) in nodes.iter().enumerate() {
                            if let Some(rb) = grid.index(i2, j2) {
                                if ra <= rb {
                                    let v = area * (g[ia].0 * g[ib].0 + g[ia].1 * g[ib].1);
                                    a.push((ra, rb, v));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    finish(spec, a, &grid, b, 2 * ne * ne, None)
}

/// Bilinear element stiffness for corners (0,0), (1,0), (1,1), (0,1).
const Q1_STIFFNESS: [[f64; 4]; 4] = [
    [4.0, -1.0, -2.0, -1.0],
    [-1.0, 4.0, -1.0, -2.0],
    [-2.0, -1.0, 4.0, -1.0],
    [-1.0, -2.0, -1.0, 4.0],
];
/// `∫_K ∂φ/∂x` and `∫_K ∂φ/∂y` for the same corners, in units of `h/2`.
const Q1_DX: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
const Q1_DY: [f64; 4] = [-1.0, -1.0, 1.0, 1.0];

pub fn assemble_q1p0_stab(spec: &StokesGridSpec) -> Result<StokesSystem> {
    check_spec(spec, Method::Q1P0Stab)?;
    let ne = spec.ne;
    let h = 1.0 / ne as f64;
    let grid = InteriorGrid { side: ne };
    let k = grid.count();
    let mut a = Vec::new();
    let mut b = Vec::new();

    for cj in 0..ne {
        for ci in 0..ne {
            let cell = cj * ne + ci;
            let corners = [(ci, cj), (ci + 1, cj), (ci + 1, cj + 1), (ci, cj + 1)];
            for (ia, &(i, j)) in corners.iter().enumerate() {
                let Some(ra) = grid.index(i, j) else { continue };
                b.push((ra, cell, -Q1_DX[ia] * h / 2.0));
                b.push((k + ra, cell, -Q1_DY[ia] * h / 2.0));
                for (ib, &(i2, j2)) in corners.iter().enumerate() {
                    if let Some(rb) = grid.index(i2, j2) {
                        if ra <= rb {
                            a.push((ra, rb, Q1_STIFFNESS[ia][ib] / 6.0));
                        }
                    }
                }
            }
        }
    }

    let cells = ne * ne;
    let kept = cells - 1;
    let weight = spec.beta * h * h;
    let mut c = Vec::new();
    for cj in 0..ne {
        for ci in 0..ne {
            let p = cj * ne + ci;
            let mut degree = 0.0;
            let neighbours = [
                (ci + 1 < ne).then(|| p + 1),
                (ci > 0).then(|| p - 1),
                (cj + 1 < ne).then(|| p + ne),
                (cj > 0).then(|| p - ne),
            ];
            for q in neighbours.into_iter().flatten() {
                degree += 1.0;
                if p < q && q < kept {
                    c.push((p, q, weight));
                }
            }
            if p < kept {
                c.push((p, p, -weight * degree));
            }
        }
    }
    let c = SymMatrix::from_triplets(kept, c)?;
    finish(spec, a, &grid, b, cells, Some(c))
}
