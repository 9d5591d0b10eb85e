//! Finite element spaces represented inside a broken space.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::broken::{dual_lambdas, BrokenSpace};
use super::Layout;
use crate::mesh::SimplicialMesh;
use crate::scalar::{Dual, Scalar};
use crate::{Error, Result};

/// Restriction of the global basis to one cell: the global basis functions
/// that do not vanish there and their broken coefficients (`local_dim x
/// dofs.len()`).
#[derive(Clone, Debug)]
pub struct CellMap {
    pub dofs: Vec<usize>,
    pub coeffs: DMatrix<f64>,
}

/// A global space: `dim` basis functions, each a piecewise polynomial given by
/// its broken coefficients on every cell.
#[derive(Clone, Debug)]
pub struct DiscreteSpace {
    pub name: String,
    pub broken: BrokenSpace,
    pub dim: usize,
    pub cells: Vec<CellMap>,
}

/// Quantity to tabulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum What {
    Value,
    Grad,
    Curl,
    Div,
}

impl What {
    pub fn from_name(s: &str) -> Option<What> {
        match s {
            "value" => Some(What::Value),
            "grad" => Some(What::Grad),
            "curl" => Some(What::Curl),
            "div" => Some(What::Div),
            _ => None,
        }
    }

    /// Components of the tabulated quantity for a value rank in dimension
    /// `dim`.
    pub fn components(self, rank: usize, dim: usize) -> Result<usize> {
        match (self, rank, dim) {
            (What::Value, r, _) => Ok(r),
            (What::Grad, r, d) => Ok(r * d),
            (What::Curl, 1, 2) => Ok(2),
            (What::Curl, 2, 2) => Ok(1),
            (What::Curl, 3, 3) => Ok(3),
            (What::Div, r, d) if r == d => Ok(1),
            _ => Err(Error::RankMismatch(format!(
                "{self:?} of a rank {rank} field in {dim}D"
            ))),
        }
    }
}

/// Tabulated values indexed `(function, point, component)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tabulation {
    pub functions: usize,
    pub points: usize,
    pub components: usize,
    pub data: Vec<f64>,
}

impl Tabulation {
    pub fn get(&self, f: usize, q: usize, comp: usize) -> f64 {
        self.data[(f * self.points + q) * self.components + comp]
    }
}

/// Applies a derivative selector to per-component duals.
pub fn apply_what(what: What, v: &[Dual], dim: usize) -> Result<Vec<f64>> {
    let rank = v.len();
    what.components(rank, dim)?;
    Ok(match what {
        What::Value => v.iter().map(|d| d.v).collect(),
        What::Grad => v.iter().flat_map(|d| d.g[..dim].to_vec()).collect(),
        What::Curl => match (rank, dim) {
            (1, 2) => vec![v[0].g[1], -v[0].g[0]],
            (2, 2) => vec![v[1].g[0] - v[0].g[1]],
            _ => vec![
                v[2].g[1] - v[1].g[2],
                v[0].g[2] - v[2].g[0],
                v[1].g[0] - v[0].g[1],
            ],
        },
        What::Div => vec![(0..dim).map(|i| v[i].g[i]).sum()],
    })
}

impl DiscreteSpace {
    /// The broken space itself, with the identity basis.
    pub fn from_broken(broken: BrokenSpace, name: &str) -> Self {
        let ld = broken.local_dim();
        let cells = (0..broken.mesh().num_cells())
            .map(|c| {
                let off = broken.offset(c);
                CellMap {
                    dofs: (off..off + ld).collect(),
                    coeffs: DMatrix::identity(ld, ld),
                }
            })
            .collect();
        let dim = broken.dim();
        DiscreteSpace {
            name: name.into(),
            broken,
            dim,
            cells,
        }
    }

    pub fn layout(&self) -> &Layout {
        self.broken.layout()
    }

    pub fn mesh(&self) -> &SimplicialMesh {
        self.broken.mesh()
    }

    pub fn rank(&self) -> usize {
        self.broken.rank()
    }

    pub fn degree(&self) -> usize {
        self.broken.degree()
    }

    /// Space spanned by the columns of `t` (`dim x new_dim`) in the current
    /// basis. Columns that vanish identically on a cell are dropped there.
    pub fn compose(&self, t: &DMatrix<f64>, name: &str) -> Result<DiscreteSpace> {
        if t.nrows() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "transform has {} rows, space has dimension {}",
                t.nrows(),
                self.dim
            )));
        }
        let cells = self
            .cells
            .iter()
            .map(|cm| {
                let rows = DMatrix::from_fn(cm.dofs.len(), t.ncols(), |i, j| t[(cm.dofs[i], j)]);
                let keep: Vec<usize> = (0..t.ncols())
                    .filter(|&j| rows.column(j).iter().any(|&x| x != 0.0))
                    .collect();
                let sub = DMatrix::from_fn(cm.dofs.len(), keep.len(), |i, j| rows[(i, keep[j])]);
                CellMap {
                    dofs: keep,
                    coeffs: &cm.coeffs * sub,
                }
            })
            .collect();
        Ok(DiscreteSpace {
            name: name.into(),
            broken: self.broken.clone(),
            dim: t.ncols(),
            cells,
        })
    }

    /// Values (per component) of the basis functions living on cell `c` of
    /// `geo`, given seeded barycentric coordinates.
    pub fn eval_cell<S: Scalar>(&self, geo: &SimplicialMesh, c: usize, lam: &[S]) -> Vec<Vec<S>> {
        let phi = self.broken.eval_scalar(geo, c, lam);
        let n = phi.len();
        let cm = &self.cells[c];
        let zero = S::constant(0.0);
        (0..cm.dofs.len())
            .map(|j| {
                (0..self.rank())
                    .map(|comp| {
                        let mut acc = zero;
                        for (k, p) in phi.iter().enumerate() {
                            let a = cm.coeffs[(comp * n + k, j)];
                            if a != 0.0 {
                                acc = acc + *p * a;
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// Tabulates the basis functions living on cell `c` at barycentric points.
    /// Row `i` of the result belongs to global function `cells[c].dofs[i]`.
    pub fn tabulate(&self, c: usize, points: &[[f64; 4]], what: What) -> Result<Tabulation> {
        let mesh = self.mesh();
        if c >= mesh.num_cells() {
            return Err(Error::InvalidEntity {
                dim: mesh.dim(),
                id: c,
            });
        }
        let dim = mesh.dim();
        let ncomp = what.components(self.rank(), dim)?;
        let nf = self.cells[c].dofs.len();
        let mut data = vec![0.0; nf * points.len() * ncomp];
        for (q, pt) in points.iter().enumerate() {
            let lam = dual_lambdas(mesh, c, &pt[..=dim]);
            let vals = self.eval_cell(mesh, c, &lam);
            for (f, v) in vals.iter().enumerate() {
                let out = apply_what(what, v, dim)?;
                for (comp, x) in out.into_iter().enumerate() {
                    data[(f * points.len() + q) * ncomp + comp] = x;
                }
            }
        }
        Ok(Tabulation {
            functions: nf,
            points: points.len(),
            components: ncomp,
            data,
        })
    }

    /// Dense broken coefficient matrix (`broken dim x dim`).
    pub fn expand(&self) -> DMatrix<f64> {
        let mut e = DMatrix::zeros(self.broken.dim(), self.dim);
        for (c, cm) in self.cells.iter().enumerate() {
            let off = self.broken.offset(c);
            for (j, &g) in cm.dofs.iter().enumerate() {
                for i in 0..cm.coeffs.nrows() {
                    e[(off + i, g)] += cm.coeffs[(i, j)];
                }
            }
        }
        e
    }
}
