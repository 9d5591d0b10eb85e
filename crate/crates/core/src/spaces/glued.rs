//! Global spaces assembled from entity-attached reference families.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::broken::{BrokenSpace, RefTable};
use super::discrete::{CellMap, DiscreteSpace, Tabulation, What};
use super::Layout;
use crate::mesh::SimplicialMesh;
use crate::refelem::{eval_function, family_functions, BasisFunction, Family};
use crate::Result;

/// A glued space: one global index per shared function, one per side for
/// broken functions. The functions are also expanded into the broken space of
/// the same degree (exactly, by L2 projection) so that every generic space
/// operation applies.
#[derive(Clone, Debug)]
pub struct GluedSpace {
    pub family: Family,
    pub degree: usize,
    pub functions: Vec<BasisFunction>,
    pub space: DiscreteSpace,
}

impl GluedSpace {
    /// Builds the family on `mesh`; the Worsey–Farin family splits the mesh
    /// first and keeps the macro structure internal.
    pub fn new(mesh: &SimplicialMesh, family: Family, degree: usize) -> Result<Self> {
        let layout = if family.needs_worsey_farin() {
            Layout::worsey_farin(mesh)?
        } else {
            Layout::plain(mesh)
        };
        Self::on_layout(layout, family, degree)
    }

    pub fn on_layout(layout: Layout, family: Family, degree: usize) -> Result<Self> {
        let functions = family_functions(family, &layout, degree)?;
        let dim = layout.mesh().dim();
        let rank = if family.is_vector() { dim } else { 1 };
        let broken = BrokenSpace::new(layout, rank, degree);
        let mesh = broken.mesh();
        let table = RefTable::new(dim, degree, 2 * degree)?;
        let n = broken.poly_size();

        let mut per_cell: Vec<Vec<usize>> = vec![Vec::new(); mesh.num_cells()];
        for (i, f) in functions.iter().enumerate() {
            for &c in &f.support {
                per_cell[c].push(i);
            }
        }
        let mut cells = Vec::with_capacity(mesh.num_cells());
        for (c, dofs) in per_cell.into_iter().enumerate() {
            let det = mesh.jacobian_det(c);
            let scale = det.sqrt();
            let mut coeffs = DMatrix::zeros(rank * n, dofs.len());
            for (q, pt) in table.rule.points.iter().enumerate() {
                let w = table.rule.weights[q] * scale;
                let phi = &table.values[q];
                for (j, &fi) in dofs.iter().enumerate() {
                    let v = eval_function(broken.layout(), &functions[fi], c, &pt[..=dim]);
                    for comp in 0..rank {
                        let wv = w * v[comp];
                        if wv == 0.0 {
                            continue;
                        }
                        for k in 0..n {
                            coeffs[(comp * n + k, j)] += wv * phi[k];
                        }
                    }
                }
            }
            cells.push(CellMap { dofs, coeffs });
        }
        let space = DiscreteSpace {
            name: family.name().into(),
            dim: functions.len(),
            broken,
            cells,
        };
        Ok(GluedSpace {
            family,
            degree,
            functions,
            space,
        })
    }

    pub fn layout(&self) -> &Layout {
        self.space.layout()
    }

    pub fn dim(&self) -> usize {
        self.functions.len()
    }

    /// Tabulates all functions on a cell (zero where a function does not
    /// live), computed from the explicit profile formulas.
    pub fn tabulate_all(&self, cell: usize, points: &[[f64; 4]], what: What) -> Result<Tabulation> {
        let mesh = self.layout().mesh();
        let dim = mesh.dim();
        if cell >= mesh.num_cells() {
            return Err(crate::Error::InvalidEntity { dim, id: cell });
        }
        let rank = self.space.rank();
        let ncomp = what.components(rank, dim)?;
        let mut data = vec![0.0; self.functions.len() * points.len() * ncomp];
        for (q, pt) in points.iter().enumerate() {
            let lam = super::broken::dual_lambdas(mesh, cell, &pt[..=dim]);
            for (f, func) in self.functions.iter().enumerate() {
                if !func.support.contains(&cell) {
                    continue;
                }
                let v = eval_function(self.layout(), func, cell, &lam);
                let out = super::discrete::apply_what(what, &v[..rank], dim)?;
                for (comp, x) in out.into_iter().enumerate() {
                    data[(f * points.len() + q) * ncomp + comp] = x;
                }
            }
        }
        Ok(Tabulation {
            functions: self.functions.len(),
            points: points.len(),
            components: ncomp,
            data,
        })
    }

    /// Largest pointwise difference between the explicit formulas and the
    /// broken expansion, over the quadrature points of every cell.
    pub fn expansion_error(&self) -> Result<f64> {
        let mesh = self.layout().mesh();
        let dim = mesh.dim();
        let rule = crate::orthopoly::simplex_rule(dim, self.degree + 1)?;
        let mut err: f64 = 0.0;
        for c in 0..mesh.num_cells() {
            let direct = self.tabulate_all(c, &rule.points, What::Value)?;
            let via = self.space.tabulate(c, &rule.points, What::Value)?;
            for (row, &f) in self.space.cells[c].dofs.iter().enumerate() {
                for q in 0..rule.len() {
                    for comp in 0..direct.components {
                        err = err.max((direct.get(f, q, comp) - via.get(row, q, comp)).abs());
                    }
                }
            }
        }
        Ok(err)
    }
}
