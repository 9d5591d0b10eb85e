use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::assembly::{assemble_mass, broken_derivative, DiffOp};
use crate::linalg::{
    column_normalize, diagonal_normalize, gram_condition_nonzero, spd_condition, RANK_TOL,
};
use crate::mesh::SimplicialMesh;
use crate::refelem::Family;
use crate::spaces::{DiscreteSpace, GluedSpace};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionReport {
    pub family: Family,
    pub p: usize,
    pub dim: usize,
    pub kappa_m: f64,
    pub kappa_m_tilde: f64,
    /// Over the nonzero eigenvalues.
    pub kappa_s: f64,
    pub kappa_s_tilde: f64,
}

/// The derivative of every basis function in broken orthonormal coordinates,
/// stacked cell by cell: `S = B^T B`.
pub fn stacked_derivative(space: &DiscreteSpace, op: DiffOp) -> Result<DMatrix<f64>> {
    let bd = broken_derivative(&space.broken, op)?;
    let rows = bd.out_rank * bd.out_size;
    let mut b = DMatrix::zeros(rows * space.cells.len(), space.dim);
    for (c, cm) in space.cells.iter().enumerate() {
        let img = &bd.blocks[c] * &cm.coeffs;
        for (j, &g) in cm.dofs.iter().enumerate() {
            for i in 0..rows {
                b[(c * rows + i, g)] += img[(i, j)];
            }
        }
    }
    Ok(b)
}

/// The natural semidefinite form of a family: div-div for H(div), curl-curl
/// otherwise (grad-grad for scalars).
fn natural_op(family: Family, dim: usize) -> DiffOp {
    match family {
        Family::Lagrange => DiffOp::Grad,
        Family::HDivTet => DiffOp::Div,
        Family::HRotTri => DiffOp::Rot,
        _ if dim == 2 => DiffOp::Rot,
        _ => DiffOp::Curl,
    }
}

/// Condition numbers of the mass matrix and of the family's semidefinite form,
/// plain and with unit diagonal, for each degree in `degrees`.
///
/// Stiffness condition numbers come from the singular values of the stacked
/// derivative `B` (squared), which keeps the small nonzero eigenvalues
/// accurate; unit diagonal scaling of `S = B^T B` is unit column scaling of
/// `B`.
pub fn condition_experiment(
    family: Family,
    mesh: &SimplicialMesh,
    degrees: &[usize],
) -> Result<Vec<ConditionReport>> {
    degrees
        .iter()
        .map(|&p| {
            let glued = GluedSpace::new(mesh, family, p)?;
            let m = assemble_mass(&glued.space);
            let b = stacked_derivative(&glued.space, natural_op(family, mesh.dim()))?;
            if b.ncols() == 0 {
                return Err(Error::EmptySpace);
            }
            Ok(ConditionReport {
                family,
                p,
                dim: glued.dim(),
                kappa_m: spd_condition(&m)?,
                kappa_m_tilde: spd_condition(&diagonal_normalize(&m))?,
                kappa_s: gram_condition_nonzero(&b, RANK_TOL)?,
                kappa_s_tilde: gram_condition_nonzero(&column_normalize(&b), RANK_TOL)?,
            })
        })
        .collect()
}
