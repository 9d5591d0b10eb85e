//! Mass, stiffness and derivative matrices of spaces represented in broken
//! orthonormal coordinates, and essential boundary conditions.
//!
//! Every cell basis is L2 orthonormal, so the mass matrix of a space is
//! `sum_c E_c^T E_c` and derivatives reduce to per-cell maps between broken
//! spaces of degree `p` and `p - 1`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::linalg::{spd_solve, RANK_TOL};
use crate::orthopoly::simplex::dim_poly;
use crate::spaces::{restrict, BrokenSpace, Clause, Component, DiscreteSpace, RefTable, Scope};
use crate::{Error, Result};

/// First order differential operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffOp {
    Grad,
    /// 3D curl of a vector field, or the vector curl `(d_y u, -d_x u)` of a
    /// 2D scalar.
    Curl,
    /// Scalar rot `d_x u_y - d_y u_x` of a 2D vector field.
    Rot,
    Div,
}

impl DiffOp {
    pub fn from_name(s: &str) -> Option<DiffOp> {
        match s {
            "grad" => Some(DiffOp::Grad),
            "curl" => Some(DiffOp::Curl),
            "rot" => Some(DiffOp::Rot),
            "div" => Some(DiffOp::Div),
            _ => None,
        }
    }

    /// Output rank and the terms `(out component, in component, partial
    /// direction, sign)`.
    fn terms(self, rank: usize, dim: usize) -> Result<(usize, Vec<(usize, usize, usize, f64)>)> {
        Ok(match (self, rank, dim) {
            (DiffOp::Grad, 1, d) => (d, (0..d).map(|j| (j, 0, j, 1.0)).collect()),
            (DiffOp::Curl, 3, 3) => (
                3,
                vec![
                    (0, 2, 1, 1.0),
                    (0, 1, 2, -1.0),
                    (1, 0, 2, 1.0),
                    (1, 2, 0, -1.0),
                    (2, 1, 0, 1.0),
                    (2, 0, 1, -1.0),
                ],
            ),
            (DiffOp::Curl, 1, 2) => (2, vec![(0, 0, 1, 1.0), (1, 0, 0, -1.0)]),
            (DiffOp::Rot, 2, 2) => (1, vec![(0, 1, 0, 1.0), (0, 0, 1, -1.0)]),
            (DiffOp::Div, r, d) if r == d => (1, (0..d).map(|j| (0, j, j, 1.0)).collect()),
            _ => {
                return Err(Error::RankMismatch(format!(
                    "{self:?} of a rank {rank} field in {dim}D"
                )))
            }
        })
    }
}

/// Second order forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    GradGrad,
    CurlCurl,
    DivDiv,
}

impl Form {
    fn op(self, rank: usize, dim: usize) -> DiffOp {
        match self {
            Form::GradGrad => DiffOp::Grad,
            Form::DivDiv => DiffOp::Div,
            Form::CurlCurl if dim == 2 && rank == 2 => DiffOp::Rot,
            Form::CurlCurl => DiffOp::Curl,
        }
    }
}

/// Per-cell derivative maps from broken `P_p` (rank `r`) to broken `P_{p-1}`
/// (the output rank), in the orthonormal bases.
#[derive(Clone, Debug)]
pub struct BrokenDerivative {
    pub out_rank: usize,
    /// Scalar polynomials per output component (`dim P_{p-1}`).
    pub out_size: usize,
    pub blocks: Vec<DMatrix<f64>>,
}

pub fn broken_derivative(broken: &BrokenSpace, op: DiffOp) -> Result<BrokenDerivative> {
    let mesh = broken.mesh();
    let dim = mesh.dim();
    let p = broken.degree();
    let (out_rank, terms) = op.terms(broken.rank(), dim)?;
    let n = broken.poly_size();
    let n_out = if p == 0 { 0 } else { dim_poly(dim, p - 1) };
    let table = RefTable::new(dim, p, (2 * p).max(1))?;
    let blocks = (0..mesh.num_cells())
        .map(|c| {
            let bg = mesh.barycentric_gradients(c);
            let mut b = DMatrix::zeros(out_rank * n_out, broken.local_dim());
            for q in 0..table.rule.len() {
                let w = table.rule.weights[q];
                let g = table.physical_grads(q, &bg);
                let phi = &table.values[q];
                for &(o, i, j, s) in &terms {
                    for k in 0..n {
                        let gk = s * w * g[k][j];
                        if gk == 0.0 {
                            continue;
                        }
                        for kp in 0..n_out {
                            b[(o * n_out + kp, i * n + k)] += gk * phi[kp];
                        }
                    }
                }
            }
            b
        })
        .collect();
    Ok(BrokenDerivative {
        out_rank,
        out_size: n_out,
        blocks,
    })
}

/// Adds `A^T B` of per-cell blocks into a global matrix indexed by dofs.
fn scatter(global: &mut DMatrix<f64>, rows: &[usize], cols: &[usize], local: &DMatrix<f64>) {
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            global[(r, c)] += local[(i, j)];
        }
    }
}

/// `M_ij = (phi_i, phi_j)`.
pub fn assemble_mass(space: &DiscreteSpace) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(space.dim, space.dim);
    for cm in &space.cells {
        let local = cm.coeffs.transpose() * &cm.coeffs;
        scatter(&mut m, &cm.dofs, &cm.dofs, &local);
    }
    symmetrize(m)
}

/// `S_ij = (d phi_i, d phi_j)` for the derivative selected by `form`.
pub fn assemble_stiffness(space: &DiscreteSpace, form: Form) -> Result<DMatrix<f64>> {
    let op = form.op(space.rank(), space.mesh().dim());
    let bd = broken_derivative(&space.broken, op)?;
    let mut s = DMatrix::zeros(space.dim, space.dim);
    for (c, cm) in space.cells.iter().enumerate() {
        let img = &bd.blocks[c] * &cm.coeffs;
        let local = img.transpose() * &img;
        scatter(&mut s, &cm.dofs, &cm.dofs, &local);
    }
    Ok(symmetrize(s))
}

fn symmetrize(a: DMatrix<f64>) -> DMatrix<f64> {
    let t = a.transpose();
    (a + t) * 0.5
}

/// Result of [`derivative_matrix`].
#[derive(Clone, Debug)]
pub struct Derivative {
    /// `d(phi_j^from) = sum_i matrix[(i, j)] phi_i^to`.
    pub matrix: DMatrix<f64>,
    /// Largest L2 residual of a column.
    pub residual: f64,
}

/// Coefficients of the derivatives of the `from` basis in the `to` basis.
///
/// Errors with [`Error::NotContained`] when some derivative leaves the span of
/// `to` by more than `tol` (relative to its norm, floored at one).
pub fn derivative_matrix(
    from: &DiscreteSpace,
    to: &DiscreteSpace,
    op: DiffOp,
    tol: f64,
) -> Result<Derivative> {
    if !from.layout().same_as(to.layout()) {
        return Err(Error::Incompatible(
            "spaces live on different meshes".into(),
        ));
    }
    let bd = broken_derivative(&from.broken, op)?;
    if bd.out_rank != to.rank() {
        return Err(Error::RankMismatch(format!(
            "{op:?} produces rank {}, target has rank {}",
            bd.out_rank,
            to.rank()
        )));
    }
    if from.degree() > to.degree() + 1 {
        return Err(Error::Incompatible(format!(
            "degree {} target cannot hold derivatives of degree {}",
            to.degree(),
            from.degree()
        )));
    }
    let n_to = to.broken.poly_size();
    let n_out = bd.out_size;
    // per-cell images in the target's broken coordinates
    let images: Vec<DMatrix<f64>> = from
        .cells
        .iter()
        .enumerate()
        .map(|(c, cm)| {
            let img = &bd.blocks[c] * &cm.coeffs;
            let mut full = DMatrix::zeros(to.broken.local_dim(), cm.dofs.len());
            for o in 0..bd.out_rank {
                for k in 0..n_out {
                    for j in 0..cm.dofs.len() {
                        full[(o * n_to + k, j)] = img[(o * n_out + k, j)];
                    }
                }
            }
            full
        })
        .collect();
    let mut rhs = DMatrix::zeros(to.dim, from.dim);
    for (c, img) in images.iter().enumerate() {
        let local = to.cells[c].coeffs.transpose() * img;
        scatter(&mut rhs, &to.cells[c].dofs, &from.cells[c].dofs, &local);
    }
    let m = assemble_mass(to);
    let d = spd_solve(&m, &rhs)?;

    let mut res2 = vec![0.0; from.dim];
    let mut norm2 = vec![0.0; from.dim];
    for (c, img) in images.iter().enumerate() {
        let tc = &to.cells[c];
        let fc = &from.cells[c];
        let dsub = DMatrix::from_fn(tc.dofs.len(), fc.dofs.len(), |i, j| {
            d[(tc.dofs[i], fc.dofs[j])]
        });
        let diff = img - &tc.coeffs * dsub;
        for (j, &g) in fc.dofs.iter().enumerate() {
            res2[g] += diff.column(j).norm_squared();
            norm2[g] += img.column(j).norm_squared();
        }
    }
    let mut residual: f64 = 0.0;
    for j in 0..from.dim {
        let r = res2[j].sqrt();
        residual = residual.max(r);
        if r > tol * norm2[j].sqrt().max(1.0) {
            return Err(Error::NotContained {
                index: j,
                residual: r,
            });
        }
    }
    Ok(Derivative {
        matrix: d,
        residual,
    })
}

/// Essential boundary conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// `u x n = 0` (tangential trace).
    Tangential,
    /// `u . n = 0`.
    Normal,
    /// `u = 0`.
    Full,
}

/// Subspace satisfying the boundary condition, with the transform `T`
/// (`space.dim x new dim`, orthonormal columns). Forms restrict as `T^T A T`.
pub fn apply_bc(
    space: &DiscreteSpace,
    bc: BoundaryCondition,
) -> Result<(DiscreteSpace, DMatrix<f64>)> {
    let component = match bc {
        BoundaryCondition::Tangential => Component::Tangential,
        BoundaryCondition::Normal => Component::Normal,
        BoundaryCondition::Full => Component::Full,
    };
    let clause = Clause::new(Scope::BoundaryFacets, 0, component);
    let name = format!("{}+bc", space.name);
    restrict(space, &[clause], &name, RANK_TOL)
}

/// `T^T A T`.
pub fn restrict_form(a: &DMatrix<f64>, t: &DMatrix<f64>) -> DMatrix<f64> {
    symmetrize(t.transpose() * a * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::mesh::{single_triangle, two_tets, two_triangles, unit_square};
    use crate::refelem::Family;
    use crate::spaces::{ConstrainOptions, GluedSpace, SpaceTag};

    #[test]
    fn broken_mass_is_identity() {
        let s = DiscreteSpace::from_broken(BrokenSpace::on_mesh(&two_tets(), 3, 2), "b");
        let m = assemble_mass(&s);
        assert!(max_abs(&(m - DMatrix::identity(s.dim, s.dim))) < 1e-10);
    }

    #[test]
    fn mass_is_spd() {
        let s = GluedSpace::new(&two_triangles(), Family::HRotTri, 3)
            .unwrap()
            .space;
        let m = assemble_mass(&s);
        assert!(max_abs(&(&m - m.transpose())) < 1e-14);
        let eig = crate::linalg::symmetric_eigenvalues(&m);
        assert!(eig.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn gradient_of_constants_vanishes() {
        let l = SpaceTag::Lagrange
            .build(&unit_square(2).unwrap(), 2, &ConstrainOptions::default())
            .unwrap()
            .space;
        let s = assemble_stiffness(&l, Form::GradGrad).unwrap();
        let ev = crate::linalg::symmetric_eigenvalues(&s);
        assert!(ev[0].abs() < 1e-10 * ev[ev.len() - 1]);
        assert!(ev[1] > 1e-6);

        // gradient of the constant function, expressed in the broken P1 vectors
        let one = DiscreteSpace::from_broken(BrokenSpace::on_mesh(l.mesh(), 1, 0), "one");
        let vec1 = DiscreteSpace::from_broken(BrokenSpace::on_mesh(l.mesh(), 2, 0), "v");
        let d = derivative_matrix(&one, &vec1, DiffOp::Grad, 1e-10).unwrap();
        assert!(max_abs(&d.matrix) < 1e-14);
    }

    #[test]
    fn grad_then_curl_is_zero_2d() {
        let opts = ConstrainOptions::default();
        let h = SpaceTag::Hermite
            .build(&two_triangles(), 3, &opts)
            .unwrap()
            .space;
        let y = SpaceTag::Y.build(&two_triangles(), 2, &opts).unwrap().space;
        let dg = SpaceTag::Dg
            .build(&two_triangles(), 1, &opts)
            .unwrap()
            .space;
        let g = derivative_matrix(&h, &y, DiffOp::Grad, 1e-8).unwrap();
        let r = derivative_matrix(&y, &dg, DiffOp::Rot, 1e-8).unwrap();
        assert!(max_abs(&(&r.matrix * &g.matrix)) < 1e-10);
        assert!(g.residual < 1e-10 && r.residual < 1e-10);
    }

    #[test]
    fn derivative_outside_target_is_reported() {
        let opts = ConstrainOptions::default();
        let h = SpaceTag::Lagrange
            .build(&two_triangles(), 2, &opts)
            .unwrap()
            .space;
        // the tangential-only space holds gradients, a continuous vector space does not
        let v = SpaceTag::VectorLagrange
            .build(&two_triangles(), 1, &opts)
            .unwrap()
            .space;
        assert!(matches!(
            derivative_matrix(&h, &v, DiffOp::Grad, 1e-8),
            Err(Error::NotContained { .. })
        ));
    }

    #[test]
    fn tangential_bc_on_single_triangle() {
        let y = GluedSpace::new(&single_triangle(), Family::HRotTri, 2)
            .unwrap()
            .space;
        let (bc, t) = apply_bc(&y, BoundaryCondition::Tangential).unwrap();
        // all vertices are corners, all edges boundary: the six vertex values,
        // three edge tangential functions vanish; edge normals survive
        assert_eq!(bc.dim, 3);
        let g = t.transpose() * &t;
        assert!(max_abs(&(g - DMatrix::identity(3, 3))) < 1e-12);
    }

    #[test]
    fn stiffness_psd_divdiv() {
        let s = GluedSpace::new(&two_tets(), Family::HDivTet, 2)
            .unwrap()
            .space;
        let k = assemble_stiffness(&s, Form::DivDiv).unwrap();
        let ev = crate::linalg::symmetric_eigenvalues(&k);
        assert!(ev[0] > -1e-10 * ev[ev.len() - 1]);
    }
}
