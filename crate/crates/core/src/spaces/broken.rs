//! Piecewise polynomials without any inter-element continuity, in the
//! orthonormal simplex basis of each cell.

use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::Layout;
use crate::mesh::SimplicialMesh;
use crate::orthopoly::quadrature::{simplex_rule, QuadratureRule};
use crate::orthopoly::simplex::{dim_poly, ortho_eval_all};
use crate::scalar::{Dual, Jet2, Scalar};
use crate::Result;

/// Broken space of vector rank `rank` and degree `degree` on a layout.
///
/// Coefficients are laid out cell by cell; inside a cell component `i`,
/// polynomial `k` sits at `i * N + k` with `N = dim P_degree`. Cell bases are
/// the reference orthonormal polynomials pulled back affinely and divided by
/// the square root of the Jacobian determinant, so they are orthonormal in the
/// physical L2 product.
#[derive(Clone, Debug)]
pub struct BrokenSpace {
    layout: Layout,
    rank: usize,
    degree: usize,
}

impl BrokenSpace {
    pub fn new(layout: Layout, rank: usize, degree: usize) -> Self {
        BrokenSpace {
            layout,
            rank,
            degree,
        }
    }

    pub fn on_mesh(mesh: &SimplicialMesh, rank: usize, degree: usize) -> Self {
        Self::new(Layout::plain(mesh), rank, degree)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn mesh(&self) -> &SimplicialMesh {
        self.layout.mesh()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Scalar polynomials per cell.
    pub fn poly_size(&self) -> usize {
        dim_poly(self.mesh().dim(), self.degree)
    }

    /// Coefficients per cell.
    pub fn local_dim(&self) -> usize {
        self.rank * self.poly_size()
    }

    pub fn dim(&self) -> usize {
        self.mesh().num_cells() * self.local_dim()
    }

    pub fn offset(&self, c: usize) -> usize {
        c * self.local_dim()
    }

    /// Physical scalar basis values on cell `c` of `geo` (a mesh with the same
    /// cells, possibly rescaled), given seeded barycentric coordinates.
    pub fn eval_scalar<S: Scalar>(&self, geo: &SimplicialMesh, c: usize, lam: &[S]) -> Vec<S> {
        let s = 1.0 / geo.jacobian_det(c).sqrt();
        ortho_eval_all(geo.dim(), self.degree, lam)
            .into_iter()
            .map(|v| v * s)
            .collect()
    }
}

/// Barycentric coordinates seeded with their physical gradients.
pub fn dual_lambdas(mesh: &SimplicialMesh, c: usize, bary: &[f64]) -> Vec<Dual> {
    let g = mesh.barycentric_gradients(c);
    (0..=mesh.dim())
        .map(|i| Dual::affine(bary[i], g[i]))
        .collect()
}

pub fn jet_lambdas(mesh: &SimplicialMesh, c: usize, bary: &[f64]) -> Vec<Jet2> {
    let g = mesh.barycentric_gradients(c);
    (0..=mesh.dim())
        .map(|i| Jet2::affine(bary[i], g[i]))
        .collect()
}

/// Reference tabulation of the orthonormal basis on a quadrature rule:
/// values and gradients with respect to the reference coordinates
/// `x_i = lambda_{i+1}`.
#[derive(Clone, Debug)]
pub struct RefTable {
    pub dim: usize,
    pub degree: usize,
    pub rule: QuadratureRule,
    pub values: Vec<Vec<f64>>,
    pub grads: Vec<Vec<[f64; 3]>>,
}

impl RefTable {
    pub fn new(dim: usize, degree: usize, quad_degree: usize) -> Result<Self> {
        let rule = simplex_rule(dim, quad_degree)?;
        let mut values = Vec::with_capacity(rule.len());
        let mut grads = Vec::with_capacity(rule.len());
        for pt in &rule.points {
            let mut lam = Vec::with_capacity(dim + 1);
            let mut g0 = [0.0; 3];
            for v in g0.iter_mut().take(dim) {
                *v = -1.0;
            }
            lam.push(Dual::affine(pt[0], g0));
            for i in 0..dim {
                let mut g = [0.0; 3];
                g[i] = 1.0;
                lam.push(Dual::affine(pt[i + 1], g));
            }
            let all = ortho_eval_all(dim, degree, &lam);
            values.push(all.iter().map(|d| d.v).collect());
            grads.push(all.iter().map(|d| d.g).collect());
        }
        Ok(RefTable {
            dim,
            degree,
            rule,
            values,
            grads,
        })
    }

    /// Physical gradients of all basis functions at quadrature point `q` of
    /// cell `c` (without the `1/sqrt(det J)` factor).
    pub fn physical_grads(&self, q: usize, bary_grads: &[[f64; 3]; 4]) -> Vec<[f64; 3]> {
        self.grads[q]
            .iter()
            .map(|g| {
                let mut out = [0.0; 3];
                for i in 0..self.dim {
                    for (k, o) in out.iter_mut().enumerate() {
                        *o += g[i] * bary_grads[i + 1][k];
                    }
                }
                out
            })
            .collect()
    }

    /// Gram matrix of the first `n` basis functions on the reference cell,
    /// scaled to the unit-measure normalization used by physical cells.
    pub fn gram(&self, n: usize) -> DMatrix<f64> {
        let mut g = DMatrix::zeros(n, n);
        for (q, w) in self.rule.weights.iter().enumerate() {
            let v = &self.values[q];
            for i in 0..n {
                let wi = w * v[i];
                for j in 0..n {
                    g[(i, j)] += wi * v[j];
                }
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{single_tet, two_triangles};

    #[test]
    fn dimensions() {
        assert_eq!(BrokenSpace::on_mesh(&single_tet(), 1, 0).dim(), 1);
        let wf = Layout::worsey_farin(&single_tet()).unwrap();
        assert_eq!(BrokenSpace::new(wf, 3, 3).dim(), 720);
        assert_eq!(BrokenSpace::on_mesh(&two_triangles(), 1, 2).dim(), 12);
    }

    #[test]
    fn reference_gram_is_identity() {
        for (d, p) in [(2, 6), (3, 6)] {
            let t = RefTable::new(d, p, 2 * p).unwrap();
            let g = t.gram(dim_poly(d, p));
            let err = (g - DMatrix::identity(dim_poly(d, p), dim_poly(d, p)))
                .abs()
                .max();
            assert!(err < 1e-10, "{err}");
        }
    }
}
