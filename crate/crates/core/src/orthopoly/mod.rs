//! Jacobi polynomials, orthonormal simplex polynomials and quadrature.

pub mod jacobi;
pub mod quadrature;
pub mod simplex;

pub use jacobi::{
    jacobi, jacobi_c, jacobi_derivative, jacobi_gamma, scaled_jacobi, scaled_jacobi_all,
};
pub use quadrature::{principal_lattice, simplex_rule, QuadratureRule};
pub use simplex::{dim_poly, indices, ortho_eval, ortho_eval_all, ortho_norm};
