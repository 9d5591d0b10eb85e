//! Partially discontinuous nodal (PDN) finite elements for `H(rot)`, `H(curl)`
//! and `H(div)`, the discrete de Rham complexes they belong to, and the
//! numerical machinery used to verify them: dimension audits, exactness rank
//! checks, Maxwell eigenvalue experiments and condition numbers.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, reports and the
//! command line driver live in the companion `pdn` crate.
//!
//! Module map:
//!
//! * [`mesh`] simplicial meshes, structured generators, Clough–Tocher and
//!   Worsey–Farin splits, entity frames.
//! * [`orthopoly`] Jacobi polynomials, orthonormal simplex polynomials and
//!   collapsed Gauss–Jacobi quadrature.
//! * [`refelem`] reference basis families and tabulation.
//! * [`spaces`] broken, glued and constrained global spaces, and the printed
//!   dimension formulas with their audit.
//! * [`assembly`] mass/stiffness forms, derivative matrices, boundary
//!   conditions.
//! * [`analysis`] generalized eigenproblems, Maxwell spectra, exactness and
//!   conditioning experiments.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod analysis;
pub mod assembly;
pub mod linalg;
pub mod mesh;
pub mod orthopoly;
pub mod refelem;
pub mod scalar;
pub mod spaces;

mod error;

pub use error::{Error, Result};
pub use nalgebra::{DMatrix, DVector};
