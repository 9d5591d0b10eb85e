//! Eigenvalue, exactness and conditioning experiments.

mod condition;
mod eigen;
mod exactness;
mod maxwell;

pub use condition::{condition_experiment, stacked_derivative, ConditionReport};
pub use eigen::{solve_gevp, Spectrum, ZERO_TOL};
pub use exactness::{exactness_check, ExactnessReport, Identity};
pub use maxwell::{
    exact_maxwell_spectrum, maxwell_experiment, maxwell_mesh, maxwell_on_mesh, maxwell_pencil,
    maxwell_report, MaxwellPencil, MaxwellReport,
};
