//! Global spaces: broken piecewise polynomials, glued entity bases and
//! constrained subspaces.

mod broken;
pub mod constraints;
pub mod dimension;
mod discrete;
mod glued;
mod layout;
pub mod presets;

pub use broken::{dual_lambdas, jet_lambdas, BrokenSpace, RefTable};
pub use constraints::{
    constrain, constraint_rows, describe, restrict, Clause, Component, ConstrainOptions,
    ConstrainedSpace, ContinuitySpec, Quantity, Scope, CANCEL_TOL,
};
pub use dimension::{audit_dimension, dof_dimension, printed_dimension, AuditRow};
pub use discrete::{apply_what, CellMap, DiscreteSpace, Tabulation, What};
pub use glued::GluedSpace;
pub use layout::Layout;
pub use presets::{ComplexTag, SpaceTag};
