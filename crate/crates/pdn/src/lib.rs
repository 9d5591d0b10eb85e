//! File formats, reports and the command line driver for `pdn-core`.

pub mod cli;
pub mod meshio;
pub mod mtx;
pub mod report;
