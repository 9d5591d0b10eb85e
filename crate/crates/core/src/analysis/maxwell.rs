use alloc::vec::Vec;

use core::f64::consts::PI;

use nalgebra::DMatrix;

use super::eigen::{solve_gevp, Spectrum};
use crate::assembly::{
    apply_bc, assemble_mass, assemble_stiffness, restrict_form, BoundaryCondition, Form,
};
use crate::mesh::{structured_2d, structured_3d, SimplicialMesh};
use crate::refelem::Family;
use crate::spaces::GluedSpace;
use crate::{Error, Result};

/// Smallest `count` eigenvalues of the curl-curl problem with `u x n = 0` on
/// `(0, pi)^d`: sums of `d` squares, one entry per index tuple that is not all
/// zero.
pub fn exact_maxwell_spectrum(d: usize, count: usize) -> Result<Vec<u64>> {
    if d != 2 && d != 3 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: d,
        });
    }
    // indices up to sqrt(count) + 1 cover the smallest `count` values
    let mut m = 1u64;
    while (m * m) as usize <= count {
        m += 1;
    }
    let top = m + 1;
    let mut all = Vec::new();
    for a in 0..=top {
        for b in 0..=top {
            if d == 2 {
                if a + b > 0 {
                    all.push(a * a + b * b);
                }
                continue;
            }
            for c in 0..=top {
                if a + b + c > 0 {
                    all.push(a * a + b * b + c * c);
                }
            }
        }
    }
    all.sort_unstable();
    // values up to top^2 are complete in the enumeration
    all.retain(|&v| v <= top * top);
    all.truncate(count);
    Ok(all)
}

/// Outcome of a Maxwell eigenvalue run.
#[derive(Clone, Debug)]
pub struct MaxwellReport {
    pub family: Family,
    pub p: usize,
    pub n: usize,
    pub dim: usize,
    /// Dimension after the boundary condition.
    pub constrained_dim: usize,
    pub spectrum: Spectrum,
    /// First retained eigenvalues with their exact counterparts.
    pub computed: Vec<f64>,
    pub exact: Vec<u64>,
}

impl MaxwellReport {
    pub fn relative_errors(&self) -> Vec<f64> {
        self.computed
            .iter()
            .zip(&self.exact)
            .map(|(c, &e)| (c - e as f64).abs() / e as f64)
            .collect()
    }

    pub fn max_relative_error(&self) -> f64 {
        self.relative_errors().into_iter().fold(0.0, f64::max)
    }
}

/// Structured mesh of `(0, pi)^d`.
pub fn maxwell_mesh(d: usize, n: usize) -> Result<SimplicialMesh> {
    match d {
        2 => structured_2d(n, [0.0, PI], [0.0, PI]),
        3 => structured_3d(n, [0.0, PI], [0.0, PI], [0.0, PI]),
        _ => Err(Error::WrongDimension {
            expected: 3,
            found: d,
        }),
    }
}

/// Restricted curl-curl and mass matrices of a glued family with `u x n = 0`.
#[derive(Clone, Debug)]
pub struct MaxwellPencil {
    pub dim: usize,
    pub stiffness: DMatrix<f64>,
    pub mass: DMatrix<f64>,
}

pub fn maxwell_pencil(family: Family, p: usize, mesh: &SimplicialMesh) -> Result<MaxwellPencil> {
    if !family.is_vector() || family == Family::HDivTet {
        return Err(Error::Incompatible(
            "the curl-curl problem needs a curl-conforming vector family".into(),
        ));
    }
    let glued = GluedSpace::new(mesh, family, p)?;
    let (_, t) = apply_bc(&glued.space, BoundaryCondition::Tangential)?;
    Ok(MaxwellPencil {
        dim: glued.dim(),
        stiffness: restrict_form(&assemble_stiffness(&glued.space, Form::CurlCurl)?, &t),
        mass: restrict_form(&assemble_mass(&glued.space), &t),
    })
}

/// Eigenvalues of a pencil compared with the exact spectrum of `(0, pi)^d`
/// over the first `count` retained modes. `n` only labels the report.
pub fn maxwell_report(
    family: Family,
    p: usize,
    n: usize,
    d: usize,
    pencil: &MaxwellPencil,
    count: usize,
    zero_tol: f64,
) -> Result<MaxwellReport> {
    let spectrum = solve_gevp(&pencil.stiffness, &pencil.mass, zero_tol)?;
    let computed: Vec<f64> = spectrum.retained().iter().take(count).copied().collect();
    let exact = exact_maxwell_spectrum(d, computed.len().max(1))?;
    Ok(MaxwellReport {
        family,
        p,
        n,
        dim: pencil.dim,
        constrained_dim: pencil.mass.nrows(),
        spectrum,
        computed,
        exact,
    })
}

/// Curl-curl eigenvalues of `family` on `mesh`; see [`maxwell_report`].
pub fn maxwell_on_mesh(
    family: Family,
    p: usize,
    mesh: &SimplicialMesh,
    n: usize,
    count: usize,
    zero_tol: f64,
) -> Result<MaxwellReport> {
    let pencil = maxwell_pencil(family, p, mesh)?;
    maxwell_report(family, p, n, mesh.dim(), &pencil, count, zero_tol)
}

/// [`maxwell_on_mesh`] on the structured `n` mesh of `(0, pi)^d`.
pub fn maxwell_experiment(
    family: Family,
    p: usize,
    d: usize,
    n: usize,
    count: usize,
    zero_tol: f64,
) -> Result<MaxwellReport> {
    maxwell_on_mesh(family, p, &maxwell_mesh(d, n)?, n, count, zero_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_lists() {
        assert_eq!(
            exact_maxwell_spectrum(2, 10).unwrap(),
            [1, 1, 2, 4, 4, 5, 5, 8, 9, 9]
        );
        assert_eq!(
            exact_maxwell_spectrum(3, 10).unwrap(),
            [1, 1, 1, 2, 2, 2, 3, 4, 4, 4]
        );
        assert_eq!(exact_maxwell_spectrum(2, 1).unwrap(), [1]);
        assert!(exact_maxwell_spectrum(4, 1).is_err());
    }

    #[test]
    fn exact_list_is_complete_for_long_requests() {
        // brute force over a large box
        let list = exact_maxwell_spectrum(2, 60).unwrap();
        let mut brute: Vec<u64> = (0..20u64)
            .flat_map(|a| (0..20u64).map(move |b| a * a + b * b))
            .filter(|&v| v > 0)
            .collect();
        brute.sort_unstable();
        assert_eq!(list, brute[..60]);
    }
}
