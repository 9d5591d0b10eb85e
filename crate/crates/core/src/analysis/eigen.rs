use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Default relative threshold separating zero modes from the rest.
pub const ZERO_TOL: f64 = 1e-8;

/// Sorted spectrum of a symmetric-definite pencil.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Absolute threshold: eigenvalues at or below it are zero modes.
    pub threshold: f64,
    pub zero_modes: usize,
}

impl Spectrum {
    /// Eigenvalues above the threshold.
    pub fn retained(&self) -> &[f64] {
        &self.eigenvalues[self.zero_modes..]
    }
}

/// Solves `S x = lambda M x` for symmetric `S` and symmetric positive
/// definite `M` by Cholesky reduction.
///
/// `zero_tol` is relative to the largest eigenvalue magnitude.
pub fn solve_gevp(s: &DMatrix<f64>, m: &DMatrix<f64>, zero_tol: f64) -> Result<Spectrum> {
    let n = m.nrows();
    if m.ncols() != n || s.nrows() != n || s.ncols() != n {
        return Err(Error::DimensionMismatch(alloc::format!(
            "pencil of {}x{} and {}x{} matrices",
            s.nrows(),
            s.ncols(),
            m.nrows(),
            m.ncols()
        )));
    }
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            threshold: 0.0,
            zero_modes: 0,
        });
    }
    let chol = m.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let x = l
        .solve_lower_triangular(s)
        .ok_or(Error::NotPositiveDefinite)?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let c = (&c + c.transpose()) * 0.5;
    let mut ev: Vec<f64> = c.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    let scale = ev.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let threshold = zero_tol * scale;
    let zero_modes = ev.iter().filter(|&&x| x <= threshold).count();
    Ok(Spectrum {
        eigenvalues: ev,
        threshold,
        zero_modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_pencil() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let sp = solve_gevp(&m, &m, ZERO_TOL).unwrap();
        assert!(sp.eigenvalues.iter().all(|&x| (x - 1.0).abs() < 1e-14));
        let z = solve_gevp(&DMatrix::zeros(2, 2), &m, ZERO_TOL).unwrap();
        assert_eq!(z.zero_modes, 2);
        assert!(z.eigenvalues.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn diagonal_pencil() {
        let s = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![2.0, 0.0]));
        let sp = solve_gevp(&s, &DMatrix::identity(2, 2), ZERO_TOL).unwrap();
        assert_eq!(sp.eigenvalues, alloc::vec![0.0, 2.0]);
        assert_eq!(sp.retained(), &[2.0]);
    }

    #[test]
    fn indefinite_mass_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            solve_gevp(&m, &m, ZERO_TOL),
            Err(Error::NotPositiveDefinite)
        ));
    }

    proptest! {
        #[test]
        fn shift_by_mass(entries in proptest::collection::vec(-1.0f64..1.0, 16), diag in proptest::collection::vec(0.5f64..2.0, 4)) {
            let a = DMatrix::from_vec(4, 4, entries);
            let s = a.transpose() * &a;
            let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)) + DMatrix::identity(4, 4) * 0.1;
            let base = solve_gevp(&s, &m, ZERO_TOL).unwrap();
            let shifted = solve_gevp(&(&s + &m), &m, ZERO_TOL).unwrap();
            for (x, y) in base.eigenvalues.iter().zip(&shifted.eigenvalues) {
                prop_assert!((x + 1.0 - y).abs() < 1e-10);
            }
        }
    }
}
