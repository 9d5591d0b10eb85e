//! Dense linear algebra on top of `nalgebra`: nullspaces with an audited rank
//! decision, ranks, symmetric eigenvalues and condition numbers.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};

/// Default relative threshold below which singular values count as zero.
pub const RANK_TOL: f64 = 1e-9;

/// Outcome of a rank decision on a list of singular values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankDecision {
    pub rank: usize,
    pub threshold: f64,
    /// Ratio between the smallest retained and the largest discarded
    /// singular value (infinite when either side is empty).
    pub gap: f64,
}

/// Counts singular values above `tol * s_max`.
///
/// When `audit` is set, a singular value within a factor ten of the threshold
/// is an error: the decision would depend on the tolerance.
pub fn decide_rank(singular: &[f64], tol: f64, audit: bool) -> Result<RankDecision> {
    let smax = singular.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax == 0.0 {
        return Ok(RankDecision {
            rank: 0,
            threshold: 0.0,
            gap: f64::INFINITY,
        });
    }
    let t = tol * smax;
    if audit {
        if let Some(&s) = singular.iter().find(|&&s| s > t / 10.0 && s < t * 10.0) {
            return Err(Error::AmbiguousRank {
                threshold: t,
                value: s,
            });
        }
    }
    let rank = singular.iter().filter(|&&s| s > t).count();
    let kept = singular
        .iter()
        .filter(|&&s| s > t)
        .fold(f64::INFINITY, |m, &s| m.min(s));
    let dropped = singular
        .iter()
        .filter(|&&s| s <= t)
        .fold(0.0f64, |m, &s| m.max(s));
    let gap = if dropped == 0.0 {
        f64::INFINITY
    } else {
        kept / dropped
    };
    Ok(RankDecision {
        rank,
        threshold: t,
        gap,
    })
}

pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect()
}

/// Numerical rank with the audited threshold `tol` (relative).
pub fn rank(a: &DMatrix<f64>, tol: f64) -> Result<usize> {
    Ok(decide_rank(&singular_values(a), tol, true)?.rank)
}

/// Orthonormal basis of the nullspace of `c` (columns of the result).
///
/// Columns of `c` that are identically zero are passed through as unit
/// vectors and listed first; the nullspace of the remaining columns follows.
/// Tall blocks are reduced by QR before the SVD, wide blocks are padded to
/// square so that the full right singular basis is available.
pub fn nullspace(c: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let n = c.ncols();
    let touched: Vec<usize> = (0..n)
        .filter(|&j| c.column(j).iter().any(|&x| x != 0.0))
        .collect();
    let free: Vec<usize> = (0..n)
        .filter(|&j| c.column(j).iter().all(|&x| x == 0.0))
        .collect();
    let rows: Vec<usize> = (0..c.nrows())
        .filter(|&i| c.row(i).iter().any(|&x| x != 0.0))
        .collect();
    let m = touched.len();
    let sub = DMatrix::from_fn(rows.len(), m, |i, j| c[(rows[i], touched[j])]);

    let null_sub = if m == 0 {
        DMatrix::zeros(0, 0)
    } else {
        let square = if sub.nrows() >= m {
            sub.qr().r()
        } else {
            let mut s = DMatrix::zeros(m, m);
            s.view_mut((0, 0), (sub.nrows(), m)).copy_from(&sub);
            s
        };
        let svd = square.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
        let decision = decide_rank(&sv, tol, true)?;
        let keep: Vec<usize> = (0..sv.len())
            .filter(|&i| sv[i] <= decision.threshold)
            .collect();
        let mut basis = DMatrix::zeros(m, keep.len());
        for (col, &i) in keep.iter().enumerate() {
            basis.set_column(col, &v_t.row(i).transpose());
        }
        basis
    };

    let dim = free.len() + null_sub.ncols();
    let mut t = DMatrix::zeros(n, dim);
    for (col, &j) in free.iter().enumerate() {
        t[(j, col)] = 1.0;
    }
    for col in 0..null_sub.ncols() {
        for (i, &j) in touched.iter().enumerate() {
            t[(j, free.len() + col)] = null_sub[(i, col)];
        }
    }
    Ok(t)
}

/// Scales each row of `c` to unit Euclidean norm; zero rows are removed.
pub fn normalize_rows(c: &DMatrix<f64>) -> DMatrix<f64> {
    let keep: Vec<(usize, f64)> = (0..c.nrows())
        .filter_map(|i| {
            let n = c.row(i).norm();
            (n > 0.0).then_some((i, n))
        })
        .collect();
    DMatrix::from_fn(keep.len(), c.ncols(), |i, j| c[(keep[i].0, j)] / keep[i].1)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let sym = (a + a.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// `D^{-1/2} A D^{-1/2}` with `D = diag(A)`; rows and columns with a zero
/// diagonal entry are left unscaled.
pub fn diagonal_normalize(a: &DMatrix<f64>) -> DMatrix<f64> {
    let s: Vec<f64> = (0..a.nrows())
        .map(|i| {
            if a[(i, i)] > 0.0 {
                1.0 / a[(i, i)].sqrt()
            } else {
                1.0
            }
        })
        .collect();
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s[i] * s[j])
}

/// Column scaling that makes `B^T B` have unit diagonal where nonzero.
pub fn column_normalize(b: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = b.clone();
    for j in 0..b.ncols() {
        let n = b.column(j).norm();
        if n > 0.0 {
            out.column_mut(j).scale_mut(1.0 / n);
        }
    }
    out
}

/// `lambda_max / lambda_min` of a symmetric positive definite matrix.
pub fn spd_condition(a: &DMatrix<f64>) -> Result<f64> {
    let ev = symmetric_eigenvalues(a);
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if lo <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(hi / lo)
}

/// Condition number of `B^T B` over its nonzero eigenvalues, computed from
/// the singular values of `B`.
pub fn gram_condition_nonzero(b: &DMatrix<f64>, tol: f64) -> Result<f64> {
    let sv = singular_values(b);
    let d = decide_rank(&sv, tol, false)?;
    if d.rank == 0 {
        return Err(Error::EmptySpace);
    }
    let hi = sv.iter().fold(0.0f64, |m, &s| m.max(s));
    let lo = sv
        .iter()
        .filter(|&&s| s > d.threshold)
        .fold(f64::INFINITY, |m, &s| m.min(s));
    Ok((hi / lo).powi(2))
}

/// Solves `a x = b` for symmetric positive definite `a`.
pub fn spd_solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = a.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    Ok(chol.solve(b))
}

pub fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

pub fn vector_max_abs(a: &DVector<f64>) -> f64 {
    a.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nullspace_of_simple_rows() {
        // x0 = x1, x2 free, x3 = 0
        let c = DMatrix::from_row_slice(2, 4, &[1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0]);
        let t = nullspace(&c, RANK_TOL).unwrap();
        assert_eq!(t.ncols(), 2);
        assert!(max_abs(&(&c * &t)) < 1e-14);
        let g = t.transpose() * &t;
        assert!(max_abs(&(g - DMatrix::identity(2, 2))) < 1e-14);
        // the untouched column comes first as a unit vector
        assert_eq!(t[(2, 0)], 1.0);
    }

    #[test]
    fn ambiguous_rank_is_reported() {
        let s = [1.0, 1e-3, 5e-9];
        assert!(matches!(
            decide_rank(&s, 1e-9, true),
            Err(Error::AmbiguousRank { .. })
        ));
        assert_eq!(decide_rank(&s, 1e-9, false).unwrap().rank, 3);
        assert_eq!(decide_rank(&[1.0, 1e-14], 1e-9, true).unwrap().rank, 1);
    }

    #[test]
    fn condition_of_identity() {
        assert!((spd_condition(&DMatrix::identity(5, 5)).unwrap() - 1.0).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn normalization_absorbs_diagonal_scaling(
            entries in proptest::collection::vec(-1.0f64..1.0, 16),
            scale in proptest::collection::vec(0.1f64..10.0, 4),
        ) {
            let b = DMatrix::from_row_slice(4, 4, &entries);
            let a = b.transpose() * &b + DMatrix::identity(4, 4);
            let d = DMatrix::from_diagonal(&DVector::from_vec(scale));
            let scaled = &d * &a * &d;
            let k1 = spd_condition(&diagonal_normalize(&a)).unwrap();
            let k2 = spd_condition(&diagonal_normalize(&scaled)).unwrap();
            prop_assert!((k1 - k2).abs() <= 1e-9 * k1);
        }

        #[test]
        fn nullspace_is_annihilated(entries in proptest::collection::vec(-1.0f64..1.0, 18)) {
            let mut c = DMatrix::from_row_slice(3, 6, &entries);
            // make the third row dependent
            let r = c.row(0) + c.row(1);
            c.set_row(2, &r);
            let t = nullspace(&c, RANK_TOL).unwrap();
            prop_assert_eq!(t.ncols(), 4);
            prop_assert!(max_abs(&(&c * &t)) < 1e-12);
        }
    }
}
