//! Orthonormal polynomials on the reference simplex (Dubiner type).
//!
//! For `n = (n_0, ..., n_{d-1})` and weight exponents `alpha = (alpha_0, ...,
//! alpha_d)` the polynomial is
//!
//! ```text
//! prod_j Q_{n_j}^{a_j, alpha_j}(lambda_j, lambda_{j+1} + ... + lambda_d)
//! a_j = 2 (n_{j+1} + ... + n_{d-1}) + alpha_{j+1} + ... + alpha_d + d - j - 1
//! ```
//!
//! divided by its norm. In collapsed coordinates the weighted integral of the
//! square factors into one dimensional Jacobi norms, so the norm is the square
//! root of `prod_j c_{n_j}^{a_j, alpha_j}`; the tests confirm this against
//! quadrature.

use alloc::vec::Vec;

use super::jacobi::{jacobi_c, scaled_jacobi, scaled_jacobi_all};
use crate::scalar::Scalar;
use crate::{Error, Result};
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// The exponents `a_j` of the product formula.
pub fn exponents(n: &[usize], alpha: &[usize]) -> Vec<usize> {
    let d = n.len();
    (0..d)
        .map(|j| {
            let tail_n: usize = n[j + 1..].iter().sum();
            let tail_a: usize = alpha[j + 1..=d].iter().sum();
            2 * tail_n + tail_a + d - j - 1
        })
        .collect()
}

/// Weighted L2 norm of the unnormalized product on the reference simplex.
pub fn ortho_norm(n: &[usize], alpha: &[usize]) -> f64 {
    let a = exponents(n, alpha);
    let mut c = 1.0;
    for j in 0..n.len() {
        c *= jacobi_c(n[j], a[j], alpha[j]);
    }
    c.sqrt()
}

fn check_index(n: &[usize], alpha: &[usize], lambda_len: usize) -> Result<()> {
    let d = n.len();
    if d == 0 || alpha.len() != d + 1 || lambda_len != d + 1 {
        return Err(Error::DimensionMismatch(alloc::format!(
            "index of length {} needs {} weights and {} barycentric coordinates, got {} and {}",
            d,
            d + 1,
            d + 1,
            alpha.len(),
            lambda_len
        )));
    }
    Ok(())
}

/// Unnormalized product formula (no division by the norm).
pub fn ortho_product<S: Scalar>(n: &[usize], alpha: &[usize], lambda: &[S]) -> Result<S> {
    check_index(n, alpha, lambda.len())?;
    let d = n.len();
    let a = exponents(n, alpha);
    let mut value = S::constant(1.0);
    for j in 0..d {
        let mut rest = lambda[j + 1];
        for l in &lambda[j + 2..] {
            rest = rest + *l;
        }
        value = value * scaled_jacobi(n[j], a[j], alpha[j], lambda[j], rest);
    }
    Ok(value)
}

/// Orthonormal polynomial with respect to the weight `prod lambda_i^alpha_i`
/// on the reference simplex (area 1/2, volume 1/6).
pub fn ortho_eval<S: Scalar>(n: &[usize], alpha: &[usize], lambda: &[S]) -> Result<S> {
    let v = ortho_product(n, alpha, lambda)?;
    Ok(v * (1.0 / ortho_norm(n, alpha)))
}

/// Number of polynomials of total degree at most `p` in `d` variables.
pub fn dim_poly(d: usize, p: usize) -> usize {
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 1..=d {
        num *= p + i;
        den *= i;
    }
    num / den
}

/// Multi-indices of total degree at most `p`, ordered by total degree and
/// then lexicographically. Entries beyond `d` are zero.
pub fn indices(d: usize, p: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity(dim_poly(d, p));
    for total in 0..=p {
        match d {
            1 => out.push([total, 0, 0]),
            2 => {
                for n0 in (0..=total).rev() {
                    out.push([n0, total - n0, 0]);
                }
            }
            3 => {
                for n0 in (0..=total).rev() {
                    for n1 in (0..=total - n0).rev() {
                        out.push([n0, n1, total - n0 - n1]);
                    }
                }
            }
            _ => panic!("simplex dimension must be 1, 2 or 3"),
        }
    }
    out
}

/// All unweighted orthonormal polynomials of degree at most `p` at one point,
/// in the order of [`indices`]. Much faster than calling [`ortho_eval`] per
/// index since the Jacobi recurrences are shared.
pub fn ortho_eval_all<S: Scalar>(d: usize, p: usize, lambda: &[S]) -> Vec<S> {
    assert_eq!(lambda.len(), d + 1);
    let idx = indices(d, p);
    let mut out = Vec::with_capacity(idx.len());
    match d {
        1 => {
            let q = scaled_jacobi_all(p, 0, 0, lambda[0], lambda[1]);
            for m in &idx {
                out.push(q[m[0]] * (1.0 / jacobi_c(m[0], 0, 0).sqrt()));
            }
        }
        2 => {
            let inner = scaled_jacobi_all(p, 0, 0, lambda[1], lambda[2]);
            let rest = lambda[1] + lambda[2];
            let outer: Vec<Vec<S>> = (0..=p)
                .map(|n1| scaled_jacobi_all(p - n1, 2 * n1 + 1, 0, lambda[0], rest))
                .collect();
            for m in &idx {
                let (n0, n1) = (m[0], m[1]);
                let norm = (jacobi_c(n0, 2 * n1 + 1, 0) * jacobi_c(n1, 0, 0)).sqrt();
                out.push(outer[n1][n0] * inner[n1] * (1.0 / norm));
            }
        }
        3 => {
            let r2 = lambda[2] + lambda[3];
            let r1 = lambda[1] + r2;
            let q2 = scaled_jacobi_all(p, 0, 0, lambda[2], lambda[3]);
            let q1: Vec<Vec<S>> = (0..=p)
                .map(|n2| scaled_jacobi_all(p - n2, 2 * n2 + 1, 0, lambda[1], r2))
                .collect();
            // q0[s] with s = n1 + n2
            let q0: Vec<Vec<S>> = (0..=p)
                .map(|s| scaled_jacobi_all(p - s, 2 * s + 2, 0, lambda[0], r1))
                .collect();
            for m in &idx {
                let (n0, n1, n2) = (m[0], m[1], m[2]);
                let s = n1 + n2;
                let norm =
                    (jacobi_c(n0, 2 * s + 2, 0) * jacobi_c(n1, 2 * n2 + 1, 0) * jacobi_c(n2, 0, 0))
                        .sqrt();
                out.push(q0[s][n0] * q1[n2][n1] * q2[n2] * (1.0 / norm));
            }
        }
        _ => panic!("simplex dimension must be 1, 2 or 3"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::quadrature::simplex_rule;
    use crate::scalar::Dual;

    fn weight(alpha: &[usize], l: &[f64]) -> f64 {
        alpha
            .iter()
            .zip(l)
            .map(|(&a, &x)| x.powi(a as i32))
            .product()
    }

    #[test]
    fn constants() {
        let v = ortho_eval(&[0, 0], &[0, 0, 0], &[0.2, 0.3, 0.5]).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-14);
        let v = ortho_eval(&[0, 0, 0], &[0, 0, 0, 0], &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!((v - 6f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rejects_mismatched_index() {
        assert!(ortho_eval(&[0, 0], &[0, 0], &[0.2, 0.3, 0.5]).is_err());
        assert!(ortho_eval(&[1, 0, 0], &[0, 0, 0, 0], &[0.2, 0.3, 0.5]).is_err());
    }

    fn gram_check(d: usize, alpha: &[usize], pmax: usize) {
        let asum: usize = alpha.iter().sum();
        let rule = simplex_rule(d, 2 * pmax + asum).unwrap();
        let idx = indices(d, pmax);
        let vals: Vec<Vec<f64>> = rule
            .points
            .iter()
            .map(|pt| {
                idx.iter()
                    .map(|m| ortho_eval(&m[..d], alpha, &pt[..=d]).unwrap())
                    .collect()
            })
            .collect();
        for i in 0..idx.len() {
            for j in 0..=i {
                let mut s = 0.0;
                for (q, pt) in rule.points.iter().enumerate() {
                    s += rule.weights[q] * weight(alpha, &pt[..=d]) * vals[q][i] * vals[q][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (s - expect).abs() < 1e-10,
                    "d={d} alpha={alpha:?} {:?} {:?}: {s}",
                    idx[i],
                    idx[j]
                );
            }
        }
    }

    #[test]
    fn weighted_gram_is_identity() {
        gram_check(2, &[0, 0, 0], 6);
        gram_check(2, &[2, 2, 2], 6);
        gram_check(2, &[1, 0, 2], 6);
        gram_check(3, &[0, 0, 0, 0], 6);
        gram_check(3, &[2, 2, 2, 2], 6);
        gram_check(3, &[0, 1, 2, 1], 5);
    }

    #[test]
    fn fast_evaluation_agrees() {
        for d in 1..=3 {
            let lam: [f64; 4] = [0.1, 0.2, 0.3, 0.4];
            let lam = if d == 1 {
                [0.35, 0.65, 0.0, 0.0]
            } else if d == 2 {
                [0.2, 0.5, 0.3, 0.0]
            } else {
                lam
            };
            let all = ortho_eval_all(d, 7, &lam[..=d]);
            for (m, v) in indices(d, 7).iter().zip(all) {
                let r = ortho_eval(&m[..d], &[0; 4][..=d], &lam[..=d]).unwrap();
                assert!((r - v).abs() < 1e-11 * r.abs().max(1.0));
            }
        }
    }

    #[test]
    fn gradient_matches_differences() {
        // reference tet coordinates x = (lambda1, lambda2, lambda3)
        let x = [0.21, 0.17, 0.33];
        let h = 1e-6;
        let lam = |x: [f64; 3]| [1.0 - x[0] - x[1] - x[2], x[0], x[1], x[2]];
        for m in indices(3, 5) {
            let alpha = [1, 0, 2, 1];
            let seeds = [
                Dual::affine(lam(x)[0], [-1.0, -1.0, -1.0]),
                Dual::affine(x[0], [1.0, 0.0, 0.0]),
                Dual::affine(x[1], [0.0, 1.0, 0.0]),
                Dual::affine(x[2], [0.0, 0.0, 1.0]),
            ];
            let g = ortho_eval(&m, &alpha, &seeds).unwrap().g;
            for k in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[k] += h;
                xm[k] -= h;
                let fp: f64 = ortho_eval(&m, &alpha, &lam(xp)).unwrap();
                let fm: f64 = ortho_eval(&m, &alpha, &lam(xm)).unwrap();
                let fd = (fp - fm) / (2.0 * h);
                assert!(
                    (fd - g[k]).abs() <= 1e-6 * g[k].abs().max(1.0),
                    "{m:?} {k}: {fd} vs {}",
                    g[k]
                );
            }
        }
    }

    #[test]
    fn index_counts() {
        assert_eq!(indices(2, 3).len(), 10);
        assert_eq!(indices(3, 3).len(), 20);
        assert_eq!(dim_poly(3, 9), 220);
        assert_eq!(indices(3, 0), alloc::vec![[0, 0, 0]]);
    }
}
