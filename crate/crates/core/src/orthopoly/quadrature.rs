//! Collapsed-coordinate Gauss–Jacobi rules on the reference simplex.
//!
//! The simplex is mapped from the cube by `lambda_0 = xi_0`, `lambda_1 = (1 -
//! xi_0) xi_1`, ... The Jacobian `(1 - xi_0)^{d-1} (1 - xi_1)^{d-2} ...` is
//! absorbed into Gauss–Jacobi weights in each direction, so `q` points per
//! direction integrate total degree `2q - 1` exactly.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::jacobi::{jacobi, jacobi_derivative, jacobi_gamma};
use crate::{Error, Result};

pub const MAX_DEGREE: usize = 30;

/// Points are barycentric coordinates padded to length four.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub dim: usize,
    pub points: Vec<[f64; 4]>,
    pub weights: Vec<f64>,
    pub exact_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Gauss–Jacobi nodes and weights on `[-1, 1]` for weight `(1-x)^a (1+x)^b`.
///
/// Nodes come from the Golub–Welsch eigenproblem and are polished by Newton
/// steps; weights use the Christoffel formula, which is accurate once the
/// nodes are.
pub fn gauss_jacobi(q: usize, a: usize, b: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(q >= 1);
    let (af, bf) = (a as f64, b as f64);
    let mut t = DMatrix::<f64>::zeros(q, q);
    for k in 0..q {
        let kf = k as f64;
        let s = 2.0 * kf + af + bf;
        let diag = if s == 0.0 || (k == 0 && a + b == 0) {
            (bf - af) / (af + bf + 2.0)
        } else {
            (bf * bf - af * af) / (s * (s + 2.0))
        };
        t[(k, k)] = diag;
        if k + 1 < q {
            let n = kf + 1.0;
            let s = 2.0 * n + af + bf;
            let off = (4.0 * n * (n + af) * (n + bf) * (n + af + bf)
                / (s * s * (s + 1.0) * (s - 1.0)))
                .sqrt();
            t[(k, k + 1)] = off;
            t[(k + 1, k)] = off;
        }
    }
    let mut nodes: Vec<f64> = t.symmetric_eigen().eigenvalues.iter().copied().collect();
    nodes.sort_by(|x, y| x.partial_cmp(y).unwrap());
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let d = jacobi_derivative(q, a, b, *x);
            if d != 0.0 {
                *x -= jacobi(q, a, b, *x) / d;
            }
        }
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let s: f64 = (0..q)
                .map(|k| jacobi(k, a, b, x).powi(2) / jacobi_gamma(k, a, b))
                .sum();
            1.0 / s
        })
        .collect();
    (nodes, weights)
}

/// Rule on `[0, 1]` for weight `(1 - xi)^a`, as (xi, weight) pairs.
fn unit_rule(q: usize, a: usize) -> Vec<(f64, f64)> {
    // (1-x)^a on [-1,1] with x = 2 xi - 1 gives 2^{a+1} (1-xi)^a dxi
    let (x, w) = gauss_jacobi(q, a, 0);
    let scale = 1.0 / 2f64.powi(a as i32 + 1);
    x.iter()
        .zip(w.iter())
        .map(|(&x, &w)| ((x + 1.0) / 2.0, w * scale))
        .collect()
}

/// Rule on the reference simplex of dimension `d` (1, 2 or 3) integrating all
/// polynomials of total degree `degree` exactly. Weights sum to the simplex
/// measure (1, 1/2, 1/6).
pub fn simplex_rule(d: usize, degree: usize) -> Result<QuadratureRule> {
    if degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree,
            min: 0,
            max: MAX_DEGREE,
        });
    }
    if !(1..=3).contains(&d) {
        return Err(Error::DimensionMismatch(alloc::format!(
            "no simplex rule in dimension {d}"
        )));
    }
    let q = (degree + 2) / 2;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    match d {
        1 => {
            for (x, w) in unit_rule(q, 0) {
                points.push([1.0 - x, x, 0.0, 0.0]);
                weights.push(w);
            }
        }
        2 => {
            let r0 = unit_rule(q, 1);
            let r1 = unit_rule(q, 0);
            for &(x0, w0) in &r0 {
                for &(x1, w1) in &r1 {
                    let l1 = (1.0 - x0) * x1;
                    points.push([x0, l1, (1.0 - x0) * (1.0 - x1), 0.0]);
                    weights.push(w0 * w1);
                }
            }
        }
        _ => {
            let r0 = unit_rule(q, 2);
            let r1 = unit_rule(q, 1);
            let r2 = unit_rule(q, 0);
            for &(x0, w0) in &r0 {
                for &(x1, w1) in &r1 {
                    for &(x2, w2) in &r2 {
                        let s0 = 1.0 - x0;
                        let s1 = s0 * (1.0 - x1);
                        points.push([x0, s0 * x1, s1 * x2, s1 * (1.0 - x2)]);
                        weights.push(w0 * w1 * w2);
                    }
                }
            }
        }
    }
    Ok(QuadratureRule {
        dim: d,
        points,
        weights,
        exact_degree: 2 * q - 1,
    })
}

/// Points of the principal lattice of order `m` on a simplex with `k + 1`
/// vertices, as barycentric coordinates padded to four.
pub fn principal_lattice(k: usize, m: usize) -> Vec<[f64; 4]> {
    if m == 0 || k == 0 {
        let mut b = [0.0; 4];
        for v in b.iter_mut().take(k + 1) {
            *v = 1.0 / (k + 1) as f64;
        }
        return vec![b];
    }
    let mf = m as f64;
    let mut out = Vec::new();
    let mut idx = vec![0usize; k + 1];
    fn rec(pos: usize, left: usize, idx: &mut Vec<usize>, out: &mut Vec<[f64; 4]>, mf: f64) {
        let k = idx.len() - 1;
        if pos == k {
            idx[k] = left;
            let mut b = [0.0; 4];
            for (j, &i) in idx.iter().enumerate() {
                b[j] = i as f64 / mf;
            }
            out.push(b);
            return;
        }
        for i in (0..=left).rev() {
            idx[pos] = i;
            rec(pos + 1, left - i, idx, out, mf);
        }
    }
    rec(0, m, &mut idx, &mut out, mf);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|i| i as f64).product()
    }

    // int over the reference simplex of prod lambda_i^{a_i} = prod a_i! d! |S| / (|a| + d)!
    fn moment(a: &[usize]) -> f64 {
        let d = a.len() - 1;
        let num: f64 = a.iter().map(|&k| factorial(k)).product();
        num / factorial(a.iter().sum::<usize>() + d)
    }

    fn exponents(d: usize, deg: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = vec![0; d + 1];
        fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if pos == cur.len() {
                out.push(cur.clone());
                return;
            }
            for i in 0..=left {
                cur[pos] = i;
                rec(pos + 1, left - i, cur, out);
            }
            cur[pos] = 0;
        }
        rec(0, deg, &mut cur, &mut out);
        out
    }

    #[test]
    fn measures() {
        let t = simplex_rule(2, 0).unwrap();
        assert!((t.weights.iter().sum::<f64>() - 0.5).abs() < 1e-15);
        let t = simplex_rule(3, 7).unwrap();
        assert!((t.weights.iter().sum::<f64>() - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn bubble_moments() {
        let t = simplex_rule(2, 3).unwrap();
        let s: f64 = t
            .points
            .iter()
            .zip(&t.weights)
            .map(|(p, w)| w * p[0] * p[1] * p[2])
            .sum();
        assert!((s - 1.0 / 120.0).abs() < 1e-16);
        let t = simplex_rule(3, 4).unwrap();
        let s: f64 = t
            .points
            .iter()
            .zip(&t.weights)
            .map(|(p, w)| w * p[0] * p[1] * p[2] * p[3])
            .sum();
        assert!((s - 1.0 / 5040.0).abs() < 1e-17);
    }

    #[test]
    fn monomial_exactness() {
        for d in 1..=3 {
            for deg in [1, 4, 9, 14, 20] {
                let rule = simplex_rule(d, deg).unwrap();
                assert!(rule.exact_degree >= deg);
                for a in exponents(d, deg) {
                    let exact = moment(&a);
                    let s: f64 = rule
                        .points
                        .iter()
                        .zip(&rule.weights)
                        .map(|(p, w)| {
                            w * a
                                .iter()
                                .enumerate()
                                .map(|(i, &k)| p[i].powi(k as i32))
                                .product::<f64>()
                        })
                        .sum();
                    assert!(
                        (s - exact).abs() <= 1e-13 * exact,
                        "d={d} a={a:?}: {s} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn degree_limit() {
        assert!(simplex_rule(3, MAX_DEGREE).is_ok());
        assert!(matches!(
            simplex_rule(3, MAX_DEGREE + 1),
            Err(Error::UnsupportedDegree { .. })
        ));
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(principal_lattice(2, 3).len(), 10);
        assert_eq!(principal_lattice(3, 2).len(), 10);
        assert_eq!(principal_lattice(1, 4).len(), 5);
        assert_eq!(principal_lattice(0, 4).len(), 1);
    }
}
