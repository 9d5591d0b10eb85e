//! Jacobi polynomials `J_n^{a,b}` on `[-1, 1]` with weight `(1-x)^a (1+x)^b`,
//! and their homogeneous ("scaled") form used by all simplex formulas.

use alloc::vec::Vec;

use crate::scalar::Scalar;
#[cfg(not(feature = "std"))]
use num_traits::Float;

/// Recurrence coefficients `(A, B, C, D)` for degree `n >= 2`:
/// `D P_n = (A x + B) P_{n-1} - C P_{n-2}`.
fn recurrence(n: usize, a: usize, b: usize) -> (f64, f64, f64, f64) {
    let (n, a, b) = (n as f64, a as f64, b as f64);
    let c = a + b;
    let big_a = (2.0 * n + c - 1.0) * (2.0 * n + c) * (2.0 * n + c - 2.0);
    let big_b = (2.0 * n + c - 1.0) * (a * a - b * b);
    let big_c = 2.0 * (n + a - 1.0) * (n + b - 1.0) * (2.0 * n + c);
    let big_d = 2.0 * n * (n + c) * (2.0 * n + c - 2.0);
    (big_a, big_b, big_c, big_d)
}

/// Standard Jacobi polynomial `J_n^{a,b}(x)`. Extrapolation outside `[-1,1]`
/// is allowed.
pub fn jacobi(n: usize, a: usize, b: usize, x: f64) -> f64 {
    scaled_jacobi(n, a, b, (1.0 + x) / 2.0, (1.0 - x) / 2.0)
}

/// Derivative of `J_n^{a,b}` at `x`.
pub fn jacobi_derivative(n: usize, a: usize, b: usize, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n + a + b + 1) as f64 * jacobi(n - 1, a + 1, b + 1, x)
}

/// The homogeneous polynomial `Q_n(x, y) = J_n^{a,b}((x - y)/(x + y)) (x + y)^n`.
///
/// The exponent `b` attaches to `x` and `a` to `y`: on `x + y = 1` the weight
/// is proportional to `y^a x^b`. The recurrence never divides by `x + y`, so
/// the value at `x + y = 0` is the polynomial limit.
pub fn scaled_jacobi<S: Scalar>(n: usize, a: usize, b: usize, x: S, y: S) -> S {
    let all = scaled_jacobi_all(n, a, b, x, y);
    all[n]
}

/// `Q_0, ..., Q_n` for the same parameters.
pub fn scaled_jacobi_all<S: Scalar>(n: usize, a: usize, b: usize, x: S, y: S) -> Vec<S> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(S::constant(1.0));
    if n == 0 {
        return out;
    }
    let diff = x - y;
    let sum = x + y;
    let (af, bf) = (a as f64, b as f64);
    out.push((diff * (af + bf + 2.0) + sum * (af - bf)) * 0.5);
    if n == 1 {
        return out;
    }
    let sum2 = sum * sum;
    for k in 2..=n {
        let (ca, cb, cc, cd) = recurrence(k, a, b);
        let next = ((diff * ca + sum * cb) * out[k - 1] - sum2 * out[k - 2] * cc) * (1.0 / cd);
        out.push(next);
    }
    out
}

/// `(n+a)! (n+b)! / ((n+a+b)! n!)` without overflow.
fn factorial_ratio(n: usize, a: usize, b: usize) -> f64 {
    let mut r = 1.0;
    for i in 1..=a {
        r *= (n + i) as f64 / (n + b + i) as f64;
    }
    r
}

/// `gamma_n^{a,b} = int_{-1}^{1} J_n^2 (1-x)^a (1+x)^b dx`.
pub fn jacobi_gamma(n: usize, a: usize, b: usize) -> f64 {
    let pow = 2f64.powi((a + b + 1) as i32);
    pow / (2 * n + a + b + 1) as f64 * factorial_ratio(n, a, b)
}

/// Norm on the unit interval: `c_n^{a,b} = 2^{-a-b-1} gamma_n^{a,b}`.
pub fn jacobi_c(n: usize, a: usize, b: usize) -> f64 {
    factorial_ratio(n, a, b) / (2 * n + a + b + 1) as f64
}
