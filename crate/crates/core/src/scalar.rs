//! Scalar types for evaluating polynomials together with their derivatives.
//!
//! Every basis formula in this crate is written once, generically over
//! [`Scalar`], and evaluated with `f64` for values, [`Dual`] for values and
//! gradients, or [`Jet2`] when second derivatives are needed. Barycentric
//! coordinates are affine, so seeding them with their constant gradients gives
//! exact physical derivatives through the chain rule.

use core::ops::{Add, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
{
    fn constant(v: f64) -> Self;
    fn value(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn constant(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
}

/// Value and gradient with respect to (up to) three physical coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub g: [f64; 3],
}

impl Dual {
    pub fn affine(v: f64, g: [f64; 3]) -> Self {
        Dual { v, g }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, o: Dual) -> Dual {
        Dual {
            v: self.v + o.v,
            g: [self.g[0] + o.g[0], self.g[1] + o.g[1], self.g[2] + o.g[2]],
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, o: Dual) -> Dual {
        Dual {
            v: self.v - o.v,
            g: [self.g[0] - o.g[0], self.g[1] - o.g[1], self.g[2] - o.g[2]],
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, o: Dual) -> Dual {
        Dual {
            v: self.v * o.v,
            g: [
                self.v * o.g[0] + self.g[0] * o.v,
                self.v * o.g[1] + self.g[1] * o.v,
                self.v * o.g[2] + self.g[2] * o.v,
            ],
        }
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, s: f64) -> Dual {
        Dual {
            v: self.v * s,
            g: [self.g[0] * s, self.g[1] * s, self.g[2] * s],
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        self * -1.0
    }
}

impl Scalar for Dual {
    #[inline]
    fn constant(v: f64) -> Self {
        Dual { v, g: [0.0; 3] }
    }
    #[inline]
    fn value(self) -> f64 {
        self.v
    }
}

/// Second order truncated Taylor polynomial in three variables.
///
/// Coefficient layout: `[1, x, y, z, xx, xy, xz, yy, yz, zz]`, i.e. the
/// function is `c0 + sum ci hi + sum_{i<=j} cij hi hj`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub c: [f64; 10],
}

/// Index of the second order coefficient for the pair `(i, j)`.
const fn pair(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 0) => 4,
        (0, 1) => 5,
        (0, 2) => 6,
        (1, 1) => 7,
        (1, 2) => 8,
        _ => 9,
    }
}

impl Jet2 {
    pub fn affine(v: f64, g: [f64; 3]) -> Self {
        let mut c = [0.0; 10];
        c[0] = v;
        c[1..4].copy_from_slice(&g);
        Jet2 { c }
    }

    pub fn gradient(&self) -> [f64; 3] {
        [self.c[1], self.c[2], self.c[3]]
    }

    /// Partial derivative for a multi-index of total order at most two.
    pub fn derivative(&self, alpha: [u8; 3]) -> f64 {
        let order: u8 = alpha.iter().sum();
        match order {
            0 => self.c[0],
            1 => {
                let i = alpha.iter().position(|&a| a == 1).unwrap();
                self.c[1 + i]
            }
            2 => {
                if let Some(i) = alpha.iter().position(|&a| a == 2) {
                    2.0 * self.c[pair(i, i)]
                } else {
                    let i = alpha.iter().position(|&a| a == 1).unwrap();
                    let j = alpha.iter().rposition(|&a| a == 1).unwrap();
                    self.c[pair(i, j)]
                }
            }
            _ => panic!("Jet2 carries derivatives up to order two"),
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(self, o: Jet2) -> Jet2 {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c.iter()) {
            *a += b;
        }
        Jet2 { c }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(self, o: Jet2) -> Jet2 {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c.iter()) {
            *a -= b;
        }
        Jet2 { c }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, o: Jet2) -> Jet2 {
        let a = &self.c;
        let b = &o.c;
        let mut c = [0.0; 10];
        c[0] = a[0] * b[0];
        for i in 0..3 {
            c[1 + i] = a[0] * b[1 + i] + a[1 + i] * b[0];
        }
        for i in 0..3 {
            for j in i..3 {
                let k = pair(i, j);
                let cross = if i == j {
                    a[1 + i] * b[1 + i]
                } else {
                    a[1 + i] * b[1 + j] + a[1 + j] * b[1 + i]
                };
                c[k] = a[0] * b[k] + a[k] * b[0] + cross;
            }
        }
        Jet2 { c }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, s: f64) -> Jet2 {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a *= s;
        }
        Jet2 { c }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(self) -> Jet2 {
        self * -1.0
    }
}

impl Scalar for Jet2 {
    #[inline]
    fn constant(v: f64) -> Self {
        let mut c = [0.0; 10];
        c[0] = v;
        Jet2 { c }
    }
    #[inline]
    fn value(self) -> f64 {
        self.c[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // f(x, y, z) = (1 + 2x - y) * (3 + z + x) at the origin
    fn sample<S: Scalar>(x: S, y: S, z: S) -> S {
        (S::constant(1.0) + x * 2.0 - y) * (S::constant(3.0) + z + x)
    }

    #[test]
    fn dual_gradient_of_product() {
        let x = Dual::affine(0.0, [1.0, 0.0, 0.0]);
        let y = Dual::affine(0.0, [0.0, 1.0, 0.0]);
        let z = Dual::affine(0.0, [0.0, 0.0, 1.0]);
        let f = sample(x, y, z);
        assert_eq!(f.v, 3.0);
        assert_eq!(f.g, [7.0, -3.0, 1.0]);
    }

    #[test]
    fn jet_second_derivatives() {
        let x = Jet2::affine(0.0, [1.0, 0.0, 0.0]);
        let y = Jet2::affine(0.0, [0.0, 1.0, 0.0]);
        let z = Jet2::affine(0.0, [0.0, 0.0, 1.0]);
        let f = sample(x, y, z);
        // expanded: 3 + 7x - 3y + z + 2x^2 - xy + 2xz - yz
        assert_eq!(f.derivative([0, 0, 0]), 3.0);
        assert_eq!(f.derivative([1, 0, 0]), 7.0);
        assert_eq!(f.derivative([2, 0, 0]), 4.0);
        assert_eq!(f.derivative([1, 1, 0]), -1.0);
        assert_eq!(f.derivative([1, 0, 1]), 2.0);
        assert_eq!(f.derivative([0, 1, 1]), -1.0);
        assert_eq!(f.derivative([0, 0, 2]), 0.0);
    }
}
