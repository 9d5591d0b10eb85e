//! MatrixMarket coordinate export.

use std::fmt::Write as _;

use pdn_core::DMatrix;

/// `%%MatrixMarket matrix coordinate real general` text holding the nonzero
/// entries of `a` (1-based, column-major order).
pub fn to_matrix_market(a: &DMatrix<f64>) -> String {
    let nnz = a.iter().filter(|x| **x != 0.0).count();
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(s, "{} {} {}", a.nrows(), a.ncols(), nnz);
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let v = a[(i, j)];
            if v != 0.0 {
                let _ = writeln!(s, "{} {} {:.17e}", i + 1, j + 1, v);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, -2.5, 0.0]);
        let s = to_matrix_market(&a);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[1], "2 3 2");
        assert!(lines[2].starts_with("1 1 1.0"));
        assert!(lines[3].starts_with("2 2 -2.5"));
        let v: f64 = lines[3].split(' ').nth(2).unwrap().parse().unwrap();
        assert_eq!(v, -2.5);
    }
}
