//! Structured and canonical small meshes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::SimplicialMesh;
use crate::{Error, Result};

fn check_domain(n: usize, lo: &[f64], hi: &[f64]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidMesh("grid size must be positive".into()));
    }
    for (a, b) in lo.iter().zip(hi) {
        if !(b - a > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Degenerate(format!(
                "domain side [{a}, {b}] has no positive length"
            )));
        }
    }
    Ok(())
}

/// `n x n` squares on `[x0, x1] x [y0, y1]`, each cut by the diagonal from its
/// lower left to its upper right corner.
pub fn structured_2d(n: usize, x: [f64; 2], y: [f64; 2]) -> Result<SimplicialMesh> {
    check_domain(n, &[x[0], y[0]], &[x[1], y[1]])?;
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut verts = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            let t = [i as f64 / n as f64, j as f64 / n as f64];
            verts.push([
                x[0] + t[0] * (x[1] - x[0]),
                y[0] + t[1] * (y[1] - y[0]),
                0.0,
            ]);
        }
    }
    let mut cells = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v01, v11) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            cells.push(vec![v00, v10, v11]);
            cells.push(vec![v00, v01, v11]);
        }
    }
    SimplicialMesh::new(2, verts, &cells)
}

/// `n^3` cubes on a box, each split into six tetrahedra around its main
/// diagonal (Kuhn subdivision).
pub fn structured_3d(n: usize, x: [f64; 2], y: [f64; 2], z: [f64; 2]) -> Result<SimplicialMesh> {
    check_domain(n, &[x[0], y[0], z[0]], &[x[1], y[1], z[1]])?;
    let id = |i: usize, j: usize, k: usize| (k * (n + 1) + j) * (n + 1) + i;
    let mut verts = Vec::with_capacity((n + 1).pow(3));
    for k in 0..=n {
        for j in 0..=n {
            for i in 0..=n {
                let t = [
                    i as f64 / n as f64,
                    j as f64 / n as f64,
                    k as f64 / n as f64,
                ];
                verts.push([
                    x[0] + t[0] * (x[1] - x[0]),
                    y[0] + t[1] * (y[1] - y[0]),
                    z[0] + t[2] * (z[1] - z[0]),
                ]);
            }
        }
    }
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut cells = Vec::with_capacity(6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                for perm in PERMS {
                    let mut cur = [i, j, k];
                    let mut tet = vec![id(cur[0], cur[1], cur[2])];
                    for axis in perm {
                        cur[axis] += 1;
                        tet.push(id(cur[0], cur[1], cur[2]));
                    }
                    cells.push(tet);
                }
            }
        }
    }
    SimplicialMesh::new(3, verts, &cells)
}

pub fn unit_square(n: usize) -> Result<SimplicialMesh> {
    structured_2d(n, [0.0, 1.0], [0.0, 1.0])
}

pub fn unit_cube(n: usize) -> Result<SimplicialMesh> {
    structured_3d(n, [0.0, 1.0], [0.0, 1.0], [0.0, 1.0])
}

/// Reference triangle.
pub fn single_triangle() -> SimplicialMesh {
    SimplicialMesh::new(
        2,
        vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        &[vec![0, 1, 2]],
    )
    .unwrap()
}

/// Unit square cut into two triangles.
pub fn two_triangles() -> SimplicialMesh {
    unit_square(1).unwrap()
}

/// Reference tetrahedron.
pub fn single_tet() -> SimplicialMesh {
    SimplicialMesh::new(
        3,
        vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ],
        &[vec![0, 1, 2, 3]],
    )
    .unwrap()
}

/// Reference tetrahedron plus its reflection through the face opposite the
/// origin.
pub fn two_tets() -> SimplicialMesh {
    SimplicialMesh::new(
        3,
        vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [1.0, 1.0, 1.0],
        ],
        &[vec![0, 1, 2, 3], vec![1, 2, 3, 4]],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_counts() {
        let m = unit_square(1).unwrap();
        assert_eq!(m.counts()[..3], [4, 5, 2]);
        assert_eq!(m.euler_characteristic(), 1);
        let m = structured_2d(
            2,
            [0.0, core::f64::consts::PI],
            [0.0, core::f64::consts::PI],
        )
        .unwrap();
        assert_eq!(m.counts()[..3], [9, 16, 8]);
        assert_eq!(m.euler_characteristic(), 1);
        assert!(structured_2d(1, [0.0, 0.0], [0.0, 1.0]).is_err());
        assert!(structured_2d(0, [0.0, 1.0], [0.0, 1.0]).is_err());
    }

    #[test]
    fn cube_counts() {
        let m = unit_cube(1).unwrap();
        assert_eq!(m.counts(), [8, 19, 18, 6]);
        assert_eq!(m.euler_characteristic(), 1);
        let boundary = (0..18).filter(|&f| m.is_boundary(2, f)).count();
        assert_eq!(boundary, 12);
        let m = unit_cube(2).unwrap();
        assert_eq!(m.num_cells(), 48);
        assert_eq!(m.euler_characteristic(), 1);
        let total: f64 = (0..48).map(|c| m.volume(c)).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_tet_counts() {
        let m = two_tets();
        assert_eq!(m.counts(), [5, 9, 7, 2]);
        assert_eq!(m.euler_characteristic(), 1);
        let shared = m.find_entity(&[1, 2, 3]).unwrap();
        assert!(!m.is_boundary(2, shared));
        assert_eq!(m.entity_cells(2, shared), &[0, 1]);
    }
}
