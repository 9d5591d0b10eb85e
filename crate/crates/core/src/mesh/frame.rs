//! Orthonormal frames of edges and faces.
//!
//! The tangent of an edge points from its lower to its higher global vertex.
//! In 2D the edge normal is the tangent rotated by -90 degrees. In 3D the first
//! edge normal is the first coordinate axis not nearly parallel to the tangent
//! (`|tau . e_k| < 0.9`), orthogonalized against it, and the second is `tau x
//! nu_1`. A face with sorted vertices `v0 < v1 < v2` has normal `(v1 - v0) x
//! (v2 - v0)` normalized, first tangent along `v1 - v0` and second tangent
//! `nu x tau_1`.

use alloc::vec;
use alloc::vec::Vec;

use super::{cross, dot, norm, sub, SimplicialMesh};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct EntityFrame {
    pub tangents: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = norm(a);
    a.map(|x| x / n)
}

pub fn entity_frame(mesh: &SimplicialMesh, k: usize, id: usize) -> Result<EntityFrame> {
    let dim = mesh.dim();
    if k == 0 || k >= dim {
        return Err(Error::InvalidEntity { dim: k, id });
    }
    let verts = mesh.entity(k, id)?;
    let p: Vec<[f64; 3]> = verts.iter().map(|&v| mesh.vertex(v)).collect();
    if k == 1 {
        let tau = unit(sub(p[1], p[0]));
        if dim == 2 {
            return Ok(EntityFrame {
                tangents: vec![tau],
                normals: vec![[tau[1], -tau[0], 0.0]],
            });
        }
        let axis = (0..3).find(|&i| tau[i].abs() < 0.9).unwrap();
        let mut e = [0.0; 3];
        e[axis] = 1.0;
        let t = dot(e, tau);
        let n1 = unit([e[0] - t * tau[0], e[1] - t * tau[1], e[2] - t * tau[2]]);
        let n2 = cross(tau, n1);
        return Ok(EntityFrame {
            tangents: vec![tau],
            normals: vec![n1, n2],
        });
    }
    let a = sub(p[1], p[0]);
    let nu = unit(cross(a, sub(p[2], p[0])));
    let t1 = unit(a);
    let t2 = cross(nu, t1);
    Ok(EntityFrame {
        tangents: vec![t1, t2],
        normals: vec![nu],
    })
}

#[cfg(test)]
mod tests {
    use super::super::{single_tet, two_tets, two_triangles};
    use super::*;

    fn orthonormal(vs: &[[f64; 3]]) {
        for (i, a) in vs.iter().enumerate() {
            for (j, b) in vs.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(*a, *b) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn conventions() {
        let m = two_triangles();
        let e = m.find_entity(&[0, 1]).unwrap();
        let f = entity_frame(&m, 1, e).unwrap();
        assert_eq!(f.tangents[0], [1.0, 0.0, 0.0]);
        assert_eq!(f.normals[0], [0.0, -1.0, 0.0]);

        let m = single_tet();
        let f = entity_frame(&m, 2, 0).unwrap();
        assert_eq!(f.normals[0], [0.0, 0.0, 1.0]);
        assert!(entity_frame(&m, 0, 0).is_err());
        assert!(entity_frame(&m, 3, 0).is_err());
        assert!(entity_frame(&m, 1, 99).is_err());
    }

    #[test]
    fn frames_are_orthonormal() {
        let m = two_tets();
        for k in 1..=2 {
            for id in 0..m.num_entities(k) {
                let f = entity_frame(&m, k, id).unwrap();
                let mut all = f.tangents.clone();
                all.extend(f.normals.iter().copied());
                orthonormal(&all);
                assert_eq!(all.len(), 3);
            }
        }
    }
}
