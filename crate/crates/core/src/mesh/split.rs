//! Clough–Tocher (2D) and Worsey–Farin (3D) macro-element splits.
//!
//! Child vertex numbering: parent vertices first, then one split point per
//! parent facet (Worsey–Farin only, in parent facet order), then one interior
//! point per parent cell.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{cross, norm, sub, SimplicialMesh};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    CloughTocher,
    WorseyFarin,
}

/// Parent entity carrying a child entity: the lowest dimensional parent
/// entity that contains it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Carrier {
    pub dim: usize,
    pub id: usize,
}

#[derive(Clone, Debug)]
pub struct SplitMap {
    pub kind: SplitKind,
    pub parent: SimplicialMesh,
    pub child: SimplicialMesh,
    /// Child cells of each parent cell.
    pub macro_cells: Vec<Vec<usize>>,
    /// Parent cell of each child cell.
    pub micro_to_macro: Vec<usize>,
    /// Child facets covering each parent facet.
    pub macro_facets: Vec<Vec<usize>>,
    /// Child vertex of the interior split point of each parent cell.
    pub interior_points: Vec<usize>,
    /// Child vertex of the split point of each parent facet (Worsey–Farin).
    pub face_points: Vec<usize>,
    /// Carrier of every child entity, per child entity dimension.
    pub carriers: Vec<Vec<Carrier>>,
}

impl SplitMap {
    /// Carrier of child entity `(k, id)`.
    pub fn carrier(&self, k: usize, id: usize) -> Carrier {
        self.carriers[k][id]
    }

    /// Child facets inside parent cell `c` (not on its boundary).
    pub fn interior_facets(&self, c: usize) -> Vec<usize> {
        let d = self.child.dim();
        (0..self.child.num_entities(d - 1))
            .filter(|&f| self.carriers[d - 1][f] == Carrier { dim: d, id: c })
            .collect()
    }
}

fn barycenter(mesh: &SimplicialMesh, verts: &[usize]) -> [f64; 3] {
    let mut x = [0.0; 3];
    for &v in verts {
        let p = mesh.vertex(v);
        for k in 0..3 {
            x[k] += p[k] / verts.len() as f64;
        }
    }
    x
}

/// Incenter: vertices weighted by the area of the opposite face.
fn incenter(mesh: &SimplicialMesh, c: usize) -> [f64; 3] {
    let cell = mesh.cell(c);
    let mut x = [0.0; 3];
    let mut total = 0.0;
    for i in 0..4 {
        let others: Vec<[f64; 3]> = (0..4)
            .filter(|&j| j != i)
            .map(|j| mesh.vertex(cell[j]))
            .collect();
        let area = 0.5 * norm(cross(sub(others[1], others[0]), sub(others[2], others[0])));
        let p = mesh.vertex(cell[i]);
        for k in 0..3 {
            x[k] += area * p[k];
        }
        total += area;
    }
    x.map(|v| v / total)
}

/// Splits every triangle into three around its barycenter.
pub fn clough_tocher_split(mesh: &SimplicialMesh) -> Result<SplitMap> {
    if mesh.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: mesh.dim(),
        });
    }
    let nv = mesh.num_vertices();
    let mut verts = mesh.vertices().to_vec();
    let mut cells = Vec::new();
    let mut macro_cells = Vec::new();
    let mut interior_points = Vec::new();
    for c in 0..mesh.num_cells() {
        let cell = mesh.cell(c);
        let q = nv + c;
        verts.push(barycenter(mesh, cell));
        interior_points.push(q);
        let mut ids = Vec::new();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            ids.push(cells.len());
            cells.push(vec![cell[a], cell[b], q]);
        }
        macro_cells.push(ids);
    }
    finish(
        SplitKind::CloughTocher,
        mesh,
        verts,
        cells,
        macro_cells,
        interior_points,
        Vec::new(),
    )
}

/// Splits every tetrahedron into twelve: one interior point (incenter), one
/// point per face (barycenter, shared by the two cells of an interior face).
pub fn worsey_farin_split(mesh: &SimplicialMesh) -> Result<SplitMap> {
    if mesh.dim() != 3 {
        return Err(Error::WrongDimension {
            expected: 3,
            found: mesh.dim(),
        });
    }
    let nv = mesh.num_vertices();
    let nf = mesh.num_entities(2);
    let mut verts = mesh.vertices().to_vec();
    let mut face_points = Vec::with_capacity(nf);
    for f in 0..nf {
        face_points.push(verts.len());
        verts.push(barycenter(mesh, mesh.entity(2, f)?));
    }
    let mut cells = Vec::new();
    let mut macro_cells = Vec::new();
    let mut interior_points = Vec::new();
    for c in 0..mesh.num_cells() {
        let q = nv + nf + c;
        verts.push(incenter(mesh, c));
        interior_points.push(q);
        let mut ids = Vec::new();
        for &f in mesh.cell_entities(c, 2) {
            let fv = mesh.entity(2, f)?;
            let m = face_points[f];
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                ids.push(cells.len());
                cells.push(vec![fv[a], fv[b], m, q]);
            }
        }
        macro_cells.push(ids);
    }
    finish(
        SplitKind::WorseyFarin,
        mesh,
        verts,
        cells,
        macro_cells,
        interior_points,
        face_points,
    )
}

fn finish(
    kind: SplitKind,
    parent: &SimplicialMesh,
    verts: Vec<[f64; 3]>,
    cells: Vec<Vec<usize>>,
    macro_cells: Vec<Vec<usize>>,
    interior_points: Vec<usize>,
    face_points: Vec<usize>,
) -> Result<SplitMap> {
    let d = parent.dim();
    let child = SimplicialMesh::new(d, verts, &cells)?;
    let mut micro_to_macro = vec![0; child.num_cells()];
    for (c, ids) in macro_cells.iter().enumerate() {
        for &m in ids {
            micro_to_macro[m] = c;
        }
    }
    // parent vertex set spanned by each child vertex
    let nv = parent.num_vertices();
    let mut span: Vec<Vec<usize>> = (0..nv).map(|v| vec![v]).collect();
    for (f, &p) in face_points.iter().enumerate() {
        debug_assert_eq!(p, span.len());
        let _ = p;
        span.push(parent.entity(2, f)?.to_vec());
    }
    for (c, &q) in interior_points.iter().enumerate() {
        debug_assert_eq!(q, span.len());
        let _ = q;
        span.push(parent.cell(c).to_vec());
    }
    let mut carriers = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut list = Vec::with_capacity(child.num_entities(k));
        for id in 0..child.num_entities(k) {
            let mut u: Vec<usize> = child
                .entity(k, id)?
                .iter()
                .flat_map(|&v| span[v].iter().copied())
                .collect();
            u.sort_unstable();
            u.dedup();
            let pid = parent.find_entity(&u).ok_or_else(|| {
                Error::InvalidMesh(format!("child entity ({k}, {id}) has no parent carrier"))
            })?;
            list.push(Carrier {
                dim: u.len() - 1,
                id: pid,
            });
        }
        carriers.push(list);
    }
    let mut macro_facets = vec![Vec::new(); parent.num_entities(d - 1)];
    for (f, c) in carriers[d - 1].iter().enumerate() {
        if c.dim == d - 1 {
            macro_facets[c.id].push(f);
        }
    }
    Ok(SplitMap {
        kind,
        parent: parent.clone(),
        child,
        macro_cells,
        micro_to_macro,
        macro_facets,
        interior_points,
        face_points,
        carriers,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{single_tet, single_triangle, two_tets, two_triangles};
    use super::*;

    #[test]
    fn clough_tocher_counts() {
        let s = clough_tocher_split(&single_triangle()).unwrap();
        assert_eq!(s.child.counts()[..3], [4, 6, 3]);
        let s = clough_tocher_split(&two_triangles()).unwrap();
        assert_eq!(s.child.num_cells(), 6);
        assert!(s.macro_facets.iter().all(|f| f.len() == 1));
        assert!(clough_tocher_split(&single_tet()).is_err());
    }

    #[test]
    fn worsey_farin_counts() {
        let s = worsey_farin_split(&single_tet()).unwrap();
        assert_eq!(s.child.counts(), [9, 26, 30, 12]);
        assert_eq!(s.interior_facets(0).len(), 18);
        assert!(s.macro_facets.iter().all(|f| f.len() == 3));
        assert!(worsey_farin_split(&single_triangle()).is_err());
    }

    #[test]
    fn shared_face_point() {
        let m = two_tets();
        let s = worsey_farin_split(&m).unwrap();
        assert_eq!(s.child.num_cells(), 24);
        assert_eq!(s.child.num_vertices(), 5 + 7 + 2);
        let shared = m.find_entity(&[1, 2, 3]).unwrap();
        let p = s.face_points[shared];
        let cells: Vec<usize> = (0..24)
            .filter(|&c| s.child.cell(c).contains(&p))
            .map(|c| s.micro_to_macro[c])
            .collect();
        assert!(cells.contains(&0) && cells.contains(&1));
        assert_eq!(s.child.euler_characteristic(), 1);
    }

    #[test]
    fn volumes_add_up() {
        let m = two_tets();
        let s = worsey_farin_split(&m).unwrap();
        for (c, ids) in s.macro_cells.iter().enumerate() {
            let v: f64 = ids.iter().map(|&i| s.child.volume(i)).sum();
            assert!((v - m.volume(c)).abs() <= 1e-12 * m.volume(c));
        }
    }
}
