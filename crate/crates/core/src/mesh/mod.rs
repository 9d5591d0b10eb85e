//! Simplicial meshes in two and three dimensions.
//!
//! Cells are stored with vertex indices sorted ascending. Every derived entity
//! (edge, face) is identified by its sorted vertex tuple; entity ids of
//! dimension `k < dim` follow the lexicographic order of those tuples, entity
//! ids of dimension `dim` are the cell ids. Local sub-entities of a cell are
//! listed in lexicographic order of local vertex indices, which coincides with
//! global order because cells are sorted.

mod frame;
mod generate;
mod split;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};

pub use frame::{entity_frame, EntityFrame};
pub use generate::{
    single_tet, single_triangle, structured_2d, structured_3d, two_tets, two_triangles, unit_cube,
    unit_square,
};
pub use split::{clough_tocher_split, worsey_farin_split, Carrier, SplitKind, SplitMap};

const NONE: usize = usize::MAX;

/// Padded vertex tuple of an entity.
pub type Key = [usize; 4];

fn key_of(verts: &[usize]) -> Key {
    let mut k = [NONE; 4];
    k[..verts.len()].copy_from_slice(verts);
    k
}

/// Subsets of size `k + 1` of `0..=n` in lexicographic order.
pub fn local_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, need: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if need == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n + 1 - i < need {
                break;
            }
            cur.push(i);
            rec(i + 1, n, need - 1, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k + 1, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct SimplicialMesh {
    dim: usize,
    vertices: Vec<[f64; 3]>,
    cells: Vec<Key>,
    orientation: Vec<i8>,
    /// Vertex tuples per entity dimension.
    entities: Vec<Vec<Key>>,
    lookup: Vec<BTreeMap<Key, usize>>,
    /// Cells containing each entity, ascending.
    entity_cells: Vec<Vec<Vec<usize>>>,
    /// Entity ids of each cell, per dimension, in local lexicographic order.
    cell_entities: Vec<Vec<Vec<usize>>>,
    boundary: Vec<Vec<bool>>,
}

impl SimplicialMesh {
    /// Builds a mesh from coordinates (length `dim` each) and cells (length
    /// `dim + 1` each, any vertex order).
    pub fn new(dim: usize, vertices: Vec<[f64; 3]>, cells: &[Vec<usize>]) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidMesh(format!("dimension {dim} is not 2 or 3")));
        }
        if cells.is_empty() {
            return Err(Error::InvalidMesh("mesh has no cells".into()));
        }
        let nv = vertices.len();
        let mut sorted_cells = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            if cell.len() != dim + 1 {
                return Err(Error::InvalidMesh(format!(
                    "cell {c} has {} vertices, expected {}",
                    cell.len(),
                    dim + 1
                )));
            }
            let mut s = cell.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidMesh(format!("cell {c} repeats a vertex")));
            }
            if let Some(&bad) = s.iter().find(|&&v| v >= nv) {
                return Err(Error::InvalidMesh(format!(
                    "cell {c} references vertex {bad} of {nv}"
                )));
            }
            sorted_cells.push(key_of(&s));
        }
        let mut used = vec![false; nv];
        for k in &sorted_cells {
            for &v in &k[..=dim] {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!("vertex {v} belongs to no cell")));
        }

        let mut mesh = SimplicialMesh {
            dim,
            vertices,
            cells: sorted_cells,
            orientation: Vec::new(),
            entities: vec![Vec::new(); dim + 1],
            lookup: vec![BTreeMap::new(); dim + 1],
            entity_cells: vec![Vec::new(); dim + 1],
            cell_entities: vec![Vec::new(); dim + 1],
            boundary: vec![Vec::new(); dim + 1],
        };
        mesh.orientation = (0..mesh.cells.len())
            .map(|c| {
                let v = mesh.signed_volume(c);
                if v.abs() <= 1e-14 * mesh.cell_scale(c).powi(dim as i32) {
                    Err(Error::Degenerate(format!("cell {c} has zero volume")))
                } else {
                    Ok(if v > 0.0 { 1 } else { -1 })
                }
            })
            .collect::<Result<_>>()?;
        mesh.build_entities()?;
        Ok(mesh)
    }

    fn build_entities(&mut self) -> Result<()> {
        let dim = self.dim;
        for k in 0..dim {
            let mut set = BTreeMap::new();
            for cell in &self.cells {
                for sub in local_subsets(dim, k) {
                    let verts: Vec<usize> = sub.iter().map(|&i| cell[i]).collect();
                    set.insert(key_of(&verts), 0usize);
                }
            }
            for (i, (_, v)) in set.iter_mut().enumerate() {
                *v = i;
            }
            self.entities[k] = set.keys().copied().collect();
            self.lookup[k] = set;
        }
        self.entities[dim] = self.cells.clone();
        self.lookup[dim] = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, k)| (*k, i))
            .collect();
        if self.lookup[dim].len() != self.cells.len() {
            return Err(Error::InvalidMesh("duplicate cells".into()));
        }
        for k in 0..=dim {
            let n = self.entities[k].len();
            let mut ec = vec![Vec::new(); n];
            let mut ce = Vec::with_capacity(self.cells.len());
            let subsets = local_subsets(dim, k);
            for (c, cell) in self.cells.iter().enumerate() {
                let mut ids = Vec::with_capacity(subsets.len());
                for sub in &subsets {
                    let verts: Vec<usize> = sub.iter().map(|&i| cell[i]).collect();
                    let id = self.lookup[k][&key_of(&verts)];
                    ec[id].push(c);
                    ids.push(id);
                }
                ce.push(ids);
            }
            self.entity_cells[k] = ec;
            self.cell_entities[k] = ce;
        }
        let facets = &self.entity_cells[dim - 1];
        if let Some(f) = facets.iter().position(|cs| cs.len() > 2) {
            return Err(Error::InvalidMesh(format!(
                "facet {f} is shared by more than two cells"
            )));
        }
        let facet_boundary: Vec<bool> = facets.iter().map(|cs| cs.len() == 1).collect();
        for k in 0..=dim {
            let mut flags = vec![false; self.entities[k].len()];
            if k == dim - 1 {
                flags = facet_boundary.clone();
            } else if k < dim - 1 {
                for (f, &b) in facet_boundary.iter().enumerate() {
                    if !b {
                        continue;
                    }
                    let fv = self.entities[dim - 1][f];
                    for sub in local_subsets(dim - 1, k) {
                        let verts: Vec<usize> = sub.iter().map(|&i| fv[i]).collect();
                        flags[self.lookup[k][&key_of(&verts)]] = true;
                    }
                }
            }
            self.boundary[k] = flags;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_entities(&self, k: usize) -> usize {
        self.entities.get(k).map_or(0, |e| e.len())
    }

    /// `(V, E, F, T)`; in 2D `T` is zero and `F` counts triangles.
    pub fn counts(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for (k, slot) in c.iter_mut().enumerate().take(self.dim + 1) {
            *slot = self.num_entities(k);
        }
        c
    }

    /// Alternating entity count; 1 on contractible domains.
    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim)
            .map(|k| if k % 2 == 0 { 1 } else { -1 } * self.num_entities(k) as i64)
            .sum()
    }

    pub fn vertex(&self, v: usize) -> [f64; 3] {
        self.vertices[v]
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    /// Sorted vertex indices of a cell.
    pub fn cell(&self, c: usize) -> &[usize] {
        &self.cells[c][..=self.dim]
    }

    /// Sorted vertex indices of entity `(k, id)`.
    pub fn entity(&self, k: usize, id: usize) -> Result<&[usize]> {
        self.entities
            .get(k)
            .and_then(|e| e.get(id))
            .map(|key| &key[..=k])
            .ok_or(Error::InvalidEntity { dim: k, id })
    }

    /// Id of the entity with the given vertices (any order).
    pub fn find_entity(&self, verts: &[usize]) -> Option<usize> {
        if verts.is_empty() || verts.len() > self.dim + 1 {
            return None;
        }
        let mut s = verts.to_vec();
        s.sort_unstable();
        self.lookup[s.len() - 1].get(&key_of(&s)).copied()
    }

    pub fn entity_cells(&self, k: usize, id: usize) -> &[usize] {
        &self.entity_cells[k][id]
    }

    /// Entity ids of dimension `k` in cell `c`, local lexicographic order.
    pub fn cell_entities(&self, c: usize, k: usize) -> &[usize] {
        &self.cell_entities[k][c]
    }

    pub fn is_boundary(&self, k: usize, id: usize) -> bool {
        self.boundary[k][id]
    }

    /// Sign of the geometric orientation of the sorted vertex order.
    pub fn orientation(&self, c: usize) -> i8 {
        self.orientation[c]
    }

    /// Local positions (in the cell's sorted tuple) of the vertices of an
    /// entity contained in the cell.
    pub fn local_indices(&self, c: usize, verts: &[usize]) -> Option<Vec<usize>> {
        let cell = self.cell(c);
        verts
            .iter()
            .map(|v| cell.iter().position(|x| x == v))
            .collect()
    }

    fn cell_scale(&self, c: usize) -> f64 {
        let cell = self.cell(c);
        let mut m: f64 = 0.0;
        for i in 0..cell.len() {
            for j in i + 1..cell.len() {
                m = m.max(dist(self.vertices[cell[i]], self.vertices[cell[j]]));
            }
        }
        m
    }

    fn signed_volume(&self, c: usize) -> f64 {
        let j = self.jacobian(c);
        let det = if self.dim == 2 {
            j[0][0] * j[1][1] - j[0][1] * j[1][0]
        } else {
            det3(&j)
        };
        det / if self.dim == 2 { 2.0 } else { 6.0 }
    }

    /// Columns `v_i - v_0` of the affine map from the reference simplex.
    pub fn jacobian(&self, c: usize) -> [[f64; 3]; 3] {
        let cell = self.cell(c);
        let v0 = self.vertices[cell[0]];
        let mut j = [[0.0; 3]; 3];
        for col in 0..self.dim {
            let v = self.vertices[cell[col + 1]];
            for row in 0..self.dim {
                j[row][col] = v[row] - v0[row];
            }
        }
        j
    }

    /// Unsigned measure (area or volume).
    pub fn volume(&self, c: usize) -> f64 {
        self.signed_volume(c).abs()
    }

    /// Ratio of the cell measure to the reference simplex measure.
    pub fn jacobian_det(&self, c: usize) -> f64 {
        self.volume(c) * if self.dim == 2 { 2.0 } else { 6.0 }
    }

    /// Constant gradients of the barycentric coordinates on a cell.
    pub fn barycentric_gradients(&self, c: usize) -> [[f64; 3]; 4] {
        let j = self.jacobian(c);
        let inv = if self.dim == 2 {
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            [
                [j[1][1] / det, -j[0][1] / det, 0.0],
                [-j[1][0] / det, j[0][0] / det, 0.0],
                [0.0; 3],
            ]
        } else {
            inv3(&j)
        };
        // grad lambda_i (i >= 1) is row i-1 of J^{-1}
        let mut g = [[0.0; 3]; 4];
        for i in 0..self.dim {
            g[i + 1] = inv[i];
        }
        for k in 0..3 {
            g[0][k] = -(1..=self.dim).map(|i| g[i][k]).sum::<f64>();
        }
        g
    }

    /// Barycentric coordinates of a physical point with respect to a cell.
    /// Points outside the cell give negative coordinates.
    pub fn barycentric(&self, c: usize, point: [f64; 3]) -> Result<[f64; 4]> {
        if c >= self.num_cells() {
            return Err(Error::InvalidEntity {
                dim: self.dim,
                id: c,
            });
        }
        let g = self.barycentric_gradients(c);
        let v0 = self.vertices[self.cell(c)[0]];
        let mut l = [0.0; 4];
        for i in 1..=self.dim {
            l[i] = (0..self.dim).map(|k| g[i][k] * (point[k] - v0[k])).sum();
        }
        l[0] = 1.0 - l[1..=self.dim].iter().sum::<f64>();
        Ok(l)
    }

    /// Physical point of barycentric coordinates on a cell.
    pub fn point(&self, c: usize, lambda: &[f64]) -> [f64; 3] {
        let mut x = [0.0; 3];
        for (i, &v) in self.cell(c).iter().enumerate() {
            for k in 0..3 {
                x[k] += lambda[i] * self.vertices[v][k];
            }
        }
        x
    }

    /// Physical point of barycentric coordinates on an entity.
    pub fn entity_point(&self, k: usize, id: usize, lambda: &[f64]) -> [f64; 3] {
        let verts = &self.entities[k][id][..=k];
        let mut x = [0.0; 3];
        for (i, &v) in verts.iter().enumerate() {
            for d in 0..3 {
                x[d] += lambda[i] * self.vertices[v][d];
            }
        }
        x
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                m = m.max(dist(self.vertices[i], self.vertices[j]));
            }
        }
        m
    }

    /// Copy with all coordinates divided by the diameter.
    pub fn scaled_to_unit_diameter(&self) -> SimplicialMesh {
        self.scaled_by(1.0 / self.diameter())
    }

    /// Copy with all coordinates multiplied by `s > 0`.
    pub fn scaled_by(&self, s: f64) -> SimplicialMesh {
        let mut m = self.clone();
        for v in m.vertices.iter_mut() {
            for x in v.iter_mut() {
                *x *= s;
            }
        }
        m
    }

    /// True when both meshes have the same cells on the same vertices.
    pub fn same_cells(&self, other: &SimplicialMesh) -> bool {
        self.dim == other.dim
            && self.cells == other.cells
            && self.vertices.len() == other.vertices.len()
    }
}

pub(crate) fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn det3(j: &[[f64; 3]; 3]) -> f64 {
    j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1])
        - j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0])
        + j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0])
}

fn inv3(j: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let d = det3(j);
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            let (a, b) = ((k + 1) % 3, (k + 2) % 3);
            let (c, e) = ((i + 1) % 3, (i + 2) % 3);
            r[i][k] = (j[a][c] * j[b][e] - j[a][e] * j[b][c]) / d;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            local_subsets(3, 1),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(
            local_subsets(3, 2),
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
        assert_eq!(local_subsets(2, 2), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn barycentric_identities() {
        let m = two_tets();
        for c in 0..m.num_cells() {
            for (i, &v) in m.cell(c).iter().enumerate() {
                let l = m.barycentric(c, m.vertex(v)).unwrap();
                for (j, x) in l.iter().take(4).enumerate() {
                    assert!((x - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
                }
            }
            let centroid = m.point(c, &[0.25; 4]);
            let l = m.barycentric(c, centroid).unwrap();
            assert!(l.iter().all(|x| (x - 0.25).abs() < 1e-14));
        }
        let l = m.barycentric(0, [2.0, 2.0, 2.0]).unwrap();
        assert!(l.iter().any(|&x| x < 0.0));
        assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_jacobian() {
        let m = SimplicialMesh::new(
            3,
            vec![
                [0.1, 0.0, 0.2],
                [1.0, 0.3, 0.0],
                [0.2, 1.1, 0.1],
                [0.3, 0.2, 0.9],
            ],
            &[vec![0, 1, 2, 3]],
        )
        .unwrap();
        let g = m.barycentric_gradients(0);
        for i in 0..4 {
            for j in 0..4 {
                let d = dot(g[i], sub(m.vertex(j), m.vertex(0)));
                let expect = if i == j { 1.0 } else { 0.0 } - if i == 0 { 1.0 } else { 0.0 };
                assert!((d - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SimplicialMesh::new(3, vec![[0.0; 3]; 4], &[vec![0, 1, 2, 3]]).is_err());
        assert!(SimplicialMesh::new(2, vec![[0.0; 3]; 3], &[vec![0, 1, 5]]).is_err());
        assert!(SimplicialMesh::new(2, vec![[0.0; 3]; 3], &[vec![0, 1]]).is_err());
        // three triangles on one edge
        let verts = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, 1.0, 0.0],
            [0.5, -1.0, 0.0],
            [0.6, 2.0, 0.0],
        ];
        let r = SimplicialMesh::new(2, verts, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]);
        assert!(matches!(r, Err(Error::InvalidMesh(_))));
    }
}
