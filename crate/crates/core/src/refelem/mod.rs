//! Entity-attached basis families.
//!
//! Every basis function is a scalar profile attached to an entity of the
//! working mesh times a fixed direction (coordinate axis, entity tangent or
//! entity normal). Profiles are written in the barycentric coordinates of the
//! entity's vertices in ascending global order, so a function shared by several
//! cells is single valued without orientation tables:
//!
//! * vertex: the hat `lambda_a`;
//! * edge: `Q_j^{2,2}(lambda_a, lambda_b) lambda_a lambda_b`, `j <= p - 2`;
//! * triangle: `Q_{n1}^{2 n2 + 5, 2}(lambda_a, lambda_b + lambda_c)
//!   Q_{n2}^{2,2}(lambda_b, lambda_c) lambda_a lambda_b lambda_c`, `n1 + n2 <= p - 3`;
//! * tetrahedron: the analogous product with exponents `2(n1 + n2) + 8`,
//!   `2 n2 + 5`, `2` times `lambda_0 lambda_1 lambda_2 lambda_3`, `n0 + n1 + n2 <= p - 4`.
//!
//! The polynomial factors are the orthonormal simplex polynomials for the
//! weight `prod lambda_i^2`, so each same-entity family is L2 orthogonal on its
//! entity. A function is either shared (one copy, supported on every cell
//! around its entity) or broken (one copy per side; a side is a cell, or a
//! macro cell on a split mesh).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::mesh::entity_frame;
use crate::orthopoly::simplex::{indices, ortho_eval};
use crate::scalar::Scalar;
use crate::spaces::{GluedSpace, Layout, Tabulation, What};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Scalar continuous Lagrange (hierarchic).
    Lagrange,
    /// Vector continuous Lagrange.
    VectorLagrange,
    /// Triangular H(rot): tangential continuity, normal jumps across edges.
    HRotTri,
    /// Tetrahedral H(div): normal continuity, tangential jumps.
    HDivTet,
    /// Tetrahedral H(curl) continuous at vertices and edges.
    ZhpTet,
    /// Tetrahedral H(curl) on the Worsey–Farin split.
    HCurlTetWf,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Lagrange,
        Family::VectorLagrange,
        Family::HRotTri,
        Family::HDivTet,
        Family::ZhpTet,
        Family::HCurlTetWf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Lagrange => "lagrange",
            Family::VectorLagrange => "vector-lagrange",
            Family::HRotTri => "hrot",
            Family::HDivTet => "hdiv",
            Family::ZhpTet => "zh",
            Family::HCurlTetWf => "hcurl-wf",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == s)
    }

    pub fn min_degree(self) -> usize {
        match self {
            Family::Lagrange | Family::VectorLagrange => 1,
            _ => 2,
        }
    }

    /// Spatial dimension the family lives in, if fixed.
    pub fn spatial_dim(self) -> Option<usize> {
        match self {
            Family::Lagrange | Family::VectorLagrange => None,
            Family::HRotTri => Some(2),
            _ => Some(3),
        }
    }

    pub fn is_vector(self) -> bool {
        self != Family::Lagrange
    }

    pub fn needs_worsey_farin(self) -> bool {
        self == Family::HCurlTetWf
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Profile {
    Hat,
    Edge(usize),
    Face(usize, usize),
    Cell(usize, usize, usize),
}

impl Profile {
    /// Profiles attached to an entity of dimension `k` for degree `p`.
    pub fn family(k: usize, p: usize) -> Vec<Profile> {
        match k {
            0 => vec![Profile::Hat],
            1 => (0..p.saturating_sub(1)).map(Profile::Edge).collect(),
            2 if p >= 3 => indices(2, p - 3)
                .into_iter()
                .map(|m| Profile::Face(m[0], m[1]))
                .collect(),
            3 if p >= 4 => indices(3, p - 4)
                .into_iter()
                .map(|m| Profile::Cell(m[0], m[1], m[2]))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Value in terms of the entity's barycentric coordinates (ascending
    /// global vertex order).
    pub fn eval<S: Scalar>(self, lam: &[S]) -> S {
        match self {
            Profile::Hat => lam[0],
            Profile::Edge(j) => {
                ortho_eval(&[j], &[2, 2], &lam[..2]).expect("edge index") * lam[0] * lam[1]
            }
            Profile::Face(a, b) => {
                ortho_eval(&[a, b], &[2, 2, 2], &lam[..3]).expect("face index")
                    * lam[0]
                    * lam[1]
                    * lam[2]
            }
            Profile::Cell(a, b, c) => {
                ortho_eval(&[a, b, c], &[2, 2, 2, 2], &lam[..4]).expect("cell index")
                    * lam[0]
                    * lam[1]
                    * lam[2]
                    * lam[3]
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Scalar,
    Axis(u8),
    Tangent(u8),
    Normal(u8),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisFunction {
    /// Working mesh entity `(dimension, id)`.
    pub entity: (usize, usize),
    pub profile: Profile,
    pub direction: Direction,
    /// Unit direction vector (`[1, 0, 0]` for scalar functions).
    pub vector: [f64; 3],
    /// Side (cell or macro cell) of a broken function.
    pub side: Option<usize>,
    /// Working cells where the function is nonzero.
    pub support: Vec<usize>,
}

impl BasisFunction {
    pub fn is_shared(&self) -> bool {
        self.side.is_none()
    }
}

struct Role {
    direction: Direction,
    vector: [f64; 3],
    broken: bool,
}

fn axes(dim: usize) -> Vec<Role> {
    (0..dim)
        .map(|i| {
            let mut v = [0.0; 3];
            v[i] = 1.0;
            Role {
                direction: Direction::Axis(i as u8),
                vector: v,
                broken: false,
            }
        })
        .collect()
}

fn roles(family: Family, layout: &Layout, k: usize, id: usize) -> Result<Vec<Role>> {
    let mesh = layout.mesh();
    let dim = mesh.dim();
    let tangents = |broken: bool,
                    which: &[usize],
                    mesh_k: usize,
                    mesh_id: usize,
                    m: &crate::mesh::SimplicialMesh| {
        entity_frame(m, mesh_k, mesh_id).map(|f| {
            which
                .iter()
                .map(|&i| Role {
                    direction: Direction::Tangent(i as u8),
                    vector: f.tangents[i],
                    broken,
                })
                .collect::<Vec<_>>()
        })
    };
    let normals = |broken: bool,
                   which: &[usize],
                   mesh_k: usize,
                   mesh_id: usize,
                   m: &crate::mesh::SimplicialMesh| {
        entity_frame(m, mesh_k, mesh_id).map(|f| {
            which
                .iter()
                .map(|&i| Role {
                    direction: Direction::Normal(i as u8),
                    vector: f.normals[i],
                    broken,
                })
                .collect::<Vec<_>>()
        })
    };
    Ok(match family {
        Family::Lagrange => vec![Role {
            direction: Direction::Scalar,
            vector: [1.0, 0.0, 0.0],
            broken: false,
        }],
        Family::VectorLagrange => axes(dim),
        Family::HRotTri => match k {
            1 => {
                let mut r = tangents(false, &[0], 1, id, mesh)?;
                r.extend(normals(true, &[0], 1, id, mesh)?);
                r
            }
            _ => axes(2),
        },
        Family::HDivTet => match k {
            1 => {
                let mut r = normals(false, &[0, 1], 1, id, mesh)?;
                r.extend(tangents(true, &[0], 1, id, mesh)?);
                r
            }
            2 => {
                let mut r = normals(false, &[0], 2, id, mesh)?;
                r.extend(tangents(true, &[0, 1], 2, id, mesh)?);
                r
            }
            _ => axes(3),
        },
        Family::ZhpTet => match k {
            2 => {
                let mut r = tangents(false, &[0, 1], 2, id, mesh)?;
                r.extend(normals(true, &[0], 2, id, mesh)?);
                r
            }
            _ => axes(3),
        },
        Family::HCurlTetWf => {
            let carrier = layout.carrier(k, id);
            if carrier.dim == 2 {
                let parent = layout.parent();
                let mut r = normals(true, &[0], 2, carrier.id, parent)?;
                r.extend(tangents(false, &[0, 1], 2, carrier.id, parent)?);
                r
            } else {
                axes(3)
            }
        }
    })
}

/// Checks that a family can be built on a layout at degree `p`.
pub fn check_family(family: Family, layout: &Layout, p: usize) -> Result<()> {
    if p < family.min_degree() {
        return Err(Error::UnsupportedDegree {
            degree: p,
            min: family.min_degree(),
            max: usize::MAX,
        });
    }
    let dim = layout.mesh().dim();
    if let Some(d) = family.spatial_dim() {
        if d != dim {
            return Err(Error::WrongDimension {
                expected: d,
                found: dim,
            });
        }
    }
    if family.needs_worsey_farin() != layout.is_worsey_farin() {
        return Err(Error::Incompatible(format!(
            "family {} {} a Worsey–Farin layout",
            family.name(),
            if family.needs_worsey_farin() {
                "needs"
            } else {
                "does not use"
            }
        )));
    }
    Ok(())
}

/// All basis functions of a family on a layout, ordered by entity dimension,
/// entity id, profile, direction and side.
pub fn family_functions(family: Family, layout: &Layout, p: usize) -> Result<Vec<BasisFunction>> {
    check_family(family, layout, p)?;
    let mesh = layout.mesh();
    let mut out = Vec::new();
    for k in 0..=mesh.dim() {
        let profiles = Profile::family(k, p);
        if profiles.is_empty() {
            continue;
        }
        for id in 0..mesh.num_entities(k) {
            let cells = mesh.entity_cells(k, id);
            let mut sides: Vec<usize> = cells.iter().map(|&c| layout.group(c)).collect();
            sides.dedup();
            sides.sort_unstable();
            sides.dedup();
            let rs = roles(family, layout, k, id)?;
            for &profile in &profiles {
                for r in &rs {
                    if r.broken {
                        for &s in &sides {
                            out.push(BasisFunction {
                                entity: (k, id),
                                profile,
                                direction: r.direction,
                                vector: r.vector,
                                side: Some(s),
                                support: cells
                                    .iter()
                                    .copied()
                                    .filter(|&c| layout.group(c) == s)
                                    .collect(),
                            });
                        }
                    } else {
                        out.push(BasisFunction {
                            entity: (k, id),
                            profile,
                            direction: r.direction,
                            vector: r.vector,
                            side: None,
                            support: cells.to_vec(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Value of a basis function on working cell `c` given the cell's barycentric
/// coordinates. Returns zero outside the support.
pub fn eval_function<S: Scalar>(layout: &Layout, f: &BasisFunction, c: usize, lam: &[S]) -> [S; 3] {
    let zero = S::constant(0.0);
    if !f.support.contains(&c) {
        return [zero; 3];
    }
    let mesh = layout.mesh();
    let verts = mesh.entity(f.entity.0, f.entity.1).expect("valid entity");
    let local = mesh.local_indices(c, verts).expect("entity in cell");
    let sub: Vec<S> = local.iter().map(|&i| lam[i]).collect();
    let v = f.profile.eval(&sub);
    [v * f.vector[0], v * f.vector[1], v * f.vector[2]]
}

/// A family on a single reference cell (the reference simplex, or the
/// Worsey–Farin split of the reference tetrahedron).
#[derive(Clone, Debug)]
pub struct ReferenceElement {
    pub family: Family,
    pub degree: usize,
    pub space: GluedSpace,
}

impl ReferenceElement {
    pub fn new(family: Family, degree: usize, dim: usize) -> Result<Self> {
        let mesh = if dim == 2 {
            crate::mesh::single_triangle()
        } else {
            crate::mesh::single_tet()
        };
        let space = GluedSpace::new(&mesh, family, degree)?;
        Ok(ReferenceElement {
            family,
            degree,
            space,
        })
    }

    pub fn lagrange(dim: usize, p: usize) -> Result<Self> {
        Self::new(Family::Lagrange, p, dim)
    }

    pub fn vector_lagrange(dim: usize, p: usize) -> Result<Self> {
        Self::new(Family::VectorLagrange, p, dim)
    }

    pub fn hrot_tri(p: usize) -> Result<Self> {
        Self::new(Family::HRotTri, p, 2)
    }

    pub fn hdiv_tet(p: usize) -> Result<Self> {
        Self::new(Family::HDivTet, p, 3)
    }

    pub fn hcurl_tet_wf(p: usize) -> Result<Self> {
        Self::new(Family::HCurlTetWf, p, 3)
    }

    pub fn zhp_tet(p: usize) -> Result<Self> {
        Self::new(Family::ZhpTet, p, 3)
    }

    pub fn functions(&self) -> &[BasisFunction] {
        &self.space.functions
    }

    pub fn len(&self) -> usize {
        self.space.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.functions.is_empty()
    }

    /// Number of working cells (1, or 12 on the split).
    pub fn num_cells(&self) -> usize {
        self.space.layout().mesh().num_cells()
    }

    /// Tabulates every function on a (micro) cell at barycentric points.
    pub fn tabulate(&self, cell: usize, points: &[[f64; 4]], what: What) -> Result<Tabulation> {
        self.space.tabulate_all(cell, points, what)
    }
}

#[cfg(test)]
mod tests;
