//! Named spaces defined by continuity clauses.

use alloc::vec::Vec;

use super::broken::BrokenSpace;
use super::constraints::{
    constrain, Clause, Component, ConstrainOptions, ConstrainedSpace, ContinuitySpec, Scope,
};
use super::Layout;
use crate::mesh::SimplicialMesh;
use crate::{Error, Result};

use Component::{Full, Normal, Tangential};
use Scope::{Edges, Facets, MicroFacets, Vertices};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceTag {
    /// C1 splines on the Worsey–Farin split, C0 across macro faces.
    V0,
    /// H(curl) on the split, continuous inside macros, at vertices and edges.
    V1,
    /// BDM on the split.
    V2,
    /// Discontinuous on the split.
    V3,
    /// C2 at vertices, C1 on edges, C0 across faces.
    W0,
    /// H(curl), C1 at vertices, C0 on edges, continuous curl normals on edges.
    W1,
    /// H(div), continuous at vertices and in edge normal directions.
    W2,
    W3,
    /// 2D scalar, C1 at vertices.
    Hermite,
    /// 2D H(rot) continuous at vertices.
    Y,
    /// 3D H(curl) continuous at vertices and on edges.
    Z,
    Dg,
    Lagrange,
    VectorLagrange,
    /// Tangential continuity only (second kind Nédélec).
    Nedelec,
    /// Normal continuity only.
    Bdm,
}

impl SpaceTag {
    pub const ALL: [SpaceTag; 16] = [
        SpaceTag::V0,
        SpaceTag::V1,
        SpaceTag::V2,
        SpaceTag::V3,
        SpaceTag::W0,
        SpaceTag::W1,
        SpaceTag::W2,
        SpaceTag::W3,
        SpaceTag::Hermite,
        SpaceTag::Y,
        SpaceTag::Z,
        SpaceTag::Dg,
        SpaceTag::Lagrange,
        SpaceTag::VectorLagrange,
        SpaceTag::Nedelec,
        SpaceTag::Bdm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpaceTag::V0 => "V0",
            SpaceTag::V1 => "V1",
            SpaceTag::V2 => "V2",
            SpaceTag::V3 => "V3",
            SpaceTag::W0 => "W0",
            SpaceTag::W1 => "W1",
            SpaceTag::W2 => "W2",
            SpaceTag::W3 => "W3",
            SpaceTag::Hermite => "hermite",
            SpaceTag::Y => "Y",
            SpaceTag::Z => "Z",
            SpaceTag::Dg => "DG",
            SpaceTag::Lagrange => "lagrange",
            SpaceTag::VectorLagrange => "vector-lagrange",
            SpaceTag::Nedelec => "nedelec",
            SpaceTag::Bdm => "bdm",
        }
    }

    pub fn from_name(s: &str) -> Option<SpaceTag> {
        SpaceTag::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(s))
    }

    /// Whether the space lives on the Worsey–Farin split.
    pub fn on_worsey_farin(self) -> bool {
        matches!(
            self,
            SpaceTag::V0 | SpaceTag::V1 | SpaceTag::V2 | SpaceTag::V3
        )
    }

    /// Value rank in dimension `dim`.
    pub fn rank(self, dim: usize) -> usize {
        match self {
            SpaceTag::V0
            | SpaceTag::V3
            | SpaceTag::W0
            | SpaceTag::W3
            | SpaceTag::Hermite
            | SpaceTag::Dg
            | SpaceTag::Lagrange => 1,
            _ => dim,
        }
    }

    /// Spatial dimension the space is defined in, if fixed.
    pub fn spatial_dim(self) -> Option<usize> {
        match self {
            SpaceTag::Hermite | SpaceTag::Y => Some(2),
            SpaceTag::Dg
            | SpaceTag::Lagrange
            | SpaceTag::VectorLagrange
            | SpaceTag::Nedelec
            | SpaceTag::Bdm => None,
            _ => Some(3),
        }
    }

    pub fn clauses(self) -> Vec<Clause> {
        let c = Clause::new;
        match self {
            SpaceTag::V0 => vec_of(&[
                c(MicroFacets, 1, Full),
                c(Facets, 0, Full),
                c(Edges, 1, Full),
                c(Vertices, 1, Full),
            ]),
            SpaceTag::V1 => vec_of(&[
                c(MicroFacets, 0, Full),
                c(Facets, 0, Tangential),
                c(Edges, 0, Full),
                c(Vertices, 0, Full),
            ]),
            SpaceTag::V2 | SpaceTag::Bdm => {
                vec_of(&[c(MicroFacets, 0, Normal), c(Facets, 0, Normal)])
            }
            SpaceTag::V3 | SpaceTag::W3 | SpaceTag::Dg => Vec::new(),
            SpaceTag::W0 => vec_of(&[c(Facets, 0, Full), c(Edges, 1, Full), c(Vertices, 2, Full)]),
            SpaceTag::W1 => vec_of(&[
                c(Facets, 0, Tangential),
                c(Edges, 0, Full),
                Clause::curl_normal(Edges),
                c(Vertices, 1, Full),
            ]),
            SpaceTag::W2 => vec_of(&[
                c(Facets, 0, Normal),
                c(Edges, 0, Normal),
                c(Vertices, 0, Full),
            ]),
            SpaceTag::Hermite => vec_of(&[c(Facets, 0, Full), c(Vertices, 1, Full)]),
            SpaceTag::Y => vec_of(&[c(Facets, 0, Tangential), c(Vertices, 0, Full)]),
            SpaceTag::Z => vec_of(&[
                c(Facets, 0, Tangential),
                c(Edges, 0, Full),
                c(Vertices, 0, Full),
            ]),
            SpaceTag::Lagrange | SpaceTag::VectorLagrange => vec_of(&[c(Facets, 0, Full)]),
            SpaceTag::Nedelec => vec_of(&[c(MicroFacets, 0, Tangential), c(Facets, 0, Tangential)]),
        }
    }

    pub fn spec(self) -> ContinuitySpec {
        ContinuitySpec {
            clauses: self.clauses(),
        }
    }

    /// Layout the space lives on.
    pub fn layout(self, mesh: &SimplicialMesh) -> Result<Layout> {
        if let Some(d) = self.spatial_dim() {
            if d != mesh.dim() {
                return Err(Error::WrongDimension {
                    expected: d,
                    found: mesh.dim(),
                });
            }
        }
        if self.on_worsey_farin() {
            Layout::worsey_farin(mesh)
        } else {
            Ok(Layout::plain(mesh))
        }
    }

    /// Builds the space of polynomial degree `degree`.
    pub fn build(
        self,
        mesh: &SimplicialMesh,
        degree: usize,
        opts: &ConstrainOptions,
    ) -> Result<ConstrainedSpace> {
        let layout = self.layout(mesh)?;
        let rank = self.rank(mesh.dim());
        constrain(
            BrokenSpace::new(layout, rank, degree),
            &self.spec(),
            self.name(),
            opts,
        )
    }
}

fn vec_of(c: &[Clause]) -> Vec<Clause> {
    c.to_vec()
}

/// A sequence of spaces linked by grad, curl (rot in 2D) and div.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComplexTag {
    /// Worsey–Farin complex, degrees `p, p-1, p-2, p-3`.
    V,
    /// Degrees `p+3, p+2, p+1, p`.
    W,
    /// 2D complex: Hermite `P_{p+1}`, Y `P_p`, DG `P_{p-1}`.
    Plane,
}

impl ComplexTag {
    pub fn from_name(s: &str) -> Option<ComplexTag> {
        match s {
            "V" | "v" => Some(ComplexTag::V),
            "W" | "w" => Some(ComplexTag::W),
            "2D" | "2d" | "plane" => Some(ComplexTag::Plane),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComplexTag::V => "V",
            ComplexTag::W => "W",
            ComplexTag::Plane => "2D",
        }
    }

    pub fn min_degree(self) -> usize {
        match self {
            ComplexTag::V => 3,
            ComplexTag::W | ComplexTag::Plane => 2,
        }
    }

    /// Spaces and degrees of the complex at parameter `p`.
    pub fn members(self, p: usize) -> Result<Vec<(SpaceTag, usize)>> {
        if p < self.min_degree() {
            return Err(Error::UnsupportedDegree {
                degree: p,
                min: self.min_degree(),
                max: usize::MAX,
            });
        }
        Ok(match self {
            ComplexTag::V => vec_pairs(&[
                (SpaceTag::V0, p),
                (SpaceTag::V1, p - 1),
                (SpaceTag::V2, p - 2),
                (SpaceTag::V3, p - 3),
            ]),
            ComplexTag::W => vec_pairs(&[
                (SpaceTag::W0, p + 3),
                (SpaceTag::W1, p + 2),
                (SpaceTag::W2, p + 1),
                (SpaceTag::W3, p),
            ]),
            ComplexTag::Plane => vec_pairs(&[
                (SpaceTag::Hermite, p + 1),
                (SpaceTag::Y, p),
                (SpaceTag::Dg, p - 1),
            ]),
        })
    }

    pub fn build(
        self,
        mesh: &SimplicialMesh,
        p: usize,
        opts: &ConstrainOptions,
    ) -> Result<Vec<ConstrainedSpace>> {
        self.members(p)?
            .into_iter()
            .map(|(t, q)| t.build(mesh, q, opts))
            .collect()
    }
}

fn vec_pairs(v: &[(SpaceTag, usize)]) -> Vec<(SpaceTag, usize)> {
    v.to_vec()
}
