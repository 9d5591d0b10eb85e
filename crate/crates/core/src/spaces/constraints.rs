//! Constrained subspaces of broken spaces.
//!
//! Continuity requirements are expressed as clauses; each clause expands into
//! point-sampled jump functionals on the selected entities. Jumps are
//! polynomials, so sampling on a principal lattice of the space's degree makes
//! the functionals exact. Constraint rows are assembled on the mesh scaled to
//! unit diameter and normalized to unit length before the nullspace is taken.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use super::broken::{jet_lambdas, BrokenSpace};
use super::discrete::DiscreteSpace;
use super::Layout;
use crate::linalg::{max_abs, normalize_rows, nullspace, RANK_TOL};
use crate::mesh::{entity_frame, SimplicialMesh};
use crate::orthopoly::quadrature::principal_lattice;
use crate::scalar::Jet2;
use crate::{Error, Result};

/// Jump entries below this fraction of the functional's own magnitude are
/// roundoff from a condition that already holds, and are dropped.
pub const CANCEL_TOL: f64 = 1e-10;

/// Entities a clause acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Facets of the working mesh inside a macro cell.
    MicroFacets,
    /// Interior facets lying on macro facets (all interior facets when unsplit).
    Facets,
    /// Edges lying on macro edges (3D).
    Edges,
    /// Macro vertices.
    Vertices,
    /// Boundary facets; the trace itself is constrained, not a jump.
    BoundaryFacets,
}

/// Which part of the field is constrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Full,
    Tangential,
    Normal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// The field and its derivatives up to the clause order.
    Value,
    /// Normal components of the curl (order ignored).
    CurlNormal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Clause {
    pub scope: Scope,
    pub order: usize,
    pub component: Component,
    pub quantity: Quantity,
}

impl Clause {
    pub const fn new(scope: Scope, order: usize, component: Component) -> Self {
        Clause {
            scope,
            order,
            component,
            quantity: Quantity::Value,
        }
    }

    pub const fn curl_normal(scope: Scope) -> Self {
        Clause {
            scope,
            order: 0,
            component: Component::Full,
            quantity: Quantity::CurlNormal,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ContinuitySpec {
    pub clauses: Vec<Clause>,
}

impl ContinuitySpec {
    pub fn new(clauses: &[Clause]) -> Self {
        ContinuitySpec {
            clauses: clauses.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstrainOptions {
    /// Relative singular value threshold for rank decisions.
    pub rank_tol: f64,
    /// Multiplier on the lattice order of sample points.
    pub oversample: usize,
}

impl Default for ConstrainOptions {
    fn default() -> Self {
        ConstrainOptions {
            rank_tol: RANK_TOL,
            oversample: 1,
        }
    }
}

/// Multi-indices of order at most `r` in `d` variables.
fn multi_indices(d: usize, r: usize) -> Vec<[u8; 3]> {
    let mut out = Vec::new();
    for a in 0..=r {
        for b in 0..=r - a {
            for c in 0..=r - a - b {
                if (d < 2 && b > 0) || (d < 3 && c > 0) {
                    continue;
                }
                out.push([a as u8, b as u8, c as u8]);
            }
        }
    }
    out.sort_by_key(|m| m.iter().map(|&x| x as usize).sum::<usize>());
    out
}

/// Entities of the working mesh selected by a scope.
fn select(layout: &Layout, scope: Scope) -> (usize, Vec<usize>) {
    let mesh = layout.mesh();
    let d = mesh.dim();
    let (k, want) = match scope {
        Scope::MicroFacets => (d - 1, Some(d)),
        Scope::Facets => (d - 1, Some(d - 1)),
        Scope::Edges => (1, Some(1)),
        Scope::Vertices => (0, Some(0)),
        Scope::BoundaryFacets => (d - 1, None),
    };
    let ids = (0..mesh.num_entities(k))
        .filter(|&id| match want {
            Some(cd) => layout.carrier(k, id).dim == cd && mesh.entity_cells(k, id).len() > 1,
            None => mesh.is_boundary(k, id),
        })
        .collect();
    (k, ids)
}

/// Functionals of one clause at one point: `(direction, multi-index)` pairs
/// applied to the component values, or curl-normal directions.
fn functionals(
    geo: &SimplicialMesh,
    clause: &Clause,
    k: usize,
    id: usize,
    rank: usize,
) -> Result<(Vec<[f64; 3]>, Vec<[u8; 3]>)> {
    let d = geo.dim();
    if clause.quantity == Quantity::CurlNormal {
        if d != 3 || rank != 3 || k == 0 || k == 3 {
            return Err(Error::Incompatible(
                "curl-normal clauses need 3D vector fields on edges or faces".into(),
            ));
        }
        return Ok((entity_frame(geo, k, id)?.normals, vec![[0, 0, 0]]));
    }
    if clause.order > 2 {
        return Err(Error::UnsupportedDegree {
            degree: clause.order,
            min: 0,
            max: 2,
        });
    }
    let dirs = match (clause.component, rank) {
        (Component::Full, r) => (0..r)
            .map(|i| {
                let mut e = [0.0; 3];
                e[i] = 1.0;
                e
            })
            .collect(),
        (_, 1) => {
            return Err(Error::RankMismatch(
                "tangential or normal part of a scalar field".into(),
            ))
        }
        (_, _) if k == 0 => {
            return Err(Error::Incompatible(
                "vertices have no tangential or normal frame".into(),
            ))
        }
        (Component::Tangential, _) => entity_frame(geo, k, id)?.tangents,
        (Component::Normal, _) => entity_frame(geo, k, id)?.normals,
    };
    Ok((dirs, multi_indices(d, clause.order)))
}

/// One functional row block: values of every functional for every dof living
/// on cell `c`, at cell barycentric point `bary`.
fn functional_values(
    space: &DiscreteSpace,
    geo: &SimplicialMesh,
    c: usize,
    bary: &[f64],
    clause: &Clause,
    dirs: &[[f64; 3]],
    alphas: &[[u8; 3]],
) -> Vec<Vec<f64>> {
    let lam = jet_lambdas(geo, c, bary);
    let vals: Vec<Vec<Jet2>> = space.eval_cell(geo, c, &lam);
    let rank = space.rank();
    let mut out = Vec::with_capacity(dirs.len() * alphas.len());
    match clause.quantity {
        Quantity::CurlNormal => {
            for nu in dirs {
                out.push(
                    vals.iter()
                        .map(|v| {
                            let g: Vec<[f64; 3]> = v.iter().map(|j| j.gradient()).collect();
                            let curl = [g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]];
                            curl[0] * nu[0] + curl[1] * nu[1] + curl[2] * nu[2]
                        })
                        .collect(),
                );
            }
        }
        Quantity::Value => {
            for dir in dirs {
                for alpha in alphas {
                    out.push(
                        vals.iter()
                            .map(|v| (0..rank).map(|i| dir[i] * v[i].derivative(*alpha)).sum())
                            .collect(),
                    );
                }
            }
        }
    }
    out
}

/// Assembled, row-normalized constraint matrix of `clauses` for `space`,
/// restricted to entities accepted by `filter`.
pub fn constraint_rows(
    space: &DiscreteSpace,
    clauses: &[Clause],
    oversample: usize,
    filter: &dyn Fn(usize, usize) -> bool,
) -> Result<DMatrix<f64>> {
    let layout = space.layout().scaled_to_unit_diameter();
    let geo = layout.mesh();
    let rank = space.rank();
    let lattice_order = space.degree().max(1) * oversample.max(1);
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    for clause in clauses {
        let (k, ids) = select(&layout, clause.scope);
        let points = principal_lattice(k, if k == 0 { 0 } else { lattice_order });
        for id in ids {
            if !filter(k, id) {
                continue;
            }
            let (dirs, alphas) = functionals(geo, clause, k, id, rank)?;
            let verts = geo.entity(k, id)?.to_vec();
            let cells = geo.entity_cells(k, id).to_vec();
            for pt in &points {
                let mut per_cell = Vec::with_capacity(cells.len());
                for &c in &cells {
                    let local = geo.local_indices(c, &verts).expect("entity in its cell");
                    let mut bary = [0.0; 4];
                    for (i, &l) in local.iter().enumerate() {
                        bary[l] = pt[i];
                    }
                    per_cell.push(functional_values(
                        space,
                        geo,
                        c,
                        &bary[..=geo.dim()],
                        clause,
                        &dirs,
                        &alphas,
                    ));
                }
                let nfun = per_cell[0].len();
                for f in 0..nfun {
                    // magnitude of the functional itself on either side
                    let scale = per_cell
                        .iter()
                        .flat_map(|v| v[f].iter())
                        .fold(0.0f64, |a, x| a.max(x.abs()));
                    let cut = CANCEL_TOL * scale;
                    if clause.scope == Scope::BoundaryFacets {
                        let dofs = &space.cells[cells[0]].dofs;
                        rows.push(
                            dofs.iter()
                                .zip(&per_cell[0][f])
                                .filter(|(_, v)| v.abs() > cut)
                                .map(|(&g, &v)| (g, v))
                                .collect(),
                        );
                        continue;
                    }
                    for other in 1..cells.len() {
                        let mut row: BTreeMap<usize, f64> = BTreeMap::new();
                        for (&g, &v) in space.cells[cells[0]].dofs.iter().zip(&per_cell[0][f]) {
                            *row.entry(g).or_insert(0.0) += v;
                        }
                        for (&g, &v) in space.cells[cells[other]]
                            .dofs
                            .iter()
                            .zip(&per_cell[other][f])
                        {
                            *row.entry(g).or_insert(0.0) -= v;
                        }
                        rows.push(row.into_iter().filter(|(_, v)| v.abs() > cut).collect());
                    }
                }
            }
        }
    }
    let mut c = DMatrix::zeros(rows.len(), space.dim);
    for (i, row) in rows.iter().enumerate() {
        for &(g, v) in row {
            c[(i, g)] += v;
        }
    }
    Ok(normalize_rows(&c))
}

/// A constrained subspace with its orthonormal transform.
#[derive(Clone, Debug)]
pub struct ConstrainedSpace {
    pub spec: ContinuitySpec,
    /// Broken coefficients of the basis (`broken dim x dim`), orthonormal
    /// columns.
    pub transform: DMatrix<f64>,
    pub space: DiscreteSpace,
}

impl ConstrainedSpace {
    pub fn dim(&self) -> usize {
        self.space.dim
    }

    /// `(||C T|| / ||C||, ||T^T T - I||)` in max norm, with `C` the full
    /// constraint matrix assembled on the broken space.
    pub fn verify(&self) -> Result<(f64, f64)> {
        let base = DiscreteSpace::from_broken(self.space.broken.clone(), "broken");
        let c = constraint_rows(&base, &self.spec.clauses, 1, &|_, _| true)?;
        let cn = max_abs(&c).max(f64::MIN_POSITIVE);
        let ct = max_abs(&(&c * &self.transform)) / cn;
        let n = self.transform.ncols();
        let g = self.transform.transpose() * &self.transform - DMatrix::<f64>::identity(n, n);
        Ok((ct, max_abs(&g)))
    }
}

/// Nullspace of the constraint clauses inside a broken space.
///
/// Clauses on micro facets are solved macro cell by macro cell first; the
/// remaining clauses are then imposed on the result.
pub fn constrain(
    broken: BrokenSpace,
    spec: &ContinuitySpec,
    name: &str,
    opts: &ConstrainOptions,
) -> Result<ConstrainedSpace> {
    let base = DiscreteSpace::from_broken(broken, name);
    let (local, global): (Vec<Clause>, Vec<Clause>) = spec
        .clauses
        .iter()
        .partition(|c| c.scope == Scope::MicroFacets);

    let mut t = if local.is_empty() {
        DMatrix::identity(base.dim, base.dim)
    } else {
        local_stage(&base, &local, opts)?
    };
    if !global.is_empty() {
        let stage = base.compose(&t, name)?;
        let c = constraint_rows(&stage, &global, opts.oversample, &|_, _| true)?;
        let t2 = nullspace(&c, opts.rank_tol)?;
        t = &t * t2;
    }
    let space = base.compose(&t, name)?;
    Ok(ConstrainedSpace {
        spec: spec.clone(),
        transform: t,
        space,
    })
}

fn local_stage(
    base: &DiscreteSpace,
    clauses: &[Clause],
    opts: &ConstrainOptions,
) -> Result<DMatrix<f64>> {
    let layout = base.layout();
    let mesh = layout.mesh();
    let d = mesh.dim();
    let ld = base.broken.local_dim();
    let mut blocks = Vec::with_capacity(layout.num_groups());
    let mut total = 0;
    for g in 0..layout.num_groups() {
        let cells: Vec<usize> = (0..mesh.num_cells())
            .filter(|&c| layout.group(c) == g)
            .collect();
        let c = constraint_rows(base, clauses, opts.oversample, &|k, id| {
            k == d - 1 && layout.group(mesh.entity_cells(k, id)[0]) == g
        })?;
        let cols: Vec<usize> = cells
            .iter()
            .flat_map(|&c| base.broken.offset(c)..base.broken.offset(c) + ld)
            .collect();
        let sub = DMatrix::from_fn(c.nrows(), cols.len(), |i, j| c[(i, cols[j])]);
        let t = nullspace(&sub, opts.rank_tol)?;
        total += t.ncols();
        blocks.push((cols, t));
    }
    let mut t = DMatrix::zeros(base.dim, total);
    let mut col = 0;
    for (cols, b) in blocks {
        for j in 0..b.ncols() {
            for (i, &r) in cols.iter().enumerate() {
                t[(r, col + j)] = b[(i, j)];
            }
        }
        col += b.ncols();
    }
    Ok(t)
}

/// Removes from `space` everything violating the clauses (typically boundary
/// conditions); returns the reduced space and the transform.
pub fn restrict(
    space: &DiscreteSpace,
    clauses: &[Clause],
    name: &str,
    rank_tol: f64,
) -> Result<(DiscreteSpace, DMatrix<f64>)> {
    let c = constraint_rows(space, clauses, 1, &|_, _| true)?;
    let t = nullspace(&c, rank_tol)?;
    if t.ncols() == 0 {
        return Err(Error::EmptySpace);
    }
    Ok((space.compose(&t, name)?, t))
}

/// Short human readable description of a clause.
pub fn describe(clause: &Clause) -> String {
    format!(
        "{:?} C{} {:?} {:?}",
        clause.scope, clause.order, clause.component, clause.quantity
    )
}
