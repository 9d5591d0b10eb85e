//! Closed-form dimension counts of the complex spaces and their audit against
//! the numerically computed nullspace dimension.

use super::constraints::ConstrainOptions;
use super::presets::SpaceTag;
use crate::mesh::SimplicialMesh;
use crate::{Error, Result};

fn binom(n: i64, k: i64) -> i64 {
    if n < k || k < 0 {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn range(tag: SpaceTag, p: usize, min: usize) -> Result<()> {
    if p < min {
        return Err(Error::UnsupportedDegree {
            degree: p,
            min,
            max: usize::MAX,
        });
    }
    let _ = tag;
    Ok(())
}

/// Published count for space `tag` of degree `p` on a mesh with `[V, E, F, T]`
/// entities, evaluated exactly as printed.
pub fn printed_dimension(tag: SpaceTag, p: usize, counts: [usize; 4]) -> Result<i64> {
    let [v, e, f, t] = counts.map(|x| x as i64);
    let q = p as i64;
    Ok(match tag {
        SpaceTag::V0 => {
            range(tag, p, 3)?;
            4 * v
                + ((q - 3) + 2 * (q - 2)) * e
                + (3 * (q * q - q + 2) / 2 - (6 * q - 6)) * f
                + 2 * (q - 1) * (q - 2) * (q - 3) * t
        }
        SpaceTag::V1 => {
            range(tag, p, 1)?;
            3 * v
                + 3 * (q - 1) * e
                + (3 * q * q - 3 * q + 2) * f
                + (6 * q * q * q - 3 * q * q + 3 * q + 1) * t
        }
        SpaceTag::V2 => {
            range(tag, p, 0)?;
            3 * (q + 2) * (q + 1) / 2 * f
                + (9 * (q + 1) * (q + 2) + 6 * (q + 2) * (q + 1) * (q - 1)) * t
        }
        SpaceTag::V3 => 2 * (q + 3) * (q + 2) * (q + 1) * t,
        SpaceTag::W0 => {
            range(tag, p, 4)?;
            10 * v + (2 * (q - 4) + (q - 5)) * e + binom(q - 4, 2) * f + binom(q - 1, 3) * t
        }
        SpaceTag::W1 => {
            range(tag, p, 4)?;
            12 * v
                + (5 * q - 13) * e
                + (q * q - 6 * q + 8) * f
                + (q * q * q - 2 * q * q - q + 2) / 2 * t
        }
        SpaceTag::W2 => {
            range(tag, p, 2)?;
            3 * v
                + 2 * (q - 1) * e
                + (q - 1) * (q - 2) / 2 * f
                + (q * q * q - 2 * q * q + q - 2) / 2 * t
        }
        SpaceTag::W3 => binom(q + 3, 3) * t,
        _ => {
            return Err(Error::Incompatible(
                "no closed-form count for this space".into(),
            ))
        }
    })
}

/// Count implied by the degrees of freedom; differs from the printed one only
/// for `W2`, whose interior term is `(p-1)(p+1)(p+2)/2`.
pub fn dof_dimension(tag: SpaceTag, p: usize, counts: [usize; 4]) -> Result<i64> {
    if tag != SpaceTag::W2 {
        return printed_dimension(tag, p, counts);
    }
    range(tag, p, 2)?;
    let [v, e, f, t] = counts.map(|x| x as i64);
    let q = p as i64;
    Ok(3 * v + 2 * (q - 1) * e + (q - 1) * (q - 2) / 2 * f + (q - 1) * (q + 1) * (q + 2) / 2 * t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditRow {
    pub tag: SpaceTag,
    pub p: usize,
    pub counts: [usize; 4],
    pub printed: i64,
    pub dof_count: i64,
    pub computed: i64,
}

impl AuditRow {
    pub fn matches(&self) -> bool {
        self.printed == self.computed
    }
}

/// Builds the space numerically and compares with the closed forms.
pub fn audit_dimension(
    tag: SpaceTag,
    p: usize,
    mesh: &SimplicialMesh,
    opts: &ConstrainOptions,
) -> Result<AuditRow> {
    let counts = mesh.counts();
    let printed = printed_dimension(tag, p, counts)?;
    let dof_count = dof_dimension(tag, p, counts)?;
    let computed = tag.build(mesh, p, opts)?.dim() as i64;
    Ok(AuditRow {
        tag,
        p,
        counts,
        printed,
        dof_count,
        computed,
    })
}
