use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::assembly::{derivative_matrix, DiffOp};
use crate::linalg::{decide_rank, max_abs, singular_values};
use crate::mesh::SimplicialMesh;
use crate::spaces::{ComplexTag, ConstrainOptions, SpaceTag};
use crate::Result;

/// One integer or numeric identity of an exactness check.
#[derive(Clone, Debug, PartialEq)]
pub struct Identity {
    pub name: String,
    /// Expected and actual values (integers for rank identities).
    pub expected: f64,
    pub actual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactnessReport {
    pub complex: ComplexTag,
    pub p: usize,
    pub spaces: Vec<(SpaceTag, usize)>,
    pub dims: Vec<usize>,
    pub ops: Vec<DiffOp>,
    pub ranks: Vec<usize>,
    pub kernels: Vec<usize>,
    /// Max norms of consecutive compositions.
    pub compositions: Vec<f64>,
    /// Largest projection residual of a derivative matrix.
    pub residual: f64,
    /// `1 - dim_0 + dim_1 - ...`.
    pub alternating_sum: i64,
    pub identities: Vec<Identity>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|i| i.passed)
    }
}

fn ops(complex: ComplexTag) -> Vec<DiffOp> {
    match complex {
        ComplexTag::V | ComplexTag::W => alloc::vec![DiffOp::Grad, DiffOp::Curl, DiffOp::Div],
        ComplexTag::Plane => alloc::vec![DiffOp::Grad, DiffOp::Rot],
    }
}

/// Builds the complex on `mesh` and checks it is a complex and exact:
/// compositions vanish, the gradient kernel is the constants, every kernel
/// equals the previous range, the last operator is onto, and the alternating
/// dimension sum is zero.
pub fn exactness_check(
    complex: ComplexTag,
    p: usize,
    mesh: &SimplicialMesh,
    opts: &ConstrainOptions,
) -> Result<ExactnessReport> {
    let members = complex.members(p)?;
    let spaces = complex.build(mesh, p, opts)?;
    let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
    let ops = ops(complex);

    let mut mats = Vec::new();
    let mut residual: f64 = 0.0;
    for (k, &op) in ops.iter().enumerate() {
        let d = derivative_matrix(&spaces[k].space, &spaces[k + 1].space, op, 1e-8)?;
        residual = residual.max(d.residual);
        mats.push(d.matrix);
    }
    let mut ranks = Vec::new();
    for m in &mats {
        ranks.push(decide_rank(&singular_values(m), opts.rank_tol, true)?.rank);
    }
    let kernels: Vec<usize> = ranks.iter().zip(&dims).map(|(r, d)| d - r).collect();
    let compositions: Vec<f64> = mats.windows(2).map(|w| max_abs(&(&w[1] * &w[0]))).collect();
    let alternating_sum = 1 + dims
        .iter()
        .enumerate()
        .map(|(i, &d)| if i % 2 == 0 { -(d as i64) } else { d as i64 })
        .sum::<i64>();

    let mut identities = Vec::new();
    let mut int_identity = |name: String, expected: usize, actual: usize| {
        identities.push(Identity {
            name,
            expected: expected as f64,
            actual: actual as f64,
            passed: expected == actual,
        });
    };
    int_identity(format!("ker {:?} = constants", ops[0]), 1, kernels[0]);
    for k in 1..ops.len() {
        int_identity(
            format!("ker {:?} = range {:?}", ops[k], ops[k - 1]),
            ranks[k - 1],
            kernels[k],
        );
    }
    let last = ops.len() - 1;
    int_identity(format!("{:?} onto", ops[last]), dims[last + 1], ranks[last]);
    identities.push(Identity {
        name: "alternating dimension sum".into(),
        expected: 0.0,
        actual: alternating_sum as f64,
        passed: alternating_sum == 0,
    });
    for (k, &c) in compositions.iter().enumerate() {
        identities.push(Identity {
            name: format!("{:?} after {:?}", ops[k + 1], ops[k]),
            expected: 0.0,
            actual: c,
            passed: c <= 1e-10,
        });
    }
    identities.push(Identity {
        name: "projection residual".into(),
        expected: 0.0,
        actual: residual,
        passed: residual <= 1e-10,
    });

    Ok(ExactnessReport {
        complex,
        p,
        spaces: members,
        dims,
        ops,
        ranks,
        kernels,
        compositions,
        residual,
        alternating_sum,
        identities,
    })
}
