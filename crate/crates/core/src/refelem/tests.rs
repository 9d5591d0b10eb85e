use super::*;
use crate::assembly::{derivative_matrix, DiffOp};
use crate::linalg::{max_abs, rank, RANK_TOL};
use crate::mesh::{single_tet, two_tets, two_triangles, SimplicialMesh};
use crate::orthopoly::quadrature::{principal_lattice, simplex_rule};
use crate::orthopoly::simplex::dim_poly;
use crate::spaces::{
    constrain, BrokenSpace, Clause, Component, ConstrainOptions, ContinuitySpec, DiscreteSpace,
    Scope,
};
use nalgebra::DMatrix;

fn count(elem: &ReferenceElement, k: usize, dir: fn(&Direction) -> bool) -> usize {
    elem.functions()
        .iter()
        .filter(|f| f.entity.0 == k && dir(&f.direction))
        .count()
}

#[test]
fn hrot_counts() {
    let e = ReferenceElement::hrot_tri(2).unwrap();
    assert_eq!(e.len(), 12);
    assert_eq!(count(&e, 0, |_| true), 6);
    assert_eq!(count(&e, 1, |d| matches!(d, Direction::Tangent(_))), 3);
    assert_eq!(count(&e, 1, |d| matches!(d, Direction::Normal(_))), 3);
    let e3 = ReferenceElement::hrot_tri(3).unwrap();
    assert_eq!(count(&e3, 2, |_| true), 2);
    assert_eq!(e3.len(), 20);
    assert!(ReferenceElement::hrot_tri(1).is_err());
}

#[test]
fn hdiv_counts() {
    let e = ReferenceElement::hdiv_tet(2).unwrap();
    assert_eq!(e.len(), 30);
    assert_eq!(count(&e, 0, |_| true), 12);
    assert_eq!(count(&e, 1, |d| matches!(d, Direction::Normal(_))), 12);
    assert_eq!(count(&e, 1, |d| matches!(d, Direction::Tangent(_))), 6);
    assert_eq!(count(&e, 2, |_| true), 0);
    let e3 = ReferenceElement::hdiv_tet(3).unwrap();
    for face in 0..4 {
        let on = |pred: fn(&Direction) -> bool| {
            e3.functions()
                .iter()
                .filter(|f| f.entity == (2, face) && pred(&f.direction))
                .count()
        };
        assert_eq!(on(|d| matches!(d, Direction::Normal(_))), 1);
        assert_eq!(on(|d| matches!(d, Direction::Tangent(_))), 2);
    }
    assert_eq!(e3.len(), 60);
}

#[test]
fn zh_and_lagrange_counts() {
    assert_eq!(ReferenceElement::zhp_tet(3).unwrap().len(), 60);
    assert_eq!(ReferenceElement::lagrange(2, 1).unwrap().len(), 3);
    assert_eq!(ReferenceElement::lagrange(2, 2).unwrap().len(), 6);
    assert_eq!(ReferenceElement::lagrange(3, 3).unwrap().len(), 20);
    assert_eq!(ReferenceElement::vector_lagrange(3, 2).unwrap().len(), 30);
    assert!(ReferenceElement::lagrange(2, 0).is_err());
    assert!(ReferenceElement::zhp_tet(1).is_err());
}

#[test]
fn worsey_farin_counts() {
    // one macro cell: three copies of the continuous scalar space on the split
    let opts = ConstrainOptions::default();
    for p in [2, 3] {
        let e = ReferenceElement::hcurl_tet_wf(p).unwrap();
        assert_eq!(e.num_cells(), 12);
        let spec = ContinuitySpec::new(&[Clause::new(Scope::MicroFacets, 0, Component::Full)]);
        let scalar = constrain(
            BrokenSpace::new(e.space.layout().clone(), 1, p),
            &spec,
            "c0",
            &opts,
        )
        .unwrap();
        assert_eq!(e.len(), 3 * scalar.dim());
    }
}

fn families() -> Vec<(Family, usize)> {
    vec![
        (Family::Lagrange, 2),
        (Family::Lagrange, 3),
        (Family::VectorLagrange, 2),
        (Family::HRotTri, 2),
        (Family::HDivTet, 3),
        (Family::ZhpTet, 3),
        (Family::HCurlTetWf, 2),
    ]
}

fn family_dim(f: Family) -> usize {
    f.spatial_dim()
        .unwrap_or(if f == Family::VectorLagrange { 3 } else { 2 })
}

#[test]
fn local_completeness() {
    for family in [
        Family::Lagrange,
        Family::VectorLagrange,
        Family::HRotTri,
        Family::HDivTet,
        Family::ZhpTet,
        Family::HCurlTetWf,
    ] {
        let dims: &[usize] = match family.spatial_dim() {
            Some(d) => &[d][..],
            None => &[2, 3][..],
        };
        for &d in dims {
            let top = if family == Family::HCurlTetWf { 4 } else { 5 };
            for p in family.min_degree()..=top {
                let e = ReferenceElement::new(family, p, d).unwrap();
                let rank_v = if family.is_vector() { d } else { 1 };
                let pts = principal_lattice(d, p);
                for c in 0..e.num_cells() {
                    let t = e.tabulate(c, &pts, What::Value).unwrap();
                    let live: Vec<usize> = (0..e.len())
                        .filter(|&i| e.functions()[i].support.contains(&c))
                        .collect();
                    let a = DMatrix::from_fn(live.len(), pts.len() * rank_v, |i, j| {
                        t.get(live[i], j / rank_v, j % rank_v)
                    });
                    let expected = rank_v * dim_poly(d, p);
                    assert_eq!(live.len(), expected, "{family:?} p={p} cell {c}");
                    assert_eq!(
                        rank(&a, RANK_TOL).unwrap(),
                        expected,
                        "{family:?} p={p} cell {c}"
                    );
                }
            }
        }
    }
}

/// Values of every function of a glued space on both sides of each interior
/// facet, projected on the directions that must be continuous.
fn check_traces(mesh: &SimplicialMesh, family: Family, p: usize) {
    let g = GluedSpace::new(mesh, family, p).unwrap();
    let layout = g.layout();
    let m = layout.mesh();
    let d = m.dim();
    let pts = principal_lattice(d - 1, 5);
    let mut checked = 0;
    for facet in 0..m.num_entities(d - 1) {
        let cells = m.entity_cells(d - 1, facet);
        if cells.len() != 2 {
            continue;
        }
        let verts = m.entity(d - 1, facet).unwrap().to_vec();
        let frame = crate::mesh::entity_frame(m, d - 1, facet).unwrap();
        // inside a split macro cell everything is continuous
        let inner = layout.carrier(d - 1, facet).dim == d;
        let dirs: Vec<[f64; 3]> = match (family, inner) {
            (Family::Lagrange, _) => vec![[1.0, 0.0, 0.0]],
            (Family::VectorLagrange, _) | (_, true) => (0..d)
                .map(|i| {
                    let mut e = [0.0; 3];
                    e[i] = 1.0;
                    e
                })
                .collect(),
            (Family::HDivTet, _) => frame.normals.clone(),
            _ => frame.tangents.clone(),
        };
        let rank_v = g.space.rank();
        let side_vals: Vec<Vec<[f64; 3]>> = cells
            .iter()
            .map(|&c| {
                let local = m.local_indices(c, &verts).unwrap();
                let bary: Vec<[f64; 4]> = pts
                    .iter()
                    .map(|q| {
                        let mut b = [0.0; 4];
                        for (i, &l) in local.iter().enumerate() {
                            b[l] = q[i];
                        }
                        b
                    })
                    .collect();
                let t = g.tabulate_all(c, &bary, What::Value).unwrap();
                (0..g.dim() * pts.len())
                    .map(|k| {
                        let mut v = [0.0; 3];
                        for (comp, x) in v.iter_mut().enumerate().take(rank_v) {
                            *x = t.get(k / pts.len(), k % pts.len(), comp);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        for (fi, f) in g.functions.iter().enumerate() {
            if !f.is_shared() {
                continue;
            }
            for q in 0..pts.len() {
                let a = side_vals[0][fi * pts.len() + q];
                let b = side_vals[1][fi * pts.len() + q];
                for dir in &dirs {
                    let ja: f64 = (0..3).map(|i| a[i] * dir[i]).sum();
                    let jb: f64 = (0..3).map(|i| b[i] * dir[i]).sum();
                    assert!(
                        (ja - jb).abs() < 1e-10,
                        "{family:?} facet {facet} fn {fi}: {ja} vs {jb}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn shared_traces_agree() {
    for (family, p) in families() {
        let mesh = if family_dim(family) == 2 {
            two_triangles()
        } else {
            two_tets()
        };
        check_traces(&mesh, family, p);
    }
    check_traces(&two_tets(), Family::HCurlTetWf, 3);
    check_traces(&two_tets(), Family::HDivTet, 4);
    check_traces(&two_tets(), Family::ZhpTet, 4);
}

#[test]
fn face_normal_functions_have_no_tangential_trace() {
    let e = ReferenceElement::zhp_tet(3).unwrap();
    let m = e.space.layout().mesh();
    for (i, f) in e.functions().iter().enumerate() {
        if f.entity.0 != 2 || !matches!(f.direction, Direction::Normal(_)) {
            continue;
        }
        let frame = crate::mesh::entity_frame(m, 2, f.entity.1).unwrap();
        let verts = m.entity(2, f.entity.1).unwrap();
        let local = m.local_indices(0, verts).unwrap();
        let pts: Vec<[f64; 4]> = principal_lattice(2, 4)
            .iter()
            .map(|q| {
                let mut b = [0.0; 4];
                for (k, &l) in local.iter().enumerate() {
                    b[l] = q[k];
                }
                b
            })
            .collect();
        let t = e.tabulate(0, &pts, What::Value).unwrap();
        for q in 0..pts.len() {
            for tau in &frame.tangents {
                let v: f64 = (0..3).map(|c| t.get(i, q, c) * tau[c]).sum();
                assert!(v.abs() < 1e-13);
            }
        }
    }
}

/// Profile Gram matrix over the reference simplex of dimension `k`.
fn profile_gram(k: usize, p: usize) -> DMatrix<f64> {
    let profiles = Profile::family(k, p);
    let rule = simplex_rule(k, 2 * p).unwrap();
    let mut g = DMatrix::zeros(profiles.len(), profiles.len());
    for (q, pt) in rule.points.iter().enumerate() {
        let vals: Vec<f64> = profiles.iter().map(|pr| pr.eval(&pt[..=k])).collect();
        for i in 0..vals.len() {
            for j in 0..vals.len() {
                g[(i, j)] += rule.weights[q] * vals[i] * vals[j];
            }
        }
    }
    g
}

#[test]
fn same_entity_profiles_are_orthogonal() {
    for k in 1..=3 {
        for p in 2..=9 {
            let g = profile_gram(k, p);
            if g.nrows() == 0 {
                continue;
            }
            let diag = (0..g.nrows()).fold(0.0f64, |m, i| m.max(g[(i, i)]));
            let mut off: f64 = 0.0;
            for i in 0..g.nrows() {
                for j in 0..g.ncols() {
                    if i != j {
                        off = off.max(g[(i, j)].abs());
                    }
                }
            }
            assert!(off <= 1e-10 * diag, "k={k} p={p} off={off:e}");
        }
    }
}

#[test]
fn vertex_hat_is_one_at_its_vertex() {
    let e = ReferenceElement::lagrange(3, 2).unwrap();
    let pts = [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ];
    let t = e.tabulate(0, &pts, What::Value).unwrap();
    for v in 0..4 {
        for q in 0..4 {
            let expected = if v == q { 1.0 } else { 0.0 };
            assert!((t.get(v, q, 0) - expected).abs() < 1e-14);
        }
    }
}

#[test]
fn curl_of_gradient_vanishes() {
    let mesh = two_tets();
    let lag = GluedSpace::new(&mesh, Family::Lagrange, 3).unwrap();
    let vec2 = DiscreteSpace::from_broken(BrokenSpace::on_mesh(&mesh, 3, 2), "p2");
    let d = derivative_matrix(&lag.space, &vec2, DiffOp::Grad, 1e-10).unwrap();
    let grads = vec2.compose(&d.matrix, "grads").unwrap();
    let pts = principal_lattice(3, 3);
    for c in 0..mesh.num_cells() {
        let t = grads.tabulate(c, &pts, What::Curl).unwrap();
        assert!(t.data.iter().all(|x| x.abs() < 1e-11));
        let v = grads.tabulate(c, &pts, What::Value).unwrap();
        assert!(v.data.iter().any(|x| x.abs() > 1e-3));
    }
    let t = lag.tabulate_all(0, &pts, What::Curl);
    assert!(matches!(t, Err(crate::Error::RankMismatch(_))));
}

#[test]
fn gradients_match_differences() {
    let h = 1e-6;
    for (family, p) in families() {
        let mesh = if family_dim(family) == 2 {
            two_triangles()
        } else {
            two_tets()
        };
        let g = GluedSpace::new(&mesh, family, p).unwrap();
        let m = g.layout().mesh();
        let d = m.dim();
        let rank_v = g.space.rank();
        for c in 0..m.num_cells().min(3) {
            let bary = [0.2, 0.3, 0.1, 0.4];
            let mut b = [0.0; 4];
            let s: f64 = bary[..=d].iter().sum();
            for i in 0..=d {
                b[i] = bary[i] / s;
            }
            let x = m.point(c, &b[..=d]);
            let grad = g.tabulate_all(c, &[b], What::Grad).unwrap();
            for k in 0..d {
                let mut xp = x;
                let mut xm = x;
                xp[k] += h;
                xm[k] -= h;
                let bp = m.barycentric(c, xp).unwrap();
                let bm = m.barycentric(c, xm).unwrap();
                let vp = g.tabulate_all(c, &[bp], What::Value).unwrap();
                let vm = g.tabulate_all(c, &[bm], What::Value).unwrap();
                for f in 0..g.dim() {
                    for comp in 0..rank_v {
                        let fd = (vp.get(f, 0, comp) - vm.get(f, 0, comp)) / (2.0 * h);
                        let an = grad.get(f, 0, comp * d + k);
                        assert!(
                            (fd - an).abs() <= 1e-6 * an.abs().max(1.0),
                            "{family:?} {fd} {an}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn expansion_is_exact() {
    for (family, p) in families() {
        let mesh = if family_dim(family) == 2 {
            two_triangles()
        } else {
            single_tet()
        };
        let g = GluedSpace::new(&mesh, family, p).unwrap();
        assert!(g.expansion_error().unwrap() < 1e-11, "{family:?}");
    }
}

#[test]
fn wrong_dimension_is_rejected() {
    assert!(GluedSpace::new(&two_triangles(), Family::HDivTet, 2).is_err());
    assert!(GluedSpace::new(&two_tets(), Family::HRotTri, 2).is_err());
}

#[test]
fn family_names_round_trip() {
    for f in Family::ALL {
        assert_eq!(Family::from_name(f.name()), Some(f));
    }
    assert_eq!(Family::from_name("nope"), None);
    let _ = max_abs(&DMatrix::<f64>::zeros(1, 1));
}
