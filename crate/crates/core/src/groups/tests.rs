use std::collections::HashSet;

use super::*;
use crate::forms::Preset;
use crate::linalg::vec_add;
use crate::poset::{
    gl_building, gl_building_bar, isotropic_building, isotropic_relative_building, relative_building_bar,
};
use crate::testutil::*;

const CAP: u128 = 2_000_000;

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn line(field: &Field, n: usize, v: Vec<Elem>) -> Subspace {
    let _ = n;
    Subspace::span(field, v.len(), &[v])
}

/// Every invertible n x n matrix, by brute force.
fn all_invertible(field: &Field, n: usize) -> Vec<Matrix> {
    let entries: Vec<Vector> = all_vectors(field, n * n).collect();
    entries
        .into_iter()
        .map(|d| Matrix::from_fn(field, n, n, |i, j| d[i * n + j]))
        .filter(Matrix::is_invertible)
        .collect()
}

fn brute_isometries(e: &FormedSpace) -> usize {
    all_invertible(e.field(), e.dim()).iter().filter(|g| preserves_form(e, g)).count()
}

#[test]
fn census_against_brute_force() {
    let cases = [
        (preset("3", Preset::Symplectic), 24usize),
        (preset("3", Preset::Orthogonal), 4),
        (preset("2^2::1", Preset::Unitary), 18),
    ];
    for (p, expect) in cases {
        let h = FormedSpace::hyperbolic(&p, 1);
        assert_eq!(brute_isometries(&h), expect);
        let g = isometry_group(&Ambient::Formed(h.clone()), &Constraint::Isometry, &opts()).unwrap();
        assert_eq!(g.order(), Some(expect as u128), "{p:?}");
        assert!(g.is_closed().unwrap());
        assert!(g.elements().unwrap().iter().all(|x| g.contains(x)));
        // the generating set really generates
        assert_eq!(group_closure(h.field(), 2, &g.generators, 1000).unwrap(), g.elements().unwrap());
    }
    assert_eq!(all_invertible(&f("2^2"), 2).len(), 180);
}

#[test]
fn census_on_random_forms() {
    // backtracking agrees with brute force on arbitrary (possibly degenerate) forms
    let mut r = rng(7);
    for p in [preset("2", Preset::Orthogonal), preset("3", Preset::Orthogonal), preset("2^2::1", Preset::Unitary)] {
        for _ in 0..6 {
            let e = random_space(&p, 2, &mut r);
            let g = isometry_group(&Ambient::Formed(e.clone()), &Constraint::Isometry, &opts()).unwrap();
            assert_eq!(g.order(), Some(brute_isometries(&e) as u128), "{e:?}");
        }
    }
    let e = random_space(&preset("2", Preset::Orthogonal), 3, &mut r);
    let g = isometry_group(&Ambient::Formed(e.clone()), &Constraint::Isometry, &opts()).unwrap();
    assert_eq!(g.order(), Some(brute_isometries(&e) as u128));
}

#[test]
fn linear_groups_and_formulas() {
    for q in ["2", "3"] {
        let field = f(q);
        for n in 1..=3 {
            let all = isometry_group(&Ambient::plain(&field, n), &Constraint::GL, &opts()).unwrap();
            assert_eq!(all.order(), Some(gl_order(n, field.q())));
            let gens = linear_group(&field, n, &Constraint::GL).unwrap();
            assert_eq!(group_closure(&field, n, &gens.generators, 100_000).unwrap(), all.elements().unwrap());
        }
        let mut rg = rng(3);
        for _ in 0..4 {
            let v0 = random_subspace(&field, 3, 1 + rg.gen_range(0..2), &mut rg);
            for c in [Constraint::FixPointwise(v0.clone()), Constraint::IdentityModulo(v0.clone())] {
                let enumerated = isometry_group(&Ambient::plain(&field, 3), &c, &opts()).unwrap();
                let by_filter: Vec<Matrix> =
                    all_invertible(&field, 3).into_iter().filter(|g| c.admits(&Ambient::plain(&field, 3), g)).collect();
                assert_eq!(enumerated.order(), Some(by_filter.len() as u128));
                let structured = linear_group(&field, 3, &c).unwrap();
                assert_eq!(structured.order(), enumerated.order());
                assert!(structured.generators.iter().all(|g| enumerated.contains(g)));
                assert_eq!(
                    group_closure(&field, 3, &structured.generators, 100_000).unwrap(),
                    enumerated.elements().unwrap()
                );
            }
        }
    }
    let f4 = f("2^2");
    assert_eq!(
        group_closure(&f4, 2, &linear_group(&f4, 2, &Constraint::GL).unwrap().generators, 1000).unwrap().len(),
        180
    );
}

#[test]
fn closure_examples() {
    let f3 = f("3");
    let id = Matrix::identity(&f3, 2);
    assert_eq!(group_closure(&f3, 2, std::slice::from_ref(&id), 10).unwrap(), vec![id]);
    let t1 = Matrix::from_rows(&f3, &[vec![1, 1], vec![0, 1]]);
    let t2 = Matrix::from_rows(&f3, &[vec![1, 0], vec![1, 1]]);
    let sl2 = group_closure(&f3, 2, &[t1, t2], 1000).unwrap();
    assert_eq!(sl2.len(), 24);
    let sp2 = isometry_group(
        &Ambient::Formed(FormedSpace::hyperbolic(&preset("3", Preset::Symplectic), 1)),
        &Constraint::Isometry,
        &opts(),
    )
    .unwrap();
    assert_eq!(sp2.elements().unwrap(), sl2.as_slice());
    assert!(matches!(group_closure(&f3, 2, &sl2, 10), Err(Error::CapExceeded { .. })));
}

/// Symplectic transvections x -> x + omega(v, x) v for a few v.
fn sp4_generators() -> (FormedSpace, Vec<Matrix>) {
    let h = FormedSpace::hyperbolic(&preset("3", Preset::Symplectic), 2);
    let field = h.field().clone();
    let mut vs: Vec<Vector> = (0..4).map(|i| unit_vector(4, i)).collect();
    vs.push(vec_add(&field, &unit_vector(4, 0), &unit_vector(4, 2)));
    vs.push(vec_add(&field, &unit_vector(4, 1), &unit_vector(4, 3)));
    let gens = vs
        .iter()
        .map(|v| {
            let cols: Vec<Vector> = (0..4)
                .map(|j| crate::linalg::vec_axpy(&field, &unit_vector(4, j), h.omega_value(v, &unit_vector(4, j)), v))
                .collect();
            Matrix::from_cols(&field, &cols, 4)
        })
        .collect();
    (h, gens)
}

#[test]
fn sp4_closure_matches_backtracking() {
    let (h, gens) = sp4_generators();
    assert!(gens.iter().all(|g| preserves_form(&h, g)));
    let closure = group_closure(h.field(), 4, &gens, 100_000).unwrap();
    assert_eq!(closure.len(), 51840);
    let g = isometry_group(&Ambient::Formed(h), &Constraint::Isometry, &opts()).unwrap();
    assert_eq!(g.elements().unwrap(), closure.as_slice());
}

#[test]
fn abelianizations() {
    let f3 = f("3");
    let sp2 = isometry_group(
        &Ambient::Formed(FormedSpace::hyperbolic(&preset("3", Preset::Symplectic), 1)),
        &Constraint::Isometry,
        &opts(),
    )
    .unwrap();
    assert_eq!(derived_subgroup(&sp2, 1000).unwrap().len(), 8);
    let h = abelianization(&sp2, 1000).unwrap();
    assert_eq!(h.to_string(), "Z/3");
    // oracle: |G / [G, G]| = 3 and G/[G,G] cyclic
    let trivial = MatrixGroup::from_generators(Ambient::plain(&f3, 2), Constraint::GL, vec![], Some(1));
    assert!(abelianization(&trivial, 10).unwrap().is_zero());
    // GL_2(F_3)^ab = F_3^* = Z/2, GL_2(F_2) = S_3 gives Z/2
    for (q, expect) in [("3", "Z/2"), ("2", "Z/2"), ("2^2", "Z/3")] {
        let g = linear_group(&f(q), 2, &Constraint::GL).unwrap();
        assert_eq!(abelianization(&g, 1000).unwrap().to_string(), expect, "q = {q}");
    }
    // an abelian group is its own abelianization: the diagonal torus of GL_2(F_3)
    let d1 = Matrix::from_rows(&f3, &[vec![2, 0], vec![0, 1]]);
    let d2 = Matrix::from_rows(&f3, &[vec![1, 0], vec![0, 2]]);
    let torus = MatrixGroup::from_generators(Ambient::plain(&f3, 2), Constraint::GL, vec![d1, d2], None);
    assert_eq!(abelianization(&torus, 100).unwrap().to_string(), "Z/2 + Z/2");
}

#[test]
fn orbits_and_stabilizers() {
    let f3 = f("3");
    let h = FormedSpace::hyperbolic(&preset("3", Preset::Symplectic), 1);
    let sp2 = isometry_group(&Ambient::Formed(h.clone()), &Constraint::Isometry, &opts()).unwrap();
    let b = isotropic_building(&h, CAP).unwrap().poset;
    assert_eq!(b.len(), 4);
    assert_eq!(orbits(&sp2, &b).unwrap(), vec![vec![0, 1, 2, 3]]);
    let trivial = MatrixGroup::from_generators(Ambient::Formed(h.clone()), Constraint::Isometry, vec![], Some(1));
    assert_eq!(orbits(&trivial, &b).unwrap().len(), 4);
    let l = b.element(0).clone();
    let st = stabilizer(&sp2, &l).unwrap();
    assert_eq!(st.order(), Some(6));
    assert_eq!(orbit_of(&sp2, &l, 100).unwrap().len() as u128 * 6, 24);
    let gl2 = isometry_group(&Ambient::plain(&f("2"), 2), &Constraint::GL, &opts()).unwrap();
    assert_eq!(stabilizer(&gl2, &line(&f("2"), 2, vec![1, 0])).unwrap().order(), Some(2));
    // orbit-stabilizer on every element of Pbar(F_3^2)
    let gl = isometry_group(&Ambient::plain(&f3, 2), &Constraint::GL, &opts()).unwrap();
    let pb = gl_building_bar(&f3, 2, CAP).unwrap().poset;
    for w in pb.elements() {
        let o = orbit_of(&gl, w, 1000).unwrap().len() as u128;
        assert_eq!(o * stabilizer(&gl, w).unwrap().order().unwrap(), 48);
    }
    // an orthogonal group over F_2 on Pi(H^2): one orbit per rank
    let h2 = FormedSpace::hyperbolic(&preset("2", Preset::Orthogonal), 2);
    let o = isometry_group(&Ambient::Formed(h2.clone()), &Constraint::Isometry, &opts()).unwrap();
    assert_eq!(o.order(), Some(72));
    let pi = isotropic_building(&h2, CAP).unwrap().poset;
    assert_eq!(orbits_per_rank(&o, &pi).unwrap(), vec![1, 1]);
    // a non-action is reported
    let e1 = Subspace::span(&f3, 2, &[unit_vector(2, 0)]);
    let only = FinitePoset::from_relation(vec![e1], |a, b| a == b).unwrap();
    assert!(matches!(orbits(&sp2, &only), Err(Error::NotAnAction)));
}

#[test]
fn transitivity_on_buildings() {
    for q in ["2", "3"] {
        let field = f(q);
        for n in 1..=3 {
            let g = linear_group(&field, n, &Constraint::GL).unwrap();
            for p in [gl_building(&field, n, CAP).unwrap().poset, gl_building_bar(&field, n, CAP).unwrap().poset] {
                assert!(orbits_per_rank(&g, &p).unwrap().iter().all(|&c| c == 1));
            }
        }
        let v0 = Subspace::span(&field, 3, &[unit_vector(3, 0), unit_vector(3, 1)]);
        let at = linear_group(&field, 3, &Constraint::IdentityModulo(v0.clone())).unwrap();
        let p = relative_building_bar(&field, 3, &v0, CAP).unwrap().poset;
        assert!(orbits_per_rank(&at, &p).unwrap().iter().all(|&c| c == 1));
    }
    for p in [preset("2", Preset::Symplectic), preset("3", Preset::Orthogonal), preset("2^2::1", Preset::Unitary)] {
        let h2 = FormedSpace::hyperbolic(&p, 2);
        let g = isometry_group(&Ambient::Formed(h2.clone()), &Constraint::Isometry, &opts()).unwrap();
        let b = isotropic_building(&h2, CAP).unwrap().poset;
        assert!(orbits_per_rank(&g, &b).unwrap().iter().all(|&c| c == 1), "{p:?}");
        let u = b.element(b.of_rank(0)[0]).clone();
        let ai = isometry_group(&Ambient::Formed(h2.clone()), &Constraint::IsometryFixing(u.clone()), &opts()).unwrap();
        let bu = isotropic_relative_building(&h2, &u, CAP).unwrap().poset;
        assert!(orbits_per_rank(&ai, &bu).unwrap().iter().all(|&c| c == 1), "{p:?}");
    }
}

#[test]
fn sampling_kicks_in_above_the_cap() {
    let h = FormedSpace::hyperbolic(&preset("3", Preset::Symplectic), 2);
    let small = SearchOptions { element_cap: 1000, ..opts() };
    let g = isometry_group(&Ambient::Formed(h.clone()), &Constraint::Isometry, &small).unwrap();
    assert!(!g.has_elements());
    assert!(matches!(g.elements(), Err(Error::ElementsUnavailable)));
    assert!(g.generators.iter().all(|x| preserves_form(&h, x)));
    // a dozen random isometries generate Sp_4(F_3)
    assert_eq!(group_closure(h.field(), 4, &g.generators, 100_000).unwrap().len(), 51840);
}

#[test]
fn stabilization_embedding() {
    let (h2, _) = sp4_generators();
    let h = FormedSpace::hyperbolic(&preset("3", Preset::Symplectic), 1);
    let sp2 = isometry_group(&Ambient::Formed(h.clone()), &Constraint::Isometry, &opts()).unwrap();
    let (amb, c) = stabilized_setting(&sp2.ambient, &Constraint::Isometry, StabMode::Hyperbolic).unwrap();
    assert_eq!(amb.dim(), 4);
    let id = Matrix::identity(h.field(), 2);
    assert!(stabilization_embed(&id, StabMode::Hyperbolic).is_identity());
    let small = isotropic_building(&h, CAP).unwrap();
    let big = isotropic_building(&h2, CAP).unwrap();
    for g in sp2.elements().unwrap() {
        let s = stabilization_embed(g, StabMode::Hyperbolic);
        assert!(c.admits(&amb, &s));
        for w in small.poset.elements() {
            let lhs = pad_subspace(w, 2).image(&s);
            let rhs = pad_subspace(&w.image(g), 2);
            assert_eq!(lhs, rhs);
            assert!(big.poset.index_of(&lhs).is_some());
        }
    }
    // A(V, V0) -> A(V + F, V0) and AT(V, V0) -> AT(V + F, V0 + F)
    let f3 = f("3");
    let v0 = Subspace::span(&f3, 2, &[unit_vector(2, 0)]);
    for c in [Constraint::FixPointwise(v0.clone()), Constraint::IdentityModulo(v0.clone())] {
        let g = isometry_group(&Ambient::plain(&f3, 2), &c, &opts()).unwrap();
        let (amb, c2) = stabilized_setting(&g.ambient, &c, StabMode::RelativeLine).unwrap();
        assert!(g.elements().unwrap().iter().all(|x| c2.admits(&amb, &stabilization_embed(x, StabMode::RelativeLine))));
    }
}

fn sequence_instances() -> Vec<(Pairing, Subspace)> {
    let mut out = Vec::new();
    let f2 = f("2");
    let f3 = f("3");
    out.push((Pairing::GL { field: f2.clone(), n: 2 }, line(&f2, 2, vec![1, 0])));
    out.push((Pairing::GL { field: f3.clone(), n: 3 }, Subspace::span(&f3, 3, &[vec![1, 1, 0], vec![0, 0, 1]])));
    let v0 = Subspace::span(&f3, 3, &[unit_vector(3, 0), unit_vector(3, 1)]);
    // rank 0: a complement of V0; rank 1: a plane meeting V0 in a line
    out.push((Pairing::AT { field: f3.clone(), n: 3, v0: v0.clone() }, line(&f3, 3, vec![1, 0, 1])));
    out.push((
        Pairing::AT { field: f3.clone(), n: 3, v0: v0.clone() },
        Subspace::span(&f3, 3, &[vec![1, 1, 0], vec![0, 1, 1]]),
    ));
    for p in [preset("2", Preset::Symplectic), preset("3", Preset::Orthogonal), preset("2^2::1", Preset::Unitary)] {
        let h2 = FormedSpace::hyperbolic(&p, 2);
        let b = isotropic_building(&h2, CAP).unwrap().poset;
        out.push((Pairing::Isometry(h2.clone()), b.element(b.of_rank(0)[0]).clone()));
        out.push((Pairing::Isometry(h2.clone()), b.element(b.of_rank(1)[0]).clone()));
        let u = b.element(b.of_rank(0)[0]).clone();
        let bu = isotropic_relative_building(&h2, &u, CAP).unwrap().poset;
        for r in 0..bu.rank_counts().len() {
            out.push((Pairing::IsometryFixing(h2.clone(), u.clone()), bu.element(bu.of_rank(r)[0]).clone()));
        }
    }
    out
}

#[test]
fn stabilizer_sequences_split() {
    let inst = sequence_instances();
    assert!(inst.len() >= 6);
    for (p, w) in &inst {
        let r = check_stabilizer_sequence(p, w, &opts()).unwrap();
        assert!(r.holds(), "{} at {w:?}: {:?}", p.name(), r.checks.iter().filter(|c| !c.ok).collect::<Vec<_>>());
        assert_eq!(r.stabilizer_order, r.kernel_order * r.image_order);
    }
    // GL_2(F_2) with W a line: stabilizer of order 2, trivial image
    let r = check_stabilizer_sequence(&inst[0].0, &inst[0].1, &opts()).unwrap();
    assert_eq!((r.stabilizer_order, r.kernel_order, r.image_order), (2, 2, 1));
    // rank-0 AT and Ai instances carry the degenerate isomorphism checks
    assert!(check_stabilizer_sequence(&inst[2].0, &inst[2].1, &opts())
        .unwrap()
        .checks
        .iter()
        .any(|c| c.name.starts_with("rank-0")));
}

#[test]
fn sequences_with_a_radical() {
    // an orthogonal space over F_2 with a one-dimensional radical: H + <r>, Q(r) != 0 not allowed, so Q(r) = 0
    let p = preset("3", Preset::Orthogonal);
    let e = FormedSpace::hyperbolic(&p, 1).direct_sum(&FormedSpace::zero(&p, 1)).unwrap();
    assert_eq!(e.radical().unwrap().dim(), 1);
    let b = isotropic_building(&e, CAP).unwrap().poset;
    for w in b.elements() {
        let r = check_stabilizer_sequence(&Pairing::Isometry(e.clone()), w, &opts()).unwrap();
        assert!(r.holds(), "{w:?}: {:?}", r.checks);
    }
}

#[test]
fn duality_and_inclusions() {
    for q in ["2", "3"] {
        let field = f(q);
        for n in 1..=3 {
            for k in 0..=n {
                for v0 in crate::linalg::enumerate_subspaces(&field, n, k, 100).unwrap().into_iter().take(3) {
                    assert_eq!(check_a_at_duality(&field, n, &v0, &opts()).unwrap(), None, "{v0:?}");
                }
            }
        }
    }
    for p in [preset("2", Preset::Orthogonal), preset("3", Preset::Symplectic), preset("2^2::1", Preset::Unitary)] {
        let h2 = FormedSpace::hyperbolic(&p, 2);
        let b = isotropic_building(&h2, CAP).unwrap().poset;
        for i in 0..b.len().min(6) {
            assert_eq!(check_aat_inclusions(&h2, b.element(i), &opts()).unwrap(), None);
        }
    }
}

#[test]
fn building_stab_lemmas() {
    for q in ["2", "3"] {
        for n in 1..=2 {
            assert_eq!(check_building_stab1(&Ambient::plain(&f(q), n), &opts()).unwrap(), None);
        }
    }
    for p in [preset("2", Preset::Orthogonal), preset("3", Preset::Symplectic), preset("2^2::1", Preset::Unitary)] {
        let h = FormedSpace::hyperbolic(&p, 1);
        assert_eq!(check_building_stab1(&Ambient::Formed(h), &opts()).unwrap(), None, "{p:?}");
    }
    let f3 = f("3");
    let v0 = Subspace::span(&f3, 3, &[unit_vector(3, 0)]);
    let w0 = Subspace::span(&f3, 3, &[unit_vector(3, 1), unit_vector(3, 2)]);
    assert_eq!(check_building_stab2(&Pairing::AT { field: f3.clone(), n: 3, v0 }, &w0, &opts()).unwrap(), None);
    let h2 = FormedSpace::hyperbolic(&preset("3", Preset::Symplectic), 2);
    let u = Subspace::span(&f3, 4, &[unit_vector(4, 0)]);
    let bu = isotropic_relative_building(&h2, &u, CAP).unwrap().poset;
    let w0 = bu.element(bu.of_rank(0)[0]).clone();
    assert_eq!(check_building_stab2(&Pairing::IsometryFixing(h2, u), &w0, &opts()).unwrap(), None);
}

#[test]
fn kernel_of_restriction_lemma() {
    for p in [preset("2", Preset::Symplectic), preset("3", Preset::Orthogonal), preset("2^2::1", Preset::Unitary)] {
        let h2 = FormedSpace::hyperbolic(&p, 2);
        let b = isotropic_building(&h2, CAP).unwrap().poset;
        let mut seen = HashSet::new();
        // one U suffices: Ai(E, U) for U of a given rank are all conjugate
        {
            let u = b.element(b.of_rank(0)[0]).clone();
            let bu = isotropic_relative_building(&h2, &u, CAP).unwrap().poset;
            for r in 0..bu.rank_counts().len() {
                let w = bu.element(bu.of_rank(r)[0]).clone();
                assert_eq!(check_kernel_of_restriction(&h2, &u, &w, &opts()).unwrap(), None, "{p:?} {u:?} {w:?}");
                seen.insert(r);
            }
        }
        assert!(seen.len() >= 2);
    }
}

#[test]
fn group_report_serializes() {
    let h = FormedSpace::hyperbolic(&preset("3", Preset::Symplectic), 1);
    let g = isometry_group(&Ambient::Formed(h.clone()), &Constraint::Isometry, &opts()).unwrap();
    let b = isotropic_building(&h, CAP).unwrap().poset;
    let r = group_report(&g, Some(&b)).unwrap();
    assert_eq!(r.orbit_sizes_per_rank, vec![vec![4]]);
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["order"], 24);
}

#[test]
fn sp4_is_perfect() {
    let (h, gens) = sp4_generators();
    let g = MatrixGroup::from_generators(Ambient::Formed(h), Constraint::Isometry, gens, None);
    assert!(abelianization(&g, 100_000).unwrap().is_zero());
}
