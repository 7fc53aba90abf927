use super::*;
use crate::forms::{FormedSpace, Preset};
use crate::linalg::{enumerate_subspaces, gaussian_binomial, unit_vector, Subspace};
use crate::testutil::*;

const CAP: u128 = 200_000;

fn span(field: &crate::gf::Field, n: usize, vs: &[usize]) -> Subspace {
    Subspace::span(field, n, &vs.iter().map(|&i| unit_vector(n, i)).collect::<Vec<_>>())
}

#[test]
fn small_examples() {
    let f2 = f("2");
    let p = gl_building(&f2, 2, CAP).unwrap();
    assert_eq!((p.poset.len(), p.poset.dim()), (3, 0));
    let or3 = preset("3", Preset::Orthogonal);
    let h = FormedSpace::hyperbolic(&or3, 1);
    let pi = isotropic_building(&h, CAP).unwrap();
    assert_eq!(pi.poset.len(), 2);
    assert_eq!(pi.poset.dim(), 0);
    assert_eq!(pi.poset.elements(), &[span(or3.field(), 2, &[1]), span(or3.field(), 2, &[0])]);
    let e = FormedSpace::euclidean(&or3, 2);
    assert!(isotropic_building(&e, CAP).unwrap().poset.is_empty());
}

#[test]
fn gaussian_rank_counts() {
    for q in ["2", "3"] {
        let field = f(q);
        for n in 2..=4 {
            let p = gl_building(&field, n, CAP).unwrap();
            let expect: Vec<usize> = (1..n).map(|k| gaussian_binomial(n, k, field.q()) as usize).collect();
            assert_eq!(p.poset.rank_counts(), expect);
        }
    }
}

#[test]
fn rank_tables_gl() {
    for q in ["2", "3"] {
        let field = f(q);
        for n in 1..=3 {
            assert!(gl_building(&field, n, CAP).unwrap().matches_rank_table() || n == 1);
            assert!(gl_building_bar(&field, n, CAP).unwrap().matches_rank_table());
            for k in 0..=n {
                for v0 in enumerate_subspaces(&field, n, k, CAP).unwrap().into_iter().take(3) {
                    let mut bs = vec![
                        relative_building(&field, n, &v0, CAP).unwrap(),
                        relative_building_bar(&field, n, &v0, CAP).unwrap(),
                    ];
                    // with V0 = 0 the transposed building lacks the element dual to 0 < V*
                    if k > 0 {
                        bs.push(relative_building_bar_t(&field, n, &v0, CAP).unwrap());
                    }
                    for b in bs {
                        assert!(b.matches_rank_table(), "{:?} n={n} V0={v0:?}", b.kind);
                        assert!(b.poset.elements().iter().all(|w| b.admits(w)));
                    }
                }
            }
        }
    }
}

#[test]
fn rank_tables_isotropic() {
    for p in param_zoo().into_iter().filter(|p| p.field().q() <= 4) {
        for g in 1..=2 {
            let h = FormedSpace::hyperbolic(&p, g);
            let b = isotropic_building(&h, CAP).unwrap();
            assert!(b.matches_rank_table());
            assert_eq!(b.poset.dim(), g as isize - 1);
            for u in b.poset.elements().iter().take(4) {
                let r = isotropic_relative_building(&h, u, CAP).unwrap();
                assert!(r.matches_rank_table(), "{u:?}");
            }
        }
    }
}

#[test]
fn degenerate_rank_tables() {
    let mut rng = rng(21);
    for p in param_zoo().into_iter().filter(|p| p.field().q() <= 3) {
        for _ in 0..4 {
            let e = random_space(&p, 2, &mut rng).direct_sum(&FormedSpace::hyperbolic(&p, 1)).unwrap();
            let b = isotropic_building(&e, CAP).unwrap();
            assert!(b.matches_rank_table(), "{e:?}");
            let rad = e.radical().unwrap();
            let r = isotropic_relative_building(&e, &rad, CAP).unwrap();
            assert_eq!(r.poset.elements(), b.poset.elements());
            for u in b.poset.elements().iter().take(3) {
                assert!(isotropic_relative_building(&e, u, CAP).unwrap().matches_rank_table());
            }
        }
    }
}

#[test]
fn intervals() {
    let f2 = f("2");
    let p = gl_building(&f2, 3, CAP).unwrap().poset;
    assert_eq!(p.interval(None, None).unwrap().elements(), p.elements());
    let plane = span(&f2, 3, &[0, 1]);
    let i = p.index_of(&plane).unwrap();
    let below = p.interval(None, Some(i)).unwrap();
    assert_eq!(below.len(), 3);
    // P(V)_{<W} = P(W) via coordinates in W
    let pw = gl_building(&f2, 2, CAP).unwrap().poset;
    let img = below.map_labels(|x| x.to_coordinates(plane.basis())).unwrap();
    assert_eq!(img.elements(), pw.elements());
    // Pi(H^2)_{>L} = Pi(L^perp / L)
    let or2 = preset("2", Preset::Orthogonal);
    let h2 = FormedSpace::hyperbolic(&or2, 2);
    let pi = isotropic_building(&h2, CAP).unwrap().poset;
    for l in pi.of_rank(0) {
        let up = pi.interval(Some(l), None).unwrap();
        let qf = crate::forms::induced_quotient_form(&h2, pi.element(l)).unwrap();
        let small = isotropic_building(&qf.space, CAP).unwrap().poset;
        assert_eq!(up.len(), small.len());
        // explicit bijection through the projection
        let mapped = up.map_labels(|w| w.to_coordinates(&qf.perp_basis).image(&qf.projection.matrix)).unwrap();
        assert_eq!(mapped.elements(), small.elements());
    }
}

#[test]
fn relative_lower_intervals() {
    // Pbar(V, V0)_{<W} = P(W, W ∩ V0)
    let f2 = f("2");
    let v0 = span(&f2, 3, &[0]);
    let b = relative_building_bar(&f2, 3, &v0, CAP).unwrap().poset;
    for i in 0..b.len() {
        let w = b.element(i).clone();
        let lower = b.interval(None, Some(i)).unwrap();
        let wc = (v0.intersect(&w)).to_coordinates(w.basis());
        let target = relative_building(&f2, w.dim(), &wc, CAP).unwrap().poset;
        let mapped = lower.map_labels(|x| x.to_coordinates(w.basis())).unwrap();
        assert_eq!(mapped.elements(), target.elements());
    }
}

#[test]
fn join_and_decomposition_map() {
    let f2 = f("2");
    let a = gl_building(&f2, 2, CAP).unwrap().poset;
    let j = a.join(&a).unwrap();
    assert_eq!(j.len(), 2 * a.len());
    assert_eq!(j.dim(), 1);
    let v0 = span(&f2, 3, &[0, 1]);
    let u = span(&f2, 3, &[0]);
    let (src, tgt, phi) = join_decomposition_map(&f2, 3, &v0, &u, CAP).unwrap();
    assert!(phi.is_order_preserving(&src.poset, &tgt));
    let f3 = f("3");
    let v0 = span(&f3, 3, &[0, 1]);
    let u = span(&f3, 3, &[1]);
    let (src, tgt, phi) = join_decomposition_map(&f3, 3, &v0, &u, CAP).unwrap();
    assert!(phi.is_order_preserving(&src.poset, &tgt));
}

#[test]
fn stabilization_inclusions() {
    let f3 = f("3");
    for n in 1..=2 {
        let a = gl_building_bar(&f3, n, CAP).unwrap();
        let b = gl_building_bar(&f3, n + 1, CAP).unwrap();
        let m = stabilization_inclusion(&a, &b).unwrap();
        assert!(m.preserves_rank(&a.poset, &b.poset) && m.is_order_preserving(&a.poset, &b.poset));
        assert_eq!(b.poset.dim(), a.poset.dim() + 1);
        let v0 = span(&f3, n, &[0]);
        let v0b = pad_subspace(&v0, 1).sum(&span(&f3, n + 1, &[n]));
        let a = relative_building_bar(&f3, n, &v0, CAP).unwrap();
        let b = relative_building_bar(&f3, n + 1, &v0b, CAP).unwrap();
        let m = stabilization_inclusion(&a, &b).unwrap();
        assert!(m.preserves_rank(&a.poset, &b.poset));
        assert_eq!(b.poset.dim(), a.poset.dim() + 1);
    }
    for p in [preset("3", Preset::Symplectic), preset("2", Preset::Orthogonal)] {
        let e = FormedSpace::hyperbolic(&p, 1);
        let eh = FormedSpace::hyperbolic(&p, 2);
        let a = isotropic_building(&e, CAP).unwrap();
        let b = isotropic_building(&eh, CAP).unwrap();
        let m = stabilization_inclusion(&a, &b).unwrap();
        assert!(m.preserves_rank(&a.poset, &b.poset));
        assert_eq!(b.poset.dim(), a.poset.dim() + 1);
        let u = a.poset.element(0).clone();
        let ar = isotropic_relative_building(&e, &u, CAP).unwrap();
        let br = isotropic_relative_building(&eh, &pad_subspace(&u, 2), CAP).unwrap();
        let m = stabilization_inclusion(&ar, &br).unwrap();
        assert!(m.preserves_rank(&ar.poset, &br.poset));
        assert_eq!(br.poset.dim(), ar.poset.dim() + 1);
    }
}

#[test]
fn insensitive_to_radical() {
    let mut rng = rng(22);
    let mut checked = 0;
    for p in param_zoo().into_iter().filter(|p| p.field().q() <= 3) {
        for _ in 0..5 {
            let e = random_space(&p, 2, &mut rng)
                .direct_sum(&FormedSpace::zero(&p, 1))
                .unwrap()
                .direct_sum(&FormedSpace::hyperbolic(&p, 1))
                .unwrap();
            let (src, tgt, m) = quotient_building_map(&e, CAP).unwrap();
            assert!(m.is_isomorphism(&src.poset, &tgt.poset));
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn transposed_relative_is_dual() {
    for q in ["2", "3"] {
        let field = f(q);
        for k in 1..=3 {
            for v0 in enumerate_subspaces(&field, 3, k, CAP).unwrap().into_iter().take(2) {
                let t = relative_building_bar_t(&field, 3, &v0, CAP).unwrap();
                let d = relative_building_bar(&field, 3, &v0.annihilator(), CAP).unwrap();
                let mapped = t.poset.map_labels(|w| w.annihilator()).unwrap();
                assert_eq!(mapped.elements(), d.poset.elements());
                let m = PosetMap { assignment: (0..mapped.len()).collect() };
                assert!(m.is_isomorphism(&mapped, &d.poset));
            }
        }
    }
}

#[test]
fn rejects_ungraded() {
    // a < b < c together with an isolated d: maximal elements of different rank
    let r = FinitePoset::from_relation(vec![0u8, 1, 2, 3], |a, b| a == b || (*a < 3 && *b < 3 && a <= b));
    assert!(matches!(r, Err(Error::NotGraded(_))));
    let e = preset("3", Preset::Orthogonal);
    let h = FormedSpace::hyperbolic(&e, 1);
    let bad = Subspace::span(e.field(), 2, &[vec![1, 1]]);
    assert!(matches!(isotropic_relative_building(&h, &bad, CAP), Err(Error::NotInBuilding(_))));
}
