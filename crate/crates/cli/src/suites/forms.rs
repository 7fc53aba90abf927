use formlab_core::forms::{
    double_is_hyperbolic, hyperbolization_isometry, hyperbolization_naturality, preserves_form, rescale_form,
    sign_flip_isometries,
};
use formlab_core::groups::isometry_group;
use formlab_core::linalg::{all_vectors, enumerate_subspaces, vec_add, vec_scale};
use formlab_core::{
    solve_minus_one, Ambient, Constraint, Field, FormParameters, FormedSpace, Matrix, Preset, PropertyWitness, Result,
    SearchOptions, Subspace, Vector,
};
use rand::Rng;

use super::{Ctx, Tally};
use crate::gen;

fn pad_back(vs: Vec<Vector>, n: usize) -> Vec<Vector> {
    vs.into_iter()
        .map(|mut v| {
            v.resize(n, 0);
            v
        })
        .collect()
}

fn pad_front(vs: Vec<Vector>, k: usize) -> Vec<Vector> {
    vs.into_iter().map(|v| [vec![0; k], v].concat()).collect()
}

/// Pairs (v, w): all of them when there are few, otherwise a seeded sample.
fn vector_pairs(f: &Field, n: usize, budget: usize, rng: &mut impl Rng) -> Vec<(Vector, Vector)> {
    let total = (f.q() as u128).pow(2 * n as u32);
    if total <= budget as u128 {
        let vs: Vec<Vector> = all_vectors(f, n).collect();
        vs.iter().flat_map(|v| vs.iter().map(move |w| (v.clone(), w.clone()))).collect()
    } else {
        (0..budget).map(|_| (gen::vector(f, n, rng), gen::vector(f, n, rng))).collect()
    }
}

pub fn forms_axioms(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let mut rng = inputs.rng(1);
    let mut polar = Tally::new("polarization: Q(v+w) - Q(v) - Q(w) = omega(v,w) mod Lambda");
    let mut herm = Tally::new("omega(v,w) = eps sigma(omega(w,v))");
    let mut scal = Tally::new("Q(av) = sigma(a) a Q(v)");
    let mut class = Tally::new("omega and Q depend only on the class mod X");
    let mut rad = Tally::new("radical: R = K in odd characteristic, isotropic part of K in characteristic 2");
    let mut ksum = Tally::new("K(E + E') = K(E) + K(E')");
    let mut gsum = Tally::new("g(E + E') >= g(E) + g(E')");
    let mut gh = Tally::new("g(E + H) = g(E) + 1");
    let mut rh = Tally::new("R(E + H) = R(E)");
    let mut gmax = Tally::new("genus equals the largest isotropic dimension minus dim R");
    for ps in inputs.param_sets()? {
        let p = &ps.params;
        let f = ps.field().clone();
        for n in inputs.dims() {
            for _ in 0..inputs.samples {
                let e = gen::space(p, n, &mut rng);
                for (v, w) in vector_pairs(&f, n, 400, &mut rng) {
                    let lhs = f.sub(f.sub(e.Q_value(&vec_add(&f, &v, &w)).0, e.Q_value(&v).0), e.Q_value(&w).0);
                    polar.record(p.reduce(lhs) == p.reduce(e.omega_value(&v, &w)), || {
                        format!("{} {e:?}, v = {v:?}, w = {w:?}", ps.label)
                    });
                    let back = f.mul(p.epsilon(), f.conj(e.omega_value(&w, &v)));
                    herm.record(e.omega_value(&v, &w) == back, || format!("{} {e:?}, v = {v:?}, w = {w:?}", ps.label));
                    let a = w.first().copied().unwrap_or(0);
                    let lhs = e.Q_value(&vec_scale(&f, a, &v)).0;
                    scal.record(lhs == p.reduce(f.mul(f.norm(a), e.Q_value(&v).0)), || {
                        format!("{} {e:?}, a = {}, v = {v:?}", ps.label, f.format(a))
                    });
                }
                // D = A - eps sigma(A)^T lies in X
                let a = gen::matrix(&f, n, n, &mut rng);
                let d = a.sub(&a.conj_transpose().scale(p.epsilon()));
                let e2 = e.with_gram(e.gram().add(&d));
                let same = p.in_x(&d)
                    && e.forms_equal(&e2)?
                    && (0..8).all(|_| {
                        let v = gen::vector(&f, n, &mut rng);
                        let w = gen::vector(&f, n, &mut rng);
                        e.omega_value(&v, &w) == e2.omega_value(&v, &w) && e.Q_value(&v) == e2.Q_value(&v)
                    });
                class.record(same, || format!("{} {e:?} shifted by {d:?}", ps.label));

                let k = e.kernel();
                let r = e.radical()?;
                let ok = if f.p() == 2 {
                    let iso = k.vectors().filter(|v| e.is_isotropic_vector(v)).count() as u128;
                    iso == r.cardinality() && e.is_isotropic(&r) && k.contains(&r)
                } else {
                    r == k
                };
                rad.record(ok, || format!("{} {e:?}: K = {k:?}, R = {r:?}", ps.label));

                let n2 = 1 + rng.gen_range(0..n);
                let e2 = gen::space(p, n2, &mut rng);
                let s = e.direct_sum(&e2)?;
                let want = Subspace::span(
                    &f,
                    n + n2,
                    &[pad_back(k.basis_vectors(), n + n2), pad_front(e2.kernel().basis_vectors(), n)].concat(),
                );
                ksum.record(s.kernel() == want, || format!("{} {e:?} + {e2:?}", ps.label));
                let cap = inputs.cap();
                let (g, g2, gs) = (e.genus_with_cap(cap)?.0, e2.genus_with_cap(cap)?.0, s.genus_with_cap(cap)?.0);
                gsum.record(gs >= g + g2, || format!("{} {e:?} + {e2:?}: {gs} < {g} + {g2}", ps.label));
                let eh = e.direct_sum(&FormedSpace::hyperbolic(p, 1))?;
                let geh = eh.genus_with_cap(cap)?.0;
                gh.record(geh == g + 1, || format!("{} {e:?}: g(E + H) = {geh}, g(E) = {g}", ps.label));
                let rpad = Subspace::span(&f, n + 2, &pad_back(r.basis_vectors(), n + 2));
                rh.record(eh.radical()? == rpad, || format!("{} {e:?}", ps.label));

                if (f.q() as u128).pow(n as u32) <= 256 {
                    let mut best = 0;
                    for d in 0..=n {
                        if enumerate_subspaces(&f, n, d, cap)?.iter().any(|u| e.is_isotropic(u)) {
                            best = d;
                        }
                    }
                    gmax.record(g + r.dim() == best, || format!("{} {e:?}: genus {g}, brute force {best}", ps.label));
                }
            }
        }
    }
    for t in [polar, herm, scal, class, rad, ksum, gsum, gh, rh, gmax] {
        t.finish(ctx);
    }
    fixed_examples(ctx)
}

fn fixed_examples(ctx: &mut Ctx) -> Result<()> {
    // (F, ab) + (F, -ab) over F_2 is the identity Gram on F^2: K = E but Q(1,1) = 0
    let f2 = Field::prime(2)?;
    let or2 = FormParameters::preset(&f2, Preset::Orthogonal)?;
    let e = FormedSpace::euclidean(&or2, 2);
    let r = e.radical()?;
    let want = Subspace::span(&f2, 2, &[vec![1, 1]]);
    ctx.assert(
        "char-2 radical example: R(E + E') = <(1,1)>",
        r == want && e.kernel().is_full(),
        format!("R = {r:?}, K = {:?}", e.kernel()),
    );
    let f5 = Field::prime(5)?;
    let or5 = FormParameters::preset(&f5, Preset::Orthogonal)?;
    let h = FormedSpace::hyperbolic(&or5, 1);
    let two = Matrix::scalar(&f5, 2, 2);
    ctx.assert(
        "non-isometry rejected: 2 id on H over F_5",
        !preserves_form(&h, &two) && preserves_form(&h, &Matrix::identity(&f5, 2)),
        "Gram scales by 4",
    );
    for ps in ctx.inputs.param_sets()? {
        let h = FormedSpace::hyperbolic(&ps.params, 2);
        let ok = h.kernel().is_zero() && h.radical()?.is_zero() && h.genus()? == 2;
        ctx.assert(format!("K(H^2) = R(H^2) = 0, g(H^2) = 2: {}", ps.label), ok, format!("{h:?}"));
    }
    Ok(())
}

/// Up to `limit` isometries of e preserving its Gram matrix exactly, not only its class.
fn exact_isometries(e: &FormedSpace, limit: usize, rng: &mut impl Rng) -> Result<Vec<Matrix>> {
    let g = isometry_group(&Ambient::Formed(e.clone()), &Constraint::Isometry, &SearchOptions::default())?;
    let pool: Vec<&Matrix> =
        g.sample_pool().iter().filter(|a| a.conj_transpose().mul(e.gram()).mul(a) == *e.gram()).collect();
    Ok((0..limit.min(pool.len())).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect())
}

fn witness_text(f: &Field, w: PropertyWitness) -> String {
    match w {
        PropertyWitness::A(a) => format!("property A, a = {}", f.format(a)),
        PropertyWitness::B(a, b) => format!("property B, (a, b) = ({}, {})", f.format(a), f.format(b)),
        PropertyWitness::None => "no witness".into(),
    }
}

pub fn euclidean_hyperbolization(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let mut rng = inputs.rng(10);
    let mut phi_ok = Tally::new("phi_E: (E,q) + (E,-q) -> H^n is a bijective isometry");
    let mut natural = Tally::new("phi_E is natural for isometries of E");
    let mut refused = Tally::new("phi_E refuses degenerate E");
    let sets = inputs.param_sets()?;
    for ps in &sets {
        let p = &ps.params;
        for n in inputs.dims() {
            for _ in 0..inputs.samples {
                let e = gen::space(p, n, &mut rng);
                if !e.is_nondegenerate() {
                    refused.record(hyperbolization_isometry(&e).is_err(), || format!("{} {e:?}", ps.label));
                    continue;
                }
                // with Omega / 2 as representative every isometry preserves the Gram matrix itself
                let e = if ps.field().p() == 2 { e } else { e.half_omega() };
                let phi = hyperbolization_isometry(&e)?;
                phi_ok.record(phi.is_isometry() && phi.is_bijective(), || format!("{} {e:?}", ps.label));
                if (ps.q() as u128).pow((n * n) as u32) <= inputs.cap() || n <= 2 {
                    for alpha in exact_isometries(&e, 3, &mut rng)? {
                        natural.record(hyperbolization_naturality(&e, &alpha)?, || {
                            format!("{} {e:?}, alpha = {alpha:?}", ps.label)
                        });
                    }
                }
            }
        }
    }
    for t in [phi_ok, natural, refused] {
        t.finish(ctx);
    }

    for ps in sets.iter().filter(|ps| ps.preset != Some(Preset::Symplectic)) {
        let f = ps.field();
        let w = solve_minus_one(f);
        let line = FormedSpace::euclidean(&ps.params, 1);
        let name = format!("Euclidean doubling: {}", ps.label);
        if !line.is_nondegenerate() {
            ctx.info(name, "the Euclidean line is degenerate for these parameters");
            continue;
        }
        if w == PropertyWitness::None {
            ctx.info(name, "neither norm equation has a solution");
            continue;
        }
        let flip = sign_flip_isometries(&line, w)?;
        let iso = double_is_hyperbolic(&line, w)?;
        let k = iso.source.dim();
        let detail = format!("{}; E^{k} = H^{}", witness_text(f, w), iso.target.dim() / 2);
        ctx.assert(name, flip.is_isometry() && iso.is_isometry() && iso.is_bijective(), detail);
    }

    // characteristic 2 unitary: Euclidean Gram lies in X, rescaling by a non-fixed alpha repairs it
    for ps in sets.iter().filter(|ps| ps.preset == Some(Preset::Unitary) && ps.field().p() == 2) {
        let f = ps.field();
        let Some(alpha) = f.elements().find(|&a| f.conj(a) != a) else { continue };
        let e = FormedSpace::euclidean(&ps.params, 2);
        let r = rescale_form(&e, alpha)?;
        let q = f.q() as u128;
        if q.pow(4) > inputs.cap() {
            ctx.skip(format!("unitary rescaling preserves automorphisms: {}", ps.label), "GL_2 scan exceeds the cap");
            continue;
        }
        let mut same = true;
        let mut count = 0;
        for d in all_vectors(f, 4) {
            let g = Matrix::from_fn(f, 2, 2, |i, j| d[2 * i + j]);
            if g.is_invertible() {
                let a = preserves_form(&e, &g);
                same &= a == preserves_form(&r, &g);
                count += usize::from(a);
            }
        }
        ctx.assert(
            format!("unitary rescaling preserves automorphisms: {}", ps.label),
            same && count > 0,
            format!("alpha = {}, {count} common automorphisms of E^2", f.format(alpha)),
        );
        let good = FormedSpace::euclidean(r.params(), 1);
        let ok = good.is_nondegenerate() && double_is_hyperbolic(&good, PropertyWitness::A(1))?.is_isometry();
        ctx.assert(
            format!("rescaled Euclidean line is nondegenerate with E^2 = H: {}", ps.label),
            ok,
            format!("eps' = {}", f.format(r.params().epsilon())),
        );
    }
    Ok(())
}
