use formlab_core::forms::preserves_form;
use formlab_core::groups::{
    abelianization, check_a_at_duality, check_aat_inclusions, check_building_stab1, check_building_stab2,
    check_kernel_of_restriction, check_stabilizer_sequence, gl_order, group_closure, isometry_group, linear_group,
    orbits_per_rank, stabilization_embed, stabilized_setting, Pairing, StabMode,
};
use formlab_core::linalg::{all_vectors, unit_vector};
use formlab_core::poset::{
    gl_building_bar, isotropic_building, isotropic_relative_building, pad_subspace, relative_building_bar,
    stabilization_inclusion, Building,
};
use formlab_core::steinberg::stabilizer_action_factors;
use formlab_core::{
    Ambient, Constraint, Error, Field, FormParameters, FormedSpace, HomologyGroup, Matrix, MatrixGroup, Preset, Result,
    SearchOptions, Subspace,
};

use super::buildings::{table_buildings, Acting};
use super::{Ctx, Tally};
use crate::{gen, Inputs};

fn opts(inputs: &Inputs) -> SearchOptions {
    SearchOptions {
        element_cap: inputs.cap.min(usize::MAX as u64) as usize,
        seed: inputs.seed,
        ..SearchOptions::default()
    }
}

fn brute_isometries(e: &FormedSpace) -> usize {
    let f = e.field();
    let n = e.dim();
    all_vectors(f, n * n)
        .map(|d| Matrix::from_fn(f, n, n, |i, j| d[i * n + j]))
        .filter(|g| g.is_invertible() && preserves_form(e, g))
        .count()
}

fn coordinate_span(field: &Field, n: usize, k: usize) -> Subspace {
    Subspace::span(field, n, &(0..k).map(|i| unit_vector(n, i)).collect::<Vec<_>>())
}

pub fn group_census(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let o = opts(inputs);
    let mut rng = inputs.rng(6);
    let cap = inputs.cap();
    let sets = inputs.param_sets()?;
    for ps in &sets {
        let h = FormedSpace::hyperbolic(&ps.params, 1);
        if (ps.q() as u128).pow(4) > cap {
            ctx.skip(format!("|isometries of H| against brute force: {}", ps.label), "brute force exceeds the cap");
            continue;
        }
        let brute = brute_isometries(&h);
        let g = isometry_group(&Ambient::Formed(h.clone()), &Constraint::Isometry, &o)?;
        let generated = group_closure(h.field(), 2, &g.generators, inputs.cap as usize)?;
        let ok = g.order() == Some(brute as u128) && g.is_closed()? && generated.len() == brute;
        ctx.assert(
            format!("|isometries of H| against brute force: {}", ps.label),
            ok,
            format!("backtracking {:?}, brute force {brute}, generated by {} elements", g.order(), g.generators.len()),
        );
        let mut t = Tally::new(format!("isometry census of random 2-dimensional forms: {}", ps.label));
        for _ in 0..inputs.samples.max(4) {
            let e = gen::space(&ps.params, 2, &mut rng);
            let g = isometry_group(&Ambient::Formed(e.clone()), &Constraint::Isometry, &o)?;
            let b = brute_isometries(&e);
            t.record(g.order() == Some(b as u128), || format!("{e:?}: backtracking {:?}, brute force {b}", g.order()));
        }
        t.finish(ctx);
    }

    for field in inputs.field_list()? {
        let q = field.q();
        for n in inputs.dims() {
            for k in 0..=n {
                let v0 = coordinate_span(&field, n, k);
                for c in [Constraint::GL, Constraint::FixPointwise(v0.clone()), Constraint::IdentityModulo(v0)] {
                    if matches!(c, Constraint::GL) && k > 0 {
                        continue;
                    }
                    let g = linear_group(&field, n, &c)?;
                    let order = g.order().expect("formula order");
                    let name =
                        format!("|{}| on F_{q}^{n}, dim V0 = {k}: generated group has the formula order", c.name());
                    if order > cap {
                        ctx.skip(name, format!("order {order} exceeds the cap"));
                        continue;
                    }
                    let els = group_closure(&field, n, &g.generators, inputs.cap as usize)?;
                    let ok = els.len() as u128 == order && els.iter().all(|x| c.admits(&g.ambient, x));
                    ctx.assert(name, ok, format!("closure {} elements, formula {order}", els.len()));
                }
            }
            let name = format!("|GL_{n}(F_{q})| formula");
            ctx.assert(
                name,
                gl_order(n, q) == linear_group(&field, n, &Constraint::GL)?.order().unwrap_or(0),
                gl_order(n, q).to_string(),
            );
        }
    }

    for nb in table_buildings(inputs)? {
        let g: MatrixGroup = match &nb.acting {
            Acting::None => continue,
            Acting::GL => linear_group(&nb.building.field, nb.building.n, &Constraint::GL)?,
            Acting::AT(v0) => linear_group(&nb.building.field, nb.building.n, &Constraint::IdentityModulo(v0.clone()))?,
            Acting::Isometries(e) => isometry_group(&Ambient::Formed(e.clone()), &Constraint::Isometry, &o)?,
            Acting::FixingU(e, u) => {
                isometry_group(&Ambient::Formed(e.clone()), &Constraint::IsometryFixing(u.clone()), &o)?
            }
        };
        let counts = orbits_per_rank(&g, &nb.building.poset)?;
        let how = if g.has_elements() { "all elements" } else { "generators" };
        ctx.assert(
            format!("transitive on each rank: {} acting on {}", g.constraint.name(), nb.name),
            counts.iter().all(|&c| c == 1),
            format!("orbits per rank {counts:?} ({how}, {} generators)", g.generators.len()),
        );
    }
    Ok(())
}

/// One element of each rank.
fn per_rank(b: &Building) -> Vec<Subspace> {
    let p = &b.poset;
    (0..p.rank_counts().len()).map(|r| p.element(p.of_rank(r)[0]).clone()).collect()
}

fn sequence_instances(inputs: &Inputs) -> Result<Vec<(String, Pairing, Vec<Subspace>)>> {
    let cap = inputs.cap();
    let mut out = Vec::new();
    for field in inputs.field_list()? {
        let q = field.q();
        for n in inputs.dims() {
            let ws = per_rank(&gl_building_bar(&field, n, cap)?);
            out.push((format!("GL(F_{q}^{n})"), Pairing::GL { field: field.clone(), n }, ws));
            for k in 1..=n {
                let v0 = coordinate_span(&field, n, k);
                let ws = per_rank(&relative_building_bar(&field, n, &v0, cap)?);
                out.push((format!("AT(F_{q}^{n}, V0 dim {k})"), Pairing::AT { field: field.clone(), n, v0 }, ws));
            }
        }
    }
    for ps in inputs.param_sets()? {
        for g in 1..=inputs.max_genus {
            let h = FormedSpace::hyperbolic(&ps.params, g);
            let b = isotropic_building(&h, cap)?;
            out.push((format!("Gamma(H^{g}) {}", ps.label), Pairing::Isometry(h.clone()), per_rank(&b)));
            for u in per_rank(&b) {
                let bu = isotropic_relative_building(&h, &u, cap)?;
                let name = format!("Ai(H^{g}, U dim {}) {}", u.dim(), ps.label);
                out.push((name, Pairing::IsometryFixing(h.clone(), u), per_rank(&bu)));
            }
        }
    }
    Ok(out)
}

pub fn stabilizer_sequences(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let o = opts(inputs);
    let cap = inputs.cap();
    for (name, pairing, ws) in sequence_instances(inputs)? {
        let g = pairing.group(&o)?;
        if !g.has_elements() {
            ctx.skip(format!("stabilizer sequences: {name}"), "group exceeds the element cap");
            continue;
        }
        for w in &ws {
            let r = check_stabilizer_sequence(&pairing, w, &o)?;
            let bad: Vec<String> =
                r.checks.iter().filter(|c| !c.ok).map(|c| format!("{}: {}", c.name, c.witness)).collect();
            let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
            let detail = if bad.is_empty() {
                format!("|G_W| = {} = {} x {}; {}", r.stabilizer_order, r.kernel_order, r.image_order, names.join(", "))
            } else {
                format!("W = {w:?}: {}", bad.join("; "))
            };
            ctx.assert(format!("stabilizer sequence splits: {name}, W rank {}", r.rank), r.holds(), detail);
        }
        match &pairing {
            Pairing::AT { field, n, v0 } => {
                let bad = check_a_at_duality(field, *n, v0, &o)?;
                ctx.outcome(format!("A and AT are dual via annihilators: {name}"), bad, "all elements");
            }
            Pairing::IsometryFixing(e, u) => {
                let bad = check_aat_inclusions(e, u, &o)?;
                ctx.outcome(format!("Ai(E,U) lies in A(E,U) and AT(E,U^perp): {name}"), bad, "all elements");
                for w in &ws {
                    let bad = check_kernel_of_restriction(e, u, w, &o)?;
                    ctx.outcome(
                        format!("kernel of restriction to W is Ai(U^perp/U, W'): {name}, W dim {}", w.dim()),
                        bad,
                        "psi is an isomorphism",
                    );
                }
            }
            _ => {}
        }
        if matches!(pairing, Pairing::AT { .. } | Pairing::IsometryFixing(..)) {
            let w0 = &ws[0];
            let bad = check_building_stab2(&pairing, w0, &o)?;
            ctx.outcome(format!("rank-0 stabilizer retraction: {name}"), bad, format!("W0 = {w0:?}"));
            let mut t = Tally::new(format!("kernel acts trivially on the relative Steinberg module of W: {name}"));
            for w in &ws {
                let bad = stabilizer_action_factors(&pairing, w, &o, cap)?;
                t.record(bad.is_none(), || bad.unwrap_or_default());
            }
            t.finish(ctx);
        }
    }
    Ok(())
}

fn check_inclusion(ctx: &mut Ctx, name: String, small: &Building, big: &Building) -> Result<()> {
    let m = stabilization_inclusion(small, big)?;
    let ok = m.preserves_rank(&small.poset, &big.poset)
        && m.is_order_preserving(&small.poset, &big.poset)
        && m.is_injective()
        && big.poset.dim() == small.poset.dim() + 1;
    ctx.assert(name, ok, format!("dim {} -> {}", small.poset.dim(), big.poset.dim()));
    Ok(())
}

fn embedding_lands(ctx: &mut Ctx, name: String, g: &MatrixGroup, mode: StabMode) -> Result<()> {
    let (amb, c) = stabilized_setting(&g.ambient, &g.constraint, mode)?;
    let pool = g.sample_pool();
    let bad = pool.iter().find(|x| !c.admits(&amb, &stabilization_embed(x, mode)));
    ctx.outcome(name, bad.map(|x| format!("{x:?} leaves the stabilized group")), format!("{} elements", pool.len()));
    Ok(())
}

pub fn stability_smoke(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let o = opts(inputs);
    let cap = inputs.cap();
    for field in inputs.field_list()? {
        let q = field.q();
        for n in inputs.dims() {
            let small = gl_building_bar(&field, n, cap)?;
            let big = gl_building_bar(&field, n + 1, cap)?;
            check_inclusion(
                ctx,
                format!("Pbar(F_{q}^{n}) -> Pbar(F_{q}^{}) raises dimension by one", n + 1),
                &small,
                &big,
            )?;
            let v0 = coordinate_span(&field, n, 1);
            let v0b = pad_subspace(&v0, 1).sum(&Subspace::span(&field, n + 1, &[unit_vector(n + 1, n)]));
            let small = relative_building_bar(&field, n, &v0, cap)?;
            let big = relative_building_bar(&field, n + 1, &v0b, cap)?;
            check_inclusion(ctx, format!("Pbar(F_{q}^{n}, L) -> Pbar(F_{q}^{}, L + F)", n + 1), &small, &big)?;

            let gl = linear_group(&field, n, &Constraint::GL)?;
            embedding_lands(ctx, format!("GL_{n}(F_{q}) -> GL_{}(F_{q})", n + 1), &gl, StabMode::Line)?;
            for c in [Constraint::FixPointwise(v0.clone()), Constraint::IdentityModulo(v0.clone())] {
                let g = linear_group(&field, n, &c)?;
                embedding_lands(ctx, format!("{}(F_{q}^{n}, L) stabilizes", c.name()), &g, StabMode::RelativeLine)?;
            }
            if n <= 2 {
                let bad = check_building_stab1(&Ambient::plain(&field, n), &o)?;
                ctx.outcome(format!("GL_{n}(F_{q}) splits off GL(F + V)_F"), bad, "inclusion and retraction");
            }
            // H_1(GL_n(F_q)) is F_q^x through det, except the small cases over F_2
            let g = linear_group(&field, n, &Constraint::GL)?;
            if g.order().is_some_and(|x| x <= cap) {
                let ab = abelianization(&g, inputs.cap as usize)?;
                let want = match (q, n) {
                    (2, 2) => "Z/2".to_string(),
                    (2, _) => HomologyGroup::zero(1).to_string(),
                    _ => format!("Z/{}", q - 1),
                };
                ctx.assert(format!("H_1(GL_{n}(F_{q})) = {want}"), ab.to_string() == want, ab.to_string());
            }
        }
    }
    for ps in inputs.param_sets()? {
        for g in 1..=inputs.max_genus {
            let h = FormedSpace::hyperbolic(&ps.params, g);
            let h1 = FormedSpace::hyperbolic(&ps.params, g + 1);
            let small = isotropic_building(&h, cap)?;
            let big = isotropic_building(&h1, cap)?;
            check_inclusion(ctx, format!("Pi(H^{g}) -> Pi(H^{}) {}", g + 1, ps.label), &small, &big)?;
            let u = small.poset.element(small.poset.of_rank(0)[0]).clone();
            let sr = isotropic_relative_building(&h, &u, cap)?;
            let br = isotropic_relative_building(&h1, &pad_subspace(&u, 2), cap)?;
            check_inclusion(ctx, format!("Pi(H^{g}, L) -> Pi(H^{}, L) {}", g + 1, ps.label), &sr, &br)?;
            let gr = isometry_group(&Ambient::Formed(h.clone()), &Constraint::Isometry, &o)?;
            embedding_lands(
                ctx,
                format!("Gamma(H^{g}) -> Gamma(H^{}) {}", g + 1, ps.label),
                &gr,
                StabMode::Hyperbolic,
            )?;
            if g == 1 {
                let name = format!("Gamma(H) splits off Gamma(H + H)_L {}", ps.label);
                match check_building_stab1(&Ambient::Formed(h), &o) {
                    Ok(bad) => ctx.outcome(name, bad, "inclusion and retraction"),
                    Err(Error::ElementsUnavailable) => ctx.skip(name, "Gamma(H + H) above the element cap"),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    symplectic_h1(ctx)
}

/// H_1(Sp_2(F_3)) = Z/3 and H_1(Sp_4(F_3)) = 0; gated behind the slow toggle.
fn symplectic_h1(ctx: &mut Ctx) -> Result<()> {
    let names = ["H_1(Sp_2(F_3)) = Z/3", "H_1(Sp_4(F_3)) = 0", "H_1(Sp_2(F_3)) -> H_1(Sp_4(F_3)) onto"];
    if !ctx.inputs.slow {
        for n in names {
            ctx.skip(n, "needs --slow");
        }
        return Ok(());
    }
    let f3 = Field::prime(3)?;
    let sp = FormParameters::preset(&f3, Preset::Symplectic)?;
    let o = SearchOptions { element_cap: 200_000, seed: ctx.inputs.seed, ..SearchOptions::default() };
    let mut groups = Vec::new();
    for g in 1..=2 {
        let h = FormedSpace::hyperbolic(&sp, g);
        let grp = isometry_group(&Ambient::Formed(h), &Constraint::Isometry, &o)?;
        let ab = abelianization(&grp, 200_000)?;
        groups.push((grp.order(), ab));
    }
    let (o2, a2) = &groups[0];
    let (o4, a4) = &groups[1];
    ctx.assert(names[0], a2.to_string() == "Z/3" && *o2 == Some(24), format!("order {o2:?}, abelianization {a2}"));
    ctx.assert(names[1], a4.is_zero() && *o4 == Some(51840), format!("order {o4:?}, abelianization {a4}"));
    ctx.assert(names[2], a4.is_zero(), "target is zero");
    Ok(())
}
