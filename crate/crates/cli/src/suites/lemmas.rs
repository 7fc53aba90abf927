//! Orthogonal complements, isotropic complements and induced forms on random instances.

use formlab_core::forms::{induced_quotient_form, isotropic_complement};
use formlab_core::linalg::quotient_coordinates;
use formlab_core::{FormedSpace, IsometryMap, Result, Subspace};
use rand::Rng;

use super::{Ctx, Tally};
use crate::gen;

struct Battery {
    dim_perp: Tally,
    perp_perp: Tally,
    sum_perp: Tally,
    cap_perp: Tally,
    nondeg: Tally,
    complement: Tally,
    rad_perp: Tally,
    quotient_by_radical: Tally,
    induced: Tally,
    maximals: Tally,
}

impl Battery {
    fn new() -> Self {
        Battery {
            dim_perp: Tally::new("dim A^perp = dim E - dim A + dim(A cap K(E))"),
            perp_perp: Tally::new("(A^perp)^perp = A + K(E)"),
            sum_perp: Tally::new("(A + B)^perp = A^perp cap B^perp"),
            cap_perp: Tally::new("K(E) <= A implies (A cap B)^perp = A^perp + B^perp"),
            nondeg: Tally::new("A nondegenerate: E = A + A^perp, K(E) = K(A^perp), R(E) = R(A^perp)"),
            complement: Tally::new("isotropic complement Z of U^perp: all postconditions"),
            rad_perp: Tally::new("Z isotropic: R(Z^perp) = Z + R(E)"),
            quotient_by_radical: Tally::new("Z <= R(E): form on E/Z with radical R(E)/Z, isotropics correspond"),
            induced: Tally::new("form on Z^perp/Z: projection isometric, radical and genus as predicted"),
            maximals: Tally::new("U maximal isotropic: (U cap Z^perp)/(U cap Z) maximal in Z^perp/Z"),
        }
    }

    fn finish(self, ctx: &mut Ctx) {
        for t in [
            self.dim_perp,
            self.perp_perp,
            self.sum_perp,
            self.cap_perp,
            self.nondeg,
            self.complement,
            self.rad_perp,
            self.quotient_by_radical,
            self.induced,
            self.maximals,
        ] {
            t.finish(ctx);
        }
    }
}

/// Subspace of `sup`'s row space given by random combinations of its rows.
fn random_inside(sup: &Subspace, rng: &mut impl Rng) -> Subspace {
    let f = sup.field();
    let k = rng.gen_range(0..=sup.dim());
    let coords = gen::subspace(f, sup.dim(), k, rng);
    Subspace::from_coordinates(&coords, sup.basis())
}

fn in_perp_coordinates(s: &Subspace, perp_basis: &formlab_core::Matrix) -> Subspace {
    s.to_coordinates(perp_basis)
}

fn complement_holds(e: &FormedSpace, u: &Subspace, z0: Option<&Subspace>) -> Result<Option<String>> {
    let z = isotropic_complement(e, u, z0)?;
    let up = e.perp(u);
    let rad = e.radical()?;
    let mut bad = Vec::new();
    if !e.is_isotropic(&z) {
        bad.push("Z not isotropic");
    }
    if !(up.intersect(&z).is_zero() && up.sum(&z).is_full()) {
        bad.push("E != U^perp + Z");
    }
    if z0.is_some_and(|z0| !z.contains(z0)) {
        bad.push("Z0 not inside Z");
    }
    if !z.intersect(&rad).is_zero() {
        bad.push("Z meets R(E)");
    }
    if u.intersect(&rad).is_zero() {
        let uz = u.sum(&z);
        if !e.restrict(&uz).is_nondegenerate() {
            bad.push("U + Z degenerate");
        }
        let zp = e.perp(&z);
        if !(u.intersect(&zp).is_zero() && u.sum(&zp).is_full()) {
            bad.push("E != U + Z^perp");
        }
        let uzp = e.perp(&uz);
        if !(uz.intersect(&uzp).is_zero() && uz.sum(&uzp).is_full()) {
            bad.push("E != (U + Z) + (U + Z)^perp");
        }
    }
    Ok((!bad.is_empty()).then(|| format!("{e:?}, U = {u:?}, Z0 = {z0:?}, Z = {z:?}: {}", bad.join(", "))))
}

pub fn complement_lemmas(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let mut rng = inputs.rng(2);
    let mut b = Battery::new();
    let dims: Vec<usize> = inputs.dims().collect();
    for ps in inputs.param_sets()? {
        let p = &ps.params;
        let f = ps.field().clone();
        let label = &ps.label;
        for i in 0..inputs.samples {
            let n = dims[i % dims.len()];
            // plain random space: perp calculus
            let e = gen::space(p, n, &mut rng);
            let k = e.kernel();
            let a = gen::subspace(&f, n, rng.gen_range(0..=n), &mut rng);
            let c = gen::subspace(&f, n, rng.gen_range(0..=n), &mut rng);
            let ap = e.perp(&a);
            b.dim_perp.record(ap.dim() == n - a.dim() + a.intersect(&k).dim(), || format!("{label} {e:?}, A = {a:?}"));
            b.perp_perp.record(e.perp(&ap) == a.sum(&k), || format!("{label} {e:?}, A = {a:?}"));
            b.sum_perp.record(e.perp(&a.sum(&c)) == ap.intersect(&e.perp(&c)), || {
                format!("{label} {e:?}, A = {a:?}, B = {c:?}")
            });
            let ak = a.sum(&k);
            b.cap_perp.record(e.perp(&ak.intersect(&c)) == e.perp(&ak).sum(&e.perp(&c)), || {
                format!("{label} {e:?}, A = {ak:?}, B = {c:?}")
            });
            for _ in 0..4 {
                let a = gen::subspace(&f, n, rng.gen_range(1..=n), &mut rng);
                if !e.restrict(&a).is_nondegenerate() {
                    continue;
                }
                let ap = e.perp(&a);
                let rest = e.restrict(&ap);
                let ok = a.intersect(&ap).is_zero()
                    && a.sum(&ap).is_full()
                    && Subspace::from_coordinates(&rest.kernel(), ap.basis()) == k
                    && Subspace::from_coordinates(&rest.radical()?, ap.basis()) == e.radical()?;
                b.nondeg.record(ok, || format!("{label} {e:?}, A = {a:?}"));
                break;
            }

            // a hyperbolic summand guarantees isotropic subspaces
            let ez = gen::space(p, n.saturating_sub(1), &mut rng).direct_sum(&FormedSpace::hyperbolic(p, 1))?;
            let m = ez.dim();
            let u = gen::isotropic(&ez, 3, &mut rng);
            let up = ez.perp(&u);
            let z0 = (0..8)
                .map(|_| gen::vector(&f, m, &mut rng))
                .find(|v| !up.contains_vector(v) && ez.is_isotropic_vector(v))
                .map(|v| Subspace::span(&f, m, &[v]));
            let fail = complement_holds(&ez, &u, z0.as_ref())?;
            b.complement.record(fail.is_none(), || format!("{label} {}", fail.unwrap_or_default()));

            let z = gen::isotropic(&ez, 3, &mut rng);
            let rad = ez.radical()?;
            let zr = z.sum(&rad);
            let zp = ez.perp(&z);
            let rp = Subspace::from_coordinates(&ez.restrict(&zp).radical()?, zp.basis());
            b.rad_perp.record(rp == zr, || format!("{label} {ez:?}, Z = {z:?}"));

            let qf = induced_quotient_form(&ez, &z)?;
            let img = in_perp_coordinates(&zr, &qf.perp_basis).image(&qf.projection.matrix);
            let cap = inputs.cap();
            let expected = ez.genus_with_cap(cap)?.0 + rad.dim() - zr.dim();
            let got = qf.space.genus_with_cap(cap)?.0;
            let ok = qf.projection.is_isometry() && qf.space.radical()? == img && got == expected;
            b.induced.record(ok, || format!("{label} {ez:?}, Z = {z:?}: genus {got}, predicted {expected}"));

            // maximal isotropic subspaces descend
            let umax = gen::maximal_isotropic(&ez, &gen::isotropic(&ez, 2, &mut rng), &mut rng);
            let uz = umax.intersect(&zp);
            let uq = in_perp_coordinates(&uz, &qf.perp_basis).image(&qf.projection.matrix);
            let top = qf.space.genus_with_cap(cap)?.0 + qf.space.radical()?.dim();
            let ok = qf.space.is_isotropic(&uq) && uq.dim() == top;
            b.maximals.record(ok, || {
                format!("{label} {ez:?}, U = {umax:?}, Z = {z:?}: image has dim {}, maximal {top}", uq.dim())
            });

            // quotient by a subspace of the radical; a zero summand makes the radical nonzero
            let er = gen::space(p, n, &mut rng).direct_sum(&FormedSpace::zero(p, 1))?;
            let nr = er.dim();
            let r = er.radical()?;
            let zz = random_inside(&r, &mut rng);
            let qm = quotient_coordinates(nr, &zz);
            let lifts = qm.section.col_vecs();
            let quot = er.restrict_to(&lifts);
            let proj = IsometryMap::new(&er, &quot, qm.proj.clone());
            let mut ok = proj.is_isometry() && quot.radical()? == r.image(&qm.proj);
            for _ in 0..4 {
                let s = gen::subspace(&f, nr - zz.dim(), rng.gen_range(0..=nr - zz.dim()), &mut rng);
                let pre = Subspace::span(
                    &f,
                    nr,
                    &s.basis_vectors().iter().map(|v| qm.section.mul_vec(v)).collect::<Vec<_>>(),
                )
                .sum(&zz);
                ok &= quot.is_isotropic(&s) == er.is_isotropic(&pre);
            }
            b.quotient_by_radical.record(ok, || format!("{label} {er:?}, Z = {zz:?}"));
        }
    }
    b.finish(ctx);
    Ok(())
}
