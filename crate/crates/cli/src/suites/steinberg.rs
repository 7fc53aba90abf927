use formlab_core::groups::linear_group;
use formlab_core::linalg::enumerate_subspaces;
use formlab_core::steinberg::{check_functoriality, coinvariants, kunneth_rank_check, steinberg_with_group};
use formlab_core::{Constraint, Result, Subspace};

use super::{Ctx, Tally};

pub fn steinberg_coinvariants(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let cap = inputs.cap();
    for field in inputs.field_list()? {
        let q = field.q();
        for n in inputs.dims() {
            let st = steinberg_with_group(&field, n, None, cap)?;
            let expect = (q as u128).pow((n * (n - 1) / 2) as u32);
            ctx.assert(
                format!("rank St(F_{q}^{n}) = q^(n(n-1)/2)"),
                st.rank() as u128 == expect && st.degree == n as isize - 2,
                format!("rank {} in degree {}, formula {expect}", st.rank(), st.degree),
            );
            let c = coinvariants(&st);
            if n >= 2 {
                ctx.assert(format!("St(F_{q}^{n}) coinvariants under GL vanish"), c.is_zero(), c.to_string());
            } else {
                ctx.assert(format!("St(F_{q}^1) = Z with trivial action"), c.to_string() == "Z", c.to_string());
            }
            if n >= 2 {
                let gl = linear_group(&field, n, &Constraint::GL)?;
                let bad = check_functoriality(&st, gl.sample_pool(), 30, inputs.seed)?;
                ctx.outcome(format!("action of GL_{n}(F_{q}) on St is functorial"), bad, "30 sampled pairs");
            }

            let mut vanish = Tally::new(format!("St(F_{q}^{n}, V0) coinvariants under AT(V, V0) vanish, all V0 > 0"));
            let mut line_rank = Tally::new(format!("rank St(F_{q}^{n}, L) = q^(n-1) - 1 for lines L"));
            let mut observed: Vec<String> = Vec::new();
            for k in 1..=n {
                for v0 in enumerate_subspaces(&field, n, k, cap)? {
                    let st = steinberg_with_group(&field, n, Some(&v0), cap)?;
                    if k == 1 {
                        let want = (q as usize).pow(n as u32 - 1) - 1;
                        line_rank.record(st.rank() == want, || format!("V0 = {v0:?}: rank {}", st.rank()));
                    }
                    let c = coinvariants(&st);
                    if q == 2 {
                        let s = format!("dim V0 {k}: {c}");
                        if !observed.contains(&s) {
                            observed.push(s);
                        }
                    } else {
                        vanish.record(c.is_zero(), || format!("V0 = {v0:?}: coinvariants {c}"));
                    }
                }
            }
            vanish.finish(ctx);
            line_rank.finish(ctx);
            if !observed.is_empty() {
                // the vanishing theorem excludes F_2; record what happens there
                ctx.info(format!("St(F_2^{n}, V0) coinvariants (not asserted over F_2)"), observed.join("; "));
            }
        }
    }
    Ok(())
}

pub fn kunneth(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let cap = inputs.cap();
    for field in inputs.field_list()? {
        let q = field.q();
        for n in inputs.dims() {
            let all: Vec<Subspace> =
                (0..=n).map(|k| enumerate_subspaces(&field, n, k, cap)).collect::<Result<Vec<_>>>()?.concat();
            let mut t = Tally::new(format!("St(V,V0) = St(V/U,V0/U) x St(V,U) on F_{q}^{n}, all U <= V0"));
            for v0 in &all {
                for u in all.iter().filter(|u| v0.contains(u)) {
                    let r = kunneth_rank_check(&field, n, v0, u, cap)?;
                    t.record(r.holds(), || format!("V0 = {v0:?}, U = {u:?}: {r:?}"));
                }
            }
            t.finish(ctx);
            // a spot value: V0 a hyperplane, U a line inside it
            if n >= 2 {
                let v0 = &enumerate_subspaces(&field, n, n - 1, cap)?[0];
                let u = enumerate_subspaces(&field, n, 1, cap)?.into_iter().find(|u| v0.contains(u)).expect("a line");
                let r = kunneth_rank_check(&field, n, v0, &u, cap)?;
                ctx.info(
                    format!("Kunneth ranks on F_{q}^{n}, hyperplane over a line"),
                    format!(
                        "{} = {} x {}, |det phi_*| = {}",
                        r.rank_relative, r.rank_quotient, r.rank_lower, r.phi_det
                    ),
                );
            }
        }
    }
    Ok(())
}
