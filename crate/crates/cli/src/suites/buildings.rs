use formlab_core::homology::{check_cohen_macaulay, rank_filtration_complex, reduced_homology, HomologyGroup};
use formlab_core::linalg::{enumerate_subspaces, unit_vector};
use formlab_core::poset::{
    gl_building, gl_building_bar, isotropic_building, isotropic_relative_building, relative_building,
    relative_building_bar, relative_building_bar_t, Building, FinitePoset,
};
use formlab_core::{Error, Field, FormedSpace, Result, Subspace};

use super::Ctx;
use crate::Inputs;

/// The group whose action on a building is expected to be transitive on each rank.
#[derive(Clone, Debug)]
pub(crate) enum Acting {
    GL,
    AT(Subspace),
    Isometries(FormedSpace),
    FixingU(FormedSpace, Subspace),
    None,
}

pub(crate) struct Named {
    pub name: String,
    pub building: Building,
    pub acting: Acting,
}

fn coordinate_span(field: &Field, n: usize, k: usize) -> Subspace {
    Subspace::span(field, n, &(0..k).map(|i| unit_vector(n, i)).collect::<Vec<_>>())
}

fn gl_family(inputs: &Inputs, out: &mut Vec<Named>) -> Result<()> {
    let cap = inputs.cap();
    for field in inputs.field_list()? {
        let q = field.q();
        for n in inputs.dims() {
            out.push(Named {
                name: format!("P(F_{q}^{n})"),
                building: gl_building(&field, n, cap)?,
                acting: Acting::GL,
            });
            out.push(Named {
                name: format!("Pbar(F_{q}^{n})"),
                building: gl_building_bar(&field, n, cap)?,
                acting: Acting::None,
            });
            for k in 0..=n {
                let v0 = coordinate_span(&field, n, k);
                let rel = relative_building(&field, n, &v0, cap)?;
                out.push(Named {
                    name: format!("P(F_{q}^{n}, V0 dim {k})"),
                    building: rel,
                    acting: Acting::AT(v0.clone()),
                });
                let bar = relative_building_bar(&field, n, &v0, cap)?;
                out.push(Named { name: format!("Pbar(F_{q}^{n}, V0 dim {k})"), building: bar, acting: Acting::None });
                // the transposed flavor only matches its table for V0 != 0
                if k > 0 {
                    let t = relative_building_bar_t(&field, n, &v0, cap)?;
                    out.push(Named {
                        name: format!("PbarT(F_{q}^{n}, V0 dim {k})"),
                        building: t,
                        acting: Acting::None,
                    });
                }
            }
        }
    }
    Ok(())
}

/// One U of every rank of Pi(E).
fn relative_family(e: &FormedSpace, tag: &str, absolute: &Building, cap: u128, out: &mut Vec<Named>) -> Result<()> {
    let p = &absolute.poset;
    for r in 0..p.rank_counts().len() {
        let u = p.element(p.of_rank(r)[0]).clone();
        let b = isotropic_relative_building(e, &u, cap)?;
        out.push(Named {
            name: format!("Pi({tag}, U dim {})", u.dim()),
            building: b,
            acting: Acting::FixingU(e.clone(), u),
        });
    }
    Ok(())
}

fn isotropic_family(inputs: &Inputs, degenerate: bool, out: &mut Vec<Named>) -> Result<()> {
    let cap = inputs.cap();
    for ps in inputs.param_sets()? {
        for g in 1..=inputs.max_genus {
            let h = FormedSpace::hyperbolic(&ps.params, g);
            let mut spaces = vec![(format!("H^{g} {}", ps.label), h.clone())];
            if degenerate {
                spaces.push((format!("H^{g} + R {}", ps.label), h.direct_sum(&FormedSpace::zero(&ps.params, 1))?));
            }
            for (tag, e) in spaces {
                let b = isotropic_building(&e, cap)?;
                relative_family(&e, &tag, &b, cap, out)?;
                out.push(Named { name: format!("Pi({tag})"), building: b, acting: Acting::Isometries(e) });
            }
        }
    }
    Ok(())
}

/// Every building of the rank-table suite, with the group expected to act transitively on ranks.
pub(crate) fn table_buildings(inputs: &Inputs) -> Result<Vec<Named>> {
    let mut out = Vec::new();
    gl_family(inputs, &mut out)?;
    isotropic_family(inputs, true, &mut out)?;
    Ok(out)
}

pub fn building_dims(ctx: &mut Ctx) -> Result<()> {
    for nb in table_buildings(ctx.inputs)? {
        let b = &nb.building;
        let p = &b.poset;
        let ok = b.matches_rank_table() && p.elements().iter().all(|w| b.admits(w));
        let detail = format!("dim {} (table {}), rank counts {:?}", p.dim(), b.expected_dim(), p.rank_counts());
        ctx.assert(format!("rank table: {}", nb.name), ok, detail);
    }
    Ok(())
}

/// a < b, c < d: two disjoint edges, a 1-dimensional poset that is not connected
pub(crate) fn two_edges() -> FinitePoset<u8> {
    FinitePoset::from_relation(vec![0u8, 1, 2, 3], |a, b| a == b || (*a == 0 && *b == 1) || (*a == 2 && *b == 3))
        .expect("graded")
}

pub fn cohen_macaulay(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let cap = inputs.cap();
    let mut list: Vec<(String, FinitePoset<Subspace>)> = Vec::new();
    for field in inputs.field_list()? {
        let q = field.q();
        for n in inputs.dims() {
            list.push((format!("P(F_{q}^{n})"), gl_building(&field, n, cap)?.poset));
            for k in 0..=n {
                for (i, v0) in enumerate_subspaces(&field, n, k, cap)?.into_iter().enumerate() {
                    list.push((
                        format!("Pbar(F_{q}^{n}, V0 dim {k} #{i})"),
                        relative_building_bar(&field, n, &v0, cap)?.poset,
                    ));
                }
            }
        }
    }
    let mut iso = Vec::new();
    isotropic_family(inputs, false, &mut iso)?;
    list.extend(iso.into_iter().map(|nb| (nb.name, nb.building.poset)));
    for (name, p) in &list {
        let r = check_cohen_macaulay(p, cap)?;
        let detail = match &r.failure {
            None => format!("{} intervals spherical", r.intervals_checked),
            Some(f) => format!("interval ({:?}, {:?}): {}", f.lower, f.upper, f.reason),
        };
        ctx.assert(format!("Cohen-Macaulay: {name}"), r.is_cm, detail);
    }
    let r = check_cohen_macaulay(&two_edges(), cap)?;
    let detail = r
        .failure
        .as_ref()
        .map_or("accepted".to_string(), |f| format!("rejected at ({:?}, {:?}): {}", f.lower, f.upper, f.reason));
    ctx.assert("non-CM control rejected: two disjoint edges", !r.is_cm, detail);
    Ok(())
}

fn show(h: &[HomologyGroup]) -> String {
    h.iter().filter(|g| !g.is_zero()).map(|g| format!("H_{} = {g}", g.degree)).collect::<Vec<_>>().join(", ")
}

pub fn filtration_complex(ctx: &mut Ctx) -> Result<()> {
    let inputs = ctx.inputs;
    let cap = inputs.cap();
    let mut list: Vec<(String, FinitePoset<Subspace>)> = Vec::new();
    for field in inputs.field_list()? {
        let q = field.q();
        for n in inputs.dims().filter(|&n| n >= 2) {
            list.push((format!("P(F_{q}^{n})"), gl_building(&field, n, cap)?.poset));
            list.push((format!("Pbar(F_{q}^{n})"), gl_building_bar(&field, n, cap)?.poset));
            let hyper = coordinate_span(&field, n, n - 1);
            list.push((format!("P(F_{q}^{n}, hyperplane)"), relative_building(&field, n, &hyper, cap)?.poset));
            let line = coordinate_span(&field, n, 1);
            list.push((format!("Pbar(F_{q}^{n}, line)"), relative_building_bar(&field, n, &line, cap)?.poset));
        }
    }
    let mut iso = Vec::new();
    isotropic_family(inputs, false, &mut iso)?;
    list.extend(iso.into_iter().map(|nb| (nb.name, nb.building.poset)));
    for (name, p) in &list {
        let c = rank_filtration_complex(p, cap)?;
        let filt = c.homology();
        let oc = reduced_homology(p, cap)?;
        let ok = filt == oc && c.rank(0) == p.of_rank(0).len();
        ctx.assert(
            format!("filtration complex = order complex: {name}"),
            ok,
            format!("[{}] vs [{}]", show(&filt), show(&oc)),
        );
    }
    let refused = matches!(rank_filtration_complex(&two_edges(), cap), Err(Error::NotCohenMacaulay(_)));
    ctx.assert("filtration complex refuses a non-CM poset", refused, "two disjoint edges");
    Ok(())
}
