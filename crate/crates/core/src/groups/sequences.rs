//! Split exact sequences of stabilizers, their sections, and the small lemmas around them.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    fixes_pointwise, identity_modulo, isometry_group, stabilizer, Ambient, Constraint, MatrixGroup, SearchOptions,
};
use crate::error::{Error, Result};
use crate::forms::{
    decomp_complement, induced_quotient_form, isotropic_complement, preserves_form, FormedSpace, QuotientForm,
};
use crate::gf::Field;
use crate::linalg::{Matrix, Subspace, Vector};

/// The four group/building pairings.
#[derive(Clone, Debug)]
pub enum Pairing {
    /// GL(V) on Pbar(V)
    GL { field: Field, n: usize },
    /// AT(V, V0) on Pbar(V, V0)
    AT { field: Field, n: usize, v0: Subspace },
    /// Gamma_i(E) on Pi(E)
    Isometry(FormedSpace),
    /// Ai(E, U) on Pi(E, U)
    IsometryFixing(FormedSpace, Subspace),
}

impl Pairing {
    pub fn name(&self) -> &'static str {
        match self {
            Pairing::GL { .. } => "GL",
            Pairing::AT { .. } => "AT",
            Pairing::Isometry(_) => "Gamma_i",
            Pairing::IsometryFixing(..) => "Ai",
        }
    }

    pub fn ambient(&self) -> Ambient {
        match self {
            Pairing::GL { field, n } | Pairing::AT { field, n, .. } => Ambient::plain(field, *n),
            Pairing::Isometry(e) | Pairing::IsometryFixing(e, _) => Ambient::Formed(e.clone()),
        }
    }

    pub fn constraint(&self) -> Constraint {
        match self {
            Pairing::GL { .. } => Constraint::GL,
            Pairing::AT { v0, .. } => Constraint::IdentityModulo(v0.clone()),
            Pairing::Isometry(_) => Constraint::Isometry,
            Pairing::IsometryFixing(_, u) => Constraint::IsometryFixing(u.clone()),
        }
    }

    pub fn group(&self, opts: &SearchOptions) -> Result<MatrixGroup> {
        isometry_group(&self.ambient(), &self.constraint(), opts)
    }

    /// Rank of W in the pairing's building.
    pub fn rank_of(&self, w: &Subspace) -> Result<usize> {
        Ok(match self {
            Pairing::GL { .. } => w.dim() - 1,
            Pairing::AT { v0, .. } => w.intersect(v0).dim(),
            Pairing::Isometry(e) => w.dim() - e.radical()?.dim() - 1,
            Pairing::IsometryFixing(_, u) => w.dim() - u.dim(),
        })
    }
}

/// Matrix of g restricted to W, in the echelon basis of W.
pub fn restriction_to(g: &Matrix, w: &Subspace) -> Option<Matrix> {
    let cols: Vec<Vector> = w
        .basis_vectors()
        .iter()
        .map(|b| g.mul_vec(b))
        .map(|v| w.contains_vector(&v).then(|| w.coordinates(&v)))
        .collect::<Option<_>>()?;
    Some(Matrix::from_cols(w.field(), &cols, w.dim()))
}

/// A subspace X of W written in coordinates of W's echelon basis.
fn in_coordinates(x: &Subspace, w: &Subspace) -> Subspace {
    let coords: Vec<Vector> = x.basis_vectors().iter().map(|v| w.coordinates(v)).collect();
    Subspace::span(w.field(), w.dim(), &coords)
}

/// Induced map of g on Z^perp / Z, in the quotient basis of `qf`.
pub fn induced_on_quotient(g: &Matrix, qf: &QuotientForm) -> Option<Matrix> {
    let perp = Subspace::from_matrix(&qf.perp_basis);
    let cols: Vec<Vector> = qf
        .lifts
        .iter()
        .map(|l| {
            let v = g.mul_vec(l);
            perp.contains_vector(&v).then(|| qf.projection.matrix.mul_vec(&perp.coordinates(&v)))
        })
        .collect::<Option<_>>()?;
    Some(Matrix::from_cols(g.field(), &cols, qf.space.dim()))
}

/// Image in Z^perp / Z of a subspace of Z^perp.
fn quotient_image(x: &Subspace, qf: &QuotientForm) -> Subspace {
    let perp = Subspace::from_matrix(&qf.perp_basis);
    let vs: Vec<Vector> =
        x.basis_vectors().iter().map(|v| qf.projection.matrix.mul_vec(&perp.coordinates(v))).collect();
    Subspace::span(x.field(), qf.space.dim(), &vs)
}

/// One named check with an optional counterexample.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub pairing: String,
    pub subspace: String,
    pub rank: usize,
    pub stabilizer_order: usize,
    pub kernel_order: usize,
    pub image_order: usize,
    pub checks: Vec<Check>,
}

impl SequenceReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
    /// The first failing check as SequenceBroken.
    pub fn into_result(self) -> Result<Self> {
        match self.checks.iter().find(|c| !c.ok) {
            Some(c) => Err(Error::SequenceBroken(format!("{}: {}", c.name, c.witness))),
            None => Ok(self),
        }
    }
}

fn check(name: &str, bad: Option<String>) -> Check {
    Check { name: name.to_string(), ok: bad.is_none(), witness: bad.unwrap_or_default() }
}

fn as_set(v: &[Matrix]) -> HashSet<Matrix> {
    v.iter().cloned().collect()
}

/// First element of `a` missing from `b`, in either direction.
fn set_difference(a: &HashSet<Matrix>, b: &HashSet<Matrix>) -> Option<String> {
    a.iter()
        .find(|x| !b.contains(*x))
        .map(|x| format!("only on the left: {x:?}"))
        .or_else(|| b.iter().find(|x| !a.contains(*x)).map(|x| format!("only on the right: {x:?}")))
}

/// Change of basis: the matrix acting as `blocks` on the columns of `basis`.
fn from_adapted(basis: &[Vector], blocks: &Matrix) -> Matrix {
    let f = blocks.field();
    let b = Matrix::from_cols(f, basis, basis[0].len());
    b.mul(blocks).mul(&b.inverse().expect("adapted basis"))
}

/// Sections of the four restriction maps.
enum Section {
    /// f on W, identity on X
    Linear { w: Subspace, x: Vec<Vector> },
    /// f on W, f~ on C, identity on E'
    Isotropic { e: FormedSpace, w: Subspace, c: Vec<Vector>, rest: Vec<Vector> },
}

impl Section {
    fn apply(&self, f: &Matrix) -> Option<Matrix> {
        match self {
            Section::Linear { w, x } => {
                let mut basis = w.basis_vectors();
                basis.extend(x.iter().cloned());
                let id = Matrix::identity(f.field(), x.len());
                Some(from_adapted(&basis, &f.block_diag(&id)))
            }
            Section::Isotropic { e, w, c, rest } => {
                let wb = w.basis_vectors();
                let fw: Vec<Vector> =
                    (0..wb.len()).map(|j| Matrix::from_cols(f.field(), &wb, e.dim()).mul_vec(&f.col(j))).collect();
                // omega(f w_i, f~ c_j) = omega(w_i, c_j)
                let m = Matrix::from_fn(f.field(), wb.len(), c.len(), |i, l| e.omega_value(&fw[i], &c[l]));
                let rhs = Matrix::from_fn(f.field(), wb.len(), c.len(), |i, j| e.omega_value(&wb[i], &c[j]));
                let a = m.solve(&rhs)?;
                if m.mul(&a) != rhs {
                    return None;
                }
                let mut basis = wb;
                basis.extend(c.iter().cloned());
                basis.extend(rest.iter().cloned());
                let blocks = f.block_diag(&a).block_diag(&Matrix::identity(f.field(), rest.len()));
                Some(from_adapted(&basis, &blocks))
            }
        }
    }
}

fn build_section(pairing: &Pairing, w: &Subspace) -> Result<Section> {
    Ok(match pairing {
        Pairing::GL { field, n } => Section::Linear { w: w.clone(), x: w.complement_in(&Subspace::full(field, *n)) },
        Pairing::AT { v0, .. } => Section::Linear { w: w.clone(), x: w.intersect(v0).complement_in(v0) },
        Pairing::Isometry(e) => isotropic_section(e, w, None)?,
        Pairing::IsometryFixing(e, u) => {
            let rad = e.radical()?;
            let z0 = Subspace::span(e.field(), e.dim(), &rad.complement_in(u));
            isotropic_section(e, w, Some(&z0))?
        }
    })
}

fn isotropic_section(e: &FormedSpace, w: &Subspace, z0: Option<&Subspace>) -> Result<Section> {
    let c = isotropic_complement(e, w, z0)?;
    let rest = decomp_complement(e, w, &c)?;
    Ok(Section::Isotropic { e: e.clone(), w: w.clone(), c: c.basis_vectors(), rest: rest.basis_vectors() })
}

/// Target group of the restriction, in coordinates of W.
fn restriction_target(pairing: &Pairing, w: &Subspace, opts: &SearchOptions) -> Result<Vec<Matrix>> {
    let f = w.field();
    let k = w.dim();
    let plain = Ambient::plain(f, k);
    let els = match pairing {
        Pairing::GL { .. } => isometry_group(&plain, &Constraint::GL, opts)?.elements()?.to_vec(),
        Pairing::AT { v0, .. } => {
            let c = Constraint::IdentityModulo(in_coordinates(&w.intersect(v0), w));
            isometry_group(&plain, &c, opts)?.elements()?.to_vec()
        }
        Pairing::Isometry(e) => {
            let r = in_coordinates(&e.radical()?, w);
            let all = isometry_group(&plain, &Constraint::GL, opts)?;
            all.elements()?.iter().filter(|g| r.image(g) == r).cloned().collect()
        }
        Pairing::IsometryFixing(e, u) => {
            let r = in_coordinates(&e.radical()?, w);
            let c = Constraint::IdentityModulo(in_coordinates(&w.intersect(&e.perp(u)), w));
            let all = isometry_group(&plain, &c, opts)?;
            all.elements()?.iter().filter(|g| fixes_pointwise(g, &r)).cloned().collect()
        }
    };
    Ok(els)
}

/// Kernel comparison for each pairing: (actual kernel mapped somewhere, stated group there).
fn stated_kernel(pairing: &Pairing, w: &Subspace, kernel: &[Matrix], opts: &SearchOptions) -> Result<Option<String>> {
    Ok(match pairing {
        Pairing::GL { field, n } => {
            let a = isometry_group(&Ambient::plain(field, *n), &Constraint::FixPointwise(w.clone()), opts)?;
            set_difference(&as_set(kernel), &as_set(a.elements()?))
        }
        Pairing::AT { field, v0, .. } => {
            // restriction to V0 is injective on the kernel since W + V0 = V
            let restricted: Vec<Matrix> =
                kernel.iter().map(|g| restriction_to(g, v0).expect("g preserves V0")).collect();
            let a = isometry_group(
                &Ambient::plain(field, v0.dim()),
                &Constraint::FixPointwise(in_coordinates(&w.intersect(v0), v0)),
                opts,
            )?;
            let rs = as_set(&restricted);
            if rs.len() != kernel.len() {
                Some("restriction to V0 is not injective on the kernel".into())
            } else {
                set_difference(&rs, &as_set(a.elements()?))
            }
        }
        Pairing::Isometry(e) => {
            let a = isometry_group(&Ambient::Formed(e.clone()), &Constraint::IsometryFixing(w.clone()), opts)?;
            set_difference(&as_set(kernel), &as_set(a.elements()?))
        }
        Pairing::IsometryFixing(e, u) => {
            let qf = induced_quotient_form(e, u)?;
            let image = quotient_image(&w.intersect(&e.perp(u)), &qf);
            let mapped: Vec<Matrix> =
                kernel.iter().map(|g| induced_on_quotient(g, &qf).expect("g preserves U^perp")).collect();
            let a = isometry_group(&Ambient::Formed(qf.space.clone()), &Constraint::IsometryFixing(image), opts)?;
            let ms = as_set(&mapped);
            if ms.len() != kernel.len() {
                Some("induced map on U^perp/U is not injective on the kernel".into())
            } else {
                set_difference(&ms, &as_set(a.elements()?))
            }
        }
    })
}

/// Verifies the split short exact sequence 1 -> K -> G_W -> T -> 1 for W in the pairing's building.
pub fn check_stabilizer_sequence(pairing: &Pairing, w: &Subspace, opts: &SearchOptions) -> Result<SequenceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let g = pairing.group(opts)?;
    let gw = stabilizer(&g, w)?;
    let gw_els = gw.elements()?;
    let mut checks = Vec::new();

    let restricted: Vec<Matrix> =
        gw_els.iter().map(|x| restriction_to(x, w).expect("stabilizer preserves W")).collect();
    let id_w = Matrix::identity(w.field(), w.dim());
    let kernel: Vec<Matrix> =
        gw_els.iter().zip(&restricted).filter(|(_, r)| **r == id_w).map(|(x, _)| x.clone()).collect();
    let image = as_set(&restricted);
    let target = restriction_target(pairing, w, opts)?;

    checks.push(check("kernel equals the stated group", stated_kernel(pairing, w, &kernel, opts)?));
    checks.push(check("restriction onto the stated target", set_difference(&image, &as_set(&target))));
    let mult = (gw_els.len() == kernel.len() * image.len())
        .then_some(())
        .map_or(Some(format!("{} != {} * {}", gw_els.len(), kernel.len(), image.len())), |_| None);
    checks.push(check("order multiplicativity", mult));

    // the explicit section
    let section = build_section(pairing, w)?;
    let gw_set = as_set(gw_els);
    let mut bad = None;
    let mut psi = Vec::with_capacity(target.len());
    for f in &target {
        match section.apply(f) {
            Some(s) if gw_set.contains(&s) && restriction_to(&s, w).as_ref() == Some(f) => psi.push(s),
            Some(s) => {
                bad = Some(format!("Psi({f:?}) = {s:?} misses the stabilizer or does not restrict back"));
                break;
            }
            None => {
                bad = Some(format!("no f~ for {f:?}"));
                break;
            }
        }
    }
    checks.push(check("section lands in G_W and splits", bad));
    let mut bad = None;
    if psi.len() == target.len() && !target.is_empty() {
        for _ in 0..64 {
            let (i, j) = (rng.gen_range(0..target.len()), rng.gen_range(0..target.len()));
            let prod = section.apply(&target[i].mul(&target[j]));
            if prod.as_ref() != Some(&psi[i].mul(&psi[j])) {
                bad = Some(format!("Psi(f g) != Psi(f) Psi(g) for f = {:?}, g = {:?}", target[i], target[j]));
                break;
            }
        }
    }
    checks.push(check("section is a homomorphism", bad));

    let rank = pairing.rank_of(w)?;
    if rank == 0 {
        if let Some(c) = degenerate_isomorphism(pairing, &gw, &g, opts, &mut rng)? {
            checks.extend(c);
        }
    }
    Ok(SequenceReport {
        pairing: pairing.name().to_string(),
        subspace: format!("{w:?}"),
        rank,
        stabilizer_order: gw_els.len(),
        kernel_order: kernel.len(),
        image_order: image.len(),
        checks,
    })
}

/// Rank-0 W: G_W is GL(V0) (restrict to V0) or Gamma_i(U^perp/U) (induced map), and the same maps
/// retract the whole group.
fn degenerate_isomorphism(
    pairing: &Pairing,
    gw: &MatrixGroup,
    g: &MatrixGroup,
    opts: &SearchOptions,
    rng: &mut impl Rng,
) -> Result<Option<Vec<Check>>> {
    type Retraction = Box<dyn Fn(&Matrix) -> Option<Matrix>>;
    let (retract, target): (Retraction, Vec<Matrix>) = match pairing {
        Pairing::AT { field, v0, .. } => {
            let v0c = v0.clone();
            let t = isometry_group(&Ambient::plain(field, v0.dim()), &Constraint::GL, opts)?;
            (Box::new(move |x| restriction_to(x, &v0c)), t.elements()?.to_vec())
        }
        Pairing::IsometryFixing(e, u) => {
            let qf = induced_quotient_form(e, u)?;
            let t = isometry_group(&Ambient::Formed(qf.space.clone()), &Constraint::Isometry, opts)?;
            (Box::new(move |x| induced_on_quotient(x, &qf)), t.elements()?.to_vec())
        }
        _ => return Ok(None),
    };
    let gw_els = gw.elements()?;
    let mapped: Option<Vec<Matrix>> = gw_els.iter().map(&retract).collect();
    let iso = match mapped {
        None => Some("retraction undefined on the stabilizer".to_string()),
        Some(m) => {
            let ms = as_set(&m);
            if ms.len() != gw_els.len() {
                Some("not injective on the stabilizer".into())
            } else {
                set_difference(&ms, &as_set(&target))
            }
        }
    };
    let els = g.elements()?;
    let mut bad = None;
    for _ in 0..64 {
        let (a, b) = (&els[rng.gen_range(0..els.len())], &els[rng.gen_range(0..els.len())]);
        let lhs = retract(&a.mul(b));
        let rhs = retract(a).zip(retract(b)).map(|(x, y)| x.mul(&y));
        if lhs.is_none() || lhs != rhs {
            bad = Some(format!("retraction fails to be multiplicative at {a:?}, {b:?}"));
            break;
        }
    }
    Ok(Some(vec![check("rank-0 stabilizer isomorphism", iso), check("retraction is a homomorphism", bad)]))
}

/// g -> (g^T)^-1 carries AT(V, V0) onto A(V*, ann V0).
pub fn check_a_at_duality(field: &Field, n: usize, v0: &Subspace, opts: &SearchOptions) -> Result<Option<String>> {
    let at = isometry_group(&Ambient::plain(field, n), &Constraint::IdentityModulo(v0.clone()), opts)?;
    let a = isometry_group(&Ambient::plain(field, n), &Constraint::FixPointwise(v0.annihilator()), opts)?;
    let dual: HashSet<Matrix> = at.elements()?.iter().map(|g| g.transpose().inverse().expect("invertible")).collect();
    if dual.len() != at.elements()?.len() {
        return Ok(Some("dualizing is not injective".into()));
    }
    Ok(set_difference(&dual, &as_set(a.elements()?)))
}

/// Ai(E, U) lies in A(E, U) and in AT(E, U^perp).
pub fn check_aat_inclusions(e: &FormedSpace, u: &Subspace, opts: &SearchOptions) -> Result<Option<String>> {
    let ai = isometry_group(&Ambient::Formed(e.clone()), &Constraint::IsometryFixing(u.clone()), opts)?;
    let uperp = e.perp(u);
    Ok(ai
        .elements()?
        .iter()
        .find(|g| !fixes_pointwise(g, u) || !identity_modulo(g, &uperp))
        .map(|g| format!("{g:?} escapes A(E, U) or AT(E, U^perp)")))
}

/// GL(V) -> GL(F + V)_F and Gamma_i(E) -> Gamma_i(H + E)_L are split by the quotient maps,
/// compatibly with stabilization.
pub fn check_building_stab1(ambient: &Ambient, opts: &SearchOptions) -> Result<Option<String>> {
    let f = ambient.field();
    let (big, c, extra) = match ambient {
        Ambient::Plain { n, .. } => (Ambient::plain(f, n + 1), Constraint::GL, 1),
        Ambient::Formed(e) => {
            let h = FormedSpace::hyperbolic(e.params(), 1);
            (Ambient::Formed(h.direct_sum(e)?), Constraint::Isometry, 2)
        }
    };
    let small = isometry_group(ambient, &c, opts)?;
    let large = isometry_group(&big, &c, opts)?;
    let line = Subspace::span(f, big.dim(), &[crate::linalg::unit_vector(big.dim(), 0)]);
    let stab = stabilizer(&large, &line)?;
    let keep: Vec<usize> = (extra..big.dim()).collect();
    let include = |g: &Matrix| Matrix::identity(f, extra).block_diag(g);
    // on L^perp = L + E the induced map on the quotient is the lower right block
    let retract = |g: &Matrix| g.submatrix(&keep, &keep);
    let stab_set = as_set(stab.elements()?);
    for g in small.elements()? {
        let i = include(g);
        if !stab_set.contains(&i) {
            return Ok(Some(format!("inclusion of {g:?} leaves the stabilizer")));
        }
        if &retract(&i) != g {
            return Ok(Some(format!("retraction does not split at {g:?}")));
        }
        let stabilized = super::stabilization_embed(
            &i,
            if extra == 1 { super::StabMode::Line } else { super::StabMode::Hyperbolic },
        );
        if stabilized
            != include(&super::stabilization_embed(
                g,
                if extra == 1 { super::StabMode::Line } else { super::StabMode::Hyperbolic },
            ))
        {
            return Ok(Some(format!("inclusion does not commute with stabilization at {g:?}")));
        }
    }
    let small_set = as_set(small.elements()?);
    let els = stab.elements()?;
    for a in els {
        let ra = retract(a);
        if !small_set.contains(&ra) {
            return Ok(Some(format!("retraction of {a:?} is not in the small group")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..64 {
        let (a, b) = (&els[rng.gen_range(0..els.len())], &els[rng.gen_range(0..els.len())]);
        if retract(&a.mul(b)) != retract(a).mul(&retract(b)) {
            return Ok(Some(format!("retraction is not multiplicative at {a:?}, {b:?}")));
        }
    }
    Ok(None)
}

/// The rank-0 retractions: restriction to V0, induced map on U^perp/U.
pub fn check_building_stab2(pairing: &Pairing, w0: &Subspace, opts: &SearchOptions) -> Result<Option<String>> {
    if pairing.rank_of(w0)? != 0 {
        return Err(Error::InvalidParameters("W0 must have rank 0".into()));
    }
    let g = pairing.group(opts)?;
    let gw = stabilizer(&g, w0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    match degenerate_isomorphism(pairing, &gw, &g, opts, &mut rng)? {
        None => Err(Error::InvalidParameters("rank-0 retractions exist for AT and Ai only".into())),
        Some(checks) => Ok(checks.into_iter().find(|c| !c.ok).map(|c| format!("{}: {}", c.name, c.witness))),
    }
}

/// The kernel of Ai(E, U)_W -> GL(W) against Ai(U^perp/U, W cap U^perp) through the explicit psi.
pub fn check_kernel_of_restriction(
    e: &FormedSpace,
    u: &Subspace,
    w: &Subspace,
    opts: &SearchOptions,
) -> Result<Option<String>> {
    let f = e.field();
    let n = e.dim();
    let uperp = e.perp(u);
    if !w.sum(&uperp).is_full() {
        return Err(Error::NotInBuilding("W + U^perp must be E".into()));
    }
    let ai = isometry_group(&Ambient::Formed(e.clone()), &Constraint::IsometryFixing(u.clone()), opts)?;
    let kernel: Vec<Matrix> = ai.elements()?.iter().filter(|g| fixes_pointwise(g, w)).cloned().collect();
    let qf = induced_quotient_form(e, u)?;
    let wq = quotient_image(&w.intersect(&uperp), &qf);
    let target = isometry_group(&Ambient::Formed(qf.space.clone()), &Constraint::IsometryFixing(wq), opts)?;

    // psi: C complements U^perp inside W; E = U + C + E'
    let c = Subspace::span(f, n, &w.intersect(&uperp).complement_in(w));
    let ep = decomp_complement(e, u, &c)?;
    let epb = ep.basis_vectors();
    // E' -> U^perp/U is an isomorphism; P has the images as columns
    let p = Matrix::from_cols(
        f,
        &epb.iter().map(|v| qf.projection.matrix.mul_vec(&uperp.coordinates(v))).collect::<Vec<_>>(),
        qf.space.dim(),
    );
    let p_inv = p.inverse().ok_or_else(|| Error::SequenceBroken("E' does not project onto U^perp/U".into()))?;
    let mut basis = u.basis_vectors();
    basis.extend(c.basis_vectors());
    basis.extend(epb.iter().cloned());
    let fixed = u.dim() + c.dim();
    let psi = |h: &Matrix| from_adapted(&basis, &Matrix::identity(f, fixed).block_diag(&p_inv.mul(h).mul(&p)));

    let kset = as_set(&kernel);
    for h in target.elements()? {
        let x = psi(h);
        if !kset.contains(&x) {
            return Ok(Some(format!("psi({h:?}) = {x:?} is not in the kernel")));
        }
        if induced_on_quotient(&x, &qf).as_ref() != Some(h) {
            return Ok(Some(format!("phi(psi(h)) != h at {h:?}")));
        }
    }
    for k in &kernel {
        let h = induced_on_quotient(k, &qf).expect("kernel preserves U^perp");
        if psi(&h) != *k {
            return Ok(Some(format!("psi(phi(k)) != k at {k:?}")));
        }
    }
    if kernel.len() != target.elements()?.len() {
        return Ok(Some(format!("|K| = {} but |Ai(U^perp/U, .)| = {}", kernel.len(), target.elements()?.len())));
    }
    debug_assert!(kernel.iter().all(|k| preserves_form(e, k)));
    Ok(None)
}
