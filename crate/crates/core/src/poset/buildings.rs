use std::collections::HashSet;

use super::{FinitePoset, Joined, PosetMap};
use crate::error::{cap_check, Error, Result};
use crate::forms::{induced_quotient_form, FormedSpace};
use crate::gf::Field;
use crate::linalg::{enumerate_subspaces, gaussian_binomial, quotient_coordinates, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuildingKind {
    /// P(V) = {0 < W < V}
    GL,
    /// {0 < W <= V}
    GLBar,
    /// P(V, V0) = {W < V : W + V0 = V}
    Relative,
    /// {W <= V : W + V0 = V}
    RelativeBar,
    /// {W < V : W meets V0 trivially}, ordered by reverse inclusion
    RelativeBarT,
    /// isotropic W with R(E) < W
    Isotropic,
    /// isotropic W with R(E) < W and W + U^perp = E
    IsotropicRelative,
}

impl BuildingKind {
    pub fn name(self) -> &'static str {
        match self {
            BuildingKind::GL => "P(V)",
            BuildingKind::GLBar => "Pbar(V)",
            BuildingKind::Relative => "P(V,V0)",
            BuildingKind::RelativeBar => "Pbar(V,V0)",
            BuildingKind::RelativeBarT => "PbarT(V,V0)",
            BuildingKind::Isotropic => "Pi(E)",
            BuildingKind::IsotropicRelative => "Pi(E,U)",
        }
    }
}

/// A building together with the data it was built from.
#[derive(Clone, Debug)]
pub struct Building {
    pub kind: BuildingKind,
    pub poset: FinitePoset<Subspace>,
    pub field: Field,
    pub n: usize,
    pub v0: Option<Subspace>,
    pub space: Option<FormedSpace>,
    pub u: Option<Subspace>,
    radical_dim: usize,
    genus: usize,
}

impl Building {
    /// Dimension predicted by the rank table.
    pub fn expected_dim(&self) -> isize {
        let n = self.n as isize;
        let d0 = self.v0.as_ref().map_or(0, |v| v.dim() as isize);
        let (g, r) = (self.genus as isize, self.radical_dim as isize);
        match self.kind {
            BuildingKind::GL => n - 2,
            BuildingKind::GLBar => n - 1,
            BuildingKind::Relative => d0 - 1,
            BuildingKind::RelativeBar => d0,
            BuildingKind::RelativeBarT => n - d0,
            BuildingKind::Isotropic => g - 1,
            BuildingKind::IsotropicRelative => g - self.u.as_ref().unwrap().dim() as isize + r,
        }
    }

    /// Rank predicted by the rank table.
    pub fn expected_rank(&self, w: &Subspace) -> isize {
        let d = w.dim() as isize;
        match self.kind {
            BuildingKind::GL | BuildingKind::GLBar => d - 1,
            BuildingKind::Relative | BuildingKind::RelativeBar => w.intersect(self.v0.as_ref().unwrap()).dim() as isize,
            BuildingKind::RelativeBarT => self.n as isize - d - self.v0.as_ref().unwrap().dim() as isize,
            BuildingKind::Isotropic => d - self.radical_dim as isize - 1,
            BuildingKind::IsotropicRelative => d - self.u.as_ref().unwrap().dim() as isize,
        }
    }

    /// Dimension and every rank agree with the table.
    pub fn matches_rank_table(&self) -> bool {
        (self.poset.is_empty() || self.poset.dim() == self.expected_dim())
            && (0..self.poset.len()).all(|i| self.poset.rank(i) as isize == self.expected_rank(self.poset.element(i)))
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Membership predicate of the defining set.
    pub fn admits(&self, w: &Subspace) -> bool {
        let n = self.n;
        let d = w.dim();
        match self.kind {
            BuildingKind::GL => d > 0 && d < n,
            BuildingKind::GLBar => d > 0,
            BuildingKind::Relative => d < n && w.sum(self.v0.as_ref().unwrap()).is_full(),
            BuildingKind::RelativeBar => w.sum(self.v0.as_ref().unwrap()).is_full(),
            BuildingKind::RelativeBarT => d < n && w.intersect(self.v0.as_ref().unwrap()).is_zero(),
            BuildingKind::Isotropic | BuildingKind::IsotropicRelative => {
                let e = self.space.as_ref().unwrap();
                let ok = d < n && d > self.radical_dim && e.is_isotropic(w) && w.contains(&e.radical().unwrap());
                ok && (self.kind == BuildingKind::Isotropic || w.sum(&e.perp(self.u.as_ref().unwrap())).is_full())
            }
        }
    }
}

fn all_subspaces(
    field: &Field,
    n: usize,
    dims: impl Iterator<Item = usize> + Clone,
    cap: u128,
) -> Result<Vec<Subspace>> {
    let total: u128 = dims.clone().map(|k| gaussian_binomial(n, k, field.q())).sum();
    cap_check("subspace enumeration", total, cap)?;
    let mut out = Vec::new();
    for k in dims {
        out.extend(enumerate_subspaces(field, n, k, cap)?);
    }
    Ok(out)
}

fn by_inclusion(elements: Vec<Subspace>) -> Result<FinitePoset<Subspace>> {
    FinitePoset::from_relation(elements, |a, b| a.dim() <= b.dim() && b.contains(a))
}

fn plain(kind: BuildingKind, field: &Field, n: usize, v0: Option<Subspace>, poset: FinitePoset<Subspace>) -> Building {
    Building { kind, poset, field: field.clone(), n, v0, space: None, u: None, radical_dim: 0, genus: 0 }
}

pub fn gl_building(field: &Field, n: usize, cap: u128) -> Result<Building> {
    let els = all_subspaces(field, n, 1..n, cap)?;
    Ok(plain(BuildingKind::GL, field, n, None, by_inclusion(els)?))
}

pub fn gl_building_bar(field: &Field, n: usize, cap: u128) -> Result<Building> {
    let els = all_subspaces(field, n, 1..n + 1, cap)?;
    Ok(plain(BuildingKind::GLBar, field, n, None, by_inclusion(els)?))
}

fn check_v0(field: &Field, n: usize, v0: &Subspace) -> Result<()> {
    if v0.ambient_dim() != n {
        return Err(Error::AmbientMismatch(v0.ambient_dim(), n));
    }
    if v0.field() != field {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

pub fn relative_building(field: &Field, n: usize, v0: &Subspace, cap: u128) -> Result<Building> {
    check_v0(field, n, v0)?;
    let els: Vec<Subspace> = all_subspaces(field, n, 0..n, cap)?.into_iter().filter(|w| w.sum(v0).is_full()).collect();
    Ok(plain(BuildingKind::Relative, field, n, Some(v0.clone()), by_inclusion(els)?))
}

pub fn relative_building_bar(field: &Field, n: usize, v0: &Subspace, cap: u128) -> Result<Building> {
    check_v0(field, n, v0)?;
    let els: Vec<Subspace> =
        all_subspaces(field, n, 0..n + 1, cap)?.into_iter().filter(|w| w.sum(v0).is_full()).collect();
    Ok(plain(BuildingKind::RelativeBar, field, n, Some(v0.clone()), by_inclusion(els)?))
}

pub fn relative_building_bar_t(field: &Field, n: usize, v0: &Subspace, cap: u128) -> Result<Building> {
    check_v0(field, n, v0)?;
    let els: Vec<Subspace> =
        all_subspaces(field, n, 0..n, cap)?.into_iter().filter(|w| w.intersect(v0).is_zero()).collect();
    let poset = FinitePoset::from_relation(els, |a, b| a.dim() >= b.dim() && a.contains(b))?;
    Ok(plain(BuildingKind::RelativeBarT, field, n, Some(v0.clone()), poset))
}

/// All isotropic subspaces strictly containing R(E) and strictly inside E.
fn isotropic_above_radical(e: &FormedSpace, cap: u128) -> Result<Vec<Subspace>> {
    let f = e.field();
    let n = e.dim();
    let rad = e.radical()?;
    let mut out = Vec::new();
    let mut level = vec![rad.clone()];
    while !level.is_empty() {
        let mut next: HashSet<Subspace> = HashSet::new();
        for w in &level {
            let perp = e.perp(w);
            cap_check("isotropic vector scan", perp.cardinality(), cap.max(1 << 20))?;
            for v in projective_points(&perp) {
                if w.contains_vector(&v) || !e.is_isotropic_vector(&v) {
                    continue;
                }
                let bigger = w.sum(&Subspace::span(f, n, &[v]));
                if bigger.dim() < n {
                    next.insert(bigger);
                }
            }
        }
        let mut next: Vec<Subspace> = next.into_iter().collect();
        next.sort();
        out.extend(next.iter().cloned());
        cap_check("isotropic building", out.len() as u128, cap)?;
        level = next;
    }
    Ok(out)
}

/// Vectors of `s` whose first nonzero coordinate is 1.
fn projective_points(s: &Subspace) -> impl Iterator<Item = Vector> + '_ {
    s.vectors().filter(|v| v.iter().find(|&&c| c != 0) == Some(&1))
}

pub fn isotropic_building(e: &FormedSpace, cap: u128) -> Result<Building> {
    let rad = e.radical()?;
    let els = isotropic_above_radical(e, cap)?;
    let genus = e.genus()?;
    Ok(Building {
        kind: BuildingKind::Isotropic,
        poset: by_inclusion(els)?,
        field: e.field().clone(),
        n: e.dim(),
        v0: None,
        space: Some(e.clone()),
        u: None,
        radical_dim: rad.dim(),
        genus,
    })
}

/// Pi(E, U) for isotropic U containing R(E); U = R(E) gives Pi(E).
pub fn isotropic_relative_building(e: &FormedSpace, u: &Subspace, cap: u128) -> Result<Building> {
    let rad = e.radical()?;
    if !e.is_isotropic(u) || !u.contains(&rad) || u.dim() >= e.dim() {
        return Err(Error::NotInBuilding(format!("U = {u:?} must be isotropic and contain R(E)")));
    }
    let uperp = e.perp(u);
    let els: Vec<Subspace> = isotropic_above_radical(e, cap)?.into_iter().filter(|w| w.sum(&uperp).is_full()).collect();
    let genus = e.genus()?;
    Ok(Building {
        kind: BuildingKind::IsotropicRelative,
        poset: by_inclusion(els)?,
        field: e.field().clone(),
        n: e.dim(),
        v0: None,
        space: Some(e.clone()),
        u: Some(u.clone()),
        radical_dim: rad.dim(),
        genus,
    })
}

/// phi: P(V, V0) -> P(V/U, V0/U) * P(V, U), W -> W/U if W + U < V, else W.
pub fn join_decomposition_map(
    field: &Field,
    n: usize,
    v0: &Subspace,
    u: &Subspace,
    cap: u128,
) -> Result<(Building, FinitePoset<Joined<Subspace>>, PosetMap)> {
    if !v0.contains(u) {
        return Err(Error::InvalidParameters("need U <= V0".into()));
    }
    let src = relative_building(field, n, v0, cap)?;
    let qm = quotient_coordinates(n, u);
    let m = n - u.dim();
    let lower = relative_building(field, m, &v0.image(&qm.proj), cap)?;
    let upper = relative_building(field, n, u, cap)?;
    let target = lower.poset.join(&upper.poset)?;
    let assignment = src
        .poset
        .elements()
        .iter()
        .map(|w| {
            let label = if w.sum(u).is_full() { Joined::Upper(w.clone()) } else { Joined::Lower(w.image(&qm.proj)) };
            target.index_of(&label).ok_or_else(|| Error::NotInBuilding(format!("{label:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((src, target, PosetMap { assignment }))
}

/// Pi(E) -> Pi(E / R(E)) through the quotient form.
pub fn quotient_building_map(e: &FormedSpace, cap: u128) -> Result<(Building, Building, PosetMap)> {
    let rad = e.radical()?;
    let qf = induced_quotient_form(e, &rad)?;
    let src = isotropic_building(e, cap)?;
    let tgt = isotropic_building(&qf.space, cap)?;
    // Z = R(E) lies in the kernel, so Z^perp = E and the perp basis is the identity
    debug_assert!(qf.perp_basis.is_identity());
    let assignment = src
        .poset
        .elements()
        .iter()
        .map(|w| {
            let img = w.image(&qf.projection.matrix);
            tgt.poset.index_of(&img).ok_or_else(|| Error::NotInBuilding(format!("{img:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((src, tgt, PosetMap { assignment }))
}

/// Pads W inside F^n to F^(n + extra) along the first coordinates.
pub fn pad_subspace(w: &Subspace, extra: usize) -> Subspace {
    let n = w.ambient_dim();
    let rows: Vec<Vector> = w
        .basis_vectors()
        .into_iter()
        .map(|mut v| {
            v.resize(n + extra, 0);
            v
        })
        .collect();
    Subspace::span(w.field(), n + extra, &rows)
}

/// W -> W along the inclusion of the source ambient space as the first coordinates of the target.
pub fn stabilization_inclusion(src: &Building, tgt: &Building) -> Result<PosetMap> {
    if tgt.n < src.n {
        return Err(Error::AmbientMismatch(src.n, tgt.n));
    }
    let extra = tgt.n - src.n;
    let assignment = src
        .poset
        .elements()
        .iter()
        .map(|w| {
            let img = pad_subspace(w, extra);
            tgt.poset.index_of(&img).ok_or_else(|| Error::NotInBuilding(format!("{img:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PosetMap { assignment })
}
