use super::{FormedSpace, IsometryMap, DEFAULT_SCAN_CAP};
use crate::error::{cap_check, Error, Result};
use crate::linalg::{quotient_coordinates, vec_axpy, vec_scale, Matrix, Subspace, Vector};

/// The form on Z^perp / Z together with the projection from Z^perp.
#[derive(Clone, Debug)]
pub struct QuotientForm {
    pub space: FormedSpace,
    /// echelon basis of Z^perp (rows); source coordinates of `projection`
    pub perp_basis: Matrix,
    pub projection: IsometryMap,
    /// lifts of the quotient basis, as vectors of E
    pub lifts: Vec<Vector>,
}

pub fn induced_quotient_form(e: &FormedSpace, z: &Subspace) -> Result<QuotientForm> {
    if !e.is_isotropic(z) {
        return Err(Error::NotIsotropic);
    }
    let perp = e.perp(z);
    let b = perp.basis().clone();
    let zc = z.to_coordinates(&b);
    let qm = quotient_coordinates(perp.dim(), &zc);
    let lifts: Vec<Vector> = qm.section.col_vecs().iter().map(|c| b.transpose().mul_vec(c)).collect();
    let space = e.restrict_to(&lifts);
    let source = e.restrict(&perp);
    let projection = IsometryMap::new(&source, &space, qm.proj);
    Ok(QuotientForm { space, perp_basis: b, projection, lifts })
}

/// An isotropic Z with E = U^perp + Z (direct), Z containing z0 and meeting R(E) trivially.
pub fn isotropic_complement(e: &FormedSpace, u: &Subspace, z0: Option<&Subspace>) -> Result<Subspace> {
    let f = e.field();
    let n = e.dim();
    if !e.is_isotropic(u) {
        return Err(Error::NotIsotropic);
    }
    let uperp = e.perp(u);
    let z0 = z0.cloned().unwrap_or_else(|| Subspace::zero(f, n));
    if !e.is_isotropic(&z0) || !uperp.intersect(&z0).is_zero() {
        return Err(Error::BadZ0);
    }
    // U' complements U ∩ R(E) in U and has the same perp.
    let rad = e.radical()?;
    let u_basis = u.intersect(&rad).complement_in(u);
    let mut xs = z0.basis_vectors();
    xs.extend(uperp.sum(&z0).complement_in(&Subspace::full(f, n)));
    let m = xs.len();
    debug_assert_eq!(m, u_basis.len());
    if m == 0 {
        return Ok(Subspace::zero(f, n));
    }
    // w_j = sum_l (G^-1)_{lj} u_l with G_il = omega(x_i, u_l), so omega(x_i, w_j) = delta_ij
    let g = Matrix::from_fn(f, m, m, |i, l| e.omega_value(&xs[i], &u_basis[l]));
    let ginv = g.inverse().ok_or(Error::Degenerate)?;
    let ws: Vec<Vector> =
        (0..m).map(|j| (0..m).fold(vec![0; n], |acc, l| vec_axpy(f, &acc, ginv.get(l, j), &u_basis[l]))).collect();
    let ys: Vec<Vector> = (0..m)
        .map(|j| {
            let c = e.Q_value(&xs[j]).0;
            let mut y = vec_axpy(f, &xs[j], f.neg(c), &ws[j]);
            for k in 0..j {
                y = vec_axpy(f, &y, f.neg(e.omega_value(&xs[k], &xs[j])), &ws[k]);
            }
            y
        })
        .collect();
    Ok(Subspace::span(f, n, &ys))
}

/// For isotropic W containing R(E) and a complement C of W^perp, a subspace E' with
/// E = W + C + E', W^perp = W + E' and E' orthogonal to W + C.
pub fn decomp_complement(e: &FormedSpace, w: &Subspace, c: &Subspace) -> Result<Subspace> {
    if !e.is_isotropic(w) {
        return Err(Error::NotIsotropic);
    }
    let rad = e.radical()?;
    if !w.contains(&rad) {
        return Err(Error::NotInBuilding("W must contain the radical".into()));
    }
    let wperp = e.perp(w);
    if !wperp.intersect(c).is_zero() || wperp.dim() + c.dim() != e.dim() {
        return Err(Error::InvalidParameters("C is not a complement of W^perp".into()));
    }
    let target = e.perp(&w.sum(c));
    Ok(Subspace::span(e.field(), e.dim(), &rad.complement_in(&target)))
}

#[derive(Clone, Debug)]
pub struct WittDecomposition {
    pub radical: Subspace,
    pub genus: usize,
    pub pairs: Vec<(Vector, Vector)>,
    pub anisotropic: FormedSpace,
    pub anisotropic_basis: Vec<Vector>,
    /// from zero(dim R) + H^g + anisotropic to E
    pub witness: IsometryMap,
}

pub fn witt_decompose(e: &FormedSpace) -> Result<WittDecomposition> {
    witt_decompose_with_cap(e, DEFAULT_SCAN_CAP)
}

pub fn witt_decompose_with_cap(e: &FormedSpace, cap: u128) -> Result<WittDecomposition> {
    let f = e.field();
    let n = e.dim();
    let eps_inv = f.conj(e.params().epsilon());
    let rad = e.radical()?;
    let ker = e.kernel();
    let mut l = crate::linalg::Subspace::full(f, n);
    let mut pairs = Vec::new();
    loop {
        cap_check("isotropic vector scan", l.cardinality(), cap)?;
        let Some(v) = l.vectors().find(|v| !ker.contains_vector(v) && e.is_isotropic_vector(v)) else {
            break;
        };
        let (b, a) = l
            .basis_vectors()
            .into_iter()
            .map(|b| {
                let a = e.omega_value(&v, &b);
                (b, a)
            })
            .find(|&(_, a)| a != 0)
            .expect("v lies outside the kernel of L");
        let w = vec_scale(f, f.inv(a), &b);
        let c = e.Q_value(&w).0;
        let w = vec_axpy(f, &w, f.neg(f.mul(eps_inv, c)), &v);
        let pair = Subspace::span(f, n, &[v.clone(), w.clone()]);
        l = l.intersect(&e.perp(&pair));
        pairs.push((v, w));
    }
    let anis_basis = rad.complement_in(&l);
    let anisotropic = e.restrict_to(&anis_basis);
    let mut cols = rad.basis_vectors();
    for (v, w) in &pairs {
        cols.push(v.clone());
        cols.push(w.clone());
    }
    cols.extend(anis_basis.iter().cloned());
    let model = FormedSpace::zero(e.params(), rad.dim())
        .direct_sum(&FormedSpace::hyperbolic(e.params(), pairs.len()))?
        .direct_sum(&anisotropic)?;
    let witness = IsometryMap::new(&model, e, Matrix::from_cols(f, &cols, n));
    Ok(WittDecomposition {
        radical: rad,
        genus: pairs.len(),
        pairs,
        anisotropic,
        anisotropic_basis: anis_basis,
        witness,
    })
}
