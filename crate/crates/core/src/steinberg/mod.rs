//! Steinberg modules as top homology of buildings, with their group actions.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::groups::{
    linear_group, poset_permutation, restriction_to, stabilizer, Constraint, MatrixGroup, Pairing, SearchOptions,
};
use crate::homology::{reduced_homology, HomologyGroup, IntMatrix, KernelBasis, OrderComplex};
use crate::linalg::{Matrix, Subspace};
use crate::poset::{gl_building, join_decomposition_map, relative_building, FinitePoset, Label};

/// Top homology of a subspace poset with an action of matrices on it.
#[derive(Clone, Debug)]
pub struct HomologyModuleWithAction {
    pub poset: FinitePoset<Subspace>,
    pub degree: isize,
    complex: OrderComplex,
    /// columns are the basis cycles, from the SNF kernel basis
    pub kernel: KernelBasis,
    pub generators: Vec<Matrix>,
    pub actions: Vec<IntMatrix>,
}

impl HomologyModuleWithAction {
    /// Top homology of `poset` in `degree` (nothing lies above, so cycles are classes).
    pub fn top(poset: FinitePoset<Subspace>, degree: isize, cap: u128) -> Result<Self> {
        let complex = OrderComplex::new(&poset, cap)?;
        if complex.top_degree() > degree {
            return Err(Error::InvalidParameters(format!(
                "degree {degree} is below the top degree {}",
                complex.top_degree()
            )));
        }
        let kernel = KernelBasis::of(&complex.boundary(degree))?;
        Ok(HomologyModuleWithAction { poset, degree, complex, kernel, generators: vec![], actions: vec![] })
    }

    pub fn rank(&self) -> usize {
        self.kernel.len()
    }

    /// Attaches generators and their action matrices.
    pub fn with_generators(mut self, generators: Vec<Matrix>) -> Result<Self> {
        self.actions = generators.iter().map(|g| induced_homology_action(g, &self)).collect::<Result<_>>()?;
        self.generators = generators;
        Ok(self)
    }
}

/// St(V) = H_{n-2}(P(V)), or St(V, V0) = H_{dim V0 - 1}(P(V, V0)); St(F^1) = Z from the empty poset.
pub fn steinberg(field: &Field, n: usize, v0: Option<&Subspace>, cap: u128) -> Result<HomologyModuleWithAction> {
    let (poset, degree) = match v0 {
        None => (gl_building(field, n, cap)?.poset, n as isize - 2),
        Some(v0) => (relative_building(field, n, v0, cap)?.poset, v0.dim() as isize - 1),
    };
    HomologyModuleWithAction::top(poset, degree, cap)
}

/// Steinberg module with the standard generators of GL(V) or AT(V, V0) attached.
pub fn steinberg_with_group(
    field: &Field,
    n: usize,
    v0: Option<&Subspace>,
    cap: u128,
) -> Result<HomologyModuleWithAction> {
    let c = match v0 {
        None => Constraint::GL,
        Some(v0) => Constraint::IdentityModulo(v0.clone()),
    };
    let gens = linear_group(field, n, &c)?.generators;
    steinberg(field, n, v0, cap)?.with_generators(gens)
}

/// Matrix of g on the module: push each basis cycle through the simplicial map and read off coordinates.
pub fn induced_homology_action(g: &Matrix, module: &HomologyModuleWithAction) -> Result<IntMatrix> {
    let perm = poset_permutation(g, &module.poset).map_err(|_| Error::NotAnAutomorphism)?;
    let d = module.degree;
    let simplices = module.complex.simplices(d);
    let k = module.rank();
    let mut out = IntMatrix::zeros(k, k);
    for col in 0..k {
        let z = module.kernel.cycle(col);
        let mut image = vec![0i64; simplices.len()];
        for (s, &c) in simplices.iter().zip(&z) {
            if c != 0 {
                let t = module.complex.map_simplex(d, s, &perm).ok_or(Error::NotAnAutomorphism)?;
                image[t] += c;
            }
        }
        let coords = module.kernel.coordinates(&image).ok_or(Error::NotAnAutomorphism)?;
        for (row, c) in coords.into_iter().enumerate() {
            out.set(row, col, c);
        }
    }
    Ok(out)
}

/// M_G = M / span{(g - 1) m} over the attached generators.
pub fn coinvariants(module: &HomologyModuleWithAction) -> HomologyGroup {
    let k = module.rank();
    let id = IntMatrix::identity(k);
    let mut m = IntMatrix::zeros(k, k * module.actions.len());
    for (a, rho) in module.actions.iter().enumerate() {
        let diff = rho.sub(&id);
        for i in 0..k {
            for j in 0..k {
                m.set(i, a * k + j, *diff.get(i, j));
            }
        }
    }
    HomologyGroup::cokernel(0, &m)
}

/// rho(g h) = rho(g) rho(h) on random products of the given elements.
pub fn check_functoriality(
    module: &HomologyModuleWithAction,
    pool: &[Matrix],
    pairs: usize,
    seed: u64,
) -> Result<Option<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let (g, h) = (&pool[rng.gen_range(0..pool.len())], &pool[rng.gen_range(0..pool.len())]);
        let lhs = induced_homology_action(&g.mul(h), module)?;
        let rhs = induced_homology_action(g, module)?.mul(&induced_homology_action(h, module)?);
        if lhs != rhs {
            return Ok(Some(format!("rho(gh) != rho(g) rho(h) for g = {g:?}, h = {h:?}")));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct KunnethReport {
    pub v0_dim: usize,
    pub u_dim: usize,
    pub rank_relative: usize,
    pub rank_quotient: usize,
    pub rank_lower: usize,
    pub rank_join: usize,
    pub torsion_free: bool,
    /// |det| of the map induced by the join decomposition on top homology
    pub phi_det: String,
}

impl KunnethReport {
    pub fn holds(&self) -> bool {
        self.torsion_free
            && self.rank_relative == self.rank_quotient * self.rank_lower
            && self.rank_join == self.rank_relative
            && self.phi_det == "1"
    }
}

fn top_is_free<T: Label>(p: &FinitePoset<T>, degree: isize, cap: u128) -> Result<bool> {
    let h = reduced_homology(p, cap)?;
    Ok(h.iter().all(|g| g.is_free() && (g.degree == degree || g.is_zero())))
}

/// rank St(V, V0) = rank St(V/U, V0/U) * rank St(V, U), with phi inducing an isomorphism on top homology.
pub fn kunneth_rank_check(field: &Field, n: usize, v0: &Subspace, u: &Subspace, cap: u128) -> Result<KunnethReport> {
    let (src, target, phi) = join_decomposition_map(field, n, v0, u, cap)?;
    let degree = v0.dim() as isize - 1;
    let qm = crate::linalg::quotient_coordinates(n, u);
    let quotient = steinberg(field, n - u.dim(), Some(&v0.image(&qm.proj)), cap)?;
    let lower = steinberg(field, n, Some(u), cap)?;
    let relative = HomologyModuleWithAction::top(src.poset.clone(), degree, cap)?;

    let oc_src = OrderComplex::new(&src.poset, cap)?;
    let oc_tgt = OrderComplex::new(&target, cap)?;
    if oc_tgt.top_degree() > degree {
        return Err(Error::InvalidParameters("join has unexpected dimension".into()));
    }
    let join_kernel = KernelBasis::of(&oc_tgt.boundary(degree))?;
    // phi_* on top cycles; degenerate images vanish
    let k = relative.rank();
    let mut m = IntMatrix::zeros(join_kernel.len(), k);
    let tgt_simplices = oc_tgt.simplices(degree);
    for col in 0..k {
        let z = relative.kernel.cycle(col);
        let mut image = vec![0i64; tgt_simplices.len()];
        for (s, &c) in oc_src.simplices(degree).iter().zip(&z) {
            if c != 0 {
                if let Some(t) = oc_tgt.map_simplex(degree, s, &phi.assignment) {
                    image[t] += c;
                }
            }
        }
        let coords = join_kernel
            .coordinates(&image)
            .ok_or_else(|| Error::InvalidParameters("image of a cycle is not a cycle".into()))?;
        for (row, c) in coords.into_iter().enumerate() {
            m.set(row, col, c);
        }
    }
    let phi_det = if m.rows() == m.cols() { m.to_big().det().abs().to_string() } else { "non-square".into() };
    let torsion_free = top_is_free(&src.poset, degree, cap)?
        && top_is_free(&quotient.poset, quotient.degree, cap)?
        && top_is_free(&lower.poset, lower.degree, cap)?;
    Ok(KunnethReport {
        v0_dim: v0.dim(),
        u_dim: u.dim(),
        rank_relative: k,
        rank_quotient: quotient.rank(),
        rank_lower: lower.rank(),
        rank_join: join_kernel.len(),
        torsion_free,
        phi_det,
    })
}

/// Kernel elements of the restriction to W act trivially on St(W, W cap V0) (resp. St(W, W cap U^perp)).
pub fn stabilizer_action_factors(
    pairing: &Pairing,
    w: &Subspace,
    opts: &SearchOptions,
    cap: u128,
) -> Result<Option<String>> {
    let w0 = match pairing {
        Pairing::AT { v0, .. } => w.intersect(v0),
        Pairing::IsometryFixing(e, u) => w.intersect(&e.perp(u)),
        _ => return Err(Error::InvalidParameters("only the AT and Ai rows have a relative Steinberg quotient".into())),
    };
    let coords: Vec<_> = w0.basis_vectors().iter().map(|v| w.coordinates(v)).collect();
    let w0c = Subspace::span(w.field(), w.dim(), &coords);
    let module = steinberg(w.field(), w.dim(), Some(&w0c), cap)?;
    let g: MatrixGroup = pairing.group(opts)?;
    let gw = stabilizer(&g, w)?;
    let id = IntMatrix::identity(module.rank());
    for x in gw.elements()? {
        let r = restriction_to(x, w).expect("stabilizer preserves W");
        let rho = induced_homology_action(&r, &module)?;
        if r.is_identity() && rho != id {
            return Ok(Some(format!("kernel element {x:?} acts nontrivially")));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests;
