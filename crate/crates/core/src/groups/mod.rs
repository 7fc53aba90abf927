//! Finite matrix groups at desk scale: enumeration, closure, orbits, stabilizers.

mod abelian;
mod sequences;

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{cap_check, Error, Result};
use crate::forms::{preserves_form, FormedSpace};
use crate::gf::{Elem, Field};
use crate::linalg::{all_vectors, unit_vector, Matrix, Subspace, Vector};
use crate::poset::{pad_subspace, FinitePoset};

pub use abelian::{abelianization, derived_subgroup};
pub use sequences::{
    check_a_at_duality, check_aat_inclusions, check_building_stab1, check_building_stab2, check_kernel_of_restriction,
    check_stabilizer_sequence, induced_on_quotient, restriction_to, Pairing, SequenceReport,
};

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// The space a group acts on.
#[derive(Clone, Debug)]
pub enum Ambient {
    Plain { field: Field, n: usize },
    Formed(FormedSpace),
}

impl Ambient {
    pub fn plain(field: &Field, n: usize) -> Ambient {
        Ambient::Plain { field: field.clone(), n }
    }
    pub fn field(&self) -> &Field {
        match self {
            Ambient::Plain { field, .. } => field,
            Ambient::Formed(e) => e.field(),
        }
    }
    pub fn dim(&self) -> usize {
        match self {
            Ambient::Plain { n, .. } => *n,
            Ambient::Formed(e) => e.dim(),
        }
    }
    pub fn form(&self) -> Option<&FormedSpace> {
        match self {
            Ambient::Plain { .. } => None,
            Ambient::Formed(e) => Some(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// GL(V)
    GL,
    /// isometries of E
    Isometry,
    /// A(V, V0): identity on V0
    FixPointwise(Subspace),
    /// AT(V, V0): preserves V0, identity on V/V0
    IdentityModulo(Subspace),
    /// Ai(E, U): isometries that are the identity on U
    IsometryFixing(Subspace),
}

impl Constraint {
    pub fn name(&self) -> &'static str {
        match self {
            Constraint::GL => "GL",
            Constraint::Isometry => "Gamma_i",
            Constraint::FixPointwise(_) => "A",
            Constraint::IdentityModulo(_) => "AT",
            Constraint::IsometryFixing(_) => "Ai",
        }
    }

    fn subspace(&self) -> Option<&Subspace> {
        match self {
            Constraint::FixPointwise(s) | Constraint::IdentityModulo(s) | Constraint::IsometryFixing(s) => Some(s),
            _ => None,
        }
    }

    /// Membership predicate, invertibility included.
    pub fn admits(&self, ambient: &Ambient, g: &Matrix) -> bool {
        let n = ambient.dim();
        if g.nrows() != n || g.ncols() != n || !g.is_invertible() {
            return false;
        }
        let form_ok = |e: Option<&FormedSpace>| e.is_some_and(|e| preserves_form(e, g));
        match self {
            Constraint::GL => true,
            Constraint::Isometry => form_ok(ambient.form()),
            Constraint::FixPointwise(v0) => fixes_pointwise(g, v0),
            Constraint::IdentityModulo(v0) => identity_modulo(g, v0),
            Constraint::IsometryFixing(u) => form_ok(ambient.form()) && fixes_pointwise(g, u),
        }
    }
}

pub fn fixes_pointwise(g: &Matrix, w: &Subspace) -> bool {
    w.basis_vectors().iter().all(|v| &g.mul_vec(v) == v)
}

/// g W = W and (g - 1) V lies in W.
pub fn identity_modulo(g: &Matrix, w: &Subspace) -> bool {
    let n = g.nrows();
    let d = g.sub(&Matrix::identity(g.field(), n));
    w.image(g) == *w && (0..n).all(|j| w.contains_vector(&d.col(j)))
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub ambient: Ambient,
    pub constraint: Constraint,
    /// further refinement: g W = W for each listed W
    pub stabilized: Vec<Subspace>,
    pub generators: Vec<Matrix>,
    elements: Option<Vec<Matrix>>,
    order: Option<u128>,
}

impl MatrixGroup {
    /// Group with a known full element list; generators are drawn from it.
    pub fn from_elements(
        ambient: Ambient,
        constraint: Constraint,
        stabilized: Vec<Subspace>,
        mut elements: Vec<Matrix>,
        seed: u64,
    ) -> Self {
        elements.sort();
        elements.dedup();
        let generators = generating_set(&elements, ambient.field(), ambient.dim(), seed);
        let order = Some(elements.len() as u128);
        MatrixGroup { ambient, constraint, stabilized, generators, elements: Some(elements), order }
    }

    /// Group known only through generators (and possibly its order).
    pub fn from_generators(
        ambient: Ambient,
        constraint: Constraint,
        generators: Vec<Matrix>,
        order: Option<u128>,
    ) -> Self {
        MatrixGroup { ambient, constraint, stabilized: vec![], generators, elements: None, order }
    }

    pub fn field(&self) -> &Field {
        self.ambient.field()
    }
    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }
    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.field(), self.dim())
    }
    pub fn order(&self) -> Option<u128> {
        self.order
    }
    pub fn has_elements(&self) -> bool {
        self.elements.is_some()
    }
    pub fn elements(&self) -> Result<&[Matrix]> {
        self.elements.as_deref().ok_or(Error::ElementsUnavailable)
    }

    pub fn contains(&self, g: &Matrix) -> bool {
        self.constraint.admits(&self.ambient, g) && self.stabilized.iter().all(|w| w.image(g) == *w)
    }

    /// Materializes the element list by closure if needed.
    pub fn materialize(&mut self, cap: usize) -> Result<()> {
        if self.elements.is_none() {
            let els = group_closure(self.field(), self.dim(), &self.generators, cap)?;
            self.order = Some(els.len() as u128);
            self.elements = Some(els);
        }
        Ok(())
    }

    /// Elements or, failing that, the generators.
    pub fn sample_pool(&self) -> &[Matrix] {
        self.elements.as_deref().unwrap_or(&self.generators)
    }

    /// The full element list is closed under products and inverses.
    pub fn is_closed(&self) -> Result<bool> {
        let els = self.elements()?;
        let set: HashSet<&Matrix> = els.iter().collect();
        Ok(els.iter().all(|g| g.inverse().is_some_and(|gi| set.contains(&gi)))
            && self.generators.iter().all(|s| els.iter().all(|g| set.contains(&g.mul(s)))))
    }
}

/// Options for the backtracking enumeration.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub element_cap: usize,
    /// limit on visited search nodes
    pub node_cap: u128,
    pub seed: u64,
    /// random elements drawn when the group exceeds the element cap
    pub samples: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { element_cap: DEFAULT_ELEMENT_CAP, node_cap: 50_000_000, seed: 0, samples: 12 }
    }
}

struct Search<'a> {
    field: Field,
    n: usize,
    b_inv: Matrix,
    /// candidate images of the j-th adapted basis vector
    cands: Vec<Vec<Vector>>,
    form: Option<&'a FormedSpace>,
    /// omega(b_i, b_j)
    omega_b: Vec<Vec<Elem>>,
}

impl<'a> Search<'a> {
    fn new(ambient: &'a Ambient, constraint: &Constraint) -> Result<Self> {
        let field = ambient.field().clone();
        let n = ambient.dim();
        let form = match constraint {
            Constraint::Isometry | Constraint::IsometryFixing(_) => Some(
                ambient.form().ok_or_else(|| Error::InvalidParameters("isometry constraint needs a form".into()))?,
            ),
            _ => None,
        };
        let sub = constraint.subspace().cloned().unwrap_or_else(|| Subspace::zero(&field, n));
        if sub.ambient_dim() != n {
            return Err(Error::AmbientMismatch(sub.ambient_dim(), n));
        }
        if let (Some(e), Constraint::IsometryFixing(u)) = (form, constraint) {
            if !e.is_isotropic(u) {
                return Err(Error::NotIsotropic);
            }
        }
        let k = sub.dim();
        let mut basis = sub.basis_vectors();
        basis.extend(sub.complement_in(&Subspace::full(&field, n)));
        let b = Matrix::from_cols(&field, &basis, n);
        let b_inv = b.inverse().expect("adapted basis");
        let everything: Vec<Vector> = all_vectors(&field, n).filter(|v| v.iter().any(|&c| c != 0)).collect();
        let cands: Vec<Vec<Vector>> = (0..n)
            .map(|j| {
                let raw: Vec<Vector> = match constraint {
                    Constraint::FixPointwise(_) | Constraint::IsometryFixing(_) if j < k => vec![basis[j].clone()],
                    Constraint::IdentityModulo(_) => {
                        let base = if j < k { vec![0; n] } else { basis[j].clone() };
                        sub.vectors()
                            .map(|s| crate::linalg::vec_add(&field, &base, &s))
                            .filter(|v| v.iter().any(|&c| c != 0))
                            .collect()
                    }
                    _ => everything.clone(),
                };
                match form {
                    Some(e) => {
                        let qb = e.Q_value(&basis[j]);
                        raw.into_iter().filter(|c| e.Q_value(c) == qb).collect()
                    }
                    None => raw,
                }
            })
            .collect();
        let omega_b = match form {
            Some(e) => (0..n).map(|i| (0..n).map(|j| e.omega_value(&basis[i], &basis[j])).collect()).collect(),
            None => vec![],
        };
        Ok(Search { field, n, b_inv, cands, form, omega_b })
    }

    fn fits(&self, chosen: &[Vector], span: &Subspace, c: &Vector) -> bool {
        if span.contains_vector(c) {
            return false;
        }
        match self.form {
            Some(e) => {
                let j = chosen.len();
                chosen.iter().enumerate().all(|(i, ci)| e.omega_value(ci, c) == self.omega_b[i][j])
            }
            None => true,
        }
    }

    fn finish(&self, chosen: &[Vector]) -> Matrix {
        Matrix::from_cols(&self.field, chosen, self.n).mul(&self.b_inv)
    }

    /// Depth-first enumeration; None once more than `cap` elements turn up.
    fn enumerate(&self, cap: usize, node_cap: u128) -> Result<Option<Vec<Matrix>>> {
        let mut out = Vec::new();
        let mut nodes: u128 = 0;
        let mut chosen: Vec<Vector> = Vec::new();
        let mut spans = vec![Subspace::zero(&self.field, self.n)];
        let mut cursor = vec![0usize];
        while let Some(&pos) = cursor.last() {
            let j = chosen.len();
            if j == self.n {
                out.push(self.finish(&chosen));
                if out.len() > cap {
                    return Ok(None);
                }
                cursor.pop();
                chosen.pop();
                spans.pop();
                continue;
            }
            match (pos..self.cands[j].len()).find(|&i| self.fits(&chosen, spans.last().unwrap(), &self.cands[j][i])) {
                Some(i) => {
                    nodes += 1;
                    cap_check("group search nodes", nodes, node_cap)?;
                    *cursor.last_mut().unwrap() = i + 1;
                    let c = self.cands[j][i].clone();
                    spans.push(spans.last().unwrap().sum(&Subspace::span(
                        &self.field,
                        self.n,
                        std::slice::from_ref(&c),
                    )));
                    chosen.push(c);
                    cursor.push(0);
                }
                None => {
                    cursor.pop();
                    if chosen.pop().is_some() {
                        spans.pop();
                    }
                }
            }
        }
        Ok(Some(out))
    }

    /// Knuth's unbiased estimate of the number of leaves, averaged over random descents.
    fn estimate(&self, rng: &mut impl Rng, probes: usize) -> f64 {
        let mut total = 0.0;
        for _ in 0..probes {
            let mut chosen: Vec<Vector> = Vec::new();
            let mut span = Subspace::zero(&self.field, self.n);
            let mut weight = 1.0;
            for j in 0..self.n {
                let ok: Vec<&Vector> = self.cands[j].iter().filter(|c| self.fits(&chosen, &span, c)).collect();
                if ok.is_empty() {
                    weight = 0.0;
                    break;
                }
                weight *= ok.len() as f64;
                let c = ok[rng.gen_range(0..ok.len())].clone();
                span = span.sum(&Subspace::span(&self.field, self.n, std::slice::from_ref(&c)));
                chosen.push(c);
            }
            total += weight;
        }
        total / probes as f64
    }

    /// A uniform-ish random element by random descent, restarting at dead ends.
    fn random_element(&self, rng: &mut impl Rng) -> Option<Matrix> {
        'attempt: for _ in 0..1000 {
            let mut chosen: Vec<Vector> = Vec::new();
            let mut span = Subspace::zero(&self.field, self.n);
            for j in 0..self.n {
                let ok: Vec<&Vector> = self.cands[j].iter().filter(|c| self.fits(&chosen, &span, c)).collect();
                if ok.is_empty() {
                    continue 'attempt;
                }
                let c = ok[rng.gen_range(0..ok.len())].clone();
                span = span.sum(&Subspace::span(&self.field, self.n, std::slice::from_ref(&c)));
                chosen.push(c);
            }
            return Some(self.finish(&chosen));
        }
        None
    }
}

/// Enumerates the group by backtracking over images of an adapted basis.
pub fn isometry_group(ambient: &Ambient, constraint: &Constraint, opts: &SearchOptions) -> Result<MatrixGroup> {
    let search = Search::new(ambient, constraint)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    // skip hopeless enumerations up front; the cap still guards the real run
    let hopeless = search.estimate(&mut rng, 64) > 4.0 * opts.element_cap as f64;
    let found = if hopeless { None } else { search.enumerate(opts.element_cap, opts.node_cap)? };
    match found {
        Some(els) => Ok(MatrixGroup::from_elements(ambient.clone(), constraint.clone(), vec![], els, opts.seed)),
        None => {
            let gens: Vec<Matrix> = (0..opts.samples).filter_map(|_| search.random_element(&mut rng)).collect();
            Ok(MatrixGroup::from_generators(ambient.clone(), constraint.clone(), gens, None))
        }
    }
}

/// |GL_n(F_q)|
pub fn gl_order(n: usize, q: u32) -> u128 {
    let q = q as u128;
    (0..n).map(|i| q.pow(n as u32) - q.pow(i as u32)).product()
}

/// Additive generators of F over F_p: the elements with a single digit 1.
fn additive_basis(field: &Field) -> Vec<Elem> {
    (0..field.r()).map(|i| field.p().pow(i)).collect()
}

fn gl_block_generators(field: &Field, n: usize) -> Vec<Matrix> {
    let mut gens = Vec::new();
    if n == 0 {
        return gens;
    }
    if field.q() > 2 {
        let mut d = Matrix::identity(field, n);
        d.set(0, 0, field.primitive());
        gens.push(d);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for &a in &additive_basis(field) {
                    let mut t = Matrix::identity(field, n);
                    t.set(i, j, a);
                    gens.push(t);
                }
            }
        }
    }
    gens
}

/// Explicit generators of GL, A(V, V0) or AT(V, V0), with the group order.
pub fn linear_group(field: &Field, n: usize, constraint: &Constraint) -> Result<MatrixGroup> {
    let q = field.q();
    let ambient = Ambient::plain(field, n);
    let (sub, k) = match constraint {
        Constraint::GL => (Subspace::zero(field, n), 0),
        Constraint::FixPointwise(s) | Constraint::IdentityModulo(s) => (s.clone(), s.dim()),
        _ => return Err(Error::InvalidParameters("linear_group takes GL, A or AT".into())),
    };
    let mut basis = sub.basis_vectors();
    basis.extend(sub.complement_in(&Subspace::full(field, n)));
    let b = Matrix::from_cols(field, &basis, n);
    let b_inv = b.inverse().expect("adapted basis");
    let embed = |m: &Matrix, at: usize| {
        let mut g = Matrix::identity(field, n);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                g.set(at + i, at + j, m.get(i, j));
            }
        }
        g
    };
    // in the adapted basis: A = [[1, *], [0, GL]], AT = [[GL, *], [0, 1]]
    let (block, at, order) = match constraint {
        Constraint::GL => (n, 0, gl_order(n, q)),
        Constraint::FixPointwise(_) => (n - k, k, (q as u128).pow((k * (n - k)) as u32) * gl_order(n - k, q)),
        _ => (k, 0, (q as u128).pow((k * (n - k)) as u32) * gl_order(k, q)),
    };
    let mut gens: Vec<Matrix> = gl_block_generators(field, block).iter().map(|m| embed(m, at)).collect();
    if !matches!(constraint, Constraint::GL) {
        for i in 0..k {
            for j in k..n {
                for &a in &additive_basis(field) {
                    let mut t = Matrix::identity(field, n);
                    t.set(i, j, a);
                    gens.push(t);
                }
            }
        }
    }
    let gens = gens.iter().map(|g| b.mul(g).mul(&b_inv)).collect();
    Ok(MatrixGroup::from_generators(ambient, constraint.clone(), gens, Some(order)))
}

/// Breadth-first closure of the generators under multiplication.
pub fn group_closure(field: &Field, n: usize, generators: &[Matrix], cap: usize) -> Result<Vec<Matrix>> {
    let id = Matrix::identity(field, n);
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.mul(g);
            if !seen.contains(&y) {
                seen.insert(y.clone());
                cap_check("group closure", seen.len() as u128, cap as u128)?;
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Matrix> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Random elements outside the span so far, until they generate everything.
fn generating_set(elements: &[Matrix], field: &Field, n: usize, seed: u64) -> Vec<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<Matrix> = Vec::new();
    let mut h: HashSet<Matrix> = HashSet::from([Matrix::identity(field, n)]);
    while h.len() < elements.len() {
        let g = loop {
            let g = &elements[rng.gen_range(0..elements.len())];
            if !h.contains(g) {
                break g.clone();
            }
        };
        gens.push(g);
        h = group_closure(field, n, &gens, usize::MAX).expect("no cap").into_iter().collect();
    }
    gens
}

/// Permutation of the poset induced by g, or NotAnAction.
pub fn poset_permutation(g: &Matrix, p: &FinitePoset<Subspace>) -> Result<Vec<usize>> {
    p.elements().iter().map(|w| p.index_of(&w.image(g)).ok_or(Error::NotAnAction)).collect()
}

/// Orbit partition of the poset under the group generated by the generators.
pub fn orbits(g: &MatrixGroup, p: &FinitePoset<Subspace>) -> Result<Vec<Vec<usize>>> {
    let perms: Vec<Vec<usize>> = g.generators.iter().map(|s| poset_permutation(s, p)).collect::<Result<_>>()?;
    let mut label = vec![usize::MAX; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for perm in &perms {
                let y = perm[x];
                if label[y] == usize::MAX {
                    label[y] = id;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    Ok(out)
}

/// Number of orbits meeting each rank.
pub fn orbits_per_rank(g: &MatrixGroup, p: &FinitePoset<Subspace>) -> Result<Vec<usize>> {
    let orbs = orbits(g, p)?;
    let mut count = vec![0; p.rank_counts().len()];
    for o in &orbs {
        count[p.rank(o[0])] += 1;
    }
    Ok(count)
}

/// Orbit of one subspace.
pub fn orbit_of(g: &MatrixGroup, w: &Subspace, cap: usize) -> Result<Vec<Subspace>> {
    let mut seen: HashSet<Subspace> = HashSet::from([w.clone()]);
    let mut queue = VecDeque::from([w.clone()]);
    while let Some(x) = queue.pop_front() {
        for s in &g.generators {
            let y = x.image(s);
            if seen.insert(y.clone()) {
                cap_check("orbit", seen.len() as u128, cap as u128)?;
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Subspace> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// G_W = {g : g W = W}, filtered from the element list.
pub fn stabilizer(g: &MatrixGroup, w: &Subspace) -> Result<MatrixGroup> {
    let els: Vec<Matrix> = g.elements()?.iter().filter(|x| w.image(x) == *w).cloned().collect();
    let mut stabilized = g.stabilized.clone();
    stabilized.push(w.clone());
    Ok(MatrixGroup::from_elements(g.ambient.clone(), g.constraint.clone(), stabilized, els, 0))
}

/// Subgroup of elements satisfying a predicate.
pub fn subgroup_where(g: &MatrixGroup, constraint: Constraint, pred: impl Fn(&Matrix) -> bool) -> Result<MatrixGroup> {
    let els: Vec<Matrix> = g.elements()?.iter().filter(|x| pred(x)).cloned().collect();
    Ok(MatrixGroup::from_elements(g.ambient.clone(), constraint, g.stabilized.clone(), els, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabMode {
    /// V -> V + F
    Line,
    /// (V, V0) -> (V + F, V0 + F)
    RelativeLine,
    /// E -> E + H
    Hyperbolic,
}

impl StabMode {
    pub fn extra(self) -> usize {
        match self {
            StabMode::Line | StabMode::RelativeLine => 1,
            StabMode::Hyperbolic => 2,
        }
    }
}

/// Block-diagonal extension by the identity on the added summand.
pub fn stabilization_embed(g: &Matrix, mode: StabMode) -> Matrix {
    g.block_diag(&Matrix::identity(g.field(), mode.extra()))
}

/// Ambient and constraint of the stabilized group.
pub fn stabilized_setting(ambient: &Ambient, constraint: &Constraint, mode: StabMode) -> Result<(Ambient, Constraint)> {
    let f = ambient.field();
    let n = ambient.dim();
    let new_ambient = match (ambient, mode) {
        (Ambient::Plain { .. }, StabMode::Line | StabMode::RelativeLine) => Ambient::plain(f, n + 1),
        (Ambient::Formed(e), StabMode::Hyperbolic) => {
            Ambient::Formed(e.direct_sum(&FormedSpace::hyperbolic(e.params(), 1))?)
        }
        _ => return Err(Error::InvalidParameters("stabilization mode does not fit the ambient space".into())),
    };
    let extra = mode.extra();
    let c = match constraint {
        Constraint::GL => Constraint::GL,
        Constraint::Isometry => Constraint::Isometry,
        Constraint::FixPointwise(v0) => Constraint::FixPointwise(pad_subspace(v0, extra)),
        Constraint::IdentityModulo(v0) => {
            let added = Subspace::span(f, n + 1, &[unit_vector(n + 1, n)]);
            Constraint::IdentityModulo(pad_subspace(v0, extra).sum(&added))
        }
        Constraint::IsometryFixing(u) => Constraint::IsometryFixing(pad_subspace(u, extra)),
    };
    Ok((new_ambient, c))
}

/// Compact report of a group.
#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub constraint: String,
    pub order: Option<u128>,
    pub generators: Vec<Vec<Vec<String>>>,
    pub orbit_sizes_per_rank: Vec<Vec<usize>>,
}

pub fn group_report(g: &MatrixGroup, p: Option<&FinitePoset<Subspace>>) -> Result<GroupReport> {
    let orbit_sizes_per_rank = match p {
        Some(p) => {
            let mut per: HashMap<usize, Vec<usize>> = HashMap::new();
            for o in orbits(g, p)? {
                per.entry(p.rank(o[0])).or_default().push(o.len());
            }
            (0..p.rank_counts().len()).map(|r| per.remove(&r).unwrap_or_default()).collect()
        }
        None => vec![],
    };
    Ok(GroupReport {
        constraint: g.constraint.name().to_string(),
        order: g.order(),
        generators: g.generators.iter().map(Matrix::format_rows).collect(),
        orbit_sizes_per_rank,
    })
}

#[cfg(test)]
mod tests;
