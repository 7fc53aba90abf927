//! Formed spaces: (sigma, epsilon, Lambda)-quadratic forms on F^n, stored as a
//! representative Gram matrix M with q(v, w) = sigma(v)^T M w.

mod complement;
mod explicit;

use std::fmt;
use std::sync::Arc;

use crate::error::{cap_check, Error, Result};
use crate::gf::{Elem, Field};
use crate::linalg::{Matrix, Subspace, Vector};

pub use complement::{
    decomp_complement, induced_quotient_form, isotropic_complement, witt_decompose, witt_decompose_with_cap,
    QuotientForm, WittDecomposition,
};
pub use explicit::{
    double_is_hyperbolic, hyperbolization_isometry, hyperbolization_matrix, hyperbolization_naturality, rescale_form,
    sign_flip_isometries,
};

pub const DEFAULT_SCAN_CAP: u128 = 1_000_000;

/// Classical parameter presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Symplectic,
    Unitary,
    Orthogonal,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Preset> {
        match s {
            "symplectic" => Ok(Preset::Symplectic),
            "unitary" => Ok(Preset::Unitary),
            "orthogonal" => Ok(Preset::Orthogonal),
            _ => Err(Error::Parse(format!("unknown preset {s:?}"))),
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            Preset::Symplectic => "symplectic",
            Preset::Unitary => "unitary",
            Preset::Orthogonal => "orthogonal",
        }
    }
    pub const ALL: [Preset; 3] = [Preset::Symplectic, Preset::Unitary, Preset::Orthogonal];
}

/// F_p-subspace of F, as digit vectors.
fn fp_span(field: &Field, gens: &[Elem]) -> Result<Subspace> {
    let fp = Field::prime(field.p())?;
    let rows: Vec<Vector> = gens.iter().map(|&a| field.digits(a)).collect();
    Ok(Subspace::span(&fp, field.r() as usize, &rows))
}

fn fp_elements(field: &Field, s: &Subspace) -> Vec<Elem> {
    s.basis_vectors().iter().map(|d| field.from_digits(d)).collect()
}

/// F_p-basis of Lambda_min = span{a - eps sigma(a)}.
pub fn lambda_min(field: &Field, eps: Elem) -> Result<Vec<Elem>> {
    let gens: Vec<Elem> = field.elements().map(|a| field.sub(a, field.mul(eps, field.conj(a)))).collect();
    Ok(fp_elements(field, &fp_span(field, &gens)?))
}

/// F_p-basis of Lambda_max = {a : a + eps sigma(a) = 0}.
pub fn lambda_max(field: &Field, eps: Elem) -> Result<Vec<Elem>> {
    let gens: Vec<Elem> = field.elements().filter(|&a| field.add(a, field.mul(eps, field.conj(a))) == 0).collect();
    Ok(fp_elements(field, &fp_span(field, &gens)?))
}

#[derive(Debug)]
struct ParamData {
    field: Field,
    epsilon: Elem,
    lambda: Vec<Elem>,
    /// canonical representative of a + Lambda, indexed by a
    reduce: Vec<Elem>,
}

#[derive(Clone)]
pub struct FormParameters(Arc<ParamData>);

impl PartialEq for FormParameters {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0)
            || (self.0.field == o.0.field && self.0.epsilon == o.0.epsilon && self.0.lambda == o.0.lambda)
    }
}
impl Eq for FormParameters {}

impl fmt::Debug for FormParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(eps={}, Lambda=<{:?}>)", self.field().format(self.epsilon()), self.0.lambda)
    }
}

impl FormParameters {
    /// Lambda is the F_p-span of `lambda_gens`.
    pub fn new(field: &Field, epsilon: Elem, lambda_gens: &[Elem]) -> Result<FormParameters> {
        let f = field;
        if f.mul(epsilon, f.conj(epsilon)) != 1 {
            return Err(Error::InvalidParameters("epsilon * sigma(epsilon) != 1".into()));
        }
        let lam = fp_span(f, lambda_gens)?;
        let lmin = fp_span(f, &lambda_min(f, epsilon)?)?;
        let lmax = fp_span(f, &lambda_max(f, epsilon)?)?;
        if !lam.contains(&lmin) || !lmax.contains(&lam) {
            return Err(Error::InvalidParameters("need Lambda_min <= Lambda <= Lambda_max".into()));
        }
        let lambda = fp_elements(f, &lam);
        for c in f.elements() {
            for &l in &lambda {
                let v = f.mul(f.mul(f.conj(c), l), c);
                if !lam.contains_vector(&f.digits(v)) {
                    return Err(Error::InvalidParameters("sigma(c) Lambda c not in Lambda".into()));
                }
            }
        }
        let reduce = f.elements().map(|a| f.from_digits(&lam.residual(&f.digits(a)))).collect();
        Ok(FormParameters(Arc::new(ParamData { field: f.clone(), epsilon, lambda, reduce })))
    }

    /// Lambda = Lambda_min for the given epsilon.
    pub fn minimal(field: &Field, epsilon: Elem) -> Result<FormParameters> {
        FormParameters::new(field, epsilon, &lambda_min(field, epsilon)?)
    }

    pub fn maximal(field: &Field, epsilon: Elem) -> Result<FormParameters> {
        FormParameters::new(field, epsilon, &lambda_max(field, epsilon)?)
    }

    /// The classical parameters. Unitary uses Lambda = F^sigma when that is admissible
    /// (characteristic 2); in odd characteristic Lambda_min = Lambda_max is the only choice.
    pub fn preset(field: &Field, preset: Preset) -> Result<FormParameters> {
        let f = field;
        match preset {
            Preset::Symplectic | Preset::Orthogonal if !f.involution_is_trivial() => {
                Err(Error::InvalidParameters(format!("{} preset needs sigma = id", preset.name())))
            }
            Preset::Symplectic => FormParameters::new(f, f.neg(1), &f.elements().collect::<Vec<_>>()),
            Preset::Orthogonal => FormParameters::new(f, 1, &[]),
            Preset::Unitary => {
                if f.involution_is_trivial() {
                    return Err(Error::InvalidParameters("unitary preset needs sigma != id".into()));
                }
                let fixed: Vec<Elem> = f.elements().filter(|&a| f.conj(a) == a).collect();
                FormParameters::new(f, 1, &fixed).or_else(|_| FormParameters::minimal(f, 1))
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }
    pub fn epsilon(&self) -> Elem {
        self.0.epsilon
    }
    pub fn lambda_basis(&self) -> &[Elem] {
        &self.0.lambda
    }
    #[inline]
    pub fn reduce(&self, a: Elem) -> Elem {
        self.0.reduce[a as usize]
    }
    pub fn in_lambda(&self, a: Elem) -> bool {
        self.reduce(a) == 0
    }
    pub fn lambda_elements(&self) -> Vec<Elem> {
        self.field().elements().filter(|&a| self.in_lambda(a)).collect()
    }

    /// Membership of the sesquilinear form sigma(v)^T D w in X.
    pub fn in_x(&self, d: &Matrix) -> bool {
        let f = self.field();
        if !d.is_square() {
            return false;
        }
        let eps = self.epsilon();
        let n = d.nrows();
        (0..n).all(|i| {
            self.in_lambda(d.get(i, i)) && (0..n).all(|j| d.get(i, j) == f.neg(f.mul(eps, f.conj(d.get(j, i)))))
        })
    }
}

/// Free function form of `FormParameters::in_x`.
pub fn in_x(d: &Matrix, params: &FormParameters) -> bool {
    params.in_x(d)
}

/// Element of F / Lambda by canonical representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormValue(pub Elem);

impl FormValue {
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone)]
pub struct FormedSpace {
    params: FormParameters,
    gram: Matrix,
    omega: Matrix,
}

impl fmt::Debug for FormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormedSpace(dim {}, M = {:?}, {:?})", self.dim(), self.gram, self.params)
    }
}

impl FormedSpace {
    pub fn new(params: &FormParameters, gram: Matrix) -> Result<FormedSpace> {
        if !gram.is_square() {
            return Err(Error::InvalidParameters("Gram matrix must be square".into()));
        }
        if gram.field() != params.field() {
            return Err(Error::FieldMismatch);
        }
        let eps = params.epsilon();
        let omega = gram.add(&gram.conj_transpose().scale(eps));
        Ok(FormedSpace { params: params.clone(), gram, omega })
    }

    pub fn hyperbolic(params: &FormParameters, n: usize) -> FormedSpace {
        let f = params.field();
        let mut m = Matrix::zeros(f, 2 * n, 2 * n);
        for i in 0..n {
            m.set(2 * i, 2 * i + 1, 1);
        }
        FormedSpace::new(params, m).expect("valid Gram")
    }

    pub fn euclidean(params: &FormParameters, n: usize) -> FormedSpace {
        FormedSpace::new(params, Matrix::identity(params.field(), n)).expect("valid Gram")
    }

    pub fn zero(params: &FormParameters, n: usize) -> FormedSpace {
        FormedSpace::new(params, Matrix::zeros(params.field(), n, n)).expect("valid Gram")
    }

    pub fn field(&self) -> &Field {
        self.params.field()
    }
    pub fn params(&self) -> &FormParameters {
        &self.params
    }
    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }
    /// Omega = M + eps sigma(M)^T, the matrix of omega_q.
    pub fn omega_matrix(&self) -> &Matrix {
        &self.omega
    }

    fn pairing(&self, m: &Matrix, v: &[Elem], w: &[Elem]) -> Elem {
        let f = self.field();
        let mw = m.mul_vec(w);
        v.iter().zip(&mw).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(f.conj(a), b)))
    }

    pub fn q_value(&self, v: &[Elem], w: &[Elem]) -> Elem {
        self.pairing(&self.gram, v, w)
    }
    pub fn omega_value(&self, v: &[Elem], w: &[Elem]) -> Elem {
        self.pairing(&self.omega, v, w)
    }
    #[allow(non_snake_case)]
    pub fn Q_value(&self, v: &[Elem]) -> FormValue {
        FormValue(self.params.reduce(self.q_value(v, v)))
    }

    /// Equality of classes: the Gram difference lies in X.
    pub fn forms_equal(&self, o: &FormedSpace) -> Result<bool> {
        if self.params != o.params || self.dim() != o.dim() {
            return Err(Error::ParameterMismatch);
        }
        Ok(self.params.in_x(&self.gram.sub(&o.gram)))
    }

    pub fn with_gram(&self, gram: Matrix) -> FormedSpace {
        FormedSpace::new(&self.params, gram).expect("valid Gram")
    }

    /// (E, -q).
    pub fn negated(&self) -> FormedSpace {
        self.with_gram(self.gram.neg())
    }

    pub fn direct_sum(&self, o: &FormedSpace) -> Result<FormedSpace> {
        if self.params != o.params {
            return Err(Error::ParameterMismatch);
        }
        Ok(self.with_gram(self.gram.block_diag(&o.gram)))
    }

    pub fn power(&self, k: usize) -> FormedSpace {
        let mut g = Matrix::zeros(self.field(), 0, 0);
        for _ in 0..k {
            g = g.block_diag(&self.gram);
        }
        self.with_gram(g)
    }

    /// Restriction of q to the span of `vectors`, in those coordinates.
    pub fn restrict_to(&self, vectors: &[Vector]) -> FormedSpace {
        let k = vectors.len();
        let g = Matrix::from_fn(self.field(), k, k, |i, j| self.q_value(&vectors[i], &vectors[j]));
        self.with_gram(g)
    }

    /// Restriction in the echelon basis of U.
    pub fn restrict(&self, u: &Subspace) -> FormedSpace {
        self.restrict_to(&u.basis_vectors())
    }

    /// Nullspace of Omega.
    pub fn kernel(&self) -> Subspace {
        Subspace::span(self.field(), self.dim(), &self.omega.nullspace())
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.omega.is_invertible()
    }

    /// {v in K : Q(v) = 0}; equals K outside characteristic 2.
    pub fn radical(&self) -> Result<Subspace> {
        let f = self.field();
        let k = self.kernel();
        if f.p() != 2 || k.is_zero() {
            return Ok(k);
        }
        // Q restricted to K is additive and F_2-homogeneous: solve over F_2.
        let f2 = Field::prime(2)?;
        let r = f.r() as usize;
        let kb = k.basis_vectors();
        let mut gens = Vec::new();
        for b in &kb {
            for j in 0..r {
                gens.push(crate::linalg::vec_scale(f, 1 << j, b));
            }
        }
        let rows: Vec<Vector> = gens.iter().map(|v| f.digits(self.Q_value(v).0)).collect();
        let a = Matrix::from_rows_width(&f2, &rows, r);
        let ker = a.transpose().nullspace();
        let vecs: Vec<Vector> = ker
            .iter()
            .map(|c| {
                gens.iter().zip(c).fold(vec![0; self.dim()], |acc, (g, &ci)| {
                    if ci == 1 {
                        crate::linalg::vec_add(f, &acc, g)
                    } else {
                        acc
                    }
                })
            })
            .collect();
        let rad = Subspace::span(f, self.dim(), &vecs);
        if rad.dim() * r != ker.len() || !self.is_isotropic(&rad) {
            return Err(Error::RadicalNotSubspace);
        }
        Ok(rad)
    }

    /// A^perp = {v : omega(v, a) = 0 for all a in A}.
    pub fn perp(&self, a: &Subspace) -> Subspace {
        let f = self.field();
        let n = self.dim();
        if a.is_zero() {
            return Subspace::full(f, n);
        }
        // omega(v, a) = sigma(v)^T Omega a = 0  <=>  v^T sigma(Omega a) = 0
        let rows: Vec<Vector> =
            a.basis_vectors().iter().map(|b| self.omega.mul_vec(b).iter().map(|&x| f.conj(x)).collect()).collect();
        Subspace::span(f, n, &Matrix::from_rows_width(f, &rows, n).nullspace())
    }

    pub fn is_isotropic_vector(&self, v: &[Elem]) -> bool {
        self.Q_value(v).is_zero()
    }

    /// q restricted to U lies in X.
    pub fn is_isotropic(&self, u: &Subspace) -> bool {
        self.params.in_x(self.restrict(u).gram())
    }

    /// Exhaustive check: Q vanishes on every vector of U and omega on pairs of basis vectors.
    /// The omega part only matters when Lambda = F, where Q carries no information.
    pub fn is_isotropic_exhaustive(&self, u: &Subspace) -> bool {
        let b = u.basis_vectors();
        b.iter().all(|x| b.iter().all(|y| self.omega_value(x, y) == 0))
            && u.vectors().all(|v| self.is_isotropic_vector(&v))
    }

    /// Genus and a maximal isotropic subspace, by greedy extension from the radical.
    pub fn genus_with_cap(&self, cap: u128) -> Result<(usize, Subspace)> {
        let rad = self.radical()?;
        let mut u = rad.clone();
        loop {
            let perp = self.perp(&u);
            // the search usually stops early, so charge the vectors actually visited
            let mut seen = 0u128;
            let mut next = None;
            for v in perp.vectors() {
                seen += 1;
                cap_check("isotropic vector scan", seen, cap)?;
                if !u.contains_vector(&v) && self.is_isotropic_vector(&v) {
                    next = Some(v);
                    break;
                }
            }
            match next {
                Some(v) => u = u.sum(&Subspace::span(self.field(), self.dim(), &[v])),
                None => break,
            }
        }
        Ok((u.dim() - rad.dim(), u))
    }

    pub fn genus(&self) -> Result<usize> {
        Ok(self.genus_with_cap(DEFAULT_SCAN_CAP)?.0)
    }

    /// The representative Omega / 2 of the same class; characteristic must be odd.
    pub fn half_omega(&self) -> FormedSpace {
        let f = self.field();
        assert!(f.p() != 2);
        self.with_gram(self.omega.scale(f.inv(2)))
    }

    pub fn identity_map(&self) -> IsometryMap {
        IsometryMap { source: self.clone(), target: self.clone(), matrix: Matrix::identity(self.field(), self.dim()) }
    }
}

/// A linear map F between formed spaces, given by its matrix on column vectors.
#[derive(Clone, Debug)]
pub struct IsometryMap {
    pub source: FormedSpace,
    pub target: FormedSpace,
    pub matrix: Matrix,
}

impl IsometryMap {
    pub fn new(source: &FormedSpace, target: &FormedSpace, matrix: Matrix) -> IsometryMap {
        IsometryMap { source: source.clone(), target: target.clone(), matrix }
    }

    /// sigma(F)^T M' F - M lies in X.
    pub fn is_isometry(&self) -> bool {
        let m = &self.matrix;
        if self.source.params != self.target.params || m.nrows() != self.target.dim() || m.ncols() != self.source.dim()
        {
            return false;
        }
        let pulled = m.conj_transpose().mul(self.target.gram()).mul(m);
        self.source.params.in_x(&pulled.sub(self.source.gram()))
    }

    pub fn is_bijective(&self) -> bool {
        self.matrix.is_invertible()
    }

    pub fn compose(&self, inner: &IsometryMap) -> IsometryMap {
        IsometryMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        }
    }
}

/// Square matrix g is an isometry of E.
pub fn preserves_form(e: &FormedSpace, g: &Matrix) -> bool {
    IsometryMap { source: e.clone(), target: e.clone(), matrix: g.clone() }.is_isometry()
}
