//! Shared generators for unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::forms::{FormParameters, FormedSpace, Preset};
use crate::gf::Field;
use crate::linalg::{Matrix, Subspace, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn f(lit: &str) -> Field {
    Field::parse(lit).unwrap()
}

pub fn preset(lit: &str, p: Preset) -> FormParameters {
    FormParameters::preset(&f(lit), p).unwrap()
}

/// Small parameter sets covering every characteristic/involution combination.
pub fn param_zoo() -> Vec<FormParameters> {
    vec![
        preset("2", Preset::Orthogonal),
        preset("2", Preset::Symplectic),
        preset("3", Preset::Orthogonal),
        preset("3", Preset::Symplectic),
        preset("5", Preset::Orthogonal),
        preset("2^2::1", Preset::Unitary),
        preset("2^2", Preset::Orthogonal),
        preset("3^2::1", Preset::Unitary),
    ]
}

pub fn random_matrix(field: &Field, r: usize, c: usize, rng: &mut impl Rng) -> Matrix {
    let q = field.q();
    Matrix::from_fn(field, r, c, |_, _| rng.gen_range(0..q))
}

pub fn random_vector(field: &Field, n: usize, rng: &mut impl Rng) -> Vector {
    (0..n).map(|_| rng.gen_range(0..field.q())).collect()
}

pub fn random_space(params: &FormParameters, n: usize, rng: &mut impl Rng) -> FormedSpace {
    FormedSpace::new(params, random_matrix(params.field(), n, n, rng)).unwrap()
}

pub fn random_subspace(field: &Field, n: usize, k: usize, rng: &mut impl Rng) -> Subspace {
    let rows: Vec<Vector> = (0..k).map(|_| random_vector(field, n, rng)).collect();
    Subspace::span(field, n, &rows)
}

/// A random isotropic subspace: span of random isotropic vectors, kept while isotropic.
pub fn random_isotropic(e: &FormedSpace, tries: usize, rng: &mut impl Rng) -> Subspace {
    let mut u = Subspace::zero(e.field(), e.dim());
    for _ in 0..tries {
        let v = random_vector(e.field(), e.dim(), rng);
        let cand = u.sum(&Subspace::span(e.field(), e.dim(), &[v]));
        if e.is_isotropic(&cand) {
            u = cand;
        }
    }
    u
}
