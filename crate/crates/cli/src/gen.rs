//! Seeded random inputs.

use formlab_core::{Field, FormParameters, FormedSpace, Matrix, Subspace, Vector};
use rand::Rng;

pub fn matrix(field: &Field, r: usize, c: usize, rng: &mut impl Rng) -> Matrix {
    let q = field.q();
    Matrix::from_fn(field, r, c, |_, _| rng.gen_range(0..q))
}

pub fn vector(field: &Field, n: usize, rng: &mut impl Rng) -> Vector {
    (0..n).map(|_| rng.gen_range(0..field.q())).collect()
}

/// Arbitrary Gram matrix, so degenerate spaces show up often at small q.
pub fn space(params: &FormParameters, n: usize, rng: &mut impl Rng) -> FormedSpace {
    FormedSpace::new(params, matrix(params.field(), n, n, rng)).expect("any square Gram is a form")
}

pub fn subspace(field: &Field, n: usize, k: usize, rng: &mut impl Rng) -> Subspace {
    let rows: Vec<Vector> = (0..k).map(|_| vector(field, n, rng)).collect();
    Subspace::span(field, n, &rows)
}

/// Span of random vectors, each kept only while the span stays isotropic.
pub fn isotropic(e: &FormedSpace, tries: usize, rng: &mut impl Rng) -> Subspace {
    let mut u = Subspace::zero(e.field(), e.dim());
    for _ in 0..tries {
        let cand = u.sum(&Subspace::span(e.field(), e.dim(), &[vector(e.field(), e.dim(), rng)]));
        if e.is_isotropic(&cand) {
            u = cand;
        }
    }
    u
}

/// Grows u inside u^perp by random isotropic vectors until no isotropic vector is left outside it.
pub fn maximal_isotropic(e: &FormedSpace, u: &Subspace, rng: &mut impl Rng) -> Subspace {
    let mut u = u.sum(&e.radical().expect("radical"));
    loop {
        let perp = e.perp(&u);
        let cands: Vec<Vector> = perp
            .vectors()
            .filter(|v| {
                !u.contains_vector(v)
                    && e.is_isotropic(&u.sum(&Subspace::span(e.field(), e.dim(), std::slice::from_ref(v))))
            })
            .collect();
        if cands.is_empty() {
            return u;
        }
        let v = cands[rng.gen_range(0..cands.len())].clone();
        u = u.sum(&Subspace::span(e.field(), e.dim(), &[v]));
    }
}
