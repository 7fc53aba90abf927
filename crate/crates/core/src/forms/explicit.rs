//! Explicit isometries: E + (-E) = H^n, sign flips and rescaling.

use super::{FormParameters, FormedSpace, IsometryMap};
use crate::error::{Error, Result};
use crate::gf::{Elem, PropertyWitness};
use crate::linalg::Matrix;

/// Matrix of (u, v) -> (u - g(u - v), flat(u - v)) in the coordinates of H^n,
/// where x_i goes to slot 2i and the dual coordinate y_i to slot 2i + 1.
pub fn hyperbolization_matrix(e: &FormedSpace) -> Result<Matrix> {
    let f = e.field();
    let n = e.dim();
    let omega = e.omega_matrix();
    let oinv = omega.inverse().ok_or(Error::Degenerate)?;
    // g = flat^-1 composed with q(-, v): q(w, v) = omega(w, g v)
    let g = oinv.mul(e.gram());
    let id = Matrix::identity(f, n);
    let top = id.sub(&g).hstack(&g);
    let bottom = omega.hstack(&omega.neg());
    let raw = top.vstack(&bottom);
    let mut out = Matrix::zeros(f, 2 * n, 2 * n);
    for i in 0..n {
        for c in 0..2 * n {
            out.set(2 * i, c, raw.get(i, c));
            out.set(2 * i + 1, c, raw.get(n + i, c));
        }
    }
    Ok(out)
}

/// (E, q) + (E, -q) -> H^(dim E).
pub fn hyperbolization_isometry(e: &FormedSpace) -> Result<IsometryMap> {
    let m = hyperbolization_matrix(e)?;
    let source = e.direct_sum(&e.negated())?;
    let target = FormedSpace::hyperbolic(e.params(), e.dim());
    Ok(IsometryMap::new(&source, &target, m))
}

/// (alpha + sigma(alpha)^-T) phi = phi (alpha + alpha), checked on matrices.
/// This holds whenever alpha preserves the chosen Gram matrix itself, not only its class.
pub fn hyperbolization_naturality(e: &FormedSpace, alpha: &Matrix) -> Result<bool> {
    let phi = hyperbolization_matrix(e)?;
    let n = e.dim();
    let Some(ainv) = alpha.inverse() else { return Ok(false) };
    let dual = ainv.conj_transpose();
    let f = e.field();
    let mut left = Matrix::zeros(f, 2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            left.set(2 * i, 2 * j, alpha.get(i, j));
            left.set(2 * i + 1, 2 * j + 1, dual.get(i, j));
        }
    }
    Ok(left.mul(&phi) == phi.mul(&alpha.block_diag(alpha)))
}

/// Case A: a * id from (E, q) to (E, -q) when sigma(a) a = -1.
/// Case B: [[sigma(a), -sigma(b)], [b, a]] from (E + E, -q - q) to (E + E, q + q)
/// when sigma(a) a + sigma(b) b = -1.
pub fn sign_flip_isometries(e: &FormedSpace, witness: PropertyWitness) -> Result<IsometryMap> {
    let f = e.field();
    let n = e.dim();
    let minus_one = f.neg(1);
    match witness {
        PropertyWitness::A(a) => {
            if a >= f.q() || f.norm(a) != minus_one {
                return Err(Error::WitnessMismatch(format!("N({}) != -1", f.format(a.min(f.q() - 1)))));
            }
            Ok(IsometryMap::new(e, &e.negated(), Matrix::scalar(f, n, a)))
        }
        PropertyWitness::B(a, b) => {
            if a >= f.q() || b >= f.q() || f.add(f.norm(a), f.norm(b)) != minus_one {
                return Err(Error::WitnessMismatch("N(a) + N(b) != -1".into()));
            }
            let blk = |c: Elem| Matrix::scalar(f, n, c);
            let m = blk(f.conj(a)).hstack(&blk(f.neg(f.conj(b)))).vstack(&blk(b).hstack(&blk(a)));
            let neg = e.negated();
            Ok(IsometryMap::new(&neg.direct_sum(&neg)?, &e.direct_sum(e)?, m))
        }
        PropertyWitness::None => Err(Error::WitnessMismatch("no witness".into())),
    }
}

/// E^2 = H^n under a case A witness, E^4 = H^2n under a case B witness.
pub fn double_is_hyperbolic(e: &FormedSpace, witness: PropertyWitness) -> Result<IsometryMap> {
    let f = e.field();
    let n = e.dim();
    let phi = hyperbolization_matrix(e)?;
    let flip = sign_flip_isometries(e, witness)?;
    let id = Matrix::identity(f, n);
    match witness {
        PropertyWitness::A(_) => {
            let m = phi.mul(&id.block_diag(&flip.matrix));
            Ok(IsometryMap::new(&e.power(2), &FormedSpace::hyperbolic(e.params(), n), m))
        }
        PropertyWitness::B(_, _) => {
            // (x1, x2, x3, x4) -> (x1, y2, x3, y4) with (y2, y4) = beta^-1 (x2, x4)
            let binv = flip.matrix.inverse().expect("beta is invertible");
            let mut s = Matrix::zeros(f, 4 * n, 4 * n);
            for i in 0..n {
                s.set(i, i, 1);
                s.set(2 * n + i, 2 * n + i, 1);
            }
            let slot = |k: usize| if k < n { n + k } else { 3 * n + (k - n) };
            for r in 0..2 * n {
                for c in 0..2 * n {
                    s.set(slot(r), slot(c), binv.get(r, c));
                }
            }
            let m = phi.block_diag(&phi).mul(&s);
            Ok(IsometryMap::new(&e.power(4), &FormedSpace::hyperbolic(e.params(), 2 * n), m))
        }
        PropertyWitness::None => unreachable!(),
    }
}

/// (E, alpha^-1 q) with parameters (sigma(alpha)/alpha * eps, alpha^-1 Lambda).
pub fn rescale_form(e: &FormedSpace, alpha: Elem) -> Result<FormedSpace> {
    let f = e.field();
    if alpha == 0 || alpha >= f.q() {
        return Err(Error::BadAlpha);
    }
    let ainv = f.inv(alpha);
    let eps = f.mul(f.mul(f.conj(alpha), ainv), e.params().epsilon());
    let lam: Vec<Elem> = e.params().lambda_basis().iter().map(|&l| f.mul(ainv, l)).collect();
    let params = FormParameters::new(f, eps, &lam)?;
    FormedSpace::new(&params, e.gram().scale(ainv))
}
