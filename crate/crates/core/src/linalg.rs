//! Dense matrices and canonical subspaces over GF(q).
//!
//! Vectors are column vectors stored as `Vec<Elem>`; a subspace keeps its
//! basis as the rows of a reduced row-echelon matrix.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{cap_check, Error, Result};
use crate::gf::{Elem, Field};

pub type Vector = Vec<Elem>;

pub const DEFAULT_SUBSPACE_CAP: u128 = 200_000;

#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.data == o.data
    }
}
impl Eq for Matrix {}
impl Hash for Matrix {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.rows.hash(h);
        self.cols.hash(h);
        self.data.hash(h);
    }
}
impl PartialOrd for Matrix {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Matrix {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.rows, self.cols, &self.data).cmp(&(o.rows, o.cols, &o.data))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|&a| self.field.format(a)).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(field: &Field, n: usize, c: Elem) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows_width(field, rows, cols)
    }

    /// Like `from_rows` but with an explicit width so that zero-row matrices keep their shape.
    pub fn from_rows_width(field: &Field, rows: &[Vec<Elem>], cols: usize) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        Matrix { field: field.clone(), rows: rows.len(), cols, data }
    }

    pub fn from_cols(field: &Field, cols: &[Vec<Elem>], height: usize) -> Matrix {
        Matrix::from_rows_width(field, cols, height).transpose()
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[Elem] {
        &self.data
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn col_vecs(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Entrywise involution.
    pub fn conj(&self) -> Matrix {
        let f = &self.field;
        Matrix { data: self.data.iter().map(|&a| f.conj(a)).collect(), ..self.clone() }
    }

    /// sigma(M)^T.
    pub fn conj_transpose(&self) -> Matrix {
        let f = &self.field;
        Matrix::from_fn(f, self.cols, self.rows, |i, j| f.conj(self.get(j, i)))
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b != 0 {
                        let idx = i * o.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vector {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect()
    }

    fn zip(&self, o: &Matrix, op: impl Fn(Elem, Elem) -> Elem) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix { data: self.data.iter().zip(&o.data).map(|(&a, &b)| op(a, b)).collect(), ..self.clone() }
    }
    pub fn add(&self, o: &Matrix) -> Matrix {
        self.zip(o, |a, b| self.field.add(a, b))
    }
    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.zip(o, |a, b| self.field.sub(a, b))
    }
    pub fn neg(&self) -> Matrix {
        Matrix { data: self.data.iter().map(|&a| self.field.neg(a)).collect(), ..self.clone() }
    }
    pub fn scale(&self, c: Elem) -> Matrix {
        Matrix { data: self.data.iter().map(|&a| self.field.mul(c, a)).collect(), ..self.clone() }
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }
    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == (i == j) as Elem))
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = f.mul(inv, m.get(r, j));
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let t = m.get(i, c);
                if t == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(t, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> Matrix {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Basis of {x : M x = 0}, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vector> {
        let f = &self.field;
        let (r, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        self.solve(&Matrix::identity(&self.field, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Some X with self * X = b, if one exists (free variables set to zero).
    pub fn solve(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows);
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(&self.field, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows);
        Matrix::from_fn(&self.field, self.rows, self.cols + o.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                o.get(i, j - self.cols)
            }
        })
    }

    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Matrix { field: self.field.clone(), rows: self.rows + o.rows, cols: self.cols, data }
    }

    pub fn block_diag(&self, o: &Matrix) -> Matrix {
        let (r, c) = (self.rows + o.rows, self.cols + o.cols);
        Matrix::from_fn(&self.field, r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j)
            } else if i >= self.rows && j >= self.cols {
                o.get(i - self.rows, j - self.cols)
            } else {
                0
            }
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// Rows and columns permuted: out[i][j] = self[perm[i]][perm[j]].
    pub fn permute_sym(&self, perm: &[usize]) -> Matrix {
        self.submatrix(perm, perm)
    }

    pub fn format_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&a| self.field.format(a)).collect()).collect()
    }
}

// --- vector helpers --------------------------------------------------------

pub fn vec_add(f: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}
pub fn vec_sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}
pub fn vec_scale(f: &Field, c: Elem, a: &[Elem]) -> Vector {
    a.iter().map(|&x| f.mul(c, x)).collect()
}
/// a + c b
pub fn vec_axpy(f: &Field, a: &[Elem], c: Elem, b: &[Elem]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(c, y))).collect()
}
pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Enumerates sum c_i b_i over all coefficient tuples, last coefficient fastest.
/// For an echelon basis this is the lexicographic order of the vectors.
pub struct SpanIter {
    field: Field,
    basis: Vec<Vector>,
    coeffs: Vec<Elem>,
    n: usize,
    done: bool,
}

impl Iterator for SpanIter {
    type Item = Vector;
    fn next(&mut self) -> Option<Vector> {
        if self.done {
            return None;
        }
        let f = &self.field;
        let mut v = vec![0; self.n];
        for (c, b) in self.coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                v = vec_axpy(f, &v, *c, b);
            }
        }
        // odometer increment, last coefficient fastest
        let mut i = self.coeffs.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.coeffs[i] += 1;
            if self.coeffs[i] < f.q() {
                break;
            }
            self.coeffs[i] = 0;
        }
        Some(v)
    }
}

pub fn span_iter(field: &Field, n: usize, basis: Vec<Vector>) -> SpanIter {
    let k = basis.len();
    SpanIter { field: field.clone(), basis, coeffs: vec![0; k], n, done: false }
}

/// All of F^n in lexicographic order.
pub fn all_vectors(field: &Field, n: usize) -> SpanIter {
    span_iter(field, n, (0..n).map(|i| unit_vector(n, i)).collect())
}

// --- subspaces -------------------------------------------------------------

#[derive(Clone)]
pub struct Subspace {
    n: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl PartialEq for Subspace {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.basis == o.basis
    }
}
impl Eq for Subspace {}
impl Hash for Subspace {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.n.hash(h);
        self.basis.hash(h);
    }
}
impl PartialOrd for Subspace {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Subspace {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.n, self.dim(), &self.basis.data).cmp(&(o.n, o.dim(), &o.basis.data))
    }
}
impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{:?}>", self.basis)
    }
}

impl Subspace {
    pub fn zero(field: &Field, n: usize) -> Subspace {
        Subspace { n, basis: Matrix::zeros(field, 0, n), pivots: vec![] }
    }

    pub fn full(field: &Field, n: usize) -> Subspace {
        Subspace { n, basis: Matrix::identity(field, n), pivots: (0..n).collect() }
    }

    /// Span of arbitrary vectors of length n.
    pub fn span(field: &Field, n: usize, vectors: &[Vector]) -> Subspace {
        Subspace::from_matrix(&Matrix::from_rows_width(field, vectors, n))
    }

    /// Row space of m.
    pub fn from_matrix(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref_with_pivots();
        let k = pivots.len();
        let basis = Matrix { field: r.field.clone(), rows: k, cols: r.cols, data: r.data[..k * r.cols].to_vec() };
        Subspace { n: m.cols, basis, pivots }
    }

    /// Column space of m.
    pub fn column_space(m: &Matrix) -> Subspace {
        Subspace::from_matrix(&m.transpose())
    }

    pub fn field(&self) -> &Field {
        &self.basis.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vecs()
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    fn check(&self, o: &Subspace) -> Result<()> {
        if self.n != o.n {
            return Err(Error::AmbientMismatch(self.n, o.n));
        }
        Ok(())
    }

    /// v minus its echelon projection; zero iff v lies in the subspace.
    pub fn residual(&self, v: &[Elem]) -> Vector {
        let f = self.field();
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if c != 0 {
                w = vec_axpy(f, &w, f.neg(c), self.basis.row(i));
            }
        }
        w
    }

    pub fn contains_vector(&self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.n);
        self.residual(v).iter().all(|&a| a == 0)
    }

    /// Coordinates of v in the echelon basis (v must lie in the subspace).
    pub fn coordinates(&self, v: &[Elem]) -> Vector {
        debug_assert!(self.contains_vector(v));
        self.pivots.iter().map(|&pc| v[pc]).collect()
    }

    pub fn contains(&self, o: &Subspace) -> bool {
        self.n == o.n && o.dim() <= self.dim() && (0..o.dim()).all(|i| self.contains_vector(o.basis.row(i)))
    }

    pub fn try_contains(&self, o: &Subspace) -> Result<bool> {
        self.check(o)?;
        Ok(self.contains(o))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        assert_eq!(self.n, o.n, "ambient mismatch");
        Subspace::from_matrix(&self.basis.vstack(&o.basis))
    }

    pub fn try_sum(&self, o: &Subspace) -> Result<Subspace> {
        self.check(o)?;
        Ok(self.sum(o))
    }

    /// Zassenhaus: row reduce [A A; B 0], rows with vanishing left half span the intersection.
    pub fn intersect(&self, o: &Subspace) -> Subspace {
        assert_eq!(self.n, o.n, "ambient mismatch");
        let n = self.n;
        let f = self.field();
        let top = self.basis.hstack(&self.basis);
        let bottom = o.basis.hstack(&Matrix::zeros(f, o.dim(), n));
        let (r, pivots) = top.vstack(&bottom).rref_with_pivots();
        let rows: Vec<Vector> =
            pivots.iter().enumerate().filter(|(_, &pc)| pc >= n).map(|(i, _)| r.row(i)[n..].to_vec()).collect();
        Subspace::span(f, n, &rows)
    }

    pub fn try_intersect(&self, o: &Subspace) -> Result<Subspace> {
        self.check(o)?;
        Ok(self.intersect(o))
    }

    /// g W for a square matrix g acting on column vectors.
    pub fn image(&self, g: &Matrix) -> Subspace {
        let rows: Vec<Vector> = (0..self.dim()).map(|i| g.mul_vec(self.basis.row(i))).collect();
        Subspace::span(self.field(), g.nrows(), &rows)
    }

    /// Vectors extending a basis of self to a basis of sup, chosen greedily from sup's echelon basis.
    pub fn complement_in(&self, sup: &Subspace) -> Vec<Vector> {
        let mut cur = self.clone();
        let mut extra = Vec::new();
        for v in sup.basis_vectors() {
            if !cur.contains_vector(&v) {
                cur = cur.sum(&Subspace::span(self.field(), self.n, std::slice::from_ref(&v)));
                extra.push(v);
            }
        }
        extra
    }

    /// Complement in F^n spanned by the standard vectors at non-pivot positions.
    pub fn standard_complement(&self) -> Subspace {
        let vs: Vec<Vector> =
            (0..self.n).filter(|c| !self.pivots.contains(c)).map(|c| unit_vector(self.n, c)).collect();
        Subspace::span(self.field(), self.n, &vs)
    }

    /// Annihilator {y : w^T y = 0 for all w} inside the dual F^n.
    pub fn annihilator(&self) -> Subspace {
        Subspace::span(self.field(), self.n, &self.basis.nullspace())
    }

    /// All vectors, lexicographically.
    pub fn vectors(&self) -> SpanIter {
        span_iter(self.field(), self.n, self.basis_vectors())
    }

    pub fn cardinality(&self) -> u128 {
        (self.field().q() as u128).pow(self.dim() as u32)
    }

    /// Subspace of F^m given in coordinates of `basis` (rows), mapped into F^n.
    pub fn from_coordinates(coords: &Subspace, basis: &Matrix) -> Subspace {
        Subspace::from_matrix(&coords.basis.mul(basis))
    }

    /// Coordinates of self with respect to the rows of a basis of a superspace.
    pub fn to_coordinates(&self, sup_basis: &Matrix) -> Subspace {
        let sup = Subspace::from_matrix(sup_basis);
        assert!(sup.contains(self));
        // Solve x * sup_basis = w for every basis row w.
        let t = sup_basis.transpose();
        let rhs = self.basis.transpose();
        let x = t.solve(&rhs).expect("vector lies in superspace");
        Subspace::from_matrix(&x.transpose())
    }
}

/// Linear projection F^n -> F^(n - dim Z) with kernel Z and a right inverse.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub proj: Matrix,
    pub section: Matrix,
}

pub fn quotient_coordinates(n: usize, z: &Subspace) -> QuotientMap {
    let f = z.field();
    assert_eq!(z.ambient_dim(), n);
    let free: Vec<usize> = (0..n).filter(|c| !z.pivots().contains(c)).collect();
    // pi(v) = non-pivot coordinates of v - sum_i v[p_i] z_i
    let mut proj = Matrix::zeros(f, free.len(), n);
    for c in 0..n {
        let r = z.residual(&unit_vector(n, c));
        for (i, &fc) in free.iter().enumerate() {
            proj.set(i, c, r[fc]);
        }
    }
    let mut section = Matrix::zeros(f, n, free.len());
    for (i, &fc) in free.iter().enumerate() {
        section.set(fc, i, 1);
    }
    QuotientMap { proj, section }
}

pub fn gaussian_binomial(n: usize, k: usize, q: u32) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let (mut num, mut den) = (1u128, 1u128);
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// All k-dimensional subspaces of F^n, sorted by echelon basis.
pub fn enumerate_subspaces(field: &Field, n: usize, k: usize, cap: u128) -> Result<Vec<Subspace>> {
    assert!(k <= n);
    cap_check("subspace enumeration", gaussian_binomial(n, k, field.q()), cap)?;
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(field, n, k, 0, &mut pivots, &mut out);
    out.sort();
    Ok(out)
}

fn choose_pivots(field: &Field, n: usize, k: usize, start: usize, pivots: &mut Vec<usize>, out: &mut Vec<Subspace>) {
    if pivots.len() == k {
        fill_free(field, n, pivots, out);
        return;
    }
    for c in start..n {
        if n - c < k - pivots.len() {
            break;
        }
        pivots.push(c);
        choose_pivots(field, n, k, c + 1, pivots, out);
        pivots.pop();
    }
}

fn fill_free(field: &Field, n: usize, pivots: &[usize], out: &mut Vec<Subspace>) {
    let k = pivots.len();
    // free slots: (row i, col j) with j > pivot_i and j not a pivot
    let slots: Vec<(usize, usize)> =
        (0..k).flat_map(|i| ((pivots[i] + 1)..n).filter(|j| !pivots.contains(j)).map(move |j| (i, j))).collect();
    let q = field.q();
    let total = (q as u128).pow(slots.len() as u32);
    let mut m = Matrix::zeros(field, k, n);
    for (i, &p) in pivots.iter().enumerate() {
        m.set(i, p, 1);
    }
    for mut idx in 0..total {
        for &(i, j) in slots.iter().rev() {
            m.set(i, j, (idx % q as u128) as Elem);
            idx /= q as u128;
        }
        out.push(Subspace { n, basis: m.clone(), pivots: pivots.to_vec() });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(lit: &str) -> Field {
        Field::parse(lit).unwrap()
    }

    fn random_matrix(field: &Field, r: usize, c: usize, rng: &mut impl Rng) -> Matrix {
        Matrix::from_fn(field, r, c, |_, _| rng.gen_range(0..field.q()))
    }

    fn span_set(field: &Field, m: &Matrix) -> std::collections::BTreeSet<Vector> {
        span_iter(field, m.ncols(), m.row_vecs()).collect()
    }

    #[test]
    fn rref_examples() {
        let f2 = f("2");
        let m = Matrix::from_rows(&f2, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rref(), Matrix::from_rows(&f2, &[vec![1, 1], vec![0, 0]]));
        assert_eq!(Matrix::identity(&f2, 3).rref(), Matrix::identity(&f2, 3));
    }

    #[test]
    fn rref_preserves_row_space() {
        let f3 = f("3");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = random_matrix(&f3, 3, 3, &mut rng);
            assert_eq!(span_set(&f3, &a), span_set(&f3, &a.rref()));
        }
    }

    #[test]
    fn lattice_examples() {
        let f2 = f("2");
        let e = |i| Subspace::span(&f2, 3, &[unit_vector(3, i)]);
        assert_eq!(e(0).sum(&e(1)), Subspace::span(&f2, 3, &[vec![1, 0, 0], vec![0, 1, 0]]));
        let a = e(0).sum(&e(1));
        let b = e(1).sum(&e(2));
        assert_eq!(a.intersect(&b), e(1));
        assert_eq!(a.sum(&Subspace::zero(&f2, 3)), a);
        assert_eq!(a.intersect(&Subspace::full(&f2, 3)), a);
        assert_eq!(a.try_sum(&Subspace::zero(&f2, 4)), Err(Error::AmbientMismatch(3, 4)));
    }

    #[test]
    fn intersection_against_vector_sets() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for lit in ["2", "3", "2^2::1"] {
            let fld = f(lit);
            for _ in 0..200 {
                let n = rng.gen_range(1..=4);
                let (ka, kb) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
                let a = Subspace::from_matrix(&random_matrix(&fld, ka, n, &mut rng));
                let b = Subspace::from_matrix(&random_matrix(&fld, kb, n, &mut rng));
                let (s, i) = (a.sum(&b), a.intersect(&b));
                assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
                let va: std::collections::BTreeSet<Vector> = a.vectors().collect();
                let vi: std::collections::BTreeSet<Vector> = b.vectors().filter(|v| va.contains(v)).collect();
                assert_eq!(vi, i.vectors().collect());
            }
        }
    }

    #[test]
    fn span_iter_is_lexicographic() {
        let f3 = f("3");
        let w = Subspace::span(&f3, 3, &[vec![1, 2, 0], vec![0, 1, 1]]);
        let vs: Vec<Vector> = w.vectors().collect();
        let mut sorted = vs.clone();
        sorted.sort();
        assert_eq!(vs, sorted);
        assert_eq!(vs.len(), 9);
    }

    #[test]
    fn quotient_map_contract() {
        let f3 = f("3");
        let z = Subspace::span(&f3, 2, &[vec![1, 1]]);
        let qm = quotient_coordinates(2, &z);
        assert_eq!(qm.proj.rank(), 1);
        let kernel: Vec<Vector> = all_vectors(&f3, 2).filter(|v| qm.proj.mul_vec(v).iter().all(|&a| a == 0)).collect();
        assert_eq!(kernel, z.vectors().collect::<Vec<_>>());
        assert!(qm.proj.mul(&qm.section).is_identity());
        let q0 = quotient_coordinates(3, &Subspace::zero(&f3, 3));
        assert!(q0.proj.is_identity());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(1..=5);
            let z = Subspace::from_matrix(&random_matrix(&f3, rng.gen_range(0..=n), n, &mut rng));
            let qm = quotient_coordinates(n, &z);
            assert_eq!(qm.proj.nrows(), n - z.dim());
            assert!(qm.proj.mul(&qm.section).is_identity());
            assert_eq!(Subspace::span(&f3, n, &qm.proj.nullspace()), z);
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_subspaces(&f("2"), 2, 1, DEFAULT_SUBSPACE_CAP).unwrap().len(), 3);
        assert_eq!(enumerate_subspaces(&f("3"), 3, 1, DEFAULT_SUBSPACE_CAP).unwrap().len(), 13);
        let z = enumerate_subspaces(&f("3"), 4, 0, DEFAULT_SUBSPACE_CAP).unwrap();
        assert_eq!(z, vec![Subspace::zero(&f("3"), 4)]);
        for lit in ["2", "3", "2^2::1"] {
            let fld = f(lit);
            for n in 0..=4 {
                for k in 0..=n {
                    let a = enumerate_subspaces(&fld, n, k, DEFAULT_SUBSPACE_CAP).unwrap();
                    let b = enumerate_subspaces(&fld, n, n - k, DEFAULT_SUBSPACE_CAP).unwrap();
                    assert_eq!(a.len(), b.len());
                    assert_eq!(a.len() as u128, gaussian_binomial(n, k, fld.q()));
                    let set: std::collections::HashSet<_> = a.iter().cloned().collect();
                    assert_eq!(set.len(), a.len());
                    assert!(a.iter().all(|w| w.dim() == k));
                }
            }
        }
        // brute force: lines of F_2^2 are nonzero vectors up to scaling
        let f5 = f("5");
        let lines: std::collections::HashSet<Subspace> =
            all_vectors(&f5, 2).filter(|v| v.iter().any(|&a| a != 0)).map(|v| Subspace::span(&f5, 2, &[v])).collect();
        assert_eq!(lines.len(), enumerate_subspaces(&f5, 2, 1, DEFAULT_SUBSPACE_CAP).unwrap().len());
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(enumerate_subspaces(&f("3"), 6, 3, 1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn inverse_and_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let fld = f("3^2::1");
        for _ in 0..100 {
            let a = random_matrix(&fld, 3, 3, &mut rng);
            match a.inverse() {
                Some(b) => {
                    assert!(a.mul(&b).is_identity());
                    assert!(b.mul(&a).is_identity());
                }
                None => assert!(a.rank() < 3),
            }
        }
    }

    #[test]
    fn annihilator_dimension() {
        let f3 = f("3");
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let w = Subspace::from_matrix(&random_matrix(&f3, 2, 4, &mut rng));
            let ann = w.annihilator();
            assert_eq!(ann.dim() + w.dim(), 4);
            assert!(w.basis().mul(&ann.basis().transpose()).is_zero());
        }
    }
}
