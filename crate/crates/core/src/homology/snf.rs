//! Smith normal form over the integers.
//!
//! Elimination first runs on `i64` with checked arithmetic and restarts on
//! `BigInt` the moment anything overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Mat<i64>;
pub type BigMatrix = Mat<BigInt>;

impl<T: Clone + Zero + One> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Mat { rows: rows.len(), cols, data: rows.concat() }
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
    /// Stacks matrices of equal width on top of each other.
    pub fn vstack(parts: &[Self], cols: usize) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack width");
            data.extend(p.data.iter().cloned());
            rows += p.rows;
        }
        Mat { rows, cols, data }
    }
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl<T> Mat<T>
where
    T: Clone + Zero + One + std::ops::Mul<Output = T> + std::ops::Sub<Output = T>,
{
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * o.get(k, j).clone();
                }
            }
        }
        out
    }
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }
    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl IntMatrix {
    pub fn to_big(&self) -> BigMatrix {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| BigInt::from(x)).collect() }
    }
}

impl BigMatrix {
    /// None if some entry does not fit in i64.
    pub fn to_i64(&self) -> Option<IntMatrix> {
        let data = self.data.iter().map(|x| x.to_i64()).collect::<Option<Vec<_>>>()?;
        Some(Mat { rows: self.rows, cols: self.cols, data })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                for j in 0..n {
                    a.data.swap(p * n + j, k * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * prev
    }
}

/// Ring operations the elimination needs; `None` signals overflow.
trait Ring: Clone + PartialEq + Zero + One + std::fmt::Debug {
    fn add_c(&self, o: &Self) -> Option<Self>;
    fn mul_c(&self, o: &Self) -> Option<Self>;
    fn neg_c(&self) -> Option<Self>;
    fn abs_key(&self) -> BigInt;
    /// Quotient rounding toward negative infinity.
    fn div_floor_c(&self, o: &Self) -> Self;
    fn is_divisible(&self, o: &Self) -> bool;
    fn is_negative(&self) -> bool;
    fn into_big(self) -> BigInt;
}

impl Ring for i64 {
    fn add_c(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg_c(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn abs_key(&self) -> BigInt {
        BigInt::from(*self).abs()
    }
    fn div_floor_c(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn is_divisible(&self, o: &Self) -> bool {
        self % o == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
}

impl Ring for BigInt {
    fn add_c(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul_c(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg_c(&self) -> Option<Self> {
        Some(-self)
    }
    fn abs_key(&self) -> BigInt {
        self.abs()
    }
    fn div_floor_c(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn is_divisible(&self, o: &Self) -> bool {
        (self % o).is_zero()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn into_big(self) -> BigInt {
        self
    }
}

/// Result of a Smith normal form computation: `u * m * v = s`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub s: BigMatrix,
    pub u: BigMatrix,
    pub v: BigMatrix,
    pub u_inv: BigMatrix,
    pub v_inv: BigMatrix,
    /// nonzero diagonal entries, positive, each dividing the next
    pub invariant_factors: Vec<BigInt>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// A transform together with its inverse.
type Pair<T> = (Vec<Vec<T>>, Vec<Vec<T>>);

struct Work<T> {
    a: Vec<Vec<T>>,
    /// transforms are tracked only when requested
    u: Option<Pair<T>>,
    v: Option<Pair<T>>,
}

fn ident<T: Ring>(n: usize) -> Vec<Vec<T>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

/// row_i += c * row_j over the rows of `m`.
fn row_axpy<T: Ring>(m: &mut [Vec<T>], i: usize, c: &T, j: usize) -> Option<()> {
    if c.is_zero() {
        return Some(());
    }
    let (src, dst) = if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&hi[0], &mut lo[i])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&lo[j], &mut hi[0])
    };
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.add_c(&c.mul_c(s)?)?;
        }
    }
    Some(())
}

/// col_i += c * col_j.
fn col_axpy<T: Ring>(m: &mut [Vec<T>], i: usize, c: &T, j: usize) -> Option<()> {
    if c.is_zero() {
        return Some(());
    }
    for r in m.iter_mut() {
        if !r[j].is_zero() {
            r[i] = r[i].add_c(&c.mul_c(&r[j])?)?;
        }
    }
    Some(())
}

fn swap_cols<T>(m: &mut [Vec<T>], i: usize, j: usize) {
    for r in m.iter_mut() {
        r.swap(i, j);
    }
}

impl<T: Ring> Work<T> {
    // Every row operation R on `a` is applied as R to u and R^-1 to u_inv (on the right),
    // and dually for columns, so u * m * v = a and u * u_inv = 1 hold throughout.
    fn add_row(&mut self, i: usize, c: &T, j: usize) -> Option<()> {
        row_axpy(&mut self.a, i, c, j)?;
        if let Some((u, ui)) = &mut self.u {
            row_axpy(u, i, c, j)?;
            col_axpy(ui, j, &c.neg_c()?, i)?;
        }
        Some(())
    }
    fn add_col(&mut self, i: usize, c: &T, j: usize) -> Option<()> {
        col_axpy(&mut self.a, i, c, j)?;
        if let Some((v, vi)) = &mut self.v {
            col_axpy(v, i, c, j)?;
            row_axpy(vi, j, &c.neg_c()?, i)?;
        }
        Some(())
    }
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some((u, ui)) = &mut self.u {
            u.swap(i, j);
            swap_cols(ui, i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        swap_cols(&mut self.a, i, j);
        if let Some((v, vi)) = &mut self.v {
            swap_cols(v, i, j);
            vi.swap(i, j);
        }
    }
    fn negate_row(&mut self, i: usize) -> Option<()> {
        for x in self.a[i].iter_mut() {
            *x = x.neg_c()?;
        }
        if let Some((u, ui)) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = x.neg_c()?;
            }
            for r in ui.iter_mut() {
                r[i] = r[i].neg_c()?;
            }
        }
        Some(())
    }

    fn run(&mut self) -> Option<()> {
        let rows = self.a.len();
        let cols = self.a.first().map_or(0, |r| r.len());
        for t in 0..rows.min(cols) {
            if !self.pivot_to(t, t) {
                break;
            }
            loop {
                let p = self.a[t][t].clone();
                let mut dirty = false;
                for i in t + 1..rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].div_floor_c(&p);
                        self.add_row(i, &q.neg_c()?, t)?;
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].div_floor_c(&p);
                        self.add_col(j, &q.neg_c()?, t)?;
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    // a smaller remainder now sits in row or column t; bring it to the pivot
                    self.pivot_to(t, t);
                    continue;
                }
                // divisibility: fold an offending row into row t and keep reducing
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !self.a[i][j].is_divisible(&p)));
                match bad {
                    Some(i) => self.add_row(t, &T::one(), i)?,
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t)?;
            }
        }
        Some(())
    }

    /// Moves a nonzero entry of least absolute value in the block [t.., c..] to (t, c).
    fn pivot_to(&mut self, t: usize, c: usize) -> bool {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for (i, r) in self.a.iter().enumerate().skip(t) {
            for (j, x) in r.iter().enumerate().skip(c) {
                if !x.is_zero() {
                    let k = x.abs_key();
                    if best.as_ref().is_none_or(|(b, _, _)| k < *b) {
                        let one = k.is_one();
                        best = Some((k, i, j));
                        if one {
                            break;
                        }
                    }
                }
            }
            if best.as_ref().is_some_and(|(b, _, _)| b.is_one()) {
                break;
            }
        }
        let Some((_, i, j)) = best else { return false };
        if i != t {
            self.swap_rows(i, t);
        }
        if j != c {
            self.swap_cols(j, c);
        }
        true
    }
}

fn to_rows<T: Ring>(m: &IntMatrix, conv: impl Fn(i64) -> T) -> Vec<Vec<T>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&x| conv(x)).collect()).collect()
}

fn big_mat<T: Ring>(rows: Vec<Vec<T>>, ncols: usize) -> BigMatrix {
    let r = rows.len();
    Mat { rows: r, cols: ncols, data: rows.into_iter().flatten().map(Ring::into_big).collect() }
}

fn attempt<T: Ring>(m: &IntMatrix, conv: impl Fn(i64) -> T, transforms: bool) -> Option<Work<T>> {
    let mut w = Work {
        a: to_rows(m, conv),
        u: transforms.then(|| (ident(m.rows()), ident(m.rows()))),
        v: transforms.then(|| (ident(m.cols()), ident(m.cols()))),
    };
    w.run()?;
    Some(w)
}

fn diag_of<T: Ring>(a: &[Vec<T>]) -> Vec<BigInt> {
    (0..a.len().min(a.first().map_or(0, |r| r.len())))
        .map(|i| a[i][i].clone())
        .take_while(|x| !x.is_zero())
        .map(Ring::into_big)
        .collect()
}

/// Full decomposition `u * m * v = s` with unimodular `u`, `v` and their inverses.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    macro_rules! pack {
        ($w:expr) => {{
            let w = $w;
            let invariant_factors = diag_of(&w.a);
            let (u, ui) = w.u.unwrap();
            let (v, vi) = w.v.unwrap();
            Snf {
                s: big_mat(w.a, c),
                u: big_mat(u, r),
                v: big_mat(v, c),
                u_inv: big_mat(ui, r),
                v_inv: big_mat(vi, c),
                invariant_factors,
            }
        }};
    }
    match attempt(m, |x| x, true) {
        Some(w) => pack!(w),
        None => pack!(attempt(m, BigInt::from, true).expect("big integers do not overflow")),
    }
}

/// Invariant factors only, skipping the transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    match attempt(m, |x| x, false) {
        Some(w) => diag_of(&w.a),
        None => diag_of(&attempt(m, BigInt::from, false).expect("big integers do not overflow").a),
    }
}

/// Integer rank.
pub fn int_rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}
