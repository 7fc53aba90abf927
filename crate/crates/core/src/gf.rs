//! Arithmetic in GF(p^r) with a chosen involution x -> x^(p^s).
//!
//! Elements are stored as `Elem` indices: the polynomial c_0 + c_1 t + ... is
//! the integer c_0 + c_1 p + ..., so the prime subfield occupies 0..p and the
//! natural integer order is the enumeration order used everywhere.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest field order with precomputed tables.
pub const MAX_ORDER: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub r: u32,
    /// Monic modulus, low degree first, `r + 1` entries.
    pub modulus: Vec<u32>,
    pub s: u32,
}

impl FieldSpec {
    pub fn order(&self) -> u32 {
        self.p.pow(self.r)
    }

    /// `"p^r:c0,c1,...,cr:s"`; modulus and involution parts are optional.
    pub fn parse(lit: &str) -> Result<FieldSpec> {
        let mut parts = lit.trim().split(':');
        let head = parts.next().unwrap_or("");
        let (p, r) = match head.split_once('^') {
            Some((p, r)) => (parse_u32(p)?, parse_u32(r)?),
            None => (parse_u32(head)?, 1),
        };
        if !is_prime(p) || r == 0 {
            return Err(Error::InvalidField(format!("bad characteristic/degree in {lit:?}")));
        }
        let modulus = match parts.next() {
            Some(m) if !m.trim().is_empty() => {
                let m = m.split(',').map(parse_u32).collect::<Result<Vec<_>>>()?;
                if m.len() != r as usize + 1 {
                    return Err(Error::InvalidField(format!("modulus needs {} coefficients", r + 1)));
                }
                m
            }
            _ => default_modulus(p, r)?,
        };
        let s = match parts.next() {
            Some(s) if !s.trim().is_empty() => parse_u32(s)?,
            _ => 0,
        };
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing fields in {lit:?}")));
        }
        Ok(FieldSpec { p, r, modulus, s })
    }

    pub fn literal(&self) -> String {
        let m: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        format!("{}^{}:{}:{}", self.p, self.r, m.join(","), self.s)
    }
}

fn parse_u32(s: &str) -> Result<u32> {
    s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("expected integer, got {s:?}")))
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

// --- polynomials over F_p, low degree first -------------------------------

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut a = poly_trim(a.to_vec());
    let m = poly_trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        for i in 0..=dm {
            let t = a[da - dm + i] + p - c * m[i] % p;
            a[da - dm + i] = t % p;
        }
        a = poly_trim(a);
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let (mut b, mut e) = (a as u64 % p as u64, p as u64 - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn monic_polys(p: u32, d: u32) -> impl Iterator<Item = Vec<u32>> {
    (0..p.pow(d)).map(move |mut k| {
        let mut v: Vec<u32> = (0..d)
            .map(|_| {
                let c = k % p;
                k /= p;
                c
            })
            .collect();
        v.push(1);
        v
    })
}

/// Trial division by every monic polynomial of degree at most r/2.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let f = poly_trim(modulus.to_vec());
    if f.len() < 2 {
        return false;
    }
    let r = f.len() as u32 - 1;
    (1..=r / 2).all(|d| monic_polys(p, d).all(|g| !poly_rem(&f, &g, p).is_empty()))
}

/// Least monic irreducible of degree r in the enumeration order of its lower coefficients.
pub fn default_modulus(p: u32, r: u32) -> Result<Vec<u32>> {
    if !is_prime(p) || r == 0 {
        return Err(Error::InvalidField(format!("{p}^{r}")));
    }
    if (p as u64).pow(r) > MAX_ORDER as u64 {
        return Err(Error::InvalidField(format!("{p}^{r} exceeds {MAX_ORDER}")));
    }
    monic_polys(p, r).find(|f| is_irreducible(f, p)).ok_or(Error::NotIrreducible { p })
}

// --- the field -------------------------------------------------------------

#[derive(Debug)]
struct Tables {
    spec: FieldSpec,
    q: u32,
    add: Vec<Elem>,
    neg: Vec<Elem>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    conj: Vec<Elem>,
}

/// Cheaply clonable handle to a finite field with involution.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.spec.literal())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field> {
        let FieldSpec { p, r, .. } = spec;
        if !is_prime(p) || r == 0 {
            return Err(Error::InvalidField(format!("{p}^{r}")));
        }
        if (p as u64).pow(r) > MAX_ORDER as u64 {
            return Err(Error::InvalidField(format!("order {p}^{r} exceeds {MAX_ORDER}")));
        }
        if spec.modulus.len() != r as usize + 1 || spec.modulus[r as usize] != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree r".into()));
        }
        if spec.modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must be reduced mod p".into()));
        }
        if !is_irreducible(&spec.modulus, p) {
            return Err(Error::NotIrreducible { p });
        }
        if !(2 * spec.s).is_multiple_of(r) || spec.s >= r {
            return Err(Error::InvalidField(format!("involution exponent s={} needs 2s = 0 mod r", spec.s)));
        }
        let q = p.pow(r);
        let ru = r as usize;
        let digits = |mut a: u32| -> Vec<u32> {
            (0..ru)
                .map(|_| {
                    let c = a % p;
                    a /= p;
                    c
                })
                .collect()
        };
        let undigits = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);

        let mut add = vec![0; (q * q) as usize];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s);
            }
        }
        let neg: Vec<Elem> =
            (0..q).map(|a| undigits(&digits(a).iter().map(|&c| (p - c) % p).collect::<Vec<_>>())).collect();

        let polymul = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u32; 2 * ru];
            for i in 0..ru {
                for j in 0..ru {
                    prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                }
            }
            let mut rem = poly_rem(&prod, &spec.modulus, p);
            rem.resize(ru, 0);
            undigits(&rem)
        };

        // Find a primitive element and build exp/log tables.
        let (mut exp, mut log) = (Vec::new(), vec![0u32; q as usize]);
        if q == 2 {
            exp.push(1);
        } else {
            for g in 2..q.max(3) {
                let mut powers = vec![1u32];
                let mut x = g;
                while x != 1 && powers.len() < q as usize {
                    powers.push(x);
                    x = polymul(x, g);
                }
                if powers.len() == (q - 1) as usize && x == 1 {
                    exp = powers;
                    break;
                }
            }
        }
        if exp.len() != (q - 1) as usize {
            return Err(Error::NotIrreducible { p });
        }
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }
        let mul = |a: u32, b: u32| -> u32 {
            if a == 0 || b == 0 {
                0
            } else {
                exp[((log[a as usize] + log[b as usize]) % (q - 1)) as usize]
            }
        };
        let ps = p.pow(spec.s) as u64;
        let conj: Vec<Elem> = (0..q)
            .map(|a| if a == 0 { 0 } else { exp[((log[a as usize] as u64 * ps) % (q as u64 - 1)) as usize] })
            .collect();
        debug_assert!((0..q).all(|a| mul(a, 1) == a));
        Ok(Field(Arc::new(Tables { spec, q, add, neg, exp, log, conj })))
    }

    /// Field from `p^r` with the default modulus and involution exponent `s`.
    pub fn with_involution(p: u32, r: u32, s: u32) -> Result<Field> {
        Field::new(FieldSpec { p, r, modulus: default_modulus(p, r)?, s })
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::with_involution(p, 1, 0)
    }

    pub fn parse(lit: &str) -> Result<Field> {
        Field::new(FieldSpec::parse(lit)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }
    pub fn p(&self) -> u32 {
        self.0.spec.p
    }
    pub fn r(&self) -> u32 {
        self.0.spec.r
    }
    pub fn s(&self) -> u32 {
        self.0.spec.s
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn involution_is_trivial(&self) -> bool {
        self.0.spec.s == 0
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.0.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[(a * self.0.q + b) as usize]
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        t.exp[((t.log[a as usize] + t.log[b as usize]) % (t.q - 1)) as usize]
    }
    /// Multiplicative inverse; panics on zero (use `try_inv` for checked use).
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        let t = &self.0;
        t.exp[((t.q - 1 - t.log[a as usize]) % (t.q - 1)) as usize]
    }
    pub fn try_inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.inv(a))
        }
    }
    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }
    /// sigma(a) = a^(p^s).
    #[inline]
    pub fn conj(&self, a: Elem) -> Elem {
        self.0.conj[a as usize]
    }
    /// sigma(a) * a.
    pub fn norm(&self, a: Elem) -> Elem {
        self.mul(self.conj(a), a)
    }
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &self.0;
        t.exp[((t.log[a as usize] as u64 * (e % (t.q as u64 - 1))) % (t.q as u64 - 1)) as usize]
    }
    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p() as i64) as Elem
    }
    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> Elem {
        self.0.exp.get(1).copied().unwrap_or(1)
    }

    /// Base-p digits, low degree first.
    pub fn digits(&self, mut a: Elem) -> Vec<u32> {
        let p = self.p();
        (0..self.r())
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }
    pub fn from_digits(&self, d: &[u32]) -> Elem {
        let p = self.p();
        d.iter().rev().fold(0, |acc, &c| acc * p + c % p)
    }

    pub fn format(&self, a: Elem) -> String {
        let d: Vec<String> = self.digits(a).iter().map(|c| c.to_string()).collect();
        d.join(",")
    }
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let d = s.split(',').map(parse_u32).collect::<Result<Vec<_>>>()?;
        if d.len() != self.r() as usize || d.iter().any(|&c| c >= self.p()) {
            return Err(Error::Parse(format!("bad element {s:?}")));
        }
        Ok(self.from_digits(&d))
    }

    pub fn element(&self, value: Elem) -> FieldElement {
        FieldElement { field: self.clone(), value: value % self.q() }
    }
}

/// An element bundled with its field, for checked mixed-field arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Elem,
}

impl FieldElement {
    fn same(&self, o: &FieldElement) -> Result<()> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
    pub fn add(&self, o: &FieldElement) -> Result<FieldElement> {
        self.same(o)?;
        Ok(self.field.element(self.field.add(self.value, o.value)))
    }
    pub fn mul(&self, o: &FieldElement) -> Result<FieldElement> {
        self.same(o)?;
        Ok(self.field.element(self.field.mul(self.value, o.value)))
    }
    pub fn neg(&self) -> FieldElement {
        self.field.element(self.field.neg(self.value))
    }
    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.field.element(self.field.try_inv(self.value)?))
    }
    pub fn conj(&self) -> FieldElement {
        self.field.element(self.field.conj(self.value))
    }
    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

/// Solutions of the norm equations governing when doubled forms are hyperbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyWitness {
    /// conj(a) a = -1.
    A(Elem),
    /// conj(a) a + conj(b) b = -1.
    B(Elem, Elem),
    None,
}

pub fn solve_minus_one(f: &Field) -> PropertyWitness {
    let m1 = f.neg(1);
    if let Some(a) = f.elements().find(|&a| f.norm(a) == m1) {
        return PropertyWitness::A(a);
    }
    for a in f.elements() {
        for b in f.elements() {
            if f.add(f.norm(a), f.norm(b)) == m1 {
                return PropertyWitness::B(a, b);
            }
        }
    }
    PropertyWitness::None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.add(2, 2), 1);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.inv(2), 3);
        let f4 = Field::parse("2^2:1,1,1:1").unwrap();
        let t = f4.from_digits(&[0, 1]);
        assert_eq!(f4.mul(t, t), f4.from_digits(&[1, 1]));
        assert_eq!(f4.conj(t), f4.from_digits(&[1, 1]));
    }

    #[test]
    fn checked_ops() {
        let f3 = Field::prime(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f3.element(0).inv(), Err(Error::DivisionByZero));
        assert_eq!(f3.element(1).add(&f5.element(1)), Err(Error::FieldMismatch));
    }

    #[test]
    fn rejects_reducible_modulus() {
        // t^2 + 1 = (t + 1)^2 over F_2
        assert!(matches!(Field::parse("2^2:1,0,1:1"), Err(Error::NotIrreducible { .. })));
        assert!(Field::parse("2^2:1,1,1:1").is_ok());
    }

    #[test]
    fn default_moduli_exist_up_to_1024() {
        for p in (2..=1024).filter(|&p| is_prime(p)) {
            let mut r = 1;
            while (p as u64).pow(r) <= MAX_ORDER as u64 {
                let m = default_modulus(p, r).unwrap();
                assert_eq!(m.len(), r as usize + 1);
                r += 1;
            }
        }
    }

    #[test]
    fn field_axioms_against_polynomial_oracle() {
        // Multiplication through log tables must agree with schoolbook multiplication mod the modulus.
        for lit in ["2^3", "3^2", "5^1", "2^4", "7^2"] {
            let f = Field::parse(lit).unwrap();
            let (p, m) = (f.p(), f.spec().modulus.clone());
            for a in f.elements() {
                for b in f.elements() {
                    let (da, db) = (f.digits(a), f.digits(b));
                    let mut prod = vec![0u32; da.len() + db.len()];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    let mut rem = poly_rem(&prod, &m, p);
                    rem.resize(f.r() as usize, 0);
                    assert_eq!(f.mul(a, b), f.from_digits(&rem));
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn involution_is_field_automorphism_of_order_two() {
        for lit in ["2^2:1,1,1:1", "3^2:1,0,1:1", "2^4::2", "5^2::1", "2^8::4", "3^4::2"] {
            let f = Field::parse(lit).unwrap();
            for a in f.elements() {
                assert_eq!(f.conj(f.conj(a)), a);
                for b in f.elements() {
                    assert_eq!(f.conj(f.add(a, b)), f.add(f.conj(a), f.conj(b)));
                    assert_eq!(f.conj(f.mul(a, b)), f.mul(f.conj(a), f.conj(b)));
                }
            }
            let fixed = f.elements().filter(|&a| f.conj(a) == a).count() as u32;
            assert_eq!(fixed, f.p().pow(f.s()));
        }
    }

    #[test]
    fn sums_of_two_squares() {
        for lit in ["3", "5", "7", "3^2", "11", "5^2", "3^3", "3^4"] {
            let f = Field::parse(lit).unwrap();
            let squares: Vec<Elem> = f.elements().map(|a| f.mul(a, a)).collect();
            for c in f.elements() {
                assert!(squares.iter().any(|&x| squares.iter().any(|&y| f.add(x, y) == c)));
            }
        }
    }

    #[test]
    fn norm_onto_fixed_field() {
        for lit in ["2^2::1", "3^2::1", "2^4::2", "5^2::1", "7^2::1", "2^6::3", "3^4::2", "2^8::4"] {
            let f = Field::parse(lit).unwrap();
            let mut img: Vec<Elem> = f.elements().filter(|&a| a != 0).map(|a| f.norm(a)).collect();
            img.sort();
            img.dedup();
            let fixed: Vec<Elem> = f.elements().filter(|&a| a != 0 && f.conj(a) == a).collect();
            assert_eq!(img, fixed);
        }
    }

    #[test]
    fn minus_one_witnesses() {
        assert_eq!(solve_minus_one(&Field::prime(5).unwrap()), PropertyWitness::A(2));
        assert_eq!(solve_minus_one(&Field::prime(3).unwrap()), PropertyWitness::B(1, 1));
        assert_eq!(solve_minus_one(&Field::parse("2^2::1").unwrap()), PropertyWitness::A(1));
    }

    #[test]
    fn literal_roundtrip() {
        let f = Field::parse("3^2:1,0,1:1").unwrap();
        assert_eq!(Field::parse(&f.spec().literal()).unwrap(), f);
        for a in f.elements() {
            assert_eq!(f.parse_elem(&f.format(a)).unwrap(), a);
        }
    }
}
