use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use super::snf::{invariant_factors, smith_normal_form, IntMatrix};
use crate::error::{cap_check, Error, Result};
use crate::poset::{FinitePoset, Label};

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(i) => seq.serialize_element(&i)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

/// H = Z^betti + sum Z/t for t in torsion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: isize,
    pub betti: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero(degree: isize) -> Self {
        HomologyGroup { degree, betti: 0, torsion: vec![] }
    }
    pub fn free(degree: isize, betti: usize) -> Self {
        HomologyGroup { degree, betti, torsion: vec![] }
    }
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
    /// Cokernel of an integer matrix, as a group in the given degree.
    pub fn cokernel(degree: isize, m: &IntMatrix) -> Self {
        let f = invariant_factors(m);
        HomologyGroup { degree, betti: m.rows() - f.len(), torsion: f.into_iter().filter(|x| !x.is_one()).collect() }
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Free chain complex with labeled bases.
#[derive(Clone, Debug, Serialize)]
pub struct IntChainComplex {
    pub min_degree: isize,
    /// basis labels, index k holds degree min_degree + k
    pub labels: Vec<Vec<String>>,
    /// boundaries[k]: C_{min+k} -> C_{min+k-1}; boundaries[0] has zero rows
    pub boundaries: Vec<IntMatrix>,
}

impl IntChainComplex {
    /// Checks shapes and that consecutive boundaries compose to zero.
    pub fn new(min_degree: isize, labels: Vec<Vec<String>>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if labels.len() != boundaries.len() {
            return Err(Error::InvalidParameters("one boundary per degree".into()));
        }
        for (k, d) in boundaries.iter().enumerate() {
            let below = if k == 0 { 0 } else { labels[k - 1].len() };
            if d.cols() != labels[k].len() || d.rows() != below {
                return Err(Error::InvalidParameters(format!(
                    "boundary in degree {} has shape {}x{}",
                    min_degree + k as isize,
                    d.rows(),
                    d.cols()
                )));
            }
            if k > 0 && !boundaries[k - 1].mul(d).is_zero() {
                return Err(Error::InvalidParameters(format!(
                    "boundary squares to nonzero in degree {}",
                    min_degree + k as isize
                )));
            }
        }
        Ok(IntChainComplex { min_degree, labels, boundaries })
    }

    pub fn max_degree(&self) -> isize {
        self.min_degree + self.labels.len() as isize - 1
    }

    pub fn rank(&self, degree: isize) -> usize {
        self.slot(degree).map_or(0, |k| self.labels[k].len())
    }

    fn slot(&self, degree: isize) -> Option<usize> {
        let k = degree - self.min_degree;
        (k >= 0 && (k as usize) < self.labels.len()).then_some(k as usize)
    }

    /// The boundary out of `degree`; a zero map outside the stored range.
    pub fn boundary(&self, degree: isize) -> IntMatrix {
        match self.slot(degree) {
            Some(k) => self.boundaries[k].clone(),
            None => IntMatrix::zeros(self.rank(degree - 1), self.rank(degree)),
        }
    }

    /// Homology in every stored degree, ascending.
    pub fn homology(&self) -> Vec<HomologyGroup> {
        let factors: Vec<Vec<BigInt>> = self.boundaries.iter().map(invariant_factors).collect();
        (0..self.labels.len())
            .map(|k| {
                let out_rank = factors[k].len();
                let incoming: &[BigInt] = factors.get(k + 1).map_or(&[], |v| v.as_slice());
                HomologyGroup {
                    degree: self.min_degree + k as isize,
                    betti: self.labels[k].len() - out_rank - incoming.len(),
                    torsion: incoming.iter().filter(|x| !x.is_one()).cloned().collect(),
                }
            })
            .collect()
    }
}

/// A basis of ker(m) from the SNF column transform, with a left inverse on the kernel.
#[derive(Clone, Debug)]
pub struct KernelBasis {
    /// n x k, columns are the basis cycles
    pub basis: IntMatrix,
    /// k x n, recovers coordinates of any kernel vector
    pub coords: IntMatrix,
}

impl KernelBasis {
    pub fn of(m: &IntMatrix) -> Result<Self> {
        let snf = smith_normal_form(m);
        let r = snf.rank();
        let n = m.cols();
        let cols: Vec<usize> = (r..n).collect();
        let rows: Vec<usize> = (0..n).collect();
        let basis = snf.v.submatrix(&rows, &cols).to_i64().ok_or_else(|| Error::Overflow("kernel basis".into()))?;
        let coords =
            snf.v_inv.submatrix(&cols, &rows).to_i64().ok_or_else(|| Error::Overflow("kernel basis".into()))?;
        Ok(KernelBasis { basis, coords })
    }

    pub fn len(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cycle(&self, k: usize) -> Vec<i64> {
        self.basis.col(k)
    }

    /// Coordinates of `z`, or None if `z` is not in the span.
    pub fn coordinates(&self, z: &[i64]) -> Option<Vec<i64>> {
        let y = self.coords.mul_vec(z);
        (self.basis.mul_vec(&y) == z).then_some(y)
    }
}

/// Augmented order complex: simplices are strict chains as increasing index lists.
#[derive(Clone, Debug)]
pub struct OrderComplex {
    /// simplices[k] holds the simplices of degree k - 1 (k = 0 is the empty simplex)
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl OrderComplex {
    pub fn new<T: Label>(p: &FinitePoset<T>, cap: u128) -> Result<Self> {
        let mut simplices = vec![vec![vec![]]];
        simplices.extend(p.chains(cap)?);
        let index =
            simplices.iter().map(|lvl| lvl.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        Ok(OrderComplex { simplices, index })
    }

    pub fn top_degree(&self) -> isize {
        self.simplices.len() as isize - 2
    }

    pub fn simplices(&self, degree: isize) -> &[Vec<usize>] {
        let k = degree + 1;
        if k < 0 || k as usize >= self.simplices.len() {
            return &[];
        }
        &self.simplices[k as usize]
    }

    pub fn count(&self, degree: isize) -> usize {
        self.simplices(degree).len()
    }

    pub fn index_of(&self, degree: isize, s: &[usize]) -> Option<usize> {
        let k = degree + 1;
        if k < 0 {
            return None;
        }
        self.index.get(k as usize)?.get(s).copied()
    }

    /// d: C_degree -> C_{degree-1}, removing vertex i with sign (-1)^i.
    pub fn boundary(&self, degree: isize) -> IntMatrix {
        self.boundary_restricted(degree, |_| true)
    }

    /// Boundary of the subquotient spanned by simplices passing `keep`.
    pub(crate) fn boundary_restricted(&self, degree: isize, keep: impl Fn(&[usize]) -> bool) -> IntMatrix {
        let src: Vec<usize> = (0..self.count(degree)).filter(|&i| keep(&self.simplices(degree)[i])).collect();
        let tgt: Vec<usize> = (0..self.count(degree - 1)).filter(|&i| keep(&self.simplices(degree - 1)[i])).collect();
        let tpos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let mut d = IntMatrix::zeros(tgt.len(), src.len());
        for (c, &i) in src.iter().enumerate() {
            let s = &self.simplices(degree)[i];
            for v in 0..s.len() {
                let mut face = s.clone();
                face.remove(v);
                let fi = self.index_of(degree - 1, &face).expect("faces of chains are chains");
                if let Some(&r) = tpos.get(&fi) {
                    d.set(r, c, if v % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        d
    }

    /// Chain complex from degree -1 up to the top degree.
    pub fn chain_complex(&self, label: impl Fn(&[usize]) -> String) -> Result<IntChainComplex> {
        let labels = self.simplices.iter().map(|lvl| lvl.iter().map(|s| label(s)).collect()).collect();
        let boundaries = (-1..=self.top_degree()).map(|d| self.boundary(d)).collect();
        IntChainComplex::new(-1, labels, boundaries)
    }

    /// Image of a simplex under an order automorphism given on vertices.
    pub fn map_simplex(&self, degree: isize, s: &[usize], perm: &[usize]) -> Option<usize> {
        let img: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
        self.index_of(degree, &img)
    }
}

/// Reduced integral homology of the order complex, degrees -1..=dim P.
pub fn reduced_homology<T: Label>(p: &FinitePoset<T>, cap: u128) -> Result<Vec<HomologyGroup>> {
    let oc = OrderComplex::new(p, cap)?;
    let total: usize = (-1..=oc.top_degree()).map(|d| oc.count(d)).sum();
    cap_check("order complex size", total as u128, cap)?;
    Ok(oc.chain_complex(|_| String::new())?.homology())
}

/// The group in a given degree, zero outside the computed range.
pub fn degree(groups: &[HomologyGroup], d: isize) -> HomologyGroup {
    groups.iter().find(|h| h.degree == d).cloned().unwrap_or_else(|| HomologyGroup::zero(d))
}
