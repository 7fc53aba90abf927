//! Finite graded posets, stored fully materialized.

mod buildings;

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{cap_check, Error, Result};

pub use buildings::{
    gl_building, gl_building_bar, isotropic_building, isotropic_relative_building, join_decomposition_map,
    pad_subspace, quotient_building_map, relative_building, relative_building_bar, relative_building_bar_t,
    stabilization_inclusion, Building, BuildingKind,
};

/// Hard limit on materialized poset size (the order relation is a dense bit matrix).
pub const MAX_POSET_SIZE: usize = 40_000;

pub trait Label: Clone + Eq + Hash + Ord + Debug {}
impl<T: Clone + Eq + Hash + Ord + Debug> Label for T {}

#[derive(Clone, Debug)]
pub struct FinitePoset<T: Label> {
    elements: Vec<T>,
    index: HashMap<T, usize>,
    /// below[i] = {j : j < i}
    below: Vec<FixedBitSet>,
    rank: Vec<usize>,
    covers: Vec<Vec<usize>>,
    dim: isize,
}

impl<T: Label> FinitePoset<T> {
    /// Builds the poset on `elements` (deduplicated and sorted) with the given order.
    pub fn from_relation(mut elements: Vec<T>, leq: impl Fn(&T, &T) -> bool) -> Result<Self> {
        elements.sort();
        elements.dedup();
        cap_check("poset size", elements.len() as u128, MAX_POSET_SIZE as u128)?;
        let n = elements.len();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in 0..n {
                if i != j && leq(&elements[j], &elements[i]) {
                    below[i].insert(j);
                }
            }
        }
        Self::from_below(elements, below)
    }

    fn from_below(elements: Vec<T>, below: Vec<FixedBitSet>) -> Result<Self> {
        let n = elements.len();
        for i in 0..n {
            for j in below[i].ones() {
                if below[j].contains(i) {
                    return Err(Error::NotGraded(format!(
                        "{:?} and {:?} are mutually below",
                        elements[i], elements[j]
                    )));
                }
                if !below[j].is_subset(&below[i]) {
                    return Err(Error::NotGraded("order relation is not transitive".into()));
                }
            }
        }
        // strict order is a DAG; sizes of down-sets give a linear extension
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| below[i].count_ones(..));
        let mut rank = vec![0usize; n];
        for &i in &order {
            rank[i] = below[i].ones().map(|j| rank[j] + 1).max().unwrap_or(0);
        }
        let mut covers = vec![Vec::new(); n];
        for i in 0..n {
            let mut inner = FixedBitSet::with_capacity(n);
            for j in below[i].ones() {
                inner.union_with(&below[j]);
            }
            covers[i] = below[i].ones().filter(|&j| !inner.contains(j)).collect();
        }
        let dim = rank.iter().map(|&r| r as isize).max().unwrap_or(-1);
        let index = elements.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let p = FinitePoset { elements, index, below, rank, covers, dim };
        p.check_graded()?;
        Ok(p)
    }

    fn check_graded(&self) -> Result<()> {
        for i in 0..self.len() {
            for &j in &self.covers[i] {
                if self.rank[i] != self.rank[j] + 1 {
                    return Err(Error::NotGraded(format!(
                        "cover {:?} < {:?} jumps rank {} -> {}",
                        self.elements[j], self.elements[i], self.rank[j], self.rank[i]
                    )));
                }
            }
        }
        let n = self.len();
        let mut has_above = vec![false; n];
        for i in 0..n {
            for j in self.below[i].ones() {
                has_above[j] = true;
            }
        }
        if let Some(i) = (0..n).find(|&i| !has_above[i] && self.rank[i] as isize != self.dim) {
            return Err(Error::NotGraded(format!("maximal element {:?} has rank {}", self.elements[i], self.rank[i])));
        }
        Ok(())
    }

    pub fn empty() -> Self {
        FinitePoset { elements: vec![], index: HashMap::new(), below: vec![], rank: vec![], covers: vec![], dim: -1 }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn elements(&self) -> &[T] {
        &self.elements
    }
    pub fn element(&self, i: usize) -> &T {
        &self.elements[i]
    }
    pub fn index_of(&self, t: &T) -> Option<usize> {
        self.index.get(t).copied()
    }
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(i)
    }
    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.lt(i, j)
    }
    pub fn below(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.below[i].ones()
    }
    pub fn rank(&self, i: usize) -> usize {
        self.rank[i]
    }
    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }
    pub fn dim(&self) -> isize {
        self.dim
    }
    /// Elements covered by i.
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }
    pub fn of_rank(&self, r: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.rank[i] == r).collect()
    }
    /// Number of elements of each rank.
    pub fn rank_counts(&self) -> Vec<usize> {
        let mut c = vec![0; (self.dim + 1).max(0) as usize];
        for &r in &self.rank {
            c[r] += 1;
        }
        c
    }

    /// Induced subposet on the given indices.
    pub fn subposet(&self, idx: &[usize]) -> Result<Self> {
        let mut idx = idx.to_vec();
        idx.sort_by(|&a, &b| self.elements[a].cmp(&self.elements[b]));
        idx.dedup();
        let m = idx.len();
        let mut below = vec![FixedBitSet::with_capacity(m); m];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                if self.lt(j, i) {
                    below[a].insert(b);
                }
            }
        }
        Self::from_below(idx.iter().map(|&i| self.elements[i].clone()).collect(), below)
    }

    /// The open interval (x, y); `None` stands for -infinity resp. +infinity.
    pub fn interval(&self, x: Option<usize>, y: Option<usize>) -> Result<Self> {
        let idx: Vec<usize> =
            (0..self.len()).filter(|&z| x.is_none_or(|x| self.lt(x, z)) && y.is_none_or(|y| self.lt(z, y))).collect();
        self.subposet(&idx)
    }

    /// Same elements with the order reversed.
    pub fn reversed(&self) -> Result<Self> {
        let n = self.len();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in self.below[i].ones() {
                below[j].insert(i);
            }
        }
        Self::from_below(self.elements.clone(), below)
    }

    /// Relabels elements through an injective map.
    pub fn map_labels<U: Label>(&self, f: impl Fn(&T) -> U) -> Result<FinitePoset<U>> {
        let labels: Vec<U> = self.elements.iter().map(&f).collect();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let pos: Vec<usize> = {
            let mut p = vec![0; self.len()];
            for (k, &i) in order.iter().enumerate() {
                p[i] = k;
            }
            p
        };
        let n = self.len();
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in self.below[i].ones() {
                below[pos[i]].insert(pos[j]);
            }
        }
        let elements: Vec<U> = order.iter().map(|&i| labels[i].clone()).collect();
        let mut sorted = elements.clone();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::InvalidParameters("relabeling is not injective".into()));
        }
        FinitePoset::from_below(elements, below)
    }

    /// P * Q: disjoint union with every element of P below every element of Q.
    pub fn join(&self, upper: &FinitePoset<T>) -> Result<FinitePoset<Joined<T>>> {
        let (n, m) = (self.len(), upper.len());
        let mut elements: Vec<Joined<T>> = self.elements.iter().cloned().map(Joined::Lower).collect();
        elements.extend(upper.elements.iter().cloned().map(Joined::Upper));
        let mut below = vec![FixedBitSet::with_capacity(n + m); n + m];
        for (row, own) in below.iter_mut().zip(&self.below) {
            row.union_with(own);
        }
        for i in 0..m {
            below[n + i].insert_range(0..n);
            for j in upper.below[i].ones() {
                below[n + i].insert(n + j);
            }
        }
        FinitePoset::from_below(elements, below)
    }

    /// Strict chains with k+1 elements, for k = 0..=dim, each as increasing index lists.
    pub fn chains(&self, cap: u128) -> Result<Vec<Vec<Vec<usize>>>> {
        let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut level: Vec<Vec<usize>> = (0..self.len()).map(|i| vec![i]).collect();
        let mut total = level.len() as u128;
        while !level.is_empty() {
            let mut next = Vec::new();
            for c in &level {
                let top = *c.last().unwrap();
                for j in 0..self.len() {
                    if self.lt(top, j) {
                        let mut d = c.clone();
                        d.push(j);
                        next.push(d);
                    }
                }
            }
            total += next.len() as u128;
            cap_check("order complex simplices", total, cap)?;
            out.push(level);
            level = next;
        }
        Ok(out)
    }

    /// Covering relations as (lower, upper) index pairs, labels rendered by `label`.
    pub fn hasse(&self, label: impl Fn(&T) -> String) -> HasseDump {
        HasseDump {
            elements: (0..self.len())
                .map(|i| HasseNode { id: i, rank: self.rank[i], label: label(&self.elements[i]) })
                .collect(),
            covers: (0..self.len()).flat_map(|i| self.covers[i].iter().map(move |&j| (j, i))).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HasseNode {
    pub id: usize,
    pub rank: usize,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HasseDump {
    pub elements: Vec<HasseNode>,
    pub covers: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Joined<T> {
    Lower(T),
    Upper(T),
}

/// A map of finite posets given on indices.
#[derive(Clone, Debug)]
pub struct PosetMap {
    pub assignment: Vec<usize>,
}

impl PosetMap {
    pub fn is_order_preserving<S: Label, T: Label>(&self, src: &FinitePoset<S>, tgt: &FinitePoset<T>) -> bool {
        (0..src.len()).all(|i| src.below(i).all(|j| tgt.leq(self.assignment[j], self.assignment[i])))
    }
    pub fn preserves_rank<S: Label, T: Label>(&self, src: &FinitePoset<S>, tgt: &FinitePoset<T>) -> bool {
        (0..src.len()).all(|i| src.rank(i) == tgt.rank(self.assignment[i]))
    }
    pub fn is_injective(&self) -> bool {
        let mut a = self.assignment.clone();
        a.sort_unstable();
        a.windows(2).all(|w| w[0] != w[1])
    }
    /// Bijective, with inverse also order preserving.
    pub fn is_isomorphism<S: Label, T: Label>(&self, src: &FinitePoset<S>, tgt: &FinitePoset<T>) -> bool {
        src.len() == tgt.len()
            && self.is_injective()
            && (0..src.len())
                .all(|i| (0..src.len()).all(|j| src.leq(i, j) == tgt.leq(self.assignment[i], self.assignment[j])))
    }
}

#[cfg(test)]
mod tests;
