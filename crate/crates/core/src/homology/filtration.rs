use std::collections::HashMap;

use serde::Serialize;

use super::chain::{reduced_homology, HomologyGroup, IntChainComplex, KernelBasis, OrderComplex};
use super::cm::check_cohen_macaulay;
use super::snf::IntMatrix;
use crate::error::{Error, Result};
use crate::poset::{FinitePoset, Label};

/// Top homology of P_{<X} with simplices written in indices of the ambient poset.
struct LowerCycles {
    simplex_index: HashMap<Vec<usize>, usize>,
    kernel: KernelBasis,
    simplices: Vec<Vec<usize>>,
}

fn lower_cycles<T: Label>(p: &FinitePoset<T>, x: usize, cap: u128) -> Result<LowerCycles> {
    let lower = p.interval(None, Some(x))?;
    let oc = OrderComplex::new(&lower, cap)?;
    let top = p.rank(x) as isize - 1;
    let global: Vec<usize> = lower.elements().iter().map(|t| p.index_of(t).expect("subposet label")).collect();
    let simplices: Vec<Vec<usize>> = oc.simplices(top).iter().map(|s| s.iter().map(|&i| global[i]).collect()).collect();
    let kernel = KernelBasis::of(&oc.boundary(top))?;
    let simplex_index = simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    Ok(LowerCycles { simplex_index, kernel, simplices })
}

/// The complex with C_r = sum over rank-r X of H_{r-1}(P_{<X}) and differential d^1 of the rank filtration.
pub fn rank_filtration_complex<T: Label>(p: &FinitePoset<T>, cap: u128) -> Result<IntChainComplex> {
    let report = check_cohen_macaulay(p, cap)?;
    if let Some(f) = report.failure {
        return Err(Error::NotCohenMacaulay(format!(
            "interval ({}, {}): {}",
            f.lower.as_deref().unwrap_or("-inf"),
            f.upper.as_deref().unwrap_or("+inf"),
            f.reason
        )));
    }
    let cycles: Vec<LowerCycles> = (0..p.len()).map(|x| lower_cycles(p, x, cap)).collect::<Result<_>>()?;
    let top = p.dim();
    // basis of C_r: (X, k) for rank-r X and the k-th chosen cycle; C_{-1} = Z
    let mut bases: Vec<Vec<(usize, usize)>> = vec![vec![(usize::MAX, 0)]];
    for r in 0..=top {
        let mut b = Vec::new();
        for x in p.of_rank(r as usize) {
            b.extend((0..cycles[x].kernel.len()).map(|k| (x, k)));
        }
        bases.push(b);
    }
    let pos: Vec<HashMap<(usize, usize), usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, &xk)| (xk, i)).collect()).collect();
    let mut boundaries = vec![IntMatrix::zeros(0, 1)];
    for r in 0..=top {
        let slot = (r + 1) as usize;
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let mut d = IntMatrix::zeros(bases[slot - 1].len(), bases[slot].len());
        for (col, &(x, k)) in bases[slot].iter().enumerate() {
            let lc = &cycles[x];
            let z = lc.kernel.cycle(k);
            // the boundary of the cone z * X is (-1)^r z; split z by its top vertex Y
            let mut parts: HashMap<Option<usize>, Vec<(Vec<usize>, i64)>> = HashMap::new();
            for (s, &c) in lc.simplices.iter().zip(&z) {
                if c != 0 {
                    let mut face = s.clone();
                    let y = face.pop();
                    parts.entry(y).or_default().push((face, c));
                }
            }
            for (y, terms) in parts {
                match y {
                    None => {
                        let c: i64 = terms.iter().map(|t| t.1).sum();
                        d.set(0, col, sign * c);
                    }
                    Some(y) => {
                        let ly = &cycles[y];
                        let mut zy = vec![0i64; ly.simplices.len()];
                        for (face, c) in terms {
                            zy[ly.simplex_index[&face]] += c;
                        }
                        let coords = ly.kernel.coordinates(&zy).ok_or_else(|| {
                            Error::NotCohenMacaulay(format!("link component at {:?} is not a cycle", p.element(y)))
                        })?;
                        for (j, &c) in coords.iter().enumerate() {
                            if c != 0 {
                                let row = pos[slot - 1][&(y, j)];
                                d.set(row, col, d.get(row, col) + sign * c);
                            }
                        }
                    }
                }
            }
        }
        boundaries.push(d);
    }
    let labels = bases
        .iter()
        .map(|b| {
            b.iter()
                .map(|&(x, k)| if x == usize::MAX { "()".to_string() } else { format!("{:?}#{k}", p.element(x)) })
                .collect()
        })
        .collect();
    IntChainComplex::new(-1, labels, boundaries)
}

/// One row of the wedge identity rank H_j(F_r, F_{r-1}) = sum_{X in P_r} rank H_{j-1}(P_{<X}).
#[derive(Clone, Debug, Serialize)]
pub struct WedgeRow {
    pub rank: usize,
    pub degree: isize,
    pub relative: usize,
    pub wedge: usize,
}

impl WedgeRow {
    pub fn holds(&self) -> bool {
        self.relative == self.wedge
    }
}

/// Relative homology of the rank filtration against the lower-interval homology.
pub fn wedge_rank_check<T: Label>(p: &FinitePoset<T>, cap: u128) -> Result<Vec<WedgeRow>> {
    let oc = OrderComplex::new(p, cap)?;
    let mut rows = Vec::new();
    for r in 0..=p.dim().max(-1) {
        let r = r as usize;
        // simplices of F_r not in F_{r-1}: the top vertex has rank r
        let keep = |s: &[usize]| s.last().is_some_and(|&v| p.rank(v) == r);
        let ds: Vec<IntMatrix> = (0..=r as isize + 1).map(|j| oc.boundary_restricted(j, keep)).collect();
        let groups = IntChainComplex::new(
            0,
            (0..=r as isize + 1)
                .map(|j| vec![String::new(); oc.simplices(j).iter().filter(|s| keep(s)).count()])
                .collect(),
            ds,
        )?
        .homology();
        let lower: Vec<Vec<HomologyGroup>> = p
            .of_rank(r)
            .into_iter()
            .map(|x| reduced_homology(&p.interval(None, Some(x))?, cap))
            .collect::<Result<_>>()?;
        for g in &groups {
            let j = g.degree;
            let wedge = lower.iter().map(|h| super::chain::degree(h, j - 1).betti).sum();
            rows.push(WedgeRow { rank: r, degree: j, relative: g.betti, wedge });
        }
    }
    Ok(rows)
}
