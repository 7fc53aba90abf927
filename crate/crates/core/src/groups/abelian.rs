use std::collections::{HashMap, HashSet, VecDeque};

use super::{group_closure, MatrixGroup};
use crate::error::Result;
use crate::homology::{HomologyGroup, IntMatrix};
use crate::linalg::Matrix;

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    let ai = a.inverse().expect("group element");
    let bi = b.inverse().expect("group element");
    a.mul(b).mul(&ai).mul(&bi)
}

/// [G, G] as the normal closure of the generator commutators.
pub fn derived_subgroup(g: &MatrixGroup, cap: usize) -> Result<Vec<Matrix>> {
    let f = g.field();
    let n = g.dim();
    let gens = &g.generators;
    let mut normal_gens: Vec<Matrix> = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = commutator(a, b);
            if !c.is_identity() && !normal_gens.contains(&c) {
                normal_gens.push(c);
            }
        }
    }
    let mut sub: HashSet<Matrix> = group_closure(f, n, &normal_gens, cap)?.into_iter().collect();
    loop {
        let mut grew = false;
        'scan: for s in gens {
            let si = s.inverse().expect("group element");
            for x in &normal_gens {
                let c = s.mul(x).mul(&si);
                if !sub.contains(&c) {
                    normal_gens.push(c);
                    sub = group_closure(f, n, &normal_gens, cap)?.into_iter().collect();
                    grew = true;
                    break 'scan;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Matrix> = sub.into_iter().collect();
    out.sort();
    Ok(out)
}

/// H_1(G; Z) = G / [G, G], read off from the Cayley graph of the quotient on the generators.
pub fn abelianization(g: &MatrixGroup, cap: usize) -> Result<HomologyGroup> {
    let mut g = g.clone();
    g.materialize(cap)?;
    let k = g.generators.len();
    if k == 0 {
        return Ok(HomologyGroup::zero(1));
    }
    let derived = derived_subgroup(&g, cap)?;
    // coset labels of G / [G, G]
    let mut coset: HashMap<Matrix, usize> = HashMap::new();
    let mut reps: Vec<Matrix> = Vec::new();
    for x in g.elements()? {
        if coset.contains_key(x) {
            continue;
        }
        let id = reps.len();
        for d in &derived {
            coset.insert(x.mul(d), id);
        }
        reps.push(x.clone());
    }
    let start = coset[&g.identity()];
    // spanning tree from the identity coset; v_c is the generator count along the tree path
    let mut v: Vec<Option<Vec<i64>>> = vec![None; reps.len()];
    v[start] = Some(vec![0; k]);
    let mut queue = VecDeque::from([start]);
    let mut relations: Vec<Vec<i64>> = Vec::new();
    while let Some(c) = queue.pop_front() {
        let vc = v[c].clone().expect("visited");
        for (i, s) in g.generators.iter().enumerate() {
            let d = coset[&reps[c].mul(s)];
            let mut step = vc.clone();
            step[i] += 1;
            match &v[d] {
                None => {
                    v[d] = Some(step);
                    queue.push_back(d);
                }
                Some(vd) => {
                    let r: Vec<i64> = step.iter().zip(vd).map(|(a, b)| a - b).collect();
                    if r.iter().any(|&x| x != 0) {
                        relations.push(r);
                    }
                }
            }
        }
    }
    let mut m = IntMatrix::zeros(k, relations.len());
    for (j, r) in relations.iter().enumerate() {
        for (i, &x) in r.iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(HomologyGroup::cokernel(1, &m))
}
