use serde::Serialize;

use super::chain::{reduced_homology, HomologyGroup};
use crate::error::Result;
use crate::poset::{FinitePoset, Label};

/// An interval (x, y) whose homology is not that of a wedge of top-dimensional spheres.
#[derive(Clone, Debug, Serialize)]
pub struct CmFailure {
    /// None is -infinity
    pub lower: Option<String>,
    /// None is +infinity
    pub upper: Option<String>,
    pub dim: isize,
    pub reason: String,
    pub homology: Vec<HomologyGroup>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CmReport {
    pub is_cm: bool,
    pub intervals_checked: usize,
    pub failure: Option<CmFailure>,
}

/// Homology vanishes below the top degree and is free on top.
pub fn is_spherical(groups: &[HomologyGroup], dim: isize) -> bool {
    groups.iter().all(|h| if h.degree < dim { h.is_zero() } else { h.degree > dim || h.is_free() })
}

/// Checks every open interval (x, y) with -inf <= x < y <= +inf, stopping at the first failure.
pub fn check_cohen_macaulay<T: Label>(p: &FinitePoset<T>, cap: u128) -> Result<CmReport> {
    // None is -inf as a lower end and +inf as an upper end
    let ends: Vec<Option<usize>> = std::iter::once(None).chain((0..p.len()).map(Some)).collect();
    let mut checked = 0;
    for &x in &ends {
        for &y in &ends {
            if let (Some(a), Some(b)) = (x, y) {
                if !p.lt(a, b) {
                    continue;
                }
            }
            checked += 1;
            let lo = x.map(|i| format!("{:?}", p.element(i)));
            let hi = y.map(|i| format!("{:?}", p.element(i)));
            let sub = match p.interval(x, y) {
                Ok(s) => s,
                Err(e) => {
                    return Ok(CmReport {
                        is_cm: false,
                        intervals_checked: checked,
                        failure: Some(CmFailure {
                            lower: lo,
                            upper: hi,
                            dim: -1,
                            reason: e.to_string(),
                            homology: vec![],
                        }),
                    })
                }
            };
            let h = reduced_homology(&sub, cap)?;
            if !is_spherical(&h, sub.dim()) {
                return Ok(CmReport {
                    is_cm: false,
                    intervals_checked: checked,
                    failure: Some(CmFailure {
                        lower: lo,
                        upper: hi,
                        dim: sub.dim(),
                        reason: "homology below the top degree or torsion on top".into(),
                        homology: h,
                    }),
                });
            }
        }
    }
    Ok(CmReport { is_cm: true, intervals_checked: checked, failure: None })
}
