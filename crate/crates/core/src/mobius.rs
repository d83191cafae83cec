//! Möbius functions: a generic recursive evaluator for finite posets, the
//! closed form on longest coset representatives, and the graded supports
//! indexing singular BGG complexes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parabolic::SingularBlock;
use crate::weyl::Element;

/// Möbius function `μ(a, b)` of an explicit finite poset from the recursive
/// definition `μ(a, a) = 1`, `μ(a, b) = -Σ_{a ≤ z < b} μ(a, z)`.
///
/// Returns 0 when `a ≰ b`. Panics if `a` or `b` is not among `elements`.
pub fn mobius_oracle<T, F>(elements: &[T], leq: F, a: &T, b: &T) -> i64
where
    T: PartialEq,
    F: Fn(&T, &T) -> bool,
{
    let ia = elements.iter().position(|e| e == a).expect("a is in the poset");
    let ib = elements.iter().position(|e| e == b).expect("b is in the poset");
    mobius_oracle_idx(elements.len(), |i, j| leq(&elements[i], &elements[j]), ia, ib)
}

/// Index form of [`mobius_oracle`] over a poset on `0..n`.
pub fn mobius_oracle_idx<F>(n: usize, leq: F, a: usize, b: usize) -> i64
where
    F: Fn(usize, usize) -> bool,
{
    if !leq(a, b) {
        return 0;
    }
    let mut interval: Vec<usize> = (0..n).filter(|&z| leq(a, z) && leq(z, b)).collect();
    // number of strict predecessors inside the interval is a linear extension
    let rank: Vec<usize> = interval
        .iter()
        .map(|&z| interval.iter().filter(|&&y| y != z && leq(y, z)).count())
        .collect();
    let mut order: Vec<usize> = (0..interval.len()).collect();
    order.sort_by_key(|&k| rank[k]);
    interval = order.iter().map(|&k| interval[k]).collect();
    let mut mu = vec![0i64; interval.len()];
    for k in 0..interval.len() {
        let z = interval[k];
        mu[k] = if z == a {
            1
        } else {
            -(0..k).filter(|&j| leq(interval[j], z)).map(|j| mu[j]).sum::<i64>()
        };
    }
    mu[interval.len() - 1]
}

/// `μ^S(w, x)` on longest coset representatives: zero exactly when some
/// `z` strictly between `w` and `x` leaves the set of longest
/// representatives, otherwise `(-1)^{l(x) - l(w)}`.
pub fn mobius_lambda_idx(block: &SingularBlock, w: usize, x: usize) -> i64 {
    let g = block.group();
    let order = g.bruhat().expect("blocks are built on enumerated groups");
    if !order.leq(w, x) {
        return 0;
    }
    let exits = order
        .down_set(x)
        .ones()
        .any(|z| z != w && z != x && !block.is_max_rep_idx(z) && order.leq(w, z));
    if exits {
        0
    } else if (g.len_of(x) - g.len_of(w)).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn mobius_lambda(w: &Element, x: &Element, block: &SingularBlock) -> Result<i64> {
    let g = block.group();
    let (wi, xi) = (g.index_of(w)?, g.index_of(x)?);
    if !block.is_max_rep_idx(wi) || !block.is_max_rep_idx(xi) {
        return Err(Error::domain("arguments must be longest coset representatives"));
    }
    Ok(mobius_lambda_idx(block, wi, xi))
}

/// The strata `X^0_w, X^1_w, …` of elements `x ≥ w` among longest
/// representatives with `μ^S(w, x) ≠ 0`, graded by `l(x) - l(w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSupport {
    pub base: Vec<usize>,
    pub singular: Vec<usize>,
    /// Each stratum as ShortLex reduced words, in canonical order.
    pub strata: Vec<Vec<Vec<usize>>>,
    #[serde(skip)]
    pub indices: Vec<Vec<usize>>,
}

impl GradedSupport {
    pub fn sizes(&self) -> Vec<usize> {
        self.indices.iter().map(Vec::len).collect()
    }

    pub fn flatten(&self) -> Vec<usize> {
        self.indices.iter().flatten().copied().collect()
    }

    pub fn contains_idx(&self, i: usize) -> bool {
        self.indices.iter().any(|s| s.contains(&i))
    }
}

pub fn support_strata_idx(block: &SingularBlock, w: usize) -> Vec<Vec<usize>> {
    let g = block.group();
    let order = g.bruhat().expect("blocks are built on enumerated groups");
    let base_len = g.len_of(w);
    let mut strata: Vec<Vec<usize>> = Vec::new();
    for &x in block.max_rep_indices() {
        if !order.leq(w, x) || mobius_lambda_idx(block, w, x) == 0 {
            continue;
        }
        let i = g.len_of(x) - base_len;
        if strata.len() <= i {
            strata.resize(i + 1, Vec::new());
        }
        strata[i].push(x);
    }
    // non-empty up to the last stratum: a clean interval [w, x] has clean
    // sub-intervals [w, x'] for every x' covered by x inside the chain
    debug_assert!(strata.iter().all(|s| !s.is_empty()));
    strata
}

pub fn support_x(w: &Element, block: &SingularBlock) -> Result<GradedSupport> {
    let g = block.group();
    let wi = g.index_of(w)?;
    if !block.is_max_rep_idx(wi) {
        return Err(Error::domain("w must be a longest coset representative"));
    }
    let indices = support_strata_idx(block, wi);
    Ok(GradedSupport {
        base: g.reduced_word(w),
        singular: block.singular().to_vec(),
        strata: indices
            .iter()
            .map(|s| s.iter().map(|&i| g.word_of(i)).collect())
            .collect(),
        indices,
    })
}
