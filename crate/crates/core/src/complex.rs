//! Combinatorial skeletons of regular and singular BGG complexes, the
//! translation and cut-off bookkeeping between them, sign assignment, and the
//! Kostant (exactness) decision.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::klv::{antidominant_block, klv_dominant_idx, IntPolynomial, KLTable};
use crate::mobius::{mobius_lambda_idx, support_strata_idx};
use crate::parabolic::SingularBlock;
use crate::weyl::{Element, WeylGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SkeletonKind {
    Regular,
    Translated,
    Singular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Morphism,
    Equality,
}

/// An edge between element indices; `from` is the longer element, i.e. the
/// vertex of higher degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
    pub sign: Option<i8>,
}

/// Vertices and arrows of a BGG-type complex attached to a base element.
///
/// Vertex and edge endpoints are element indices of the block's group.
/// Vertices are sorted by (degree, index), edges by (degree of `to`, `to`,
/// `from`).
#[derive(Clone, Debug)]
pub struct ComplexSkeleton {
    kind: SkeletonKind,
    base: usize,
    block: SingularBlock,
    vertices: Vec<(usize, usize)>,
    edges: Vec<Edge>,
}

impl ComplexSkeleton {
    pub fn kind(&self) -> SkeletonKind {
        self.kind
    }

    pub fn base_idx(&self) -> usize {
        self.base
    }

    pub fn base(&self) -> Element {
        self.group().elem(self.base)
    }

    pub fn block(&self) -> &SingularBlock {
        &self.block
    }

    pub fn group(&self) -> &WeylGroup {
        self.block.group()
    }

    /// `(element index, degree)` pairs.
    pub fn vertices(&self) -> &[(usize, usize)] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.vertices.iter().map(|&(v, _)| v).collect()
    }

    pub fn degree_of(&self, v: usize) -> Option<usize> {
        self.vertices.iter().find(|&&(u, _)| u == v).map(|&(_, d)| d)
    }

    /// Edge set without signs, for comparing skeletons as graphs.
    pub fn unsigned_edges(&self) -> BTreeSet<(usize, usize, EdgeKind)> {
        self.edges.iter().map(|e| (e.from, e.to, e.kind)).collect()
    }

    /// Squares `(z; y1, y2; x)`: `x < y1, y2 < z` with all four morphism
    /// edges present, returned as edge positions.
    pub fn squares(&self) -> Vec<[usize; 4]> {
        let mut down: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
        for (k, e) in self.edges.iter().enumerate() {
            if e.kind == EdgeKind::Morphism {
                down.entry(e.from).or_default().push((e.to, k));
            }
        }
        let mut squares = Vec::new();
        for mids in down.values() {
            let mut through: std::collections::BTreeMap<usize, Vec<(usize, usize)>> = Default::default();
            for &(y, zy) in mids {
                for &(x, yx) in down.get(&y).map(Vec::as_slice).unwrap_or(&[]) {
                    through.entry(x).or_default().push((zy, yx));
                }
            }
            for paths in through.values() {
                for i in 0..paths.len() {
                    for j in i + 1..paths.len() {
                        squares.push([paths[i].0, paths[i].1, paths[j].0, paths[j].1]);
                    }
                }
            }
        }
        squares
    }

    fn sort(&mut self) {
        self.vertices.sort_unstable_by_key(|&(v, d)| (d, v));
        let degree: std::collections::HashMap<usize, usize> = self.vertices.iter().copied().collect();
        self.edges.sort_unstable_by_key(|e| (degree[&e.to], e.to, e.from));
    }
}

fn regular_block(g: &std::sync::Arc<WeylGroup>) -> Result<SingularBlock> {
    SingularBlock::new(g.clone(), &[])
}

/// `{x ≥ w}` graded by `l(x) - l(w)` with an arrow for every Bruhat cover.
pub fn regular_skeleton(g: &std::sync::Arc<WeylGroup>, w: &Element) -> Result<ComplexSkeleton> {
    let wi = g.index_of(w)?;
    let order = g.bruhat()?;
    let base_len = g.len_of(wi);
    let up = order.up_set(wi);
    let vertices: Vec<(usize, usize)> = up.iter().map(|&x| (x, g.len_of(x) - base_len)).collect();
    let edges = up
        .iter()
        .flat_map(|&x| {
            order.upper_covers(x).iter().map(move |&y| Edge {
                from: y as usize,
                to: x,
                kind: EdgeKind::Morphism,
                sign: None,
            })
        })
        .collect();
    let mut sk = ComplexSkeleton {
        kind: SkeletonKind::Regular,
        base: wi,
        block: regular_block(g)?,
        vertices,
        edges,
    };
    sk.sort();
    Ok(sk)
}

/// Applies translation to the singular block: arrows inside one coset
/// `x W_S` become equalities.
pub fn translate_skeleton(sk: &ComplexSkeleton, b: &SingularBlock) -> Result<ComplexSkeleton> {
    if sk.kind != SkeletonKind::Regular {
        return Err(Error::domain("translation applies to regular skeletons"));
    }
    if sk.group().id() != b.group().id() {
        return Err(Error::domain("skeleton and block belong to different groups"));
    }
    let edges = sk
        .edges
        .iter()
        .map(|e| {
            if b.max_rep_of_idx(e.from) == b.max_rep_of_idx(e.to) {
                Edge {
                    kind: EdgeKind::Equality,
                    sign: None,
                    ..*e
                }
            } else {
                *e
            }
        })
        .collect();
    Ok(ComplexSkeleton {
        kind: SkeletonKind::Translated,
        base: sk.base,
        block: b.clone(),
        vertices: sk.vertices.clone(),
        edges,
    })
}

/// Edges of the singular complex on graded strata: `x' → x` whenever the
/// strata are consecutive and `x < x'`.
fn stratum_edges(g: &WeylGroup, strata: &[Vec<usize>]) -> Result<Vec<Edge>> {
    let order = g.bruhat()?;
    let mut edges = Vec::new();
    for pair in strata.windows(2) {
        for &x in &pair[0] {
            for &y in &pair[1] {
                if order.leq(x, y) {
                    edges.push(Edge {
                        from: y,
                        to: x,
                        kind: EdgeKind::Morphism,
                        sign: None,
                    });
                }
            }
        }
    }
    Ok(edges)
}

fn singular_from_strata(base: usize, block: &SingularBlock, strata: &[Vec<usize>]) -> Result<ComplexSkeleton> {
    let vertices = strata
        .iter()
        .enumerate()
        .flat_map(|(d, s)| s.iter().map(move |&x| (x, d)))
        .collect();
    let mut sk = ComplexSkeleton {
        kind: SkeletonKind::Singular,
        base,
        block: block.clone(),
        vertices,
        edges: stratum_edges(block.group(), strata)?,
    };
    sk.sort();
    Ok(sk)
}

/// Removes, for every coset `x W_S` with `x ≥ w` outside `X_w`, the matched
/// equality pairs covering `[w, w0] ∩ x W_S`; what remains is indexed by
/// `X_w` and is re-linked by the arrow rule of singular complexes.
pub fn cut_equalities(sk: &ComplexSkeleton) -> Result<ComplexSkeleton> {
    if sk.kind != SkeletonKind::Translated {
        return Err(Error::domain("cutting applies to translated skeletons"));
    }
    let b = &sk.block;
    let g = b.group();
    let w = sk.base;
    if !b.is_max_rep_idx(w) {
        return Err(Error::domain("base element must be a longest coset representative"));
    }
    let strata = support_strata_idx(b, w);
    let support: BTreeSet<usize> = strata.iter().flatten().copied().collect();
    let order = g.bruhat()?;
    let mut alive = FixedBitSet::with_capacity(g.len()?);
    sk.vertices.iter().for_each(|&(v, _)| alive.insert(v));
    let mut equalities: BTreeSet<(usize, usize)> = sk
        .edges
        .iter()
        .filter(|e| e.kind == EdgeKind::Equality)
        .map(|e| (e.from, e.to))
        .collect();
    for &x in b.max_rep_indices() {
        if !order.leq(w, x) || support.contains(&x) {
            continue;
        }
        for (lo, hi) in b.partition_pairs_idx(w, x)? {
            if !alive.contains(lo) || !alive.contains(hi) || !equalities.remove(&(hi, lo)) {
                return Err(Error::internal(format!(
                    "matched pair ({lo}, {hi}) is not an equality of the translated skeleton"
                )));
            }
            alive.set(lo, false);
            alive.set(hi, false);
        }
    }
    let remaining: BTreeSet<usize> = alive.ones().collect();
    let dangling = equalities.iter().any(|&(a, c)| alive.contains(a) || alive.contains(c));
    if remaining != support || dangling {
        return Err(Error::internal("cut-off did not leave exactly the support of the singular complex"));
    }
    singular_from_strata(w, b, &strata)
}

/// The singular BGG skeleton straight from the graded support `X_w`.
pub fn singular_skeleton(w: &Element, b: &SingularBlock) -> Result<ComplexSkeleton> {
    let wi = b.group().index_of(w)?;
    if !b.is_max_rep_idx(wi) {
        return Err(Error::domain("w must be a longest coset representative"));
    }
    singular_from_strata(wi, b, &support_strata_idx(b, wi))
}

/// Signs every arrow so that each square has sign product `-1`.
///
/// Over GF(2) (bit 1 for sign `-1`) each square is one equation. Rows are
/// reduced into a basis keyed by their highest variable; free variables are
/// set to 0, which is the lexicographically smallest solution in edge order.
pub fn assign_signs(sk: &ComplexSkeleton) -> Result<ComplexSkeleton> {
    if sk.kind != SkeletonKind::Regular {
        return Err(Error::domain("signs are assigned on regular skeletons"));
    }
    let m = sk.edges.len();
    let mut basis: Vec<Option<(FixedBitSet, bool)>> = vec![None; m];
    for square in sk.squares() {
        let mut row = FixedBitSet::with_capacity(m);
        for k in square {
            row.toggle(k);
        }
        let mut rhs = true;
        while let Some(p) = row.maximum() {
            match &basis[p] {
                Some((r, c)) => {
                    row.symmetric_difference_with(r);
                    rhs ^= c;
                }
                None => break,
            }
        }
        match row.maximum() {
            Some(p) => basis[p] = Some((row, rhs)),
            None if rhs => {
                return Err(Error::internal(format!(
                    "square sign system is inconsistent for base {:?}",
                    sk.group().word_of(sk.base)
                )))
            }
            None => {}
        }
    }
    let mut value = vec![false; m];
    for p in 0..m {
        if let Some((row, rhs)) = &basis[p] {
            value[p] = row.ones().filter(|&j| j != p).fold(*rhs, |acc, j| acc ^ value[j]);
        }
    }
    let mut out = sk.clone();
    for (e, v) in out.edges.iter_mut().zip(value) {
        e.sign = Some(if v { -1 } else { 1 });
    }
    Ok(out)
}

/// True when every square of the skeleton has sign product `-1`.
pub fn check_square_signs(sk: &ComplexSkeleton) -> bool {
    sk.squares().iter().all(|sq| {
        sq.iter()
            .map(|&k| sk.edges[k].sign.unwrap_or(0) as i64)
            .product::<i64>()
            == -1
    })
}

/// Precomputed data for repeated Kostant decisions in one block.
pub struct KostantOracle<'a> {
    table: &'a KLTable,
    block: &'a SingularBlock,
    dual: SingularBlock,
}

impl<'a> KostantOracle<'a> {
    pub fn new(table: &'a KLTable, block: &'a SingularBlock) -> Result<Self> {
        if table.group().id() != block.group().id() {
            return Err(Error::domain("table and block belong to different groups"));
        }
        Ok(KostantOracle {
            table,
            block,
            dual: antidominant_block(block)?,
        })
    }

    /// `P^{w0·λ}_{x w0, w w0} = |μ^S(w, x)|` for all longest representatives
    /// `x ≥ w`, checked in increasing length and stopping at the first
    /// failure.
    pub fn is_kostant_idx(&self, w: usize) -> bool {
        let g = self.block.group();
        let order = g.bruhat().expect("blocks are built on enumerated groups");
        self.block.max_rep_indices().iter().filter(|&&x| order.leq(w, x)).all(|&x| {
            let expected = IntPolynomial::constant(mobius_lambda_idx(self.block, w, x).abs());
            klv_dominant_idx(self.table, &self.dual, w, x) == expected
        })
    }
}

pub fn is_kostant(w: &Element, b: &SingularBlock, t: &KLTable) -> Result<bool> {
    let wi = b.group().index_of(w)?;
    if !b.is_max_rep_idx(wi) {
        return Err(Error::domain("w must be a longest coset representative"));
    }
    Ok(KostantOracle::new(t, b)?.is_kostant_idx(wi))
}

/// Longest representatives `w` of the block whose simple module is not
/// Kostant, sorted by (length, ShortLex). Uses the ambient rayon pool.
pub fn nonkostant_block_idx(t: &KLTable, b: &SingularBlock) -> Result<Vec<usize>> {
    let oracle = KostantOracle::new(t, b)?;
    let mut out: Vec<usize> = b
        .max_rep_indices()
        .par_iter()
        .copied()
        .filter(|&w| !oracle.is_kostant_idx(w))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// [`nonkostant_block_idx`] on a fresh block; `threads` selects a dedicated
/// worker pool of that size.
pub fn nonkostant_block(t: &KLTable, singular: &[usize], threads: Option<usize>) -> Result<Vec<Element>> {
    let g = t.group();
    let b = SingularBlock::new(g.clone(), singular)?;
    let found = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))?
            .install(|| nonkostant_block_idx(t, &b))?,
        None => nonkostant_block_idx(t, &b)?,
    };
    Ok(found.into_iter().map(|i| g.elem(i)).collect())
}

/// `W_{S^c} · w0^S`, checked against the flattened support of `w0^S`.
pub fn dominant_support(b: &SingularBlock) -> Result<Vec<Element>> {
    let g = b.group();
    let complement = SingularBlock::new(g.clone(), &b.complementary_singularity())?;
    let w0l = b.w0_lambda_index();
    let mut set: Vec<usize> = complement
        .parabolic_indices()
        .iter()
        .map(|&u| g.mul_idx(u, w0l))
        .collect();
    set.sort_unstable();
    let mut support: Vec<usize> = support_strata_idx(b, w0l).into_iter().flatten().collect();
    support.sort_unstable();
    if set != support {
        return Err(Error::internal("complementary parabolic orbit differs from the support of w0^S"));
    }
    Ok(set.into_iter().map(|i| g.elem(i)).collect())
}

/// Whether the simple object of the S-subcategory indexed by `w` has a BGG
/// resolution: `w` must be a longest representative of `W_S \ W`, and the
/// answer is the Kostant property of `w^{-1}`.
pub fn s_category_has_bgg(w: &Element, b: &SingularBlock, t: &KLTable) -> Result<bool> {
    let g = b.group();
    let wi = g.index_of(w)?;
    if g.ldesc_idx(wi) & b.mask() != b.mask() {
        return Err(Error::domain("w must be a longest representative of W_S \\ W"));
    }
    Ok(KostantOracle::new(t, b)?.is_kostant_idx(g.inv_idx(wi)))
}
