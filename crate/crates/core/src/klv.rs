//! Kazhdan-Lusztig polynomials of a Weyl group and the singular
//! Kazhdan-Lusztig-Vogan polynomials obtained from them by alternating sums
//! over a parabolic subgroup.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::parabolic::SingularBlock;
use crate::weyl::{Element, Family, WeylGroup, DEFAULT_ELEMENT_BUDGET};

/// Dense integer polynomial in `q`; `coeffs[d]` is the coefficient of `q^d`.
/// Trailing zeros are never stored, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficient(&self, d: usize) -> i64 {
        self.coeffs.get(d).copied().unwrap_or(0)
    }

    /// `self += c * q^shift * other`
    pub fn add_scaled_shifted(&mut self, other: &IntPolynomial, c: i64, shift: usize) {
        if other.is_zero() || c == 0 {
            return;
        }
        let need = other.coeffs.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, 0);
        }
        for (d, &a) in other.coeffs.iter().enumerate() {
            self.coeffs[d + shift] += c * a;
        }
        self.normalize();
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, q: i64) -> i64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * q + c)
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        out.add_scaled_shifted(rhs, 1, 0);
        out
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let mut out = self.clone();
        out.add_scaled_shifted(rhs, -1, 0);
        out
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let abs = c.unsigned_abs();
            let mono = match d {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{d}"),
            };
            if d == 0 {
                write!(f, "{sign}{abs}")?;
            } else if abs == 1 {
                write!(f, "{sign}{mono}")?;
            } else {
                write!(f, "{sign}{abs}{mono}")?;
            }
            first = false;
        }
        Ok(())
    }
}

const ZERO_ID: u32 = 0;
const ONE_ID: u32 = 1;
const CACHE_MAGIC: &[u8; 4] = b"KLV1";

/// Complete table of Kazhdan-Lusztig polynomials `P_{y,w}`.
///
/// Entries are interned: `ids[w * n + y]` points into `polys`, where id 0 is
/// the zero polynomial (`y ≰ w`) and id 1 is the constant 1.
pub struct KLTable {
    group: Arc<WeylGroup>,
    n: usize,
    ids: Vec<u32>,
    polys: Vec<IntPolynomial>,
    /// For every `w`, the pairs `(z, μ(z, w)) ` with `z < w` and `μ ≠ 0`.
    mu: Vec<Vec<(u32, i64)>>,
}

impl fmt::Debug for KLTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KLTable")
            .field("cartan", &self.group.cartan())
            .field("elements", &self.n)
            .field("distinct_polynomials", &self.polys.len())
            .finish()
    }
}

struct Interner {
    polys: Vec<IntPolynomial>,
    lookup: HashMap<IntPolynomial, u32>,
}

impl Interner {
    fn new() -> Self {
        let polys = vec![IntPolynomial::zero(), IntPolynomial::one()];
        let lookup = polys.iter().cloned().enumerate().map(|(i, p)| (p, i as u32)).collect();
        Interner { polys, lookup }
    }

    fn intern(&mut self, p: IntPolynomial) -> u32 {
        if let Some(&id) = self.lookup.get(&p) {
            return id;
        }
        let id = self.polys.len() as u32;
        self.polys.push(p.clone());
        self.lookup.insert(p, id);
        id
    }
}

impl KLTable {
    pub fn build(group: Arc<WeylGroup>) -> Result<Self> {
        Self::build_with_budget(group, DEFAULT_ELEMENT_BUDGET)
    }

    /// Computes the table length stratum by length stratum. For `s w < w`
    /// and `v = s w`:
    ///
    /// `P_{y,w} = q^{1-c} P_{sy,v} + q^c P_{y,v} - Σ μ(z,v) q^{(l(w)-l(z))/2} P_{y,z}`
    ///
    /// with `c = 1` if `s y < y` else 0, summed over `z < v` with `s z < z`.
    /// Columns of one stratum only read lower strata and are computed in
    /// parallel.
    pub fn build_with_budget(group: Arc<WeylGroup>, budget: usize) -> Result<Self> {
        let n = group.len()?;
        if n > budget {
            return Err(Error::Resource(format!(
                "KL table for {} needs {n} elements, budget is {budget}; shard by block or raise the budget",
                group.cartan()
            )));
        }
        let g = group.as_ref();
        let order = g.bruhat()?;
        let mut ids = vec![ZERO_ID; n * n];
        let mut mu: Vec<Vec<(u32, i64)>> = vec![Vec::new(); n];
        let mut interner = Interner::new();
        ids[0] = ONE_ID;
        let max_len = g.len_of(n - 1);
        let mut start = 1;
        for len in 1..=max_len {
            let end = (start..n).find(|&i| g.len_of(i) != len).unwrap_or(n);
            let columns: Vec<Vec<(usize, IntPolynomial)>> = {
                let ids = &ids;
                let polys = &interner.polys;
                let mu = &mu;
                (start..end)
                    .into_par_iter()
                    .map(|w| {
                        let p = |y: usize, x: usize| &polys[ids[x * n + y] as usize];
                        let s = g.ldesc_idx(w).trailing_zeros() as usize;
                        let v = g.lmul_idx(s, w);
                        let corrections: Vec<(usize, i64)> = mu[v]
                            .iter()
                            .filter(|&&(z, _)| g.ldesc_idx(z as usize) >> s & 1 == 1)
                            .map(|&(z, m)| (z as usize, m))
                            .collect();
                        order
                            .down_set(w)
                            .ones()
                            .map(|y| {
                                let sy = g.lmul_idx(s, y);
                                let c = usize::from(g.ldesc_idx(y) >> s & 1 == 1);
                                let mut poly = IntPolynomial::zero();
                                poly.add_scaled_shifted(p(sy, v), 1, 1 - c);
                                poly.add_scaled_shifted(p(y, v), 1, c);
                                for &(z, m) in &corrections {
                                    if order.leq(y, z) {
                                        let shift = (len - g.len_of(z)) / 2;
                                        poly.add_scaled_shifted(p(y, z), -m, shift);
                                    }
                                }
                                (y, poly)
                            })
                            .collect()
                    })
                    .collect()
            };
            for (offset, column) in columns.into_iter().enumerate() {
                let w = start + offset;
                for (y, poly) in column {
                    let gap = len - g.len_of(y);
                    if y != w && gap % 2 == 1 {
                        let m = poly.coefficient((gap - 1) / 2);
                        if m != 0 {
                            mu[w].push((y as u32, m));
                        }
                    }
                    ids[w * n + y] = interner.intern(poly);
                }
            }
            start = end;
        }
        Ok(KLTable {
            group,
            n,
            ids,
            polys: interner.polys,
            mu,
        })
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distinct_polynomials(&self) -> &[IntPolynomial] {
        &self.polys
    }

    pub fn poly_idx(&self, y: usize, w: usize) -> &IntPolynomial {
        &self.polys[self.ids[w * self.n + y] as usize]
    }

    pub fn kl_polynomial(&self, y: &Element, w: &Element) -> Result<IntPolynomial> {
        let (yi, wi) = (self.group.index_of(y)?, self.group.index_of(w)?);
        Ok(self.poly_idx(yi, wi).clone())
    }

    pub fn mu_idx(&self, y: usize, w: usize) -> i64 {
        self.mu[w]
            .iter()
            .find(|&&(z, _)| z as usize == y)
            .map_or(0, |&(_, m)| m)
    }

    /// Coefficient of `q^{(l(w)-l(y)-1)/2}` in `P_{y,w}`; 0 for even length
    /// difference or incomparable pairs.
    pub fn mu_coefficient(&self, y: &Element, w: &Element) -> Result<i64> {
        let (yi, wi) = (self.group.index_of(y)?, self.group.index_of(w)?);
        Ok(self.mu_idx(yi, wi))
    }

    /// Non-zero `μ(z, w)` for `z < w`.
    pub fn mu_list(&self, w: usize) -> &[(u32, i64)] {
        &self.mu[w]
    }

    /// Serialises the table: header (magic, type letter, rank, element
    /// count), the sparse list of entries other than 0 and 1, then bitsets
    /// marking non-zero and unit entries. Little-endian throughout; entry
    /// and bit position `w * n + y` address `P_{y,w}`.
    pub fn write_cache<W: Write>(&self, mut out: W) -> Result<()> {
        let cartan = self.group.cartan();
        out.write_all(CACHE_MAGIC)?;
        out.write_all(&[cartan.family().letter() as u8, cartan.rank() as u8])?;
        out.write_all(&(self.n as u32).to_le_bytes())?;
        let n = self.n;
        let sparse: Vec<usize> = (0..n * n).filter(|&k| self.ids[k] > ONE_ID).collect();
        out.write_all(&(sparse.len() as u32).to_le_bytes())?;
        for &k in &sparse {
            let (w, y) = (k / n, k % n);
            let p = &self.polys[self.ids[k] as usize];
            out.write_all(&(y as u32).to_le_bytes())?;
            out.write_all(&(w as u32).to_le_bytes())?;
            let degree = p.degree().expect("non-trivial entries are non-zero");
            out.write_all(&[u8::try_from(degree).map_err(|_| Error::Cache("degree exceeds u8".into()))?])?;
            for &c in p.coeffs() {
                let c = i32::try_from(c).map_err(|_| Error::Cache(format!("coefficient {c} exceeds i32")))?;
                out.write_all(&c.to_le_bytes())?;
            }
        }
        for pred in [|id: u32| id != ZERO_ID, |id: u32| id == ONE_ID] {
            let mut words = vec![0u64; (n * n).div_ceil(64)];
            for (k, &id) in self.ids.iter().enumerate() {
                if pred(id) {
                    words[k / 64] |= 1 << (k % 64);
                }
            }
            for word in words {
                out.write_all(&word.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_cache<R: Read>(group: Arc<WeylGroup>, mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        let mut cur = Cursor { bytes: &bytes, pos: 0 };
        if cur.take(4)? != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let cartan = group.cartan();
        let letter = cur.take(1)?[0] as char;
        let rank = cur.take(1)?[0] as usize;
        let family = Family::from_letter(letter).map_err(|_| Error::Cache(format!("bad type letter {letter:?}")))?;
        let same_family = family == cartan.family()
            || matches!((family, cartan.family()), (Family::B, Family::C) | (Family::C, Family::B));
        let n = cur.u32()? as usize;
        if !same_family || rank != cartan.rank() || n != group.len()? {
            return Err(Error::Cache(format!(
                "cache is for {letter}{rank} with {n} elements, group is {cartan} with {} elements",
                group.len()?
            )));
        }
        let count = cur.u32()? as usize;
        let mut interner = Interner::new();
        let mut ids = vec![ZERO_ID; n * n];
        let mut sparse = Vec::with_capacity(count);
        for _ in 0..count {
            let y = cur.u32()? as usize;
            let w = cur.u32()? as usize;
            let degree = cur.take(1)?[0] as usize;
            let coeffs = (0..=degree)
                .map(|_| cur.u32().map(|c| c as i32 as i64))
                .collect::<Result<Vec<i64>>>()?;
            if y >= n || w >= n {
                return Err(Error::Cache("entry index out of range".into()));
            }
            let p = IntPolynomial::from_coeffs(coeffs);
            if p.degree() != Some(degree) || p == IntPolynomial::one() {
                return Err(Error::Cache("malformed entry".into()));
            }
            let id = interner.intern(p);
            ids[w * n + y] = id;
            sparse.push(w * n + y);
        }
        let words = (n * n).div_ceil(64);
        let mut bitsets = Vec::new();
        for _ in 0..2 {
            let set = (0..words).map(|_| cur.u64()).collect::<Result<Vec<u64>>>()?;
            bitsets.push(set);
        }
        if cur.pos != bytes.len() {
            return Err(Error::Cache("trailing bytes".into()));
        }
        let bit = |set: &[u64], k: usize| set[k / 64] >> (k % 64) & 1 == 1;
        let order = group.bruhat()?;
        for k in 0..n * n {
            let (nonzero, one) = (bit(&bitsets[0], k), bit(&bitsets[1], k));
            let (w, y) = (k / n, k % n);
            if nonzero != order.leq(y, w) || (one && !nonzero) {
                return Err(Error::Cache("bitsets disagree with the Bruhat order".into()));
            }
            if one {
                if ids[k] != ZERO_ID {
                    return Err(Error::Cache("entry stored twice".into()));
                }
                ids[k] = ONE_ID;
            } else if nonzero && ids[k] == ZERO_ID {
                return Err(Error::Cache("missing entry".into()));
            }
        }
        let mut mu = vec![Vec::new(); n];
        let g = group.as_ref();
        for (w, list) in mu.iter_mut().enumerate() {
            for y in order.down_set(w).ones() {
                let gap = g.len_of(w) - g.len_of(y);
                if gap % 2 == 1 {
                    let m = interner.polys[ids[w * n + y] as usize].coefficient((gap - 1) / 2);
                    if m != 0 {
                        list.push((y as u32, m));
                    }
                }
            }
        }
        Ok(KLTable {
            group,
            n,
            ids,
            polys: interner.polys,
            mu,
        })
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        let end = self.pos + k;
        if end > self.bytes.len() {
            return Err(Error::Cache("truncated file".into()));
        }
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

/// `P^S_{y,z} = Σ_{t ∈ W_S} (-1)^{l(t)} P_{yt,z}` for `y, z` minimal
/// representatives of `W / W_S`.
pub fn klv_polynomial_idx(table: &KLTable, block: &SingularBlock, y: usize, z: usize) -> IntPolynomial {
    let g = table.group();
    let mut out = IntPolynomial::zero();
    for &t in block.parabolic_indices() {
        let sign = if g.len_of(t).is_multiple_of(2) { 1 } else { -1 };
        out.add_scaled_shifted(table.poly_idx(g.mul_idx(y, t), z), sign, 0);
    }
    out
}

pub fn klv_polynomial(
    table: &KLTable,
    block: &SingularBlock,
    y: &Element,
    z: &Element,
) -> Result<IntPolynomial> {
    let g = table.group();
    let (yi, zi) = (g.index_of(y)?, g.index_of(z)?);
    if !block.is_min_rep_idx(yi) || !block.is_min_rep_idx(zi) {
        return Err(Error::domain("KLV arguments must be minimal coset representatives"));
    }
    Ok(klv_polynomial_idx(table, block, yi, zi))
}

/// Image of the singular set under `s ↦ w0 s w0`.
pub fn conjugate_singular(g: &WeylGroup, singular: &[usize]) -> Result<Vec<usize>> {
    let w0 = g.longest_element();
    let mut out = Vec::with_capacity(singular.len());
    for &s in singular {
        let c = g.multiply(&g.multiply(&w0, &g.generator(s)?)?, &w0)?;
        let word = g.reduced_word(&c);
        if word.len() != 1 {
            return Err(Error::internal("w0 conjugation did not fix the simple reflections"));
        }
        out.push(word[0]);
    }
    out.sort_unstable();
    Ok(out)
}

/// The block `W_μ = w0 W_S w0` of the antidominant parameter.
pub fn antidominant_block(block: &SingularBlock) -> Result<SingularBlock> {
    let g = block.group();
    SingularBlock::new(g.clone(), &conjugate_singular(g, block.singular())?)
}

/// `P^{w0·λ}_{x w0, w w0}` for longest representatives `w ≤ x`, given the
/// antidominant block from [`antidominant_block`].
pub fn klv_dominant_idx(table: &KLTable, mu_block: &SingularBlock, w: usize, x: usize) -> IntPolynomial {
    let g = table.group();
    let w0 = g.longest_idx();
    klv_polynomial_idx(table, mu_block, g.mul_idx(x, w0), g.mul_idx(w, w0))
}

pub fn klv_dominant(table: &KLTable, block: &SingularBlock, w: &Element, x: &Element) -> Result<IntPolynomial> {
    let g = table.group();
    let (wi, xi) = (g.index_of(w)?, g.index_of(x)?);
    if !block.is_max_rep_idx(wi) || !block.is_max_rep_idx(xi) {
        return Err(Error::domain("arguments must be longest coset representatives"));
    }
    if !g.bruhat()?.leq(wi, xi) {
        return Err(Error::domain("w ≰ x"));
    }
    let mu_block = antidominant_block(block)?;
    Ok(klv_dominant_idx(table, &mu_block, wi, xi))
}
