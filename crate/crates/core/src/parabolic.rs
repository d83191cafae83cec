//! Singular blocks: the parabolic subgroup generated by a set of singular
//! simple reflections, its coset representatives, Kostant factorisation and
//! the interval/coset intersection lemmas used to cut down BGG complexes.

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::weyl::{mask_to_indices, CartanType, Element, Family, WeylGroup};

/// Which extremum of a coset intersection to return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    /// Maximum of `[e, w] ∩ x W_S`.
    MaxBelow,
    /// Minimum of `[w, w0] ∩ x W_S`.
    MinAbove,
}

/// Derived data of a singularity set `S`.
///
/// All element lists are canonical indices into the group, sorted by
/// (length, ShortLex word).
#[derive(Clone, Debug)]
pub struct SingularBlock {
    group: Arc<WeylGroup>,
    singular: Vec<usize>,
    mask: u32,
    parabolic: Vec<usize>,
    w0_lambda: usize,
    min_reps: Vec<usize>,
    max_reps: Vec<usize>,
    right_min_reps: Vec<usize>,
    right_max_reps: Vec<usize>,
    parabolic_set: FixedBitSet,
    max_rep_set: FixedBitSet,
}

pub(crate) fn singular_mask(rank: usize, singular: &[usize]) -> Result<u32> {
    let mut mask = 0u32;
    for &s in singular {
        if s == 0 || s > rank {
            return Err(Error::input(format!("singular index {s} out of range 1..={rank}")));
        }
        mask |= 1 << (s - 1);
    }
    Ok(mask)
}

impl SingularBlock {
    pub fn new(group: Arc<WeylGroup>, singular: &[usize]) -> Result<Self> {
        let mask = singular_mask(group.rank(), singular)?;
        let n = group.len()?;
        let mut parabolic_set = FixedBitSet::with_capacity(n);
        parabolic_set.insert(0);
        let mut queue = vec![0usize];
        while let Some(u) = queue.pop() {
            for s in mask_to_indices(mask) {
                let su = group.lmul_idx(s - 1, u);
                if !parabolic_set.contains(su) {
                    parabolic_set.insert(su);
                    queue.push(su);
                }
            }
        }
        let parabolic: Vec<usize> = parabolic_set.ones().collect();
        let w0_lambda = *parabolic.last().expect("identity is in every parabolic subgroup");
        let min_reps: Vec<usize> = (0..n).filter(|&i| group.rdesc_idx(i) & mask == 0).collect();
        let max_reps: Vec<usize> = (0..n).filter(|&i| group.rdesc_idx(i) & mask == mask).collect();
        let right_min_reps = (0..n).filter(|&i| group.ldesc_idx(i) & mask == 0).collect();
        let right_max_reps = (0..n).filter(|&i| group.ldesc_idx(i) & mask == mask).collect();
        let mut max_rep_set = FixedBitSet::with_capacity(n);
        max_reps.iter().for_each(|&i| max_rep_set.insert(i));
        Ok(SingularBlock {
            group,
            singular: mask_to_indices(mask),
            mask,
            parabolic,
            w0_lambda,
            min_reps,
            max_reps,
            right_min_reps,
            right_max_reps,
            parabolic_set,
            max_rep_set,
        })
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    /// The singular set `S`, 1-based and sorted.
    pub fn singular(&self) -> &[usize] {
        &self.singular
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn parabolic_indices(&self) -> &[usize] {
        &self.parabolic
    }

    pub fn w0_lambda_index(&self) -> usize {
        self.w0_lambda
    }

    pub fn min_rep_indices(&self) -> &[usize] {
        &self.min_reps
    }

    pub fn max_rep_indices(&self) -> &[usize] {
        &self.max_reps
    }

    pub fn right_min_rep_indices(&self) -> &[usize] {
        &self.right_min_reps
    }

    pub fn right_max_rep_indices(&self) -> &[usize] {
        &self.right_max_reps
    }

    pub fn is_max_rep_idx(&self, i: usize) -> bool {
        self.max_rep_set.contains(i)
    }

    pub fn is_min_rep_idx(&self, i: usize) -> bool {
        self.group.rdesc_idx(i) & self.mask == 0
    }

    pub fn in_parabolic_idx(&self, i: usize) -> bool {
        self.parabolic_set.contains(i)
    }

    fn elements(&self, idx: &[usize]) -> Vec<Element> {
        idx.iter().map(|&i| self.group.elem(i)).collect()
    }

    pub fn parabolic(&self) -> Vec<Element> {
        self.elements(&self.parabolic)
    }

    pub fn w0_lambda(&self) -> Element {
        self.group.elem(self.w0_lambda)
    }

    pub fn min_reps(&self) -> Vec<Element> {
        self.elements(&self.min_reps)
    }

    pub fn max_reps(&self) -> Vec<Element> {
        self.elements(&self.max_reps)
    }

    pub fn right_min_reps(&self) -> Vec<Element> {
        self.elements(&self.right_min_reps)
    }

    pub fn right_max_reps(&self) -> Vec<Element> {
        self.elements(&self.right_max_reps)
    }

    pub fn is_max_rep(&self, w: &Element) -> Result<bool> {
        Ok(self.is_max_rep_idx(self.group.index_of(w)?))
    }

    /// Number of cosets `|W| / |W_S|`.
    pub fn num_cosets(&self) -> usize {
        self.min_reps.len()
    }

    /// `{1..rank} \ S`.
    pub fn complementary_singularity(&self) -> Vec<usize> {
        (1..=self.group.rank()).filter(|s| !self.singular.contains(s)).collect()
    }

    /// `v = v^S v_S` with `v^S` the minimal representative of `v W_S`.
    pub fn kostant_idx(&self, v: usize) -> (usize, usize) {
        let g = &self.group;
        let mut x = v;
        while g.rdesc_idx(x) & self.mask != 0 {
            let s = (g.rdesc_idx(x) & self.mask).trailing_zeros() as usize;
            x = g.rmul_idx(x, s);
        }
        (x, g.mul_idx(g.inv_idx(x), v))
    }

    pub fn kostant_decompose(&self, v: &Element) -> Result<(Element, Element)> {
        let (a, b) = self.kostant_idx(self.group.index_of(v)?);
        Ok((self.group.elem(a), self.group.elem(b)))
    }

    /// Maximal representative of the coset of `v`.
    pub fn max_rep_of_idx(&self, v: usize) -> usize {
        let (x, _) = self.kostant_idx(v);
        self.group.mul_idx(x, self.w0_lambda)
    }

    /// Elements of the coset `x W_S` in canonical order.
    pub fn coset_idx(&self, x: usize) -> Vec<usize> {
        let (x, _) = self.kostant_idx(x);
        let mut out: Vec<usize> = self.parabolic.iter().map(|&u| self.group.mul_idx(x, u)).collect();
        out.sort_unstable();
        out
    }

    /// Unique maximum of `[e, w] ∩ x W_S` for `x ∈ W^S`, `x ≤ w`, by the
    /// descent induction: strip a left descent `s` of `w` and lift the answer
    /// for `s w` back through left multiplication by `s`.
    pub(crate) fn max_below_idx(&self, w: usize, x: usize) -> usize {
        let g = &self.group;
        if w == 0 {
            debug_assert_eq!(x, 0);
            return 0;
        }
        let s = g.ldesc_idx(w).trailing_zeros() as usize;
        let sw = g.lmul_idx(s, w);
        let sx = g.lmul_idx(s, x);
        if g.len_of(sx) < g.len_of(x) {
            let y = self.max_below_idx(sw, sx);
            g.lmul_idx(s, y)
        } else {
            let y = self.max_below_idx(sw, x);
            if self.kostant_idx(sx).0 == x {
                let sy = g.lmul_idx(s, y);
                if g.len_of(sy) > g.len_of(y) {
                    sy
                } else {
                    y
                }
            } else {
                y
            }
        }
    }

    /// Unique minimum of `[w, w0] ∩ C` for the coset `C` of `x`, via
    /// multiplication by `w0`; requires the intersection to be non-empty.
    pub(crate) fn min_above_idx(&self, w: usize, x: usize) -> Result<usize> {
        let g = &self.group;
        let order = g.bruhat()?;
        let w0 = g.longest_idx();
        let (x, _) = self.kostant_idx(x);
        if !order.leq(w, g.mul_idx(x, self.w0_lambda)) {
            return Err(Error::domain("[w, w0] does not meet the coset"));
        }
        let x_dual = self.kostant_idx(g.mul_idx(w0, x)).0;
        let w_dual = g.mul_idx(w0, w);
        Ok(g.mul_idx(w0, self.max_below_idx(w_dual, x_dual)))
    }

    /// The extremum of a coset intersection. Hypotheses as in the coset
    /// lemmas: `x ∈ W^S`, and `x ≤ w` for [`Extremum::MaxBelow`] or `w ≤ x`
    /// for [`Extremum::MinAbove`].
    pub fn coset_extremum(&self, w: &Element, x: &Element, direction: Extremum) -> Result<Element> {
        let g = &self.group;
        let (wi, xi) = (g.index_of(w)?, g.index_of(x)?);
        let order = g.bruhat()?;
        if !self.is_min_rep_idx(xi) {
            return Err(Error::domain("x is not a minimal coset representative"));
        }
        let result = match direction {
            Extremum::MaxBelow => {
                if !order.leq(xi, wi) {
                    return Err(Error::domain("x ≰ w: [e, w] ∩ x W_S is empty"));
                }
                self.max_below_idx(wi, xi)
            }
            Extremum::MinAbove => {
                if !order.leq(wi, xi) {
                    return Err(Error::domain("w ≰ x"));
                }
                self.min_above_idx(wi, xi)?
            }
        };
        Ok(g.elem(result))
    }

    /// `[w, w0] ∩ C` for the coset `C` of `x`, by direct scan.
    pub fn coset_upper_intersection_idx(&self, w: usize, x: usize) -> Result<Vec<usize>> {
        let order = self.group.bruhat()?;
        Ok(self.coset_idx(x).into_iter().filter(|&z| order.leq(w, z)).collect())
    }

    /// Perfect matching of `[w, w0] ∩ C` into covering pairs `(z, z')`,
    /// `z → z'`. The intersection is identified with `[y, w0_S]` inside `W_S`
    /// and paired by left multiplication (inside `W_S`) with the smallest
    /// singular generator `s` satisfying `y < s y`.
    pub(crate) fn partition_pairs_idx(&self, w: usize, x: usize) -> Result<Vec<(usize, usize)>> {
        let g = &self.group;
        let order = g.bruhat()?;
        let (x, _) = self.kostant_idx(x);
        let m = self.min_above_idx(w, x)?;
        let (_, y) = self.kostant_idx(m);
        let ascent = self.mask & !g.ldesc_idx(y);
        if ascent == 0 {
            return Err(Error::domain("[w, w0] ∩ x W_S is a singleton"));
        }
        let s = ascent.trailing_zeros() as usize;
        let mut pairs: Vec<(usize, usize)> = self
            .parabolic
            .iter()
            .filter(|&&u| order.leq(y, u) && g.ldesc_idx(u) >> s & 1 == 0)
            .map(|&u| (g.mul_idx(x, u), g.mul_idx(x, g.lmul_idx(s, u))))
            .collect();
        pairs.sort_unstable();
        Ok(pairs)
    }

    /// Public form with the hypotheses `x ∈ W^S`, `w ≤ x`.
    pub fn partition_pairs(&self, w: &Element, x: &Element) -> Result<Vec<(Element, Element)>> {
        let g = &self.group;
        let (wi, xi) = (g.index_of(w)?, g.index_of(x)?);
        if !self.is_min_rep_idx(xi) {
            return Err(Error::domain("x is not a minimal coset representative"));
        }
        if !g.bruhat()?.leq(wi, xi) {
            return Err(Error::domain("w ≰ x"));
        }
        Ok(self
            .partition_pairs_idx(wi, xi)?
            .into_iter()
            .map(|(a, b)| (g.elem(a), g.elem(b)))
            .collect())
    }
}

/// `ŵ = w^{-1} w0`.
pub fn hat_map(g: &WeylGroup, w: &Element) -> Result<Element> {
    g.check_member(w)?;
    g.multiply(&g.inverse(w), &g.longest_element())
}

/// Singular simple roots of a dominant weight given by the standard
/// ε-coordinates of `λ + ρ` (length `rank + 1` for type A, `rank` for B, C, D).
pub fn singularity_from_weight(cartan: CartanType, coords: &[Rational64]) -> Result<Vec<usize>> {
    let n = cartan.rank();
    let expected = match cartan.family() {
        Family::A => n + 1,
        Family::B | Family::C | Family::D => n,
        other => {
            return Err(Error::input(format!(
                "weight coordinates are only supported for classical types, not {other}"
            )))
        }
    };
    if coords.len() != expected {
        return Err(Error::input(format!(
            "{cartan} needs {expected} coordinates, got {}",
            coords.len()
        )));
    }
    let two = Rational64::from_integer(2);
    let pairings: Vec<Rational64> = (0..n)
        .map(|i| {
            if i + 1 < n || cartan.family() == Family::A {
                coords[i] - coords[i + 1]
            } else {
                match cartan.family() {
                    Family::B => two * coords[i],
                    Family::C => coords[i],
                    _ => coords[i - 1] + coords[i],
                }
            }
        })
        .collect();
    let zero = Rational64::from_integer(0);
    if let Some(i) = pairings.iter().position(|p| *p < zero) {
        return Err(Error::input(format!(
            "weight is not dominant: pairing with simple coroot {} is {}",
            i + 1,
            pairings[i]
        )));
    }
    Ok((0..n).filter(|&i| pairings[i] == zero).map(|i| i + 1).collect())
}
