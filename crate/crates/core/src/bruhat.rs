//! Bruhat order, cover relations and intervals.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::weyl::{Element, WeylGroup};

/// Upper and lower covers of every element, by canonical index.
#[derive(Clone, Debug)]
pub struct CoverGraph {
    pub upper: Vec<Vec<u32>>,
    pub lower: Vec<Vec<u32>>,
}

/// Full Bruhat order of an enumerated group: one down-set per element plus
/// the cover graph.
#[derive(Clone, Debug)]
pub struct BruhatOrder {
    down: Vec<FixedBitSet>,
    covers: CoverGraph,
}

impl BruhatOrder {
    /// Down-sets via the lifting property: if `s v < v` then
    /// `[e, v] = [e, s v] ∪ s [e, s v]`.
    pub(crate) fn build(lengths: &[u32], lmul: &[Vec<u32>], left_desc: &[u32]) -> Self {
        let n = lengths.len();
        let mut down: Vec<FixedBitSet> = Vec::with_capacity(n);
        for v in 0..n {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(v);
            if left_desc[v] != 0 {
                let s = left_desc[v].trailing_zeros() as usize;
                let sv = lmul[s][v] as usize;
                set.union_with(&down[sv]);
                for x in down[sv].ones() {
                    set.insert(lmul[s][x] as usize);
                }
            }
            down.push(set);
        }
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for v in 0..n {
            for u in down[v].ones() {
                if lengths[u] + 1 == lengths[v] {
                    lower[v].push(u as u32);
                    upper[u].push(v as u32);
                }
            }
        }
        BruhatOrder {
            down,
            covers: CoverGraph { upper, lower },
        }
    }

    pub fn len(&self) -> usize {
        self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.down.is_empty()
    }

    pub fn leq(&self, u: usize, v: usize) -> bool {
        self.down[v].contains(u)
    }

    pub fn down_set(&self, v: usize) -> &FixedBitSet {
        &self.down[v]
    }

    pub fn covers(&self) -> &CoverGraph {
        &self.covers
    }

    pub fn upper_covers(&self, u: usize) -> &[u32] {
        &self.covers.upper[u]
    }

    pub fn lower_covers(&self, v: usize) -> &[u32] {
        &self.covers.lower[v]
    }

    /// Indices of `[u, v]` in canonical order; empty when `u ≰ v`.
    pub fn interval(&self, u: usize, v: usize) -> Vec<usize> {
        if !self.leq(u, v) {
            return Vec::new();
        }
        self.down[v].ones().filter(|&z| self.leq(u, z)).collect()
    }

    /// Indices of the up-set `[u, w0]` in canonical order.
    pub fn up_set(&self, u: usize) -> Vec<usize> {
        (u..self.len()).filter(|&z| self.leq(u, z)).collect()
    }
}

impl WeylGroup {
    /// Bruhat comparison `u ≤ v`.
    pub fn leq(&self, u: &Element, v: &Element) -> Result<bool> {
        self.check_member(u)?;
        self.check_member(v)?;
        if let (Ok(order), Some(i), Some(j)) = (self.bruhat(), u.index(), v.index()) {
            return Ok(order.leq(i, j));
        }
        self.leq_by_descent(u, v)
    }

    /// Bruhat comparison by the descent recursion, without any tables: if
    /// `v = e` then `u = e`; otherwise for a left descent `s` of `v`,
    /// `u ≤ v` iff `min(u, s u) ≤ s v`.
    pub fn leq_by_descent(&self, u: &Element, v: &Element) -> Result<bool> {
        self.check_member(u)?;
        self.check_member(v)?;
        let mut u = u.clone();
        let mut v = v.clone();
        loop {
            if u.length() > v.length() {
                return Ok(false);
            }
            if v.is_identity() {
                return Ok(u.is_identity());
            }
            let s = self.left_descents(&v)[0];
            let su = self.left_multiply(s, &u)?;
            if su.length() < u.length() {
                u = su;
            }
            v = self.left_multiply(s, &v)?;
        }
    }

    pub fn upper_covers(&self, w: &Element) -> Result<Vec<Element>> {
        let i = self.index_of(w)?;
        let order = self.bruhat()?;
        Ok(order.upper_covers(i).iter().map(|&j| self.elem(j as usize)).collect())
    }

    pub fn lower_covers(&self, w: &Element) -> Result<Vec<Element>> {
        let i = self.index_of(w)?;
        let order = self.bruhat()?;
        Ok(order.lower_covers(i).iter().map(|&j| self.elem(j as usize)).collect())
    }

    /// The interval `[u, v]`, sorted by (length, ShortLex word).
    pub fn interval(&self, u: &Element, v: &Element) -> Result<Vec<Element>> {
        let i = self.index_of(u)?;
        let j = self.index_of(v)?;
        let order = self.bruhat()?;
        if !order.leq(i, j) {
            return Err(Error::domain("empty interval: lower endpoint is not below upper endpoint"));
        }
        Ok(order.interval(i, j).into_iter().map(|k| self.elem(k)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::build(s.parse().unwrap()).unwrap()
    }

    /// Subword test against one fixed reduced word of `v`.
    fn subword_leq(g: &WeylGroup, u: &Element, v: &Element) -> bool {
        let word = g.reduced_word(v);
        let k = word.len();
        (0u32..1 << k).any(|mask| {
            let sub: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| word[b]).collect();
            sub.len() == u.length() && g.from_word(&sub).unwrap() == *u
        })
    }

    #[test]
    fn examples() {
        let g = group("B3");
        let e = g.identity();
        for w in g.elements().unwrap() {
            assert!(g.leq(&e, &w).unwrap());
        }
        let w = g.from_word(&[3, 2, 3, 2]).unwrap();
        let v = g.from_word(&[2, 3, 2, 1, 2, 3, 2]).unwrap();
        assert!(g.leq(&w, &v).unwrap());
        let a2 = group("A2");
        let (s1, s2) = (a2.generator(1).unwrap(), a2.generator(2).unwrap());
        assert!(!a2.leq(&s1, &s2).unwrap());
        assert!(!a2.leq(&s2, &s1).unwrap());
    }

    #[test]
    fn covers_of_extremes() {
        let g = group("A3");
        assert!(g.upper_covers(&g.longest_element()).unwrap().is_empty());
        let atoms = g.upper_covers(&g.identity()).unwrap();
        let gens: Vec<Element> = (1..=3).map(|s| g.generator(s).unwrap()).collect();
        assert_eq!(atoms, gens);
    }

    #[test]
    fn b3_upper_covers_by_scan() {
        let g = group("B3");
        let w = g.from_word(&[3, 2, 3, 2]).unwrap();
        let expected: Vec<Element> = g
            .elements()
            .unwrap()
            .into_iter()
            .filter(|x| x.length() == 5 && subword_leq(&g, &w, x))
            .collect();
        assert_eq!(g.upper_covers(&w).unwrap(), expected);
        assert!(!expected.is_empty());
    }

    #[test]
    fn interval_sizes() {
        let g = group("A3");
        let w0 = g.longest_element();
        let w = g.from_word(&[2, 2, 1]).unwrap();
        assert_eq!(g.interval(&w, &w).unwrap(), vec![w.clone()]);
        assert_eq!(g.interval(&g.from_word(&[1, 2]).unwrap(), &w0).unwrap().len(), 12);
        assert_eq!(g.interval(&g.from_word(&[3, 1, 2]).unwrap(), &w0).unwrap().len(), 8);
        let s1 = g.generator(1).unwrap();
        let s2 = g.generator(2).unwrap();
        assert!(matches!(g.interval(&s1, &s2), Err(Error::Domain(_))));
    }

    #[test]
    fn table_matches_subword_and_descent_recursion_rank_two() {
        for name in ["A1", "A2", "B2", "G2"] {
            let g = group(name);
            let els = g.elements().unwrap();
            for u in &els {
                for v in &els {
                    let sub = subword_leq(&g, u, v);
                    assert_eq!(g.leq(u, v).unwrap(), sub, "{name}");
                    assert_eq!(g.leq_by_descent(u, v).unwrap(), sub, "{name}");
                }
            }
        }
    }

    #[test]
    fn random_pairs_rank_three() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for name in ["A3", "B3"] {
            let g = group(name);
            let els = g.elements().unwrap();
            for _ in 0..5_000 {
                let u = &els[rng.gen_range(0..els.len())];
                let v = &els[rng.gen_range(0..els.len())];
                let sub = subword_leq(&g, u, v);
                assert_eq!(g.leq(u, v).unwrap(), sub);
                assert_eq!(g.leq_by_descent(u, v).unwrap(), sub);
            }
        }
    }

    #[test]
    fn graded_and_diamond() {
        for name in ["A1", "A2", "B2", "G2", "A3", "B3"] {
            let g = group(name);
            let order = g.bruhat().unwrap();
            let n = g.len().unwrap();
            for x in 0..n {
                if x != 0 {
                    assert!(!order.lower_covers(x).is_empty());
                }
                if x != n - 1 {
                    assert!(!order.upper_covers(x).is_empty());
                }
                for z in 0..n {
                    if g.len_of(z) == g.len_of(x) + 2 && order.leq(x, z) {
                        let mids = order
                            .upper_covers(x)
                            .iter()
                            .filter(|&&y| order.leq(y as usize, z))
                            .count();
                        assert_eq!(mids, 2, "{name}");
                    }
                }
            }
        }
    }
}
