//! Finite Weyl groups realised as permutation groups of their root systems.
//!
//! Roots are stored in simple-root coordinates, so every reflection is an
//! integer linear map and no rational arithmetic leaks into the element
//! representation. An element is recorded by the images of the positive
//! roots; its length is the number of positive roots it sends negative.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::bruhat::BruhatOrder;
use crate::error::{Error, Result};

/// Default number of group elements up to which full tables (element list,
/// Bruhat order, Kazhdan-Lusztig table) are built. Large enough for F4.
pub const DEFAULT_ELEMENT_BUDGET: usize = 1152;

/// Environment variable overriding [`DEFAULT_ELEMENT_BUDGET`].
pub const BUDGET_ENV: &str = "BGG_ELEMENT_BUDGET";

/// Reads the element budget from the environment, falling back to the default.
pub fn element_budget_from_env() -> Result<usize> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{BUDGET_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_ELEMENT_BUDGET),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Result<Self> {
        Ok(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            other => return Err(Error::Config(format!("unknown Cartan family {other:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A Cartan type such as `B3` or `F4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        // generator masks are u32 and signed root indices are u16
        if !ok || rank > 16 {
            return Err(Error::Config(format!("{family}{rank} is not a valid Cartan type")));
        }
        Ok(CartanType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Group order from the degrees of the basic invariants.
    pub fn group_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u128 << n) * fact(n),
            Family::D => (1u128 << (n - 1)) * fact(n),
            Family::E => match self.rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    /// `pairing[i][j] = <alpha_i, alpha_j^vee>` in Bourbaki numbering.
    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A => (0..n - 1).for_each(|i| link(i, i + 1)),
            Family::B | Family::C => (0..n - 1).for_each(|i| link(i, i + 1)),
            Family::D => {
                (0..n - 2).for_each(|i| link(i, i + 1));
                link(n - 3, n - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                (2..n - 1).for_each(|i| link(i, i + 1));
            }
            Family::F => (0..3).for_each(|i| link(i, i + 1)),
            Family::G => link(0, 1),
        }
        match self.family {
            // alpha_n short
            Family::B => a[n - 2][n - 1] = -2,
            // alpha_n long
            Family::C => a[n - 1][n - 2] = -2,
            // alpha_1, alpha_2 long; alpha_3, alpha_4 short
            Family::F => a[1][2] = -2,
            // alpha_1 short, alpha_2 long
            Family::G => a[1][0] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::Config("empty Cartan type".into()))?;
        let family = Family::from_letter(letter)?;
        let rank = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Config(format!("bad rank in Cartan type {s:?}")))?;
        CartanType::new(family, rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(u64);

static NEXT_GROUP_ID: AtomicU64 = AtomicU64::new(1);

/// One group element.
///
/// Equality and hashing are by the action on roots, which is canonical.
/// `index` is the position in the group's canonical ordering when the group
/// has been enumerated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    group: GroupId,
    images: Box<[u16]>,
    length: u32,
    index: Option<u32>,
}

impl Element {
    pub fn length(&self) -> usize {
        self.length as usize
    }

    pub fn group_id(&self) -> GroupId {
        self.group
    }

    /// Images of the positive roots as signed root indices: `r < N` is the
    /// positive root `r`, `r >= N` is the negative of root `r - N`.
    pub fn root_images(&self) -> &[u16] {
        &self.images
    }

    pub fn index(&self) -> Option<usize> {
        self.index.map(|i| i as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }
}

/// Precomputed tables of an enumerated group. Elements are indexed in
/// (length, ShortLex reduced word) order, so index 0 is the identity and the
/// last index is the longest element.
pub(crate) struct ElementTable {
    pub images: Vec<u16>,
    pub lengths: Vec<u32>,
    pub lookup: HashMap<Box<[u16]>, u32>,
    /// `lmul[s][i]` is the index of `s * x_i`.
    pub lmul: Vec<Vec<u32>>,
    /// `rmul[s][i]` is the index of `x_i * s`.
    pub rmul: Vec<Vec<u32>>,
    pub inverse: Vec<u32>,
    pub left_desc: Vec<u32>,
    pub right_desc: Vec<u32>,
    pub words: Vec<Vec<u8>>,
    pub bruhat: BruhatOrder,
}

pub struct WeylGroup {
    id: GroupId,
    cartan: CartanType,
    pairing: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, u16>,
    generator_action: Vec<Vec<u16>>,
    order: u128,
    table: Option<ElementTable>,
}

impl fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylGroup")
            .field("cartan", &self.cartan)
            .field("order", &self.order)
            .field("enumerated", &self.table.is_some())
            .finish()
    }
}

impl WeylGroup {
    /// Builds the group with the default element budget.
    pub fn build(cartan: CartanType) -> Result<Self> {
        Self::build_with_budget(cartan, DEFAULT_ELEMENT_BUDGET)
    }

    /// Builds the group; elements are enumerated (and full tables become
    /// available) only when the group order fits in `budget`.
    pub fn build_with_budget(cartan: CartanType, budget: usize) -> Result<Self> {
        let pairing = cartan.pairing_matrix();
        let n = cartan.rank();
        let positive_roots = positive_roots(&pairing);
        let np = positive_roots.len();
        if 2 * np > u16::MAX as usize {
            return Err(Error::Config(format!("{cartan} has too many roots")));
        }
        let root_index: HashMap<Vec<i64>, u16> = positive_roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i as u16))
            .collect();
        let mut generator_action = Vec::with_capacity(n);
        for s in 0..n {
            let mut perm = vec![0u16; 2 * np];
            for (i, root) in positive_roots.iter().enumerate() {
                let image = reflect(&pairing, s, root);
                let target = signed_index(&root_index, np, &image).ok_or_else(|| {
                    Error::internal(format!("reflection {s} does not permute the roots of {cartan}"))
                })?;
                perm[i] = target;
                perm[i + np] = negate(target, np);
            }
            generator_action.push(perm);
        }
        let mut group = WeylGroup {
            id: GroupId(NEXT_GROUP_ID.fetch_add(1, Ordering::Relaxed)),
            cartan,
            pairing,
            positive_roots,
            root_index,
            generator_action,
            order: cartan.group_order(),
            table: None,
        };
        if group.order <= budget as u128 {
            group.table = Some(group.enumerate()?);
        }
        Ok(group)
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn cartan(&self) -> CartanType {
        self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Positive roots in simple-root coordinates; the first `rank` entries are
    /// the simple roots in Bourbaki order.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn pairing_matrix(&self) -> &[Vec<i64>] {
        &self.pairing
    }

    /// Permutation of the `2N` signed roots induced by generator `s` (1-based).
    pub fn generator_action(&self, s: usize) -> Result<&[u16]> {
        self.check_generator(s)?;
        Ok(&self.generator_action[s - 1])
    }

    pub fn is_enumerated(&self) -> bool {
        self.table.is_some()
    }

    pub(crate) fn table(&self) -> Result<&ElementTable> {
        self.table.as_ref().ok_or_else(|| {
            Error::Resource(format!(
                "{} has {} elements, above the element budget; raise {BUDGET_ENV} or shard the computation",
                self.cartan, self.order
            ))
        })
    }

    /// Number of enumerated elements.
    pub fn len(&self) -> Result<usize> {
        Ok(self.table()?.lengths.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bruhat(&self) -> Result<&BruhatOrder> {
        Ok(&self.table()?.bruhat)
    }

    /// Element with canonical index `i`.
    pub fn element(&self, i: usize) -> Result<Element> {
        let t = self.table()?;
        if i >= t.lengths.len() {
            return Err(Error::input(format!("element index {i} out of range")));
        }
        Ok(self.element_at(t, i))
    }

    fn element_at(&self, t: &ElementTable, i: usize) -> Element {
        let np = self.num_positive_roots();
        Element {
            group: self.id,
            images: t.images[i * np..(i + 1) * np].into(),
            length: t.lengths[i],
            index: Some(i as u32),
        }
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        let t = self.table()?;
        Ok((0..t.lengths.len()).map(|i| self.element_at(t, i)).collect())
    }

    pub fn index_of(&self, w: &Element) -> Result<usize> {
        self.check_member(w)?;
        w.index()
            .ok_or_else(|| self.table().err().unwrap_or_else(|| Error::internal("unindexed element")))
    }

    pub(crate) fn check_member(&self, w: &Element) -> Result<()> {
        if w.group != self.id {
            return Err(Error::input("element belongs to a different group"));
        }
        Ok(())
    }

    fn check_generator(&self, s: usize) -> Result<()> {
        if s == 0 || s > self.rank() {
            return Err(Error::input(format!(
                "generator index {s} out of range 1..={}",
                self.rank()
            )));
        }
        Ok(())
    }

    fn make(&self, images: Vec<u16>) -> Element {
        let np = self.num_positive_roots();
        let length = images.iter().filter(|&&r| r as usize >= np).count() as u32;
        let index = self
            .table
            .as_ref()
            .map(|t| t.lookup[images.as_slice()]);
        Element {
            group: self.id,
            images: images.into_boxed_slice(),
            length,
            index,
        }
    }

    pub fn identity(&self) -> Element {
        self.make((0..self.num_positive_roots() as u16).collect())
    }

    /// Simple reflection `s_i`, 1-based.
    pub fn generator(&self, s: usize) -> Result<Element> {
        self.check_generator(s)?;
        Ok(self.make(self.generator_action[s - 1][..self.num_positive_roots()].to_vec()))
    }

    /// Product `s_{i_1} s_{i_2} ... s_{i_k}` of the listed generators.
    pub fn from_word(&self, word: &[usize]) -> Result<Element> {
        for &s in word {
            self.check_generator(s)?;
        }
        let np = self.num_positive_roots();
        // w * s acts on a root r as w(s(r)); accumulate from the left.
        let mut images: Vec<u16> = (0..np as u16).collect();
        for &s in word {
            let gen = &self.generator_action[s - 1];
            images = (0..np)
                .map(|i| apply(&images, gen[i], np))
                .collect();
        }
        Ok(self.make(images))
    }

    pub fn multiply(&self, u: &Element, v: &Element) -> Result<Element> {
        self.check_member(u)?;
        self.check_member(v)?;
        let np = self.num_positive_roots();
        let images = v.images.iter().map(|&r| apply(&u.images, r, np)).collect();
        Ok(self.make(images))
    }

    pub fn inverse(&self, w: &Element) -> Element {
        let np = self.num_positive_roots();
        let mut images = vec![0u16; np];
        for (i, &r) in w.images.iter().enumerate() {
            let r = r as usize;
            if r < np {
                images[r] = i as u16;
            } else {
                images[r - np] = negate(i as u16, np);
            }
        }
        self.make(images)
    }

    /// `s * w` for a 1-based generator.
    pub fn left_multiply(&self, s: usize, w: &Element) -> Result<Element> {
        self.check_generator(s)?;
        self.check_member(w)?;
        let gen = &self.generator_action[s - 1];
        Ok(self.make(w.images.iter().map(|&r| gen[r as usize]).collect()))
    }

    /// `w * s` for a 1-based generator.
    pub fn right_multiply(&self, w: &Element, s: usize) -> Result<Element> {
        self.check_generator(s)?;
        self.check_member(w)?;
        let np = self.num_positive_roots();
        let gen = &self.generator_action[s - 1];
        Ok(self.make((0..np).map(|i| apply(&w.images, gen[i], np)).collect()))
    }

    /// Generators `s` (1-based) with `l(s w) < l(w)`: exactly those whose
    /// simple root is sent negative by `w^{-1}`.
    pub fn left_descents(&self, w: &Element) -> Vec<usize> {
        mask_to_indices(left_descent_mask(&w.images, self.rank(), self.num_positive_roots()))
    }

    /// Generators `s` (1-based) with `l(w s) < l(w)`.
    pub fn right_descents(&self, w: &Element) -> Vec<usize> {
        mask_to_indices(right_descent_mask(&w.images, self.rank(), self.num_positive_roots()))
    }

    /// The ShortLex-minimal reduced word: repeatedly strip the smallest left
    /// descent.
    pub fn reduced_word(&self, w: &Element) -> Vec<usize> {
        if let (Some(t), Some(i)) = (self.table.as_ref(), w.index) {
            return t.words[i as usize].iter().map(|&s| s as usize + 1).collect();
        }
        let np = self.num_positive_roots();
        let mut images = w.images.to_vec();
        let mut word = Vec::with_capacity(w.length());
        loop {
            let mask = left_descent_mask(&images, self.rank(), np);
            if mask == 0 {
                break;
            }
            let s = mask.trailing_zeros() as usize;
            let gen = &self.generator_action[s];
            images.iter_mut().for_each(|r| *r = gen[*r as usize]);
            word.push(s + 1);
        }
        word
    }

    pub fn longest_element(&self) -> Element {
        if let Some(t) = self.table.as_ref() {
            return self.element_at(t, t.lengths.len() - 1);
        }
        // w0 sends every positive root negative; build it by ascending greedily
        let np = self.num_positive_roots();
        let mut images: Vec<u16> = (0..np as u16).collect();
        loop {
            let mask = left_descent_mask(&images, self.rank(), np);
            let full = (1u32 << self.rank()) - 1;
            if mask == full {
                break;
            }
            let s = (!mask & full).trailing_zeros() as usize;
            let gen = &self.generator_action[s];
            images.iter_mut().for_each(|r| *r = gen[*r as usize]);
        }
        self.make(images)
    }

    /// Enumerates the group by breadth-first search over left multiplication
    /// and sorts by (length, ShortLex word).
    fn enumerate(&self) -> Result<ElementTable> {
        let np = self.num_positive_roots();
        let rank = self.rank();
        let identity: Box<[u16]> = (0..np as u16).collect();
        let mut perms: Vec<Box<[u16]>> = vec![identity.clone()];
        let mut lookup: HashMap<Box<[u16]>, u32> = HashMap::new();
        lookup.insert(identity, 0);
        let mut head = 0;
        while head < perms.len() {
            for gen in &self.generator_action {
                let next: Box<[u16]> = perms[head].iter().map(|&r| gen[r as usize]).collect();
                if !lookup.contains_key(&next) {
                    lookup.insert(next.clone(), perms.len() as u32);
                    perms.push(next);
                }
            }
            head += 1;
        }
        if perms.len() as u128 != self.order {
            return Err(Error::internal(format!(
                "{} enumerated to {} elements, expected {}",
                self.cartan,
                perms.len(),
                self.order
            )));
        }
        let n = perms.len();
        let lengths: Vec<u32> = perms
            .iter()
            .map(|p| p.iter().filter(|&&r| r as usize >= np).count() as u32)
            .collect();
        // BFS discovers elements in non-decreasing length, so s*w for a left
        // descent s is always earlier than w.
        let mut words: Vec<Vec<u8>> = Vec::with_capacity(n);
        for (i, p) in perms.iter().enumerate() {
            let mask = left_descent_mask(p, rank, np);
            if mask == 0 {
                words.push(Vec::new());
                continue;
            }
            let s = mask.trailing_zeros() as usize;
            let gen = &self.generator_action[s];
            let shorter: Box<[u16]> = p.iter().map(|&r| gen[r as usize]).collect();
            let j = lookup[&shorter] as usize;
            debug_assert!(j < i);
            let mut word = Vec::with_capacity(lengths[i] as usize);
            word.push(s as u8);
            word.extend_from_slice(&words[j]);
            words.push(word);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| (lengths[a], &words[a]).cmp(&(lengths[b], &words[b])));
        let mut images = Vec::with_capacity(n * np);
        let mut sorted_lengths = Vec::with_capacity(n);
        let mut sorted_words = Vec::with_capacity(n);
        let mut new_lookup = HashMap::with_capacity(n);
        for (new, &old) in order.iter().enumerate() {
            images.extend_from_slice(&perms[old]);
            sorted_lengths.push(lengths[old]);
            sorted_words.push(std::mem::take(&mut words[old]));
            new_lookup.insert(perms[old].clone(), new as u32);
        }
        let lookup = new_lookup;
        let image = |i: usize| &images[i * np..(i + 1) * np];
        let mut lmul = vec![vec![0u32; n]; rank];
        let mut rmul = vec![vec![0u32; n]; rank];
        for s in 0..rank {
            let gen = &self.generator_action[s];
            for i in 0..n {
                let img = image(i);
                let left: Vec<u16> = img.iter().map(|&r| gen[r as usize]).collect();
                lmul[s][i] = lookup[left.as_slice()];
                let right: Vec<u16> = (0..np).map(|k| apply(img, gen[k], np)).collect();
                rmul[s][i] = lookup[right.as_slice()];
            }
        }
        let mut inverse = vec![0u32; n];
        for i in 0..n {
            let mut inv = vec![0u16; np];
            for (k, &r) in image(i).iter().enumerate() {
                let r = r as usize;
                if r < np {
                    inv[r] = k as u16;
                } else {
                    inv[r - np] = negate(k as u16, np);
                }
            }
            inverse[i] = lookup[inv.as_slice()];
        }
        let left_desc: Vec<u32> = (0..n).map(|i| left_descent_mask(image(i), rank, np)).collect();
        let right_desc: Vec<u32> = (0..n).map(|i| right_descent_mask(image(i), rank, np)).collect();
        let bruhat = BruhatOrder::build(&sorted_lengths, &lmul, &left_desc);
        Ok(ElementTable {
            images,
            lengths: sorted_lengths,
            lookup,
            lmul,
            rmul,
            inverse,
            left_desc,
            right_desc,
            words: sorted_words,
            bruhat,
        })
    }

    /// Index of the root `root` (simple-root coordinates) as a signed index.
    pub fn root_signed_index(&self, root: &[i64]) -> Option<u16> {
        signed_index(&self.root_index, self.num_positive_roots(), root)
    }
}

/// Index-level accessors used by the table-driven algorithms. All generator
/// arguments here are 0-based.
impl WeylGroup {
    pub(crate) fn len_of(&self, i: usize) -> usize {
        self.table.as_ref().expect("enumerated").lengths[i] as usize
    }

    pub(crate) fn lmul_idx(&self, s: usize, i: usize) -> usize {
        self.table.as_ref().expect("enumerated").lmul[s][i] as usize
    }

    pub(crate) fn rmul_idx(&self, i: usize, s: usize) -> usize {
        self.table.as_ref().expect("enumerated").rmul[s][i] as usize
    }

    pub(crate) fn inv_idx(&self, i: usize) -> usize {
        self.table.as_ref().expect("enumerated").inverse[i] as usize
    }

    pub(crate) fn ldesc_idx(&self, i: usize) -> u32 {
        self.table.as_ref().expect("enumerated").left_desc[i]
    }

    pub(crate) fn rdesc_idx(&self, i: usize) -> u32 {
        self.table.as_ref().expect("enumerated").right_desc[i]
    }

    /// Product of two enumerated elements by index.
    pub(crate) fn mul_idx(&self, u: usize, v: usize) -> usize {
        let t = self.table.as_ref().expect("enumerated");
        // u * v = u * s_{i1} ... s_{ik} for the word of v
        t.words[v].iter().fold(u, |acc, &s| t.rmul[s as usize][acc] as usize)
    }

    pub(crate) fn longest_idx(&self) -> usize {
        self.table.as_ref().expect("enumerated").lengths.len() - 1
    }

    pub(crate) fn elem(&self, i: usize) -> Element {
        let t = self.table.as_ref().expect("enumerated");
        self.element_at(t, i)
    }

    pub(crate) fn word_of(&self, i: usize) -> Vec<usize> {
        let t = self.table.as_ref().expect("enumerated");
        t.words[i].iter().map(|&s| s as usize + 1).collect()
    }
}

fn negate(r: u16, np: usize) -> u16 {
    let r = r as usize;
    if r < np {
        (r + np) as u16
    } else {
        (r - np) as u16
    }
}

/// Image of signed root `r` under the element with positive-root images `images`.
fn apply(images: &[u16], r: u16, np: usize) -> u16 {
    let r = r as usize;
    if r < np {
        images[r]
    } else {
        negate(images[r - np], np)
    }
}

fn left_descent_mask(images: &[u16], rank: usize, np: usize) -> u32 {
    let mut mask = 0;
    for &r in images {
        let r = r as usize;
        if r >= np && r - np < rank {
            mask |= 1 << (r - np);
        }
    }
    mask
}

fn right_descent_mask(images: &[u16], rank: usize, np: usize) -> u32 {
    (0..rank)
        .filter(|&s| images[s] as usize >= np)
        .fold(0, |m, s| m | (1 << s))
}

pub(crate) fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

fn reflect(pairing: &[Vec<i64>], s: usize, root: &[i64]) -> Vec<i64> {
    let c: i64 = root.iter().zip(pairing).map(|(&b, row)| b * row[s]).sum();
    let mut out = root.to_vec();
    out[s] -= c;
    out
}

fn signed_index(index: &HashMap<Vec<i64>, u16>, np: usize, root: &[i64]) -> Option<u16> {
    if let Some(&i) = index.get(root) {
        return Some(i);
    }
    let neg: Vec<i64> = root.iter().map(|x| -x).collect();
    index.get(&neg).map(|&i| (i as usize + np) as u16)
}

/// Positive roots by closure of the simple roots under simple reflections,
/// sorted by height with the simple roots first.
fn positive_roots(pairing: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = pairing.len();
    let mut roots: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut seen: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut head = 0;
    while head < roots.len() {
        for s in 0..n {
            let image = reflect(pairing, s, &roots[head]);
            if image.iter().all(|&c| c >= 0) && seen.insert(image.clone()) {
                roots.push(image);
            }
        }
        head += 1;
    }
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> WeylGroup {
        WeylGroup::build(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn orders_and_root_counts() {
        for (name, order, roots) in [
            ("A1", 2, 1),
            ("A2", 6, 3),
            ("A3", 24, 6),
            ("B2", 8, 4),
            ("G2", 12, 6),
            ("B3", 48, 9),
            ("C3", 48, 9),
            ("A4", 120, 10),
            ("B4", 384, 16),
            ("D4", 192, 12),
            ("F4", 1152, 24),
        ] {
            let g = group(name);
            assert_eq!(g.len().unwrap(), order, "{name}");
            assert_eq!(g.num_positive_roots(), roots, "{name}");
            assert_eq!(g.longest_element().length(), roots, "{name}");
        }
    }

    #[test]
    fn malformed_types_rejected() {
        for bad in ["A0", "B1", "D2", "E5", "E9", "F3", "G3", "H3", "X", ""] {
            assert!(bad.parse::<CartanType>().is_err(), "{bad}");
        }
    }

    #[test]
    fn e_types_are_not_enumerated_by_default() {
        let g = group("E6");
        assert!(!g.is_enumerated());
        assert_eq!(g.num_positive_roots(), 36);
        assert_eq!(g.longest_element().length(), 36);
        assert!(matches!(g.elements(), Err(Error::Resource(_))));
        let w = g.from_word(&[1, 3, 4, 2]).unwrap();
        assert_eq!(w.length(), 4);
        assert_eq!(g.from_word(&g.reduced_word(&w)).unwrap(), w);
    }

    #[test]
    fn generators_are_involutions_negating_their_root() {
        for name in ["A3", "B3", "D4", "F4", "G2"] {
            let g = group(name);
            let np = g.num_positive_roots();
            for s in 1..=g.rank() {
                let perm = g.generator_action(s).unwrap();
                for r in 0..2 * np {
                    assert_eq!(perm[perm[r] as usize] as usize, r);
                }
                let negated: Vec<usize> = (0..np).filter(|&r| perm[r] as usize >= np).collect();
                assert_eq!(negated, vec![s - 1], "{name} s{s}");
            }
        }
    }

    #[test]
    fn word_examples() {
        let g = group("B3");
        assert!(g.from_word(&[]).unwrap().is_identity());
        let w = g.from_word(&[3, 2, 3, 2]).unwrap();
        assert_eq!(w.length(), 4);
        let v = g.from_word(&[2, 3, 2, 1, 2, 3, 2]).unwrap();
        assert_eq!(v.length(), 7);
        assert!(matches!(g.from_word(&[4]), Err(Error::Input(_))));
        assert!(matches!(g.from_word(&[0]), Err(Error::Input(_))));
        let mut ld = g.left_descents(&w);
        ld.sort();
        assert_eq!(ld, vec![2, 3]);
        let s3 = g.generator(3).unwrap();
        let u = g.from_word(&[2, 3, 2]).unwrap();
        assert_eq!(g.multiply(&s3, &u).unwrap(), w);
    }

    #[test]
    fn shortlex_words() {
        let a2 = group("A2");
        assert_eq!(a2.reduced_word(&a2.longest_element()), vec![1, 2, 1]);
        assert_eq!(a2.reduced_word(&a2.identity()), Vec::<usize>::new());
        let a3 = group("A3");
        let w = a3.from_word(&[1, 2]).unwrap();
        assert_eq!(a3.inverse(&w), a3.from_word(&[2, 1]).unwrap());
    }

    #[test]
    fn mixed_groups_rejected() {
        let g = group("A2");
        let h = group("A2");
        let u = g.generator(1).unwrap();
        let v = h.generator(1).unwrap();
        assert!(matches!(g.multiply(&u, &v), Err(Error::Input(_))));
    }

    #[test]
    fn b_and_c_have_identical_combinatorics() {
        let b = group("B3");
        let c = group("C3");
        for i in 0..48 {
            let wb = b.word_of(i);
            let wc = c.word_of(i);
            assert_eq!(wb, wc);
        }
    }

    #[test]
    fn unenumerated_paths_agree_with_tables() {
        let g = group("B3");
        let lazy = WeylGroup::build_with_budget("B3".parse().unwrap(), 0).unwrap();
        assert!(!lazy.is_enumerated());
        for w in g.elements().unwrap() {
            let word = g.reduced_word(&w);
            let lw = lazy.from_word(&word).unwrap();
            assert_eq!(lazy.reduced_word(&lw), word);
            assert_eq!(lazy.left_descents(&lw), g.left_descents(&w));
        }
        assert_eq!(
            lazy.reduced_word(&lazy.longest_element()),
            g.reduced_word(&g.longest_element())
        );
    }
}
