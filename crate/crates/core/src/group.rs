//! Fully enumerated Weyl groups with multiplication tables and a
//! precomputed Bruhat order.

use std::collections::{HashMap, VecDeque};
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_system::{Root, RootSystem};
use crate::weyl::{ReducedWord, WeylElement};

/// Index of an element in a [`WeylGroup`]; the identity is `ElemId(0)` and
/// ids are sorted by length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ElemId(pub u32);

impl ElemId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// Groups larger than this are refused by [`WeylGroup::new`].
pub const DEFAULT_ORDER_LIMIT: usize = 50_000;

#[derive(Debug)]
pub struct WeylGroup {
    rs: RootSystem,
    elements: Vec<WeylElement>,
    index: HashMap<WeylElement, ElemId>,
    // tables indexed [generator][element]
    left: Vec<Vec<ElemId>>,
    right: Vec<Vec<ElemId>>,
    inverse: Vec<ElemId>,
    length: Vec<u32>,
    words: Vec<Vec<usize>>,
    below: Vec<FixedBitSet>,
    reflections: Vec<ElemId>,
}

impl WeylGroup {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        Self::with_order_limit(rs, DEFAULT_ORDER_LIMIT)
    }

    /// Enumerates the group breadth-first from the identity and builds the
    /// multiplication, length and Bruhat tables.
    pub fn with_order_limit(rs: &RootSystem, limit: usize) -> Result<Self> {
        let n = rs.rank();
        let gens: Vec<WeylElement> = (1..=n)
            .map(|i| WeylElement::simple_reflection(rs, i))
            .collect::<Result<_>>()?;

        let mut elements = vec![WeylElement::identity(n)];
        let mut index = HashMap::new();
        index.insert(elements[0].clone(), ElemId(0));
        let mut right: Vec<Vec<ElemId>> = vec![Vec::new(); n];
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for (s, gen) in gens.iter().enumerate() {
                let h = elements[g].mul(gen);
                let id = match index.get(&h) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= limit {
                            return Err(Error::GroupTooLarge { limit });
                        }
                        let id = ElemId(elements.len() as u32);
                        index.insert(h.clone(), id);
                        elements.push(h);
                        queue.push_back(id.idx());
                        id
                    }
                };
                right[s].push(id);
            }
        }
        let order = elements.len();
        let left: Vec<Vec<ElemId>> = gens
            .iter()
            .map(|gen| elements.iter().map(|g| index[&gen.mul(g)]).collect())
            .collect();

        let mut length = vec![0u32; order];
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); order];
        let mut below: Vec<FixedBitSet> = Vec::with_capacity(order);
        for g in 0..order {
            if g == 0 {
                let mut b = FixedBitSet::with_capacity(order);
                b.insert(0);
                below.push(b);
                continue;
            }
            // ids are length-sorted, so the smallest left descent leads to a
            // smaller id that is already processed
            let (s, u) = (0..n)
                .map(|s| (s, left[s][g].idx()))
                .find(|&(_, u)| u < g)
                .expect("non-identity element has a left descent");
            length[g] = length[u] + 1;
            let mut word = vec![s + 1];
            word.extend_from_slice(&words[u]);
            words[g] = word;
            let mut b = below[u].clone();
            for y in below[u].ones() {
                b.insert(left[s][y].idx());
            }
            below.push(b);
        }
        let inverse: Vec<ElemId> = elements.iter().map(|g| index[&g.inverse()]).collect();
        let reflections = rs
            .positive_roots()
            .iter()
            .map(|alpha| WeylElement::reflection(rs, alpha).map(|r| index[&r]))
            .collect::<Result<_>>()?;

        Ok(WeylGroup {
            rs: rs.clone(),
            elements,
            index,
            left,
            right,
            inverse,
            length,
            words,
            below,
            reflections,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> ElemId {
        ElemId(0)
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..self.order() as u32).map(ElemId)
    }

    pub fn element(&self, g: ElemId) -> &WeylElement {
        &self.elements[g.idx()]
    }

    pub fn id_of(&self, w: &WeylElement) -> Result<ElemId> {
        self.index.get(w).copied().ok_or(Error::UnknownElement)
    }

    /// `s_i * g`, letter 1-based.
    #[inline]
    pub fn lmul(&self, s: usize, g: ElemId) -> ElemId {
        self.left[s - 1][g.idx()]
    }

    /// `g * s_i`, letter 1-based.
    #[inline]
    pub fn rmul(&self, g: ElemId, s: usize) -> ElemId {
        self.right[s - 1][g.idx()]
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.words[b.idx()]
            .iter()
            .fold(a, |acc, &s| self.rmul(acc, s))
    }

    pub fn inverse(&self, g: ElemId) -> ElemId {
        self.inverse[g.idx()]
    }

    #[inline]
    pub fn length(&self, g: ElemId) -> usize {
        self.length[g.idx()] as usize
    }

    pub fn longest(&self) -> ElemId {
        ElemId(self.order() as u32 - 1)
    }

    /// Canonical reduced word (smallest left descent first).
    pub fn word(&self, g: ElemId) -> &[usize] {
        &self.words[g.idx()]
    }

    pub fn canonical_word(&self, g: ElemId) -> ReducedWord {
        ReducedWord::new_unchecked(self.words[g.idx()].clone())
    }

    /// Product of the letters of a (not necessarily reduced) word.
    pub fn product<I: IntoIterator<Item = usize>>(&self, letters: I) -> ElemId {
        letters
            .into_iter()
            .fold(self.identity(), |acc, s| self.rmul(acc, s))
    }

    pub fn from_word(&self, letters: &[usize]) -> Result<ElemId> {
        for &l in letters {
            if l == 0 || l > self.rank() {
                return Err(Error::LetterOutOfRange {
                    letter: l,
                    rank: self.rank(),
                });
            }
        }
        Ok(self.product(letters.iter().copied()))
    }

    /// Validates a word as reduced and returns it with its product.
    pub fn reduced_word(&self, letters: &[usize]) -> Result<(ReducedWord, ElemId)> {
        let w = self.from_word(letters)?;
        if self.length(w) != letters.len() {
            return Err(Error::NotReduced(letters.to_vec()));
        }
        Ok((ReducedWord::new_unchecked(letters.to_vec()), w))
    }

    #[inline]
    pub fn is_left_descent(&self, g: ElemId, s: usize) -> bool {
        self.lmul(s, g) < g
    }

    #[inline]
    pub fn is_right_descent(&self, g: ElemId, s: usize) -> bool {
        self.rmul(g, s) < g
    }

    pub fn left_descents(&self, g: ElemId) -> impl Iterator<Item = usize> + '_ {
        (1..=self.rank()).filter(move |&s| self.is_left_descent(g, s))
    }

    /// Bruhat order from the precomputed table.
    #[inline]
    pub fn leq(&self, x: ElemId, w: ElemId) -> bool {
        self.below[w.idx()].contains(x.idx())
    }

    pub fn lt(&self, x: ElemId, w: ElemId) -> bool {
        x != w && self.leq(x, w)
    }

    /// Bruhat order by the descent recursion, without the table.
    pub fn leq_recursive(&self, mut x: ElemId, mut w: ElemId) -> bool {
        loop {
            if w == self.identity() {
                return x == self.identity();
            }
            let s = self
                .left_descents(w)
                .next()
                .expect("non-identity element has a left descent");
            if self.is_left_descent(x, s) {
                x = self.lmul(s, x);
            }
            w = self.lmul(s, w);
        }
    }

    pub fn below_set(&self, w: ElemId) -> &FixedBitSet {
        &self.below[w.idx()]
    }

    /// `{y : y <= w}` in id order.
    pub fn lower_interval(&self, w: ElemId) -> Vec<ElemId> {
        self.below[w.idx()]
            .ones()
            .map(|i| ElemId(i as u32))
            .collect()
    }

    /// `{y : y >= x}` in id order.
    pub fn upper_interval(&self, x: ElemId) -> Vec<ElemId> {
        self.ids().filter(|&y| self.leq(x, y)).collect()
    }

    /// `{y : x <= y <= w}` in id order.
    pub fn interval(&self, x: ElemId, w: ElemId) -> Result<Vec<ElemId>> {
        self.require_leq(x, w)?;
        Ok(self.below[w.idx()]
            .ones()
            .map(|i| ElemId(i as u32))
            .filter(|&y| self.leq(x, y))
            .collect())
    }

    pub(crate) fn require_leq(&self, x: ElemId, w: ElemId) -> Result<()> {
        if self.leq(x, w) {
            Ok(())
        } else {
            Err(Error::NotBelow {
                x: self.word(x).to_vec(),
                w: self.word(w).to_vec(),
            })
        }
    }

    /// Elements covered by `w`: `w s_alpha` of length one less.
    pub fn covers_down(&self, w: ElemId) -> Vec<ElemId> {
        let mut out: Vec<ElemId> = self
            .reflections
            .iter()
            .map(|&t| self.mul(w, t))
            .filter(|&y| self.length(y) + 1 == self.length(w))
            .collect();
        out.sort();
        out
    }

    /// The reflection `s_alpha` for a positive root.
    pub fn reflection(&self, alpha: &Root) -> Result<ElemId> {
        let k = self
            .rs
            .positive_roots()
            .iter()
            .position(|a| a == alpha)
            .ok_or_else(|| Error::NotPositive(alpha.coords.clone()))?;
        Ok(self.reflections[k])
    }

    /// Reflections in the order of the positive roots.
    pub fn reflections(&self) -> &[ElemId] {
        &self.reflections
    }

    /// Visits every reduced word of `w` in lexicographic order; the visitor
    /// may stop the walk early.
    pub fn for_each_reduced_word<F>(&self, w: ElemId, mut visit: F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        let mut prefix = Vec::with_capacity(self.length(w));
        self.words_rec(w, &mut prefix, &mut visit)
    }

    fn words_rec<F>(&self, w: ElemId, prefix: &mut Vec<usize>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if w == self.identity() {
            return visit(prefix);
        }
        for s in 1..=self.rank() {
            let sw = self.lmul(s, w);
            if sw < w {
                prefix.push(s);
                self.words_rec(sw, prefix, visit)?;
                prefix.pop();
            }
        }
        ControlFlow::Continue(())
    }

    pub fn reduced_words(&self, w: ElemId) -> Vec<ReducedWord> {
        let mut out = Vec::new();
        let _ = self.for_each_reduced_word(w, |word| {
            out.push(ReducedWord::new_unchecked(word.to_vec()));
            ControlFlow::Continue(())
        });
        out
    }

    /// Number of reduced words of every element.
    pub fn reduced_word_counts(&self) -> Vec<u64> {
        let mut count = vec![0u64; self.order()];
        count[0] = 1;
        for g in 1..self.order() {
            let g = ElemId(g as u32);
            count[g.idx()] = self
                .left_descents(g)
                .map(|s| count[self.lmul(s, g).idx()])
                .sum();
        }
        count
    }
}
