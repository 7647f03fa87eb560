//! Fixed-universe bit sets used for carriers, cones, fibers, and upsets.
//!
//! Every set knows the size of its universe, so complement and full-set
//! operations are well defined. Ordering compares the sets as little-endian
//! integers, which is what the canonical listings rely on.

use std::fmt;

const WORD_BITS: usize = 64;

/// Subset of a fixed universe `{0, .., universe-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    universe: usize,
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        let n_words = universe.div_ceil(WORD_BITS).max(1);
        ElemSet {
            universe,
            words: vec![0; n_words],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn singleton(universe: usize, x: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(x);
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(universe: usize, iter: I) -> Self {
        let mut s = Self::empty(universe);
        for x in iter {
            s.insert(x);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, x: usize) {
        debug_assert!(x < self.universe);
        self.words[x / WORD_BITS] |= 1 << (x % WORD_BITS);
    }

    pub fn remove(&mut self, x: usize) {
        debug_assert!(x < self.universe);
        self.words[x / WORD_BITS] &= !(1 << (x % WORD_BITS));
    }

    pub fn contains(&self, x: usize) -> bool {
        debug_assert!(x < self.universe);
        self.words[x / WORD_BITS] & (1 << (x % WORD_BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        debug_assert_eq!(self.universe, other.universe);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        ElemSet {
            universe: self.universe,
            words,
        }
    }

    pub fn inter(&self, other: &ElemSet) -> ElemSet {
        debug_assert_eq!(self.universe, other.universe);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        ElemSet {
            universe: self.universe,
            words,
        }
    }

    pub fn minus(&self, other: &ElemSet) -> ElemSet {
        debug_assert_eq!(self.universe, other.universe);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & !b)
            .collect();
        ElemSet {
            universe: self.universe,
            words,
        }
    }

    pub fn complement(&self) -> ElemSet {
        ElemSet::full(self.universe).minus(self)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ElemSet) -> bool {
        self.inter(other).is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&x| self.contains(x))
    }

    /// All `2^len` subsets of this set, in a deterministic order.
    /// Only usable when `len` is small; callers cap sizes beforehand.
    pub fn subsets(&self) -> Vec<ElemSet> {
        let members: Vec<usize> = self.iter().collect();
        assert!(members.len() < 31, "subset enumeration over oversized set");
        let mut out = Vec::with_capacity(1 << members.len());
        for mask in 0u32..(1 << members.len()) {
            let mut s = ElemSet::empty(self.universe);
            for (i, &m) in members.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s.insert(m);
                }
            }
            out.push(s);
        }
        out
    }

    /// Re-embed into a larger universe, shifting every element by `offset`.
    pub fn shifted(&self, new_universe: usize, offset: usize) -> ElemSet {
        let mut s = ElemSet::empty(new_universe);
        for x in self.iter() {
            s.insert(x + offset);
        }
        s
    }

    /// Map elements through `f` into a universe of size `new_universe`.
    pub fn mapped(&self, new_universe: usize, f: impl Fn(usize) -> usize) -> ElemSet {
        let mut s = ElemSet::empty(new_universe);
        for x in self.iter() {
            s.insert(f(x));
        }
        s
    }
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.universe, other.universe);
        // little-endian integer comparison: most significant word first
        self.words.iter().rev().cmp(other.words.iter().rev())
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = ElemSet::empty(70);
        a.insert(0);
        a.insert(65);
        assert!(a.contains(65));
        assert_eq!(a.len(), 2);
        let b = ElemSet::from_iter(70, [65, 3]);
        assert_eq!(a.inter(&b), ElemSet::singleton(70, 65));
        assert_eq!(a.union(&b).len(), 3);
        assert!(ElemSet::singleton(70, 0).is_subset(&a));
        assert!(!a.is_subset(&b));
        a.remove(65);
        assert!(!a.contains(65));
    }

    #[test]
    fn subsets_enumerates_all() {
        let s = ElemSet::from_iter(5, [1, 3, 4]);
        let subs = s.subsets();
        assert_eq!(subs.len(), 8);
        for sub in &subs {
            assert!(sub.is_subset(&s));
        }
        // all distinct
        let mut seen = std::collections::HashSet::new();
        for sub in subs {
            assert!(seen.insert(sub));
        }
    }

    #[test]
    fn integer_order() {
        let a = ElemSet::from_iter(130, [129]);
        let b = ElemSet::from_iter(130, [0, 1, 2, 64, 65]);
        assert!(b < a);
    }
}
