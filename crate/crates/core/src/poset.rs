//! Finite posets with dense integer carriers, plus order arithmetic,
//! connectivity, and the subset operators everything downstream consumes.
//!
//! The relation is stored as per-element up/down rows so `leq` is one bit
//! test. Values are immutable after construction; every operation returns a
//! fresh poset. Carriers are `0..n`; labels are presentation only.

use crate::bitset::ElemSet;
use crate::error::{Error, Result};

/// Finite partially ordered set on carrier `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    /// up[x] = { y | x <= y }
    up: Vec<ElemSet>,
    /// down[x] = { y | y <= x }
    down: Vec<ElemSet>,
    labels: Option<Vec<String>>,
}

/// Cover relation input: `(a, b)` means `a` is covered-below `b`.
pub type CoverList = Vec<(usize, usize)>;

/// Result of building from covers; redundant covers are kept as warnings.
pub struct CoverBuild {
    pub poset: Poset,
    /// covers already implied by the transitive closure of the others
    pub redundant: Vec<(usize, usize)>,
}

impl Poset {
    /// Build from an arbitrary `leq` predicate, validating the order axioms.
    pub fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        let mut up = vec![ElemSet::empty(n); n];
        let mut down = vec![ElemSet::empty(n); n];
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    up[x].insert(y);
                    down[y].insert(x);
                }
            }
        }
        let p = Poset {
            n,
            up,
            down,
            labels: None,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        for x in 0..self.n {
            if !self.up[x].contains(x) {
                return Err(Error::NotReflexive { element: x });
            }
            for y in self.up[x].iter() {
                if y != x && self.up[y].contains(x) {
                    return Err(Error::CycleDetected { a: x, b: y });
                }
                if !self.up[y].is_subset(&self.up[x]) {
                    let z = self.up[y].minus(&self.up[x]).iter().next().unwrap();
                    return Err(Error::NotTransitive { a: x, b: y, c: z });
                }
            }
        }
        Ok(())
    }

    /// Singleton poset.
    pub fn singleton() -> Poset {
        Self::from_leq(1, |_, _| true).unwrap()
    }

    /// Chain with `n` elements, `0 < 1 < .. < n-1`.
    pub fn chain(n: usize) -> Poset {
        Self::from_leq(n, |x, y| x <= y).unwrap()
    }

    /// Antichain with `n` elements.
    pub fn antichain(n: usize) -> Poset {
        Self::from_leq(n, |x, y| x == y).unwrap()
    }

    /// Reflexive-transitive closure of a cover list over labelled elements.
    /// Covers implied by the rest are accepted and reported as redundant.
    pub fn from_covers(labels: &[&str], covers: &[(&str, &str)]) -> Result<CoverBuild> {
        if labels.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        let mut index = std::collections::HashMap::new();
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l.to_string(), i).is_some() {
                return Err(Error::DuplicateLabel {
                    label: l.to_string(),
                });
            }
        }
        let mut pairs = Vec::new();
        for &(a, b) in covers {
            let ia = *index.get(a).ok_or_else(|| Error::UnknownLabel {
                label: a.to_string(),
            })?;
            let ib = *index.get(b).ok_or_else(|| Error::UnknownLabel {
                label: b.to_string(),
            })?;
            pairs.push((ia, ib));
        }
        let mut build = Self::from_cover_ids(labels.len(), &pairs)?;
        build.poset.labels = Some(labels.iter().map(|s| s.to_string()).collect());
        Ok(build)
    }

    /// Same as `from_covers`, over raw element ids.
    pub fn from_cover_ids(n: usize, covers: &[(usize, usize)]) -> Result<CoverBuild> {
        if n == 0 {
            return Err(Error::EmptyCarrier);
        }
        for &(a, b) in covers {
            if a >= n || b >= n {
                return Err(Error::UnknownLabel {
                    label: format!("#{}", a.max(b)),
                });
            }
            if a == b {
                return Err(Error::CycleDetected { a, b });
            }
        }
        // Warshall closure over the cover edges.
        let mut reach = vec![ElemSet::empty(n); n];
        for x in 0..n {
            reach[x].insert(x);
        }
        for &(a, b) in covers {
            reach[a].insert(b);
        }
        for k in 0..n {
            for x in 0..n {
                if reach[x].contains(k) {
                    reach[x] = reach[x].union(&reach[k].clone());
                }
            }
        }
        for x in 0..n {
            for y in reach[x].iter() {
                if y != x && reach[y].contains(x) {
                    return Err(Error::CycleDetected { a: x, b: y });
                }
            }
        }
        let poset = Poset {
            n,
            down: {
                let mut down = vec![ElemSet::empty(n); n];
                for x in 0..n {
                    for y in reach[x].iter() {
                        down[y].insert(x);
                    }
                }
                down
            },
            up: reach,
            labels: None,
        };
        // A cover is redundant when it still holds after removal, i.e. there
        // is an intermediate z with a < z < b.
        let mut redundant = Vec::new();
        for &(a, b) in covers {
            let between = poset.up[a].inter(&poset.down[b]);
            if between.len() > 2 {
                redundant.push((a, b));
            }
        }
        redundant.sort_unstable();
        redundant.dedup();
        Ok(CoverBuild { poset, redundant })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// Comparable in either direction.
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(ls) => ls[x].clone(),
            None => format!("x{x}"),
        }
    }

    /// { y | y <= a for some a in A }
    pub fn down_set(&self, a: &ElemSet) -> ElemSet {
        let mut out = ElemSet::empty(self.n);
        for x in a.iter() {
            out = out.union(&self.down[x]);
        }
        out
    }

    /// down-set minus A itself
    pub fn down_strict(&self, a: &ElemSet) -> ElemSet {
        self.down_set(a).minus(a)
    }

    pub fn up_set(&self, a: &ElemSet) -> ElemSet {
        let mut out = ElemSet::empty(self.n);
        for x in a.iter() {
            out = out.union(&self.up[x]);
        }
        out
    }

    pub fn up_strict(&self, a: &ElemSet) -> ElemSet {
        self.up_set(a).minus(a)
    }

    /// `{ y | x <= y }` as a shared row.
    pub fn up_row(&self, x: usize) -> &ElemSet {
        &self.up[x]
    }

    /// `{ y | y <= x }` as a shared row.
    pub fn down_row(&self, x: usize) -> &ElemSet {
        &self.down[x]
    }

    /// Strict lower cone of a single element.
    pub fn below(&self, x: usize) -> ElemSet {
        let mut s = self.down[x].clone();
        s.remove(x);
        s
    }

    /// Strict upper cone of a single element.
    pub fn above(&self, x: usize) -> ElemSet {
        let mut s = self.up[x].clone();
        s.remove(x);
        s
    }

    /// Cover pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.above(a).iter() {
                if self.above(a).inter(&self.below(b)).is_empty() {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Same carrier, reversed relation.
    pub fn dual(&self) -> Poset {
        Poset {
            n: self.n,
            up: self.down.clone(),
            down: self.up.clone(),
            labels: self.labels.clone(),
        }
    }

    /// Disjoint union, no relation between the parts. `self` keeps its ids,
    /// `other` is shifted by `self.len()`.
    pub fn direct_sum(&self, other: &Poset) -> Poset {
        self.sum_impl(other, false)
    }

    /// Disjoint union with every element of `self` below every element of
    /// `other`. Same id layout as `direct_sum`.
    pub fn ordinal_sum(&self, other: &Poset) -> Poset {
        self.sum_impl(other, true)
    }

    fn sum_impl(&self, other: &Poset, cross: bool) -> Poset {
        let n = self.n + other.n;
        let mut up = Vec::with_capacity(n);
        let mut down = Vec::with_capacity(n);
        for x in 0..self.n {
            let mut u = self.up[x].shifted(n, 0);
            if cross {
                for y in 0..other.n {
                    u.insert(self.n + y);
                }
            }
            up.push(u);
            down.push(self.down[x].shifted(n, 0));
        }
        for y in 0..other.n {
            up.push(other.up[y].shifted(n, self.n));
            let mut d = other.down[y].shifted(n, self.n);
            if cross {
                for x in 0..self.n {
                    d.insert(x);
                }
            }
            down.push(d);
        }
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => {
                let mut ls = a.clone();
                ls.extend(b.iter().cloned());
                Some(ls)
            }
            _ => None,
        };
        Poset {
            n,
            up,
            down,
            labels,
        }
    }

    /// Componentwise order on pairs; pair `(x, y)` has id `x * |other| + y`.
    pub fn product(&self, other: &Poset) -> Poset {
        let n = self.n * other.n;
        let m = other.n;
        let mut up = vec![ElemSet::empty(n); n];
        let mut down = vec![ElemSet::empty(n); n];
        for x1 in 0..self.n {
            for y1 in 0..other.n {
                let a = x1 * m + y1;
                for x2 in self.up[x1].iter() {
                    for y2 in other.up[y1].iter() {
                        let b = x2 * m + y2;
                        up[a].insert(b);
                        down[b].insert(a);
                    }
                }
            }
        }
        Poset {
            n,
            up,
            down,
            labels: None,
        }
    }

    /// Index of pair `(x, y)` in `self.product(other)`.
    pub fn pair_id(&self, other: &Poset, x: usize, y: usize) -> usize {
        debug_assert!(x < self.n && y < other.n);
        x * other.n + y
    }

    /// Direct sum of `k` disjoint copies.
    pub fn disjoint_copies(&self, k: usize) -> Poset {
        assert!(k >= 1);
        let mut out = self.clone();
        for _ in 1..k {
            out = out.direct_sum(self);
        }
        out
    }

    /// Order restricted to `a`; element `i` of the result is the `i`-th
    /// member of `a` in ascending id order. Empty subsets are allowed here
    /// (counting contexts need them); scheme-facing entry points reject them.
    pub fn induced(&self, a: &ElemSet) -> Poset {
        let members: Vec<usize> = a.iter().collect();
        let n = members.len();
        let mut up = vec![ElemSet::empty(n); n];
        let mut down = vec![ElemSet::empty(n); n];
        for (i, &x) in members.iter().enumerate() {
            for (j, &y) in members.iter().enumerate() {
                if self.leq(x, y) {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|ls| members.iter().map(|&x| ls[x].clone()).collect());
        Poset {
            n,
            up,
            down,
            labels,
        }
    }

    /// Maximum cardinality of a chain.
    pub fn height(&self) -> usize {
        let order = self.linear_extension();
        let mut h = vec![0usize; self.n];
        let mut best = 0;
        for &x in &order {
            let mut hx = 1;
            for y in self.below(x).iter() {
                hx = hx.max(h[y] + 1);
            }
            h[x] = hx;
            best = best.max(hx);
        }
        best
    }

    /// Deterministic linear extension (smallest id first among minimal).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut placed = ElemSet::empty(self.n);
        let mut out = Vec::with_capacity(self.n);
        while out.len() < self.n {
            for x in 0..self.n {
                if !placed.contains(x) && self.below(x).is_subset(&placed) {
                    placed.insert(x);
                    out.push(x);
                }
            }
        }
        out
    }

    /// Zigzag-connectivity class of `x` inside `A`: everything reachable from
    /// `x` by alternating strict comparabilities that stay in `A`.
    pub fn connected_class(&self, a: &ElemSet, x: usize) -> Result<ElemSet> {
        if !a.contains(x) {
            return Err(Error::ElementNotInSet { element: x });
        }
        let mut seen = ElemSet::singleton(self.n, x);
        let mut stack = vec![x];
        while let Some(y) = stack.pop() {
            for z in a.iter() {
                if !seen.contains(z) && self.comparable(y, z) {
                    seen.insert(z);
                    stack.push(z);
                }
            }
        }
        Ok(seen)
    }

    /// Union of the classes of all members of `b` inside `a`.
    pub fn connected_class_of_set(&self, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
        let mut out = ElemSet::empty(self.n);
        for x in b.iter() {
            out = out.union(&self.connected_class(a, x)?);
        }
        Ok(out)
    }

    /// Connectivity components, as a partition of the carrier. Blocks are
    /// ordered by their smallest element.
    pub fn components(&self) -> Vec<ElemSet> {
        let mut out = Vec::new();
        let mut seen = ElemSet::empty(self.n);
        let full = self.carrier();
        for x in 0..self.n {
            if !seen.contains(x) {
                let block = self.connected_class(&full, x).unwrap();
                seen = seen.union(&block);
                out.push(block);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n >= 1 && self.components().len() == 1
    }

    /// All subsets `U` with `U = up_set(U)`, including the empty set and the
    /// full carrier, in ascending integer order.
    pub fn upsets(&self) -> Vec<ElemSet> {
        assert!(
            self.n < 28,
            "upset enumeration over oversized carrier ({} elements)",
            self.n
        );
        let mut out = Vec::new();
        'next: for mask in 0u32..(1u32 << self.n) {
            let mut s = ElemSet::empty(self.n);
            for x in 0..self.n {
                if mask & (1 << x) != 0 {
                    s.insert(x);
                }
            }
            for x in s.iter() {
                if !self.up[x].is_subset(&s) {
                    continue 'next;
                }
            }
            out.push(s);
        }
        out
    }

    /// Row-major relation bits, used by canonical keys and the cache format.
    pub fn relation_bits(&self) -> Vec<bool> {
        let mut bits = Vec::with_capacity(self.n * self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                bits.push(self.leq(x, y));
            }
        }
        bits
    }

    /// Relabel elements: element `x` becomes `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> Poset {
        assert_eq!(perm.len(), self.n);
        Poset::from_leq(self.n, |x, y| {
            let ix = perm.iter().position(|&p| p == x).unwrap();
            let iy = perm.iter().position(|&p| p == y).unwrap();
            self.leq(ix, iy)
        })
        .expect("permutation preserves order axioms")
    }
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset(n={}", self.n)?;
        let covers = self.covers();
        if !covers.is_empty() {
            write!(f, ", covers:")?;
            for (a, b) in covers {
                write!(f, " {}<{}", self.label(a), self.label(b))?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_covers_builds_chain() {
        let b = Poset::from_covers(&["a", "b"], &[("a", "b")]).unwrap();
        assert!(b.redundant.is_empty());
        assert!(b.poset.leq(0, 1));
        assert!(!b.poset.leq(1, 0));
    }

    #[test]
    fn redundant_cover_accepted_with_warning() {
        let b = Poset::from_covers(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")])
            .unwrap();
        assert_eq!(b.redundant, vec![(0, 2)]);
        assert_eq!(b.poset.height(), 3);
    }

    #[test]
    fn cycle_detected() {
        let err = Poset::from_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::CycleDetected { .. }));
    }

    #[test]
    fn unknown_label_and_duplicate() {
        assert!(matches!(
            Poset::from_covers(&["a"], &[("a", "z")]),
            Err(Error::UnknownLabel { .. })
        ));
        assert!(matches!(
            Poset::from_covers(&["a", "a"], &[]),
            Err(Error::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn empty_carrier_rejected() {
        assert!(matches!(
            Poset::from_covers(&[], &[]),
            Err(Error::EmptyCarrier)
        ));
    }

    #[test]
    fn strict_cones() {
        let v = Poset::from_covers(&["a", "b", "c"], &[("a", "b"), ("a", "c")])
            .unwrap()
            .poset;
        assert_eq!(v.below(1), ElemSet::singleton(3, 0));
        assert_eq!(v.above(0), ElemSet::from_iter(3, [1, 2]));
        let tops = ElemSet::from_iter(3, [1, 2]);
        assert_eq!(v.down_set(&tops), ElemSet::full(3));
        assert_eq!(v.down_strict(&tops), ElemSet::singleton(3, 0));
        assert!(v.up_strict(&tops).is_empty());
    }

    #[test]
    fn connected_class_requires_membership() {
        let c2 = Poset::chain(2);
        let err = c2
            .connected_class(&ElemSet::singleton(2, 0), 1)
            .unwrap_err();
        assert!(matches!(err, Error::ElementNotInSet { .. }));
    }
}
