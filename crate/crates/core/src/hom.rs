//! Enumeration and counting of (strict) homomorphisms, fibers, fingerprints,
//! and hom-posets.
//!
//! Enumeration backtracks over source elements in a linear-extension order;
//! candidate sets shrink to the intersection of the target (strict) up-sets
//! of already-assigned predecessors. Counting walks the same tree without
//! materializing maps. A node budget turns runaway searches into a hard
//! error; partial counts are never returned.

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::poset::Poset;
use std::collections::BTreeMap;

/// Total map from a source carrier to a target carrier, stored as the image
/// array indexed by source element. Equality and hashing are elementwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Hom(pub Vec<u32>);

impl Hom {
    pub fn constant(source_len: usize, q: usize) -> Hom {
        Hom(vec![q as u32; source_len])
    }

    pub fn identity(n: usize) -> Hom {
        Hom((0..n as u32).collect())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image_set(&self, target_len: usize) -> ElemSet {
        ElemSet::from_iter(target_len, self.0.iter().map(|&v| v as usize))
    }

    pub fn image_of_set(&self, a: &ElemSet, target_len: usize) -> ElemSet {
        ElemSet::from_iter(target_len, a.iter().map(|x| self.apply(x)))
    }

    pub fn is_hom(&self, p: &Poset, q: &Poset) -> bool {
        for x in p.elements() {
            for y in p.above(x).iter() {
                if !q.leq(self.apply(x), self.apply(y)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_strict(&self, p: &Poset, q: &Poset) -> bool {
        for x in p.elements() {
            for y in p.above(x).iter() {
                if !q.lt(self.apply(x), self.apply(y)) {
                    return false;
                }
            }
        }
        self.is_hom(p, q)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.0.iter().all(|v| seen.insert(*v))
    }

    /// `outer ∘ self`.
    pub fn compose(&self, outer: &Hom) -> Hom {
        Hom(self.0.iter().map(|&v| outer.0[v as usize]).collect())
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

/// Node budget for backtracking searches.
#[derive(Clone, Debug)]
pub struct Budget {
    cap: u64,
    used: u64,
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

impl Budget {
    pub fn new(cap: u64) -> Budget {
        Budget { cap, used: 0 }
    }

    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            Err(Error::SearchBudgetExceeded {
                visited: self.used,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_SEARCH_BUDGET)
    }
}

fn walk_homs(
    p: &Poset,
    q: &Poset,
    strict: bool,
    budget: &mut Budget,
    sink: &mut impl FnMut(&[u32]),
) -> Result<()> {
    if p.is_empty() {
        // counting-internal convention: exactly one empty map
        sink(&[]);
        return Ok(());
    }
    if q.is_empty() {
        return Ok(());
    }
    let order = p.linear_extension();
    let mut image = vec![0u32; p.len()];
    let full = q.carrier();

    fn rec(
        p: &Poset,
        q: &Poset,
        strict: bool,
        order: &[usize],
        step: usize,
        image: &mut Vec<u32>,
        full: &ElemSet,
        budget: &mut Budget,
        sink: &mut impl FnMut(&[u32]),
    ) -> Result<()> {
        if step == order.len() {
            sink(image);
            return Ok(());
        }
        let x = order[step];
        let mut cands = full.clone();
        for y in p.below(x).iter() {
            let fy = image[y] as usize;
            cands = if strict {
                cands.inter(&q.above(fy))
            } else {
                cands.inter(q.up_row(fy))
            };
        }
        for t in cands.iter() {
            budget.tick()?;
            image[x] = t as u32;
            rec(p, q, strict, order, step + 1, image, full, budget, sink)?;
        }
        Ok(())
    }

    rec(p, q, strict, &order, 0, &mut image, &full, budget, sink)
}

/// All order-preserving maps `p -> q`, sorted by image array.
pub fn enumerate_homs(p: &Poset, q: &Poset, budget: &mut Budget) -> Result<Vec<Hom>> {
    let mut out = Vec::new();
    walk_homs(p, q, false, budget, &mut |img| out.push(Hom(img.to_vec())))?;
    out.sort_unstable();
    Ok(out)
}

pub fn count_homs(p: &Poset, q: &Poset, budget: &mut Budget) -> Result<u64> {
    let mut n = 0u64;
    walk_homs(p, q, false, budget, &mut |_| n += 1)?;
    Ok(n)
}

/// All strict homomorphisms: `x < y` implies `f(x) < f(y)`.
pub fn enumerate_strict(p: &Poset, q: &Poset, budget: &mut Budget) -> Result<Vec<Hom>> {
    let mut out = Vec::new();
    walk_homs(p, q, true, budget, &mut |img| out.push(Hom(img.to_vec())))?;
    out.sort_unstable();
    Ok(out)
}

pub fn count_strict(p: &Poset, q: &Poset, budget: &mut Budget) -> Result<u64> {
    let mut n = 0u64;
    walk_homs(p, q, true, budget, &mut |_| n += 1)?;
    Ok(n)
}

/// Connectivity class of `x` inside the fiber of `f(x)`: the largest
/// zigzag-connected set through `x` on which `f` is constant.
pub fn fiber_class(p: &Poset, f: &Hom, x: usize) -> ElemSet {
    let fx = f.0[x];
    let fiber = ElemSet::from_iter(p.len(), p.elements().filter(|&y| f.0[y] == fx));
    p.connected_class(&fiber, x)
        .expect("x is in its own fiber")
}

/// Per-element fiber classes of a homomorphism; the key used to group
/// homomorphisms into fingerprint classes.
pub fn fingerprint(p: &Poset, f: &Hom) -> Vec<ElemSet> {
    p.elements().map(|x| fiber_class(p, f, x)).collect()
}

/// A fingerprint class: the shared per-element fiber classes plus the member
/// homomorphisms (as indices into the enumerated hom list).
#[derive(Clone, Debug)]
pub struct FingerprintClass {
    pub fingerprint: Vec<ElemSet>,
    pub members: Vec<usize>,
}

/// Partition of `homs` by fingerprint, deterministically ordered by
/// fingerprint value.
pub fn fingerprint_classes(p: &Poset, homs: &[Hom]) -> Vec<FingerprintClass> {
    let mut groups: BTreeMap<Vec<ElemSet>, Vec<usize>> = BTreeMap::new();
    for (i, h) in homs.iter().enumerate() {
        groups.entry(fingerprint(p, h)).or_default().push(i);
    }
    groups
        .into_iter()
        .map(|(fingerprint, members)| FingerprintClass {
            fingerprint,
            members,
        })
        .collect()
}

/// Members of `candidates` sharing the given fingerprint.
pub fn matching_fingerprint(p: &Poset, candidates: &[Hom], fp: &[ElemSet]) -> Vec<usize> {
    candidates
        .iter()
        .enumerate()
        .filter(|(_, h)| fingerprint(p, h) == fp)
        .map(|(i, _)| i)
        .collect()
}

/// Restriction of `f` to `k`; the result lives on `p.induced(k)`, whose
/// element `i` is the `i`-th member of `k` in ascending id order.
pub fn restrict_hom(f: &Hom, k: &ElemSet) -> Hom {
    Hom(k.iter().map(|x| f.0[x]).collect())
}

/// Union of homomorphisms given on disjoint pieces of a common carrier of
/// size `n`. The pieces must partition the carrier.
pub fn union_homs(n: usize, parts: &[(&ElemSet, &Hom)]) -> Result<Hom> {
    let mut image = vec![u32::MAX; n];
    for (k, f) in parts {
        for (i, x) in k.iter().enumerate() {
            if image[x] != u32::MAX {
                return Err(Error::OverlappingCarriers);
            }
            image[x] = f.0[i];
        }
    }
    if let Some(x) = image.iter().position(|&v| v == u32::MAX) {
        return Err(Error::CarrierNotCovered { element: x });
    }
    Ok(Hom(image))
}

/// The hom-set `H(q, r)` under the pointwise order, together with the
/// enumerated homs in element order.
pub fn hom_poset(q: &Poset, r: &Poset, budget: &mut Budget) -> Result<(Poset, Vec<Hom>)> {
    let homs = enumerate_homs(q, r, budget)?;
    let poset = Poset::from_leq(homs.len(), |i, j| {
        (0..q.len()).all(|x| r.leq(homs[i].apply(x), homs[j].apply(x)))
    })
    .expect("pointwise order is a partial order");
    Ok((poset, homs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_source_counts_one() {
        let empty = Poset::chain(3).induced(&ElemSet::empty(3));
        let c2 = Poset::chain(2);
        let mut b = Budget::default();
        assert_eq!(count_homs(&empty, &c2, &mut b).unwrap(), 1);
        assert_eq!(enumerate_homs(&empty, &c2, &mut b).unwrap(), vec![Hom(vec![])]);
        // nonempty source, empty target: no maps
        assert_eq!(count_homs(&c2, &empty, &mut b).unwrap(), 0);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let a3 = Poset::antichain(3);
        let mut b = Budget::new(5);
        let err = count_homs(&a3, &a3, &mut b).unwrap_err();
        assert!(matches!(err, Error::SearchBudgetExceeded { .. }));
    }

    #[test]
    fn strict_maps_constant_free_on_chains() {
        let mut b = Budget::default();
        assert_eq!(count_strict(&Poset::chain(3), &Poset::chain(2), &mut b).unwrap(), 0);
        assert_eq!(count_strict(&Poset::antichain(2), &Poset::chain(2), &mut b).unwrap(), 4);
    }

    #[test]
    fn union_checks_partition() {
        let k0 = ElemSet::from_iter(3, [0]);
        let k1 = ElemSet::from_iter(3, [1, 2]);
        let f0 = Hom(vec![5]);
        let f1 = Hom(vec![6, 7]);
        let u = union_homs(3, &[(&k0, &f0), (&k1, &f1)]).unwrap();
        assert_eq!(u, Hom(vec![5, 6, 7]));
        let overlap = ElemSet::from_iter(3, [0, 1]);
        assert!(matches!(
            union_homs(3, &[(&k0, &f0), (&overlap, &f1)]),
            Err(Error::OverlappingCarriers)
        ));
        assert!(matches!(
            union_homs(3, &[(&k0, &f0)]),
            Err(Error::CarrierNotCovered { .. })
        ));
    }
}
