//! EV-systems: all triples `(x, D, U)` with `D` inside the strict lower cone
//! of `x` and `U` inside the strict upper cone, under the reflexive,
//! antisymmetric relation `a < b  iff  base(a) ∈ down(b) and base(b) ∈ up(a)`.
//!
//! The relation is not transitive in general, so the strict pairs are stored
//! explicitly and no closure is ever taken. Elements are listed in a fixed
//! canonical order (base, then down-mask, then up-mask as integers) so maps
//! between systems are reproducible.

use crate::bitset::ElemSet;
use crate::error::{Error, Result};
use crate::hom::{fiber_class, Budget, Hom};
use crate::poset::Poset;
use std::collections::HashMap;

pub const DEFAULT_EV_CAP: u64 = 20_000;

/// Triple `(base, down-decoration, up-decoration)` over a poset's carrier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EvElement {
    pub base: u32,
    pub down: ElemSet,
    pub up: ElemSet,
}

impl EvElement {
    /// The defining strict relation on triples.
    pub fn lt(&self, other: &EvElement) -> bool {
        other.down.contains(self.base as usize) && self.up.contains(other.base as usize)
    }

    pub fn le(&self, other: &EvElement) -> bool {
        self == other || self.lt(other)
    }
}

/// The EV-system of a poset: every admissible triple exactly once, plus the
/// explicit strict-pair structure.
pub struct EvSystem {
    source: Poset,
    elems: Vec<EvElement>,
    index: HashMap<EvElement, u32>,
    strict_pairs: Vec<(u32, u32)>,
    /// ups[a] = sorted ids b with a < b; downs[b] = sorted ids a with a < b
    ups: Vec<Vec<u32>>,
    downs: Vec<Vec<u32>>,
}

/// Number of triples `build_ev` would produce, without building them.
pub fn predicted_ev_size(p: &Poset) -> u128 {
    p.elements()
        .map(|x| 1u128 << (p.below(x).len() + p.above(x).len()))
        .sum()
}

/// Build the EV-system of a nonempty poset, refusing predicted sizes over
/// `cap`.
pub fn build_ev(p: &Poset, cap: u64) -> Result<EvSystem> {
    if p.is_empty() {
        return Err(Error::EmptyCarrier);
    }
    let predicted = predicted_ev_size(p);
    if predicted > cap as u128 {
        return Err(Error::EvSizeCapExceeded { predicted, cap });
    }
    let mut elems = Vec::with_capacity(predicted as usize);
    for x in p.elements() {
        for d in p.below(x).subsets() {
            for u in p.above(x).subsets() {
                elems.push(EvElement {
                    base: x as u32,
                    down: d.clone(),
                    up: u,
                });
            }
        }
    }
    elems.sort_unstable();
    let index: HashMap<EvElement, u32> = elems
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i as u32))
        .collect();

    // bucket by base; a strict pair needs base(a) < base(b) in the source
    let mut by_base: Vec<Vec<u32>> = vec![Vec::new(); p.len()];
    for (i, e) in elems.iter().enumerate() {
        by_base[e.base as usize].push(i as u32);
    }
    let mut strict_pairs = Vec::new();
    let mut ups = vec![Vec::new(); elems.len()];
    let mut downs = vec![Vec::new(); elems.len()];
    for x in p.elements() {
        for y in p.above(x).iter() {
            for &a in &by_base[x] {
                if !elems[a as usize].up.contains(y) {
                    continue;
                }
                for &b in &by_base[y] {
                    if elems[b as usize].down.contains(x) {
                        strict_pairs.push((a, b));
                        ups[a as usize].push(b);
                        downs[b as usize].push(a);
                    }
                }
            }
        }
    }
    strict_pairs.sort_unstable();
    for v in ups.iter_mut().chain(downs.iter_mut()) {
        v.sort_unstable();
    }
    Ok(EvSystem {
        source: p.clone(),
        elems,
        index,
        strict_pairs,
        ups,
        downs,
    })
}

impl EvSystem {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn elem(&self, i: usize) -> &EvElement {
        &self.elems[i]
    }

    pub fn elems(&self) -> &[EvElement] {
        &self.elems
    }

    pub fn index_of(&self, e: &EvElement) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn strict_pairs(&self) -> &[(u32, u32)] {
        &self.strict_pairs
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.elems[a].lt(&self.elems[b])
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn ups(&self, a: usize) -> &[u32] {
        &self.ups[a]
    }

    pub fn downs(&self, a: usize) -> &[u32] {
        &self.downs[a]
    }

    /// Longest chain: maximum cardinality of a pairwise-comparable subset.
    /// The relation is not transitive, so this is a clique search over the
    /// comparability graph, not a longest path.
    pub fn height(&self) -> usize {
        let m = self.len();
        let mut comp: Vec<Vec<u32>> = Vec::with_capacity(m);
        for a in 0..m {
            let mut c: Vec<u32> = self.ups[a].iter().chain(&self.downs[a]).copied().collect();
            c.sort_unstable();
            comp.push(c);
        }

        fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
            let mut out = Vec::new();
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        out.push(a[i]);
                        i += 1;
                        j += 1;
                    }
                }
            }
            out
        }

        fn extend(comp: &[Vec<u32>], cands: &[u32], depth: usize, best: &mut usize) {
            *best = (*best).max(depth);
            for (i, &e) in cands.iter().enumerate() {
                if depth + (cands.len() - i) <= *best {
                    break;
                }
                let next = intersect(&cands[i + 1..], &comp[e as usize]);
                extend(comp, &next, depth + 1, best);
            }
        }

        let mut best = 0;
        let all: Vec<u32> = (0..m as u32).collect();
        extend(&comp, &all, 0, &mut best);
        best
    }

    /// `x -> (x, strict lower cone, strict upper cone)`; an embedding: source
    /// elements are related exactly when their images are.
    pub fn point_embedding(&self) -> Vec<u32> {
        self.source
            .elements()
            .map(|x| {
                self.index_of(&EvElement {
                    base: x as u32,
                    down: self.source.below(x),
                    up: self.source.above(x),
                })
                .expect("full-cone triple is always present")
            })
            .collect()
    }

    /// Base projection `a -> base(a)`; strict pairs project to strict pairs.
    pub fn base_projection(&self) -> Vec<u32> {
        self.elems.iter().map(|e| e.base).collect()
    }

    /// Antisymmetry of the stored relation: no two distinct elements strict
    /// in both directions.
    pub fn is_antisymmetric(&self) -> bool {
        self.strict_pairs.iter().all(|&(a, b)| !self.lt(b as usize, a as usize))
    }

    /// Count of ordered strict pairs (a,b), (b,c) with a<b, b<c but not a<c;
    /// recorded as a statistic only, nothing is asserted about it.
    pub fn transitivity_violations(&self) -> u64 {
        let mut n = 0;
        for &(a, b) in &self.strict_pairs {
            for &c in &self.ups[b as usize] {
                if !self.lt(a as usize, c as usize) {
                    n += 1;
                }
            }
        }
        n
    }
}

/// Signature triple of a homomorphism at a point: the image of `x`, and the
/// images of the strict lower/upper cones of the fiber class of `x`. The
/// result is an element of the EV-system of the target.
pub fn ev_signature(p: &Poset, target_len: usize, f: &Hom, x: usize) -> EvElement {
    let g = fiber_class(p, f, x);
    EvElement {
        base: f.0[x],
        down: f.image_of_set(&p.down_strict(&g), target_len),
        up: f.image_of_set(&p.up_strict(&g), target_len),
    }
}

/// Injective map between the element lists of two EV-systems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvMap {
    pub map: Vec<u32>,
}

impl EvMap {
    pub fn identity(n: usize) -> EvMap {
        EvMap {
            map: (0..n as u32).collect(),
        }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i] as usize
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.map.iter().all(|v| seen.insert(*v))
    }

    /// First strict pair whose images are not strict, if any.
    pub fn strictness_violation(&self, dom: &EvSystem, cod: &EvSystem) -> Option<(u32, u32)> {
        dom.strict_pairs()
            .iter()
            .find(|&&(a, b)| !cod.lt(self.apply(a as usize), self.apply(b as usize)))
            .copied()
    }

    pub fn is_strict_hom(&self, dom: &EvSystem, cod: &EvSystem) -> bool {
        self.is_injective() && self.strictness_violation(dom, cod).is_none()
    }

    /// `outer ∘ self`.
    pub fn compose(&self, outer: &EvMap) -> EvMap {
        EvMap {
            map: self.map.iter().map(|&v| outer.map[v as usize]).collect(),
        }
    }
}

/// The strict-homomorphism image of an injective poset homomorphism on the
/// EV level: `(x, D, U) -> (σx, σD, σU)`.
pub fn ev_map_from_injection(
    sigma: &Hom,
    dom: &EvSystem,
    cod: &EvSystem,
) -> Result<EvMap> {
    if !sigma.is_injective() {
        let mut seen: HashMap<u32, usize> = HashMap::new();
        for (x, &v) in sigma.0.iter().enumerate() {
            if let Some(&y) = seen.get(&v) {
                return Err(Error::NotInjective { a: y, b: x });
            }
            seen.insert(v, x);
        }
    }
    if !sigma.is_hom(dom.source(), cod.source()) {
        return Err(Error::SchemeImageNotMonotone);
    }
    let tn = cod.source().len();
    let map = dom
        .elems()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let img = EvElement {
                base: sigma.0[e.base as usize],
                down: e.down.mapped(tn, |x| sigma.apply(x)),
                up: e.up.mapped(tn, |x| sigma.apply(x)),
            };
            cod.index_of(&img).ok_or(Error::EvMapUndefined { index: i })
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(EvMap { map })
}

/// Backtracking search for injective strict homomorphisms `dom -> cod`.
/// Candidates are filtered by degree compatibility and consistency with the
/// partial assignment; elements are assigned most-constrained first. Each
/// complete map is offered to `accept`; the first accepted map is returned.
pub fn find_strict_injection(
    dom: &EvSystem,
    cod: &EvSystem,
    budget: &mut Budget,
    mut accept: impl FnMut(&EvMap) -> bool,
) -> Result<Option<EvMap>> {
    let n = dom.len();
    let m = cod.len();
    if n > m {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| std::cmp::Reverse(dom.ups(a).len() + dom.downs(a).len()));
    let mut pos_in_order = vec![usize::MAX; n];
    for (i, &a) in order.iter().enumerate() {
        pos_in_order[a] = i;
    }

    struct Search<'a, F: FnMut(&EvMap) -> bool> {
        dom: &'a EvSystem,
        cod: &'a EvSystem,
        order: &'a [usize],
        pos: &'a [usize],
        map: Vec<u32>,
        used: Vec<bool>,
        accept: F,
        budget: &'a mut Budget,
    }

    impl<F: FnMut(&EvMap) -> bool> Search<'_, F> {
        fn rec(&mut self, step: usize) -> Result<Option<EvMap>> {
            if step == self.order.len() {
                let cand = EvMap {
                    map: self.map.clone(),
                };
                if (self.accept)(&cand) {
                    return Ok(Some(cand));
                }
                return Ok(None);
            }
            let a = self.order[step];
            'cand: for t in 0..self.cod.len() {
                if self.used[t]
                    || self.cod.ups(t).len() < self.dom.ups(a).len()
                    || self.cod.downs(t).len() < self.dom.downs(a).len()
                {
                    continue;
                }
                for &b in self.dom.ups(a) {
                    if self.pos[b as usize] < step && !self.cod.lt(t, self.map[b as usize] as usize)
                    {
                        continue 'cand;
                    }
                }
                for &b in self.dom.downs(a) {
                    if self.pos[b as usize] < step && !self.cod.lt(self.map[b as usize] as usize, t)
                    {
                        continue 'cand;
                    }
                }
                self.budget.tick()?;
                self.map[a] = t as u32;
                self.used[t] = true;
                if let Some(found) = self.rec(step + 1)? {
                    return Ok(Some(found));
                }
                self.used[t] = false;
                self.map[a] = u32::MAX;
            }
            Ok(None)
        }
    }

    let mut search = Search {
        dom,
        cod,
        order: &order,
        pos: &pos_in_order,
        map: vec![u32::MAX; n],
        used: vec![false; m],
        accept: &mut accept,
        budget,
    };
    search.rec(0)
}

// ---------------------------------------------------------------------------
// structural identities under order arithmetic

/// Outcome of one structural identity check. `Match` carries the witness
/// mapping from the directly-built system into the reconstructed one.
#[derive(Debug)]
pub enum EvIdentityOutcome {
    Match { witness: Vec<u32> },
    Mismatch { detail: String },
    Skipped { predicted: u128 },
}

impl EvIdentityOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, EvIdentityOutcome::Match { .. })
    }
}

/// `E(dual P)` is the dual of `E(P)`, witnessed by `(x, D, U) -> (x, U, D)`.
pub fn check_dual_identity(p: &Poset, cap: u64) -> Result<EvIdentityOutcome> {
    let ev = build_ev(p, cap)?;
    let evd = build_ev(&p.dual(), cap)?;
    if ev.len() != evd.len() {
        return Ok(EvIdentityOutcome::Mismatch {
            detail: format!("sizes differ: {} vs {}", ev.len(), evd.len()),
        });
    }
    let mut witness = Vec::with_capacity(ev.len());
    for e in ev.elems() {
        let img = EvElement {
            base: e.base,
            down: e.up.clone(),
            up: e.down.clone(),
        };
        match evd.index_of(&img) {
            Some(i) => witness.push(i),
            None => {
                return Ok(EvIdentityOutcome::Mismatch {
                    detail: format!("swapped triple of {e:?} missing in dual system"),
                })
            }
        }
    }
    // bijection + edgewise: a < b exactly when witness(b) < witness(a)
    let mut seen = vec![false; witness.len()];
    for &w in &witness {
        if std::mem::replace(&mut seen[w as usize], true) {
            return Ok(EvIdentityOutcome::Mismatch {
                detail: "witness is not a bijection".into(),
            });
        }
    }
    for a in 0..ev.len() {
        for b in 0..ev.len() {
            if ev.lt(a, b) != evd.lt(witness[b] as usize, witness[a] as usize) {
                return Ok(EvIdentityOutcome::Mismatch {
                    detail: format!("edge mismatch at pair ({a},{b})"),
                });
            }
        }
    }
    Ok(EvIdentityOutcome::Match { witness })
}

fn compare_reconstruction(
    built: &EvSystem,
    mut expected: Vec<EvElement>,
) -> EvIdentityOutcome {
    expected.sort_unstable();
    for w in expected.windows(2) {
        if w[0] == w[1] {
            return EvIdentityOutcome::Mismatch {
                detail: format!("reconstruction lists {:?} twice", w[0]),
            };
        }
    }
    if expected.len() != built.len() {
        return EvIdentityOutcome::Mismatch {
            detail: format!(
                "sizes differ: built {} vs reconstructed {}",
                built.len(),
                expected.len()
            ),
        };
    }
    if expected != *built.elems() {
        return EvIdentityOutcome::Mismatch {
            detail: "element lists differ".into(),
        };
    }
    // elementwise identity; the strict relation is determined by the triples
    EvIdentityOutcome::Match {
        witness: (0..built.len() as u32).collect(),
    }
}

/// `E(P + Q)` equals `E(P) + E(Q)` (triples re-embedded side by side).
pub fn check_dirsum_identity(p: &Poset, q: &Poset, cap: u64) -> Result<EvIdentityOutcome> {
    let sum = p.direct_sum(q);
    let built = build_ev(&sum, cap)?;
    let evp = build_ev(p, cap)?;
    let evq = build_ev(q, cap)?;
    let n = sum.len();
    let mut expected = Vec::new();
    for e in evp.elems() {
        expected.push(EvElement {
            base: e.base,
            down: e.down.shifted(n, 0),
            up: e.up.shifted(n, 0),
        });
    }
    for e in evq.elems() {
        expected.push(EvElement {
            base: e.base + p.len() as u32,
            down: e.down.shifted(n, p.len()),
            up: e.up.shifted(n, p.len()),
        });
    }
    Ok(compare_reconstruction(&built, expected))
}

/// `E(P ⊕ Q)` equals the union of down-decorated `E(Q)` triples and
/// up-decorated `E(P)` triples.
pub fn check_ordsum_identity(p: &Poset, q: &Poset, cap: u64) -> Result<EvIdentityOutcome> {
    let sum = p.ordinal_sum(q);
    let evp = build_ev(p, cap)?;
    let evq = build_ev(q, cap)?;
    let predicted = (evp.len() as u128) * (1u128 << q.len())
        + (evq.len() as u128) * (1u128 << p.len());
    if predicted > cap as u128 {
        return Ok(EvIdentityOutcome::Skipped { predicted });
    }
    let built = build_ev(&sum, cap)?;
    let n = sum.len();
    let q_carrier = ElemSet::from_iter(n, p.len()..n);
    let p_carrier = ElemSet::from_iter(n, 0..p.len());
    let mut expected = Vec::new();
    for e in evp.elems() {
        for v in q_carrier.subsets() {
            expected.push(EvElement {
                base: e.base,
                down: e.down.shifted(n, 0),
                up: e.up.shifted(n, 0).union(&v),
            });
        }
    }
    for e in evq.elems() {
        for d in p_carrier.subsets() {
            expected.push(EvElement {
                base: e.base + p.len() as u32,
                down: e.down.shifted(n, p.len()).union(&d),
                up: e.up.shifted(n, p.len()),
            });
        }
    }
    Ok(compare_reconstruction(&built, expected))
}

/// `E(P × Q)` consists of the `((x,y), D, U)` with `D` inside the product of
/// the lower cones minus the point itself, and dually for `U`.
pub fn check_prod_identity(p: &Poset, q: &Poset, cap: u64) -> Result<EvIdentityOutcome> {
    let prod = p.product(q);
    let predicted = predicted_ev_size(&prod);
    if predicted > cap as u128 {
        return Ok(EvIdentityOutcome::Skipped { predicted });
    }
    let built = build_ev(&prod, cap)?;
    let n = prod.len();
    let mut expected = Vec::new();
    for x in p.elements() {
        for y in q.elements() {
            let pt = p.pair_id(q, x, y);
            let mut dset = ElemSet::empty(n);
            for x2 in p.down_row(x).iter() {
                for y2 in q.down_row(y).iter() {
                    dset.insert(p.pair_id(q, x2, y2));
                }
            }
            dset.remove(pt);
            let mut uset = ElemSet::empty(n);
            for x2 in p.up_row(x).iter() {
                for y2 in q.up_row(y).iter() {
                    uset.insert(p.pair_id(q, x2, y2));
                }
            }
            uset.remove(pt);
            for d in dset.subsets() {
                for u in uset.subsets() {
                    expected.push(EvElement {
                        base: pt as u32,
                        down: d.clone(),
                        up: u,
                    });
                }
            }
        }
    }
    Ok(compare_reconstruction(&built, expected))
}

// ---------------------------------------------------------------------------
// ordinal-sum split machinery

/// Check that `p` really is the ordinal sum of its first `left_n` elements
/// and the rest.
pub fn verify_ordinal_split(p: &Poset, left_n: usize) -> Result<()> {
    if left_n == 0 || left_n >= p.len() {
        return Err(Error::NotAnOrdinalSum { split: left_n });
    }
    for x in 0..left_n {
        for y in left_n..p.len() {
            if !p.lt(x, y) {
                return Err(Error::NotAnOrdinalSum { split: left_n });
            }
        }
    }
    Ok(())
}

/// Lower-summand starred subset of `E(left ⊕ right)`: triples with base in
/// the left part whose up-decoration contains the whole right carrier.
pub fn starred_left(ev: &EvSystem, left_n: usize) -> Result<Vec<u32>> {
    verify_ordinal_split(ev.source(), left_n)?;
    let n = ev.source().len();
    let right = ElemSet::from_iter(n, left_n..n);
    Ok(ev
        .elems()
        .iter()
        .enumerate()
        .filter(|(_, e)| (e.base as usize) < left_n && right.is_subset(&e.up))
        .map(|(i, _)| i as u32)
        .collect())
}

/// Upper-summand starred subset: triples with base in the right part whose
/// down-decoration contains the whole left carrier. This is also the starred
/// set used by the dual cancellation theorem.
pub fn starred_right(ev: &EvSystem, left_n: usize) -> Result<Vec<u32>> {
    verify_ordinal_split(ev.source(), left_n)?;
    let n = ev.source().len();
    let left = ElemSet::from_iter(n, 0..left_n);
    Ok(ev
        .elems()
        .iter()
        .enumerate()
        .filter(|(_, e)| (e.base as usize) >= left_n && left.is_subset(&e.down))
        .map(|(i, _)| i as u32)
        .collect())
}

/// Embedding of the standalone `E(right)` into `E(left ⊕ right)`:
/// `(x, D, U) -> (x + |left|, D + |left| ∪ left-carrier, U + |left|)`.
/// Its image is exactly `starred_right`.
pub fn embed_upper(ev_right: &EvSystem, ambient: &EvSystem, left_n: usize) -> Result<EvMap> {
    verify_ordinal_split(ambient.source(), left_n)?;
    let n = ambient.source().len();
    let left = ElemSet::from_iter(n, 0..left_n);
    let map = ev_right
        .elems()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let img = EvElement {
                base: e.base + left_n as u32,
                down: e.down.shifted(n, left_n).union(&left),
                up: e.up.shifted(n, left_n),
            };
            ambient
                .index_of(&img)
                .ok_or(Error::EvMapUndefined { index: i })
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(EvMap { map })
}

/// Strip the left carrier from the down-decoration of an ambient element and
/// re-express it over the upper summand alone. `None` when the element's base
/// is not in the upper part or the stripped triple is not admissible there.
pub fn strip_lower(
    ambient_elem: &EvElement,
    left_n: usize,
    upper: &EvSystem,
) -> Option<u32> {
    if (ambient_elem.base as usize) < left_n {
        return None;
    }
    let rn = upper.source().len();
    let shift_back = |s: &ElemSet| -> Option<ElemSet> {
        let mut out = ElemSet::empty(rn);
        for x in s.iter() {
            if x < left_n {
                return None;
            }
            out.insert(x - left_n);
        }
        Some(out)
    };
    let down = {
        let mut d = ambient_elem.down.clone();
        for x in 0..left_n {
            d.remove(x);
        }
        shift_back(&d)?
    };
    let up = shift_back(&ambient_elem.up)?;
    upper.index_of(&EvElement {
        base: ambient_elem.base - left_n as u32,
        down,
        up,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_of_small_systems() {
        let cap = DEFAULT_EV_CAP;
        assert_eq!(build_ev(&Poset::antichain(2), cap).unwrap().len(), 2);
        let c2 = build_ev(&Poset::chain(2), cap).unwrap();
        assert_eq!(c2.len(), 4);
        assert_eq!(c2.strict_pairs().len(), 1);
        let (a, b) = c2.strict_pairs()[0];
        assert_eq!(c2.elem(a as usize).base, 0);
        assert_eq!(c2.elem(b as usize).base, 1);
        let v = Poset::from_covers(&["a", "b", "c"], &[("a", "b"), ("a", "c")])
            .unwrap()
            .poset;
        assert_eq!(build_ev(&v, cap).unwrap().len(), 8);
    }

    #[test]
    fn cap_refuses_blowup() {
        let p = Poset::chain(2).product(&Poset::chain(2)).product(&Poset::chain(3));
        let predicted = predicted_ev_size(&p);
        let err = build_ev(&p, (predicted - 1) as u64).unwrap_err();
        assert!(matches!(err, Error::EvSizeCapExceeded { .. }));
    }

    #[test]
    fn empty_poset_rejected() {
        let empty = Poset::chain(1).induced(&ElemSet::empty(1));
        assert!(matches!(
            build_ev(&empty, 10),
            Err(Error::EmptyCarrier)
        ));
    }

    #[test]
    fn split_validation() {
        let c2 = Poset::chain(2);
        let sum = c2.direct_sum(&c2);
        let ev = build_ev(&sum, DEFAULT_EV_CAP).unwrap();
        assert!(matches!(
            starred_left(&ev, 2),
            Err(Error::NotAnOrdinalSum { .. })
        ));
        let osum = c2.ordinal_sum(&c2);
        let ev = build_ev(&osum, DEFAULT_EV_CAP).unwrap();
        assert!(starred_left(&ev, 2).is_ok());
        assert!(matches!(
            starred_left(&ev, 0),
            Err(Error::NotAnOrdinalSum { .. })
        ));
    }
}
