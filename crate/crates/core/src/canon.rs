//! Canonical forms and isomorphism for small posets.
//!
//! The canonical key is the lexicographically smallest row-major relation
//! bitstring over all relabelings compatible with an iterated up/down-profile
//! refinement. The refinement is isomorphism-invariant, so two posets get the
//! same key exactly when they are isomorphic; equal keys imply equal relabeled
//! matrices, which is itself an isomorphism witness.

use crate::bitset::ElemSet;
use crate::poset::Poset;

/// Canonical key: carrier size plus packed relation bits of the canonical
/// relabeling.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonKey {
    pub n: usize,
    pub bits: Vec<u64>,
}

/// Stable partition of the carrier into refinement classes; `class[x]` is a
/// dense id, ordered by the class signature.
pub fn refinement_classes(p: &Poset) -> Vec<usize> {
    let n = p.len();
    if n == 0 {
        return Vec::new();
    }
    let mut color: Vec<usize> = vec![0; n];
    loop {
        let mut descs: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::with_capacity(n);
        for x in 0..n {
            let mut below: Vec<usize> = p.below(x).iter().map(|y| color[y]).collect();
            below.sort_unstable();
            let mut above: Vec<usize> = p.above(x).iter().map(|y| color[y]).collect();
            above.sort_unstable();
            descs.push((color[x], below, above));
        }
        let mut sorted = descs.clone();
        sorted.sort();
        sorted.dedup();
        let new_color: Vec<usize> = descs
            .iter()
            .map(|d| sorted.binary_search(d).unwrap())
            .collect();
        if new_color == color {
            return color;
        }
        color = new_color;
    }
}

fn pack_bits(bits: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; bits.len().div_ceil(64).max(1)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            words[i / 64] |= 1 << (i % 64);
        }
    }
    words
}

/// Relation bits of `p` relabeled so that element `x` lands at position
/// `pos[x]`.
fn relabeled_bits(p: &Poset, pos: &[usize]) -> Vec<bool> {
    let n = p.len();
    let mut inv = vec![0usize; n];
    for (x, &px) in pos.iter().enumerate() {
        inv[px] = x;
    }
    let mut bits = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            bits[a * n + b] = p.leq(inv[a], inv[b]);
        }
    }
    bits
}

/// Canonical relabeling: `perm[x]` is the position of element `x` in the
/// canonical order. Ties inside a refinement class are broken by choosing the
/// arrangement with the lexicographically smallest relation bitstring.
pub fn canonical_perm(p: &Poset) -> Vec<usize> {
    let n = p.len();
    if n == 0 {
        return Vec::new();
    }
    let class = refinement_classes(p);
    let n_classes = class.iter().max().unwrap() + 1;
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for x in 0..n {
        blocks[class[x]].push(x);
    }

    let mut best: Option<(Vec<bool>, Vec<usize>)> = None;
    let mut arrangement: Vec<usize> = Vec::with_capacity(n);

    fn rec(
        blocks: &mut [Vec<usize>],
        bi: usize,
        arrangement: &mut Vec<usize>,
        p: &Poset,
        best: &mut Option<(Vec<bool>, Vec<usize>)>,
    ) {
        if bi == blocks.len() {
            let mut pos = vec![0usize; p.len()];
            for (i, &x) in arrangement.iter().enumerate() {
                pos[x] = i;
            }
            let bits = relabeled_bits(p, &pos);
            match best {
                Some((b, _)) if *b <= bits => {}
                _ => *best = Some((bits, pos)),
            }
            return;
        }
        if blocks[bi].is_empty() {
            rec(blocks, bi + 1, arrangement, p, best);
            return;
        }
        for i in 0..blocks[bi].len() {
            let x = blocks[bi].remove(i);
            arrangement.push(x);
            rec(blocks, bi, arrangement, p, best);
            arrangement.pop();
            blocks[bi].insert(i, x);
        }
    }

    rec(&mut blocks, 0, &mut arrangement, p, &mut best);
    best.unwrap().1
}

pub fn canonical_key(p: &Poset) -> CanonKey {
    let perm = canonical_perm(p);
    CanonKey {
        n: p.len(),
        bits: pack_bits(&relabeled_bits(p, &perm)),
    }
}

pub fn is_isomorphic(p: &Poset, q: &Poset) -> bool {
    p.len() == q.len() && canonical_key(p) == canonical_key(q)
}

/// Explicit isomorphism witness `p -> q` found by backtracking, independent
/// of the canonical key machinery. `map[x]` is the image of `x`.
pub fn find_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    if p.len() != q.len() {
        return None;
    }
    let n = p.len();
    if n == 0 {
        return Some(Vec::new());
    }
    // order source elements by most-constrained degree signature
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(p.below(x).len() + p.above(x).len()));

    let mut map = vec![usize::MAX; n];
    let mut used = ElemSet::empty(n);

    fn rec(
        p: &Poset,
        q: &Poset,
        order: &[usize],
        step: usize,
        map: &mut Vec<usize>,
        used: &mut ElemSet,
    ) -> bool {
        if step == order.len() {
            return true;
        }
        let x = order[step];
        'cand: for y in 0..q.len() {
            if used.contains(y)
                || p.below(x).len() != q.below(y).len()
                || p.above(x).len() != q.above(y).len()
            {
                continue;
            }
            for &x2 in &order[..step] {
                let y2 = map[x2];
                if p.leq(x, x2) != q.leq(y, y2) || p.leq(x2, x) != q.leq(y2, y) {
                    continue 'cand;
                }
            }
            map[x] = y;
            used.insert(y);
            if rec(p, q, order, step + 1, map, used) {
                return true;
            }
            used.remove(y);
            map[x] = usize::MAX;
        }
        false
    }

    if rec(p, q, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_selfdual_key() {
        let c2 = Poset::chain(2);
        assert_eq!(canonical_key(&c2), canonical_key(&c2.dual()));
    }

    #[test]
    fn v_not_isomorphic_to_dual() {
        let v = Poset::from_covers(&["a", "b", "c"], &[("a", "b"), ("a", "c")])
            .unwrap()
            .poset;
        assert!(!is_isomorphic(&v, &v.dual()));
        assert!(find_isomorphism(&v, &v.dual()).is_none());
    }

    #[test]
    fn witness_is_an_isomorphism() {
        let p = Poset::chain(2).ordinal_sum(&Poset::chain(2));
        let q = Poset::chain(4);
        let map = find_isomorphism(&p, &q).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(p.leq(x, y), q.leq(map[x], map[y]));
            }
        }
        assert!(is_isomorphic(&p, &q));
    }
}
