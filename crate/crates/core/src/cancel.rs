//! Cancellation pipelines: the set-theoretic iteration lemmas and the three
//! families of cancellation arguments (direct sum, ordinal sum, product).
//!
//! Each pipeline executes a proof construction on concrete data and checks
//! every intermediate fact the proof claims. A failed intermediate fact is
//! reported as `AssertionFailed`, never silently repaired.

use crate::bitset::ElemSet;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::ev::{
    build_ev, embed_upper, ev_signature, starred_left, starred_right, strip_lower, EvMap,
    EvSystem,
};
use crate::hom::{
    count_strict, enumerate_homs, enumerate_strict, fingerprint, matching_fingerprint, Budget,
    Hom,
};
use crate::poset::Poset;
use crate::report::{Verdict, Witness};
use crate::scheme::SchemeTable;
use std::collections::{HashMap, HashSet};

/// One run of a terminating iteration. `steps` are the successive iterates;
/// the final entry is the terminal value, so the terminal index is
/// `steps.len()` (always >= 1).
#[derive(Clone, Debug)]
pub struct IterationTrace {
    pub start: usize,
    pub steps: Vec<usize>,
}

impl IterationTrace {
    pub fn terminal_index(&self) -> usize {
        self.steps.len()
    }

    pub fn terminal(&self) -> usize {
        *self.steps.last().expect("trace has at least one step")
    }
}

/// Injective map `f : A ∪ B -> A ∪ C` in a dense coding: domain ids are
/// `0..a_len` for A then `a_len..a_len+b_len` for B; codomain ids are
/// `0..a_len` for A then `a_len..a_len+c_len` for C.
#[derive(Clone, Debug)]
pub struct InjectiveUnion {
    pub a_len: usize,
    pub b_len: usize,
    pub c_len: usize,
    pub map: Vec<usize>,
}

impl InjectiveUnion {
    pub fn new(a_len: usize, b_len: usize, c_len: usize, map: Vec<usize>) -> Result<Self> {
        assert_eq!(map.len(), a_len + b_len);
        let mut seen = vec![usize::MAX; a_len + c_len];
        for (x, &v) in map.iter().enumerate() {
            assert!(v < a_len + c_len, "image out of range");
            if seen[v] != usize::MAX {
                return Err(Error::NotInjective { a: seen[v], b: x });
            }
            seen[v] = x;
        }
        Ok(InjectiveUnion {
            a_len,
            b_len,
            c_len,
            map,
        })
    }

    /// Build from explicit value sets; the three sets must be disjoint and
    /// `f` must cover `A ∪ B`.
    pub fn from_values(
        a: &[u64],
        b: &[u64],
        c: &[u64],
        f: &HashMap<u64, u64>,
    ) -> Result<Self> {
        let mut all = HashSet::new();
        for v in a.iter().chain(b).chain(c) {
            if !all.insert(*v) {
                return Err(Error::DisjointnessViolated);
            }
        }
        let dom_pos: HashMap<u64, usize> = a
            .iter()
            .chain(b)
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let cod_pos: HashMap<u64, usize> = a
            .iter()
            .chain(c)
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut map = Vec::with_capacity(a.len() + b.len());
        for v in a.iter().chain(b) {
            let img = f.get(v).ok_or(Error::CarrierNotCovered {
                element: dom_pos[v],
            })?;
            let pos = cod_pos.get(img).ok_or(Error::UnknownLabel {
                label: format!("image value {img}"),
            })?;
            map.push(*pos);
        }
        Self::new(a.len(), b.len(), c.len(), map)
    }

    /// Iterate from the `b`-th element of B until the orbit leaves A.
    /// Injectivity guarantees termination within `a_len + 1` steps.
    pub fn iterate_from(&self, b: usize) -> IterationTrace {
        assert!(b < self.b_len);
        let start = self.a_len + b;
        let mut steps = Vec::new();
        let mut v = self.map[start];
        steps.push(v);
        while v < self.a_len {
            v = self.map[v];
            steps.push(v);
            assert!(
                steps.len() <= self.a_len + 1,
                "injective iteration exceeded the pigeonhole bound"
            );
        }
        IterationTrace { start, steps }
    }

    /// The induced injection `B -> C` (as C-local indices), with all traces.
    pub fn induced_map(&self) -> (Vec<usize>, Vec<IterationTrace>) {
        let mut traces = Vec::with_capacity(self.b_len);
        let mut out = Vec::with_capacity(self.b_len);
        for b in 0..self.b_len {
            let tr = self.iterate_from(b);
            out.push(tr.terminal() - self.a_len);
            traces.push(tr);
        }
        let mut seen = HashSet::new();
        for &c in &out {
            assert!(seen.insert(c), "induced map must be injective");
        }
        (out, traces)
    }
}

/// Public entry matching the single-trace contract.
pub fn iterate_injection(f: &InjectiveUnion, b: usize) -> IterationTrace {
    f.iterate_from(b)
}

// ---------------------------------------------------------------------------
// direct-sum cancellation

pub struct DirsumCancel {
    /// the induced injection between the standalone EV-systems of R and S
    pub map: EvMap,
    pub traces: Vec<IterationTrace>,
}

fn shift_triple(e: &crate::ev::EvElement, new_universe: usize, offset: usize) -> crate::ev::EvElement {
    crate::ev::EvElement {
        base: e.base + offset as u32,
        down: e.down.shifted(new_universe, offset),
        up: e.up.shifted(new_universe, offset),
    }
}

/// Drive an EV-level injection `E(Q+R) -> E(Q+S)` into an injection
/// `E(R) -> E(S)` by iterating it out of the shared `E(Q)` block, checking
/// every step: equal terminal depths on strict pairs, strictness of the
/// result, and the signature identity over the validation catalog.
pub fn dirsum_cancel(
    q: &Poset,
    r: &Poset,
    s: &Poset,
    eps: &EvMap,
    members: &[Poset],
    caps: &Caps,
) -> Result<DirsumCancel> {
    let sum_r = q.direct_sum(r);
    let sum_s = q.direct_sum(s);
    let ev_sum_r = build_ev(&sum_r, caps.ev_cap)?;
    let ev_sum_s = build_ev(&sum_s, caps.ev_cap)?;
    let ev_r = build_ev(r, caps.ev_cap)?;
    let ev_s = build_ev(s, caps.ev_cap)?;
    if !eps.is_injective() {
        return Err(Error::NotInjective { a: 0, b: 0 });
    }
    if let Some((a, b)) = eps.strictness_violation(&ev_sum_r, &ev_sum_s) {
        return Err(Error::NotStrictEvHom {
            a: a as usize,
            b: b as usize,
        });
    }

    let qn = q.len();
    // the shared E(Q) block: identical triples on both sides
    let a_dom: Vec<usize> = (0..ev_sum_r.len())
        .filter(|&i| (ev_sum_r.elem(i).base as usize) < qn)
        .collect();
    let b_dom: Vec<usize> = (0..ev_sum_r.len())
        .filter(|&i| (ev_sum_r.elem(i).base as usize) >= qn)
        .collect();
    let c_cod: Vec<usize> = (0..ev_sum_s.len())
        .filter(|&i| (ev_sum_s.elem(i).base as usize) >= qn)
        .collect();
    let cod_a_to_dom_a: HashMap<usize, usize> = (0..ev_sum_s.len())
        .filter(|&i| (ev_sum_s.elem(i).base as usize) < qn)
        .map(|i| {
            let e = ev_sum_s.elem(i);
            let in_dom = crate::ev::EvElement {
                base: e.base,
                down: e.down.mapped(sum_r.len(), |x| x),
                up: e.up.mapped(sum_r.len(), |x| x),
            };
            (
                i,
                ev_sum_r
                    .index_of(&in_dom)
                    .expect("shared block triples coincide") as usize,
            )
        })
        .collect();
    let dom_a_pos: HashMap<usize, usize> =
        a_dom.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let c_pos: HashMap<usize, usize> = c_cod.iter().enumerate().map(|(p, &i)| (i, p)).collect();

    let coded_map: Vec<usize> = a_dom
        .iter()
        .chain(&b_dom)
        .map(|&i| {
            let img = eps.apply(i);
            match cod_a_to_dom_a.get(&img) {
                Some(&dom_a) => dom_a_pos[&dom_a],
                None => a_dom.len() + c_pos[&img],
            }
        })
        .collect();
    let coded = InjectiveUnion::new(a_dom.len(), b_dom.len(), c_cod.len(), coded_map)?;
    let (induced, traces) = coded.induced_map();

    // translate to the standalone systems
    let mut map = vec![u32::MAX; ev_r.len()];
    for (bpos, &amb) in b_dom.iter().enumerate() {
        let e = ev_sum_r.elem(amb);
        let standalone = crate::ev::EvElement {
            base: e.base - qn as u32,
            down: e.down.mapped(r.len(), |x| x - qn),
            up: e.up.mapped(r.len(), |x| x - qn),
        };
        let ri = ev_r
            .index_of(&standalone)
            .expect("upper block triples restrict to E(R)") as usize;
        let terminal_amb = c_cod[induced[bpos]];
        let te = ev_sum_s.elem(terminal_amb);
        let t_standalone = crate::ev::EvElement {
            base: te.base - qn as u32,
            down: te.down.mapped(s.len(), |x| x - qn),
            up: te.up.mapped(s.len(), |x| x - qn),
        };
        map[ri] = ev_s
            .index_of(&t_standalone)
            .expect("terminal triples restrict to E(S)");
    }
    let result = EvMap { map };
    if !result.is_injective() {
        return Err(Error::AssertionFailed {
            detail: "induced EV map is not injective".into(),
        });
    }

    // strict pairs must reach their terminals at equal depth and stay strict
    let amb_to_bpos: HashMap<usize, usize> =
        b_dom.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    for &(a, b) in ev_sum_r.strict_pairs() {
        let (a, b) = (a as usize, b as usize);
        if let (Some(&pa), Some(&pb)) = (amb_to_bpos.get(&a), amb_to_bpos.get(&b)) {
            let (na, nb) = (
                traces[pa].terminal_index(),
                traces[pb].terminal_index(),
            );
            if na != nb {
                return Err(Error::AssertionFailed {
                    detail: format!("related elements reach terminals at depths {na} vs {nb}"),
                });
            }
            let (ta, tb) = (c_cod[induced[pa]], c_cod[induced[pb]]);
            if !ev_sum_s.lt(ta, tb) {
                return Err(Error::AssertionFailed {
                    detail: "strict pair lost under the induced map".into(),
                });
            }
        }
    }
    if let Some((a, b)) = result.strictness_violation(&ev_r, &ev_s) {
        return Err(Error::NotStrictEvHom {
            a: a as usize,
            b: b as usize,
        });
    }
    let mut budget = Budget::new(caps.search_budget);
    if let Some(w) = crate::scheme::validate_ev_map(&result, &ev_r, &ev_s, members, &mut budget)? {
        return Err(Error::AssertionFailed {
            detail: format!("induced map fails the signature identity: {w:?}"),
        });
    }
    Ok(DirsumCancel {
        map: result,
        traces,
    })
}

// ---------------------------------------------------------------------------
// ordinal-sum cancellation

/// All systems of one ordinal-sum cancellation instance.
pub struct OrdsumCancel {
    pub q: Poset,
    pub r: Poset,
    pub s: Poset,
    pub sum_r: Poset,
    pub sum_s: Poset,
    pub ev_sum_r: EvSystem,
    pub ev_sum_s: EvSystem,
    pub ev_r: EvSystem,
    pub ev_s: EvSystem,
    embed: EvMap,
}

impl OrdsumCancel {
    pub fn new(q: &Poset, r: &Poset, s: &Poset, caps: &Caps) -> Result<OrdsumCancel> {
        let sum_r = q.ordinal_sum(r);
        let sum_s = q.ordinal_sum(s);
        let ev_sum_r = build_ev(&sum_r, caps.ev_cap)?;
        let ev_sum_s = build_ev(&sum_s, caps.ev_cap)?;
        let ev_r = build_ev(r, caps.ev_cap)?;
        let ev_s = build_ev(s, caps.ev_cap)?;
        let embed = embed_upper(&ev_r, &ev_sum_r, q.len())?;
        Ok(OrdsumCancel {
            q: q.clone(),
            r: r.clone(),
            s: s.clone(),
            sum_r,
            sum_s,
            ev_sum_r,
            ev_sum_s,
            ev_r,
            ev_s,
            embed,
        })
    }

    /// The premise: every element of Q's carrier occurs as the base of the
    /// image of some lower-starred element.
    pub fn premise_holds(&self, eps: &EvMap) -> Result<bool> {
        let starred = starred_left(&self.ev_sum_r, self.q.len())?;
        let bases: ElemSet = ElemSet::from_iter(
            self.sum_s.len(),
            starred
                .iter()
                .map(|&i| self.ev_sum_s.elem(eps.apply(i as usize)).base as usize),
        );
        Ok((0..self.q.len()).all(|y| bases.contains(y)))
    }

    /// Under the premise the image of the upper-starred subset stays inside
    /// the upper-starred subset of the target system.
    pub fn starred_image_contained(&self, eps: &EvMap) -> Result<Option<String>> {
        let starred_r = starred_right(&self.ev_sum_r, self.q.len())?;
        let starred_s: HashSet<u32> =
            starred_right(&self.ev_sum_s, self.q.len())?.into_iter().collect();
        for &i in &starred_r {
            let img = eps.apply(i as usize) as u32;
            if !starred_s.contains(&img) {
                return Ok(Some(format!(
                    "starred element #{i} maps to non-starred #{img}"
                )));
            }
        }
        Ok(None)
    }

    /// `T = strip ∘ eps ∘ embed : E(R) -> E(S)`; requires the premise, checks
    /// injectivity and strictness.
    pub fn transfer(&self, eps: &EvMap) -> Result<EvMap> {
        if !self.premise_holds(eps)? {
            return Err(Error::PremiseFailed);
        }
        if let Some(detail) = self.starred_image_contained(eps)? {
            return Err(Error::AssertionFailed { detail });
        }
        let map = self
            .embed
            .map
            .iter()
            .enumerate()
            .map(|(i, &amb)| {
                let img = self.ev_sum_s.elem(eps.apply(amb as usize));
                strip_lower(img, self.q.len(), &self.ev_s)
                    .ok_or(Error::EvMapUndefined { index: i })
            })
            .collect::<Result<Vec<u32>>>()?;
        let t = EvMap { map };
        if !t.is_injective() {
            return Err(Error::AssertionFailed {
                detail: "transfer map is not injective".into(),
            });
        }
        if let Some((a, b)) = t.strictness_violation(&self.ev_r, &self.ev_s) {
            return Err(Error::NotStrictEvHom {
                a: a as usize,
                b: b as usize,
            });
        }
        Ok(t)
    }

    /// Componentwise description of the mapped embedded signatures: the
    /// down-decoration is the base-images of the strict lower cone of the
    /// fiber class plus the whole Q carrier (disjointly), the up-decoration
    /// the base-images of the strict upper cone. Checked for every catalog
    /// instance; returns a failure description if any instance disagrees.
    pub fn component_equations(
        &self,
        eps: &EvMap,
        members: &[Poset],
        budget: &mut Budget,
    ) -> Result<Option<String>> {
        let qn = self.q.len();
        let rn = self.r.len();
        let image_of = |sig: &crate::ev::EvElement| -> u32 {
            let i = self.ev_r.index_of(sig).expect("signature in E(R)");
            let amb = self.embed.apply(i as usize);
            eps.apply(amb) as u32
        };
        for p in members {
            for f in enumerate_homs(p, &self.r, budget)? {
                for x in p.elements() {
                    let g = crate::hom::fiber_class(p, &f, x);
                    let sig = ev_signature(p, rn, &f, x);
                    let mapped = self.ev_sum_s.elem(image_of(&sig) as usize);
                    let base_at = |y: usize| -> usize {
                        let sig_y = ev_signature(p, rn, &f, y);
                        self.ev_sum_s.elem(image_of(&sig_y) as usize).base as usize
                    };
                    let down_bases = ElemSet::from_iter(
                        self.sum_s.len(),
                        p.down_strict(&g).iter().map(base_at),
                    );
                    let y_carrier = ElemSet::from_iter(self.sum_s.len(), 0..qn);
                    if !down_bases.is_disjoint(&y_carrier) {
                        return Ok(Some(format!(
                            "down bases meet the Q carrier at {:?}, x={}",
                            p, x
                        )));
                    }
                    if mapped.down != down_bases.union(&y_carrier) {
                        return Ok(Some(format!(
                            "down-decoration mismatch on {:?}, hom {:?}, x={}",
                            p, f.0, x
                        )));
                    }
                    let up_bases = ElemSet::from_iter(
                        self.sum_s.len(),
                        p.up_strict(&g).iter().map(base_at),
                    );
                    if mapped.up != up_bases {
                        return Ok(Some(format!(
                            "up-decoration mismatch on {:?}, hom {:?}, x={}",
                            p, f.0, x
                        )));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// The counting argument for ordinal-sum cancellation at finite exponent:
/// push products of a strict self-map of Q with fingerprint-class tuples
/// through the scheme and compare the factored counts.
pub fn ordsum_counting(
    t: &SchemeTable,
    q: &Poset,
    r: &Poset,
    s: &Poset,
    base_posets: &[Poset],
    k_max: usize,
    budget: &mut Budget,
) -> Result<Verdict> {
    let sum_s = q.ordinal_sum(s);
    let qn = q.len();
    let strict_qq = enumerate_strict(q, q, budget)?;
    let strict_q_sum_s = count_strict(q, &sum_s, budget)?;
    // one maximal chain of Q, for the chain-image assertion
    let max_chain = {
        let mut best: Vec<usize> = Vec::new();
        let order = q.linear_extension();
        let mut chain_to: Vec<Vec<usize>> = vec![Vec::new(); qn];
        for &x in &order {
            let mut cur: Vec<usize> = Vec::new();
            for y in q.below(x).iter() {
                if chain_to[y].len() > cur.len() {
                    cur = chain_to[y].clone();
                }
            }
            cur.push(x);
            if cur.len() > best.len() {
                best = cur.clone();
            }
            chain_to[x] = cur;
        }
        best
    };

    for p in base_posets {
        let homs_r = enumerate_homs(p, r, budget)?;
        let homs_s = enumerate_homs(p, s, budget)?;
        for xi in &homs_r {
            let fp = fingerprint(p, xi);
            let gamma_r: Vec<&Hom> = matching_fingerprint(p, &homs_r, &fp)
                .into_iter()
                .map(|i| &homs_r[i])
                .collect();
            let gamma_s_count = matching_fingerprint(p, &homs_s, &fp).len() as u64;
            let gamma_s_set: HashSet<Vec<u32>> = matching_fingerprint(p, &homs_s, &fp)
                .into_iter()
                .map(|i| homs_s[i].0.clone())
                .collect();
            for k in 1..=k_max {
                let psum = q.ordinal_sum(&p.disjoint_copies(k));
                let m_k = (strict_qq.len() as u64) * (gamma_r.len() as u64).pow(k as u32);
                let mut images: HashSet<Vec<u32>> = HashSet::new();
                let mut tuple = vec![0usize; k];
                loop {
                    for zeta in &strict_qq {
                        budget.tick()?;
                        let mut im = Vec::with_capacity(psum.len());
                        im.extend(zeta.0.iter().copied());
                        for &ti in &tuple {
                            im.extend(gamma_r[ti].0.iter().map(|&v| v + qn as u32));
                        }
                        let theta = Hom(im);
                        debug_assert!(theta.is_hom(&psum, &t.source));
                        let img = t.apply(&psum, &theta)?;
                        // restriction to Q stays strict
                        for y1 in q.elements() {
                            for y2 in q.above(y1).iter() {
                                if !sum_s.lt(img.apply(y1), img.apply(y2)) {
                                    return Err(Error::AssertionFailed {
                                        detail: format!(
                                            "image not strict on Q at {:?}, k={k}",
                                            p
                                        ),
                                    });
                                }
                            }
                        }
                        // maximal chain of Q keeps strictly increasing images
                        for w in max_chain.windows(2) {
                            if !sum_s.lt(img.apply(w[0]), img.apply(w[1])) {
                                return Err(Error::AssertionFailed {
                                    detail: "maximal chain image not strictly increasing".into(),
                                });
                            }
                        }
                        // the copies land in S and keep the fingerprint
                        for copy in 0..k {
                            let mut part = Vec::with_capacity(p.len());
                            for x in p.elements() {
                                let v = img.apply(qn + copy * p.len() + x);
                                if v < qn {
                                    return Err(Error::AssertionFailed {
                                        detail: format!(
                                            "copy {copy} image leaves S on {:?}, k={k}",
                                            p
                                        ),
                                    });
                                }
                                part.push((v - qn) as u32);
                            }
                            if !gamma_s_set.contains(&part) {
                                return Err(Error::AssertionFailed {
                                    detail: format!(
                                        "copy {copy} image leaves the fingerprint class on {:?}",
                                        p
                                    ),
                                });
                            }
                        }
                        images.insert(img.0);
                    }
                    // advance the tuple of fingerprint-class members
                    let mut pos = 0;
                    while pos < k {
                        tuple[pos] += 1;
                        if tuple[pos] < gamma_r.len() {
                            break;
                        }
                        tuple[pos] = 0;
                        pos += 1;
                    }
                    if pos == k {
                        break;
                    }
                }
                if images.len() as u64 != m_k {
                    return Err(Error::AssertionFailed {
                        detail: format!(
                            "pushed family has {} members, expected {m_k}",
                            images.len()
                        ),
                    });
                }
                let rhs = strict_q_sum_s * gamma_s_count.pow(k as u32);
                if m_k > rhs {
                    return Ok(Verdict::Refuted {
                        witness: Witness::Structural {
                            instance: format!("P={:?}, hom {:?}, k={k}", p, xi.0),
                            detail: format!("counting inequality fails: {m_k} > {rhs}"),
                        },
                    });
                }
            }
        }
    }
    Ok(Verdict::Holds {
        bound: format!(
            "{} base posets, exponents up to {k_max}",
            base_posets.len()
        ),
    })
}

// ---------------------------------------------------------------------------
// product cancellation

/// Finite data for the product-cycle iteration: `f : A × B -> C`,
/// `g : C -> A`.
pub struct ProductCycle {
    pub a_len: usize,
    pub b_len: usize,
    pub c_len: usize,
    /// f[a][b]
    pub f: Vec<Vec<usize>>,
    pub g: Vec<usize>,
}

impl ProductCycle {
    /// Exhaustively verify that distinct first arguments stay distinct after
    /// the round trip, for every second argument.
    pub fn validate(&self) -> Result<()> {
        for b in 0..self.b_len {
            let mut seen = vec![false; self.a_len];
            for a in 0..self.a_len {
                let out = self.g[self.f[a][b]];
                if std::mem::replace(&mut seen[out], true) {
                    return Err(Error::Condition26Violated { b });
                }
            }
        }
        Ok(())
    }

    /// Iterate `a -> g(f(a, b))` from `a0` until it returns to `a0`.
    pub fn cycle_trace(&self, a0: usize, b: usize) -> Result<IterationTrace> {
        self.validate()?;
        let mut steps = Vec::new();
        let mut a = a0;
        loop {
            a = self.g[self.f[a][b]];
            steps.push(a);
            if a == a0 {
                return Ok(IterationTrace { start: a0, steps });
            }
            assert!(
                steps.len() <= self.a_len,
                "cycle exceeded the pigeonhole bound"
            );
        }
    }
}

/// A product-scheme cancellation instance: a scheme table from `Q x R` to
/// `Q x S` plus the anchor element of `Q` the iteration returns to.
pub struct ProductCancel<'a> {
    pub t: &'a SchemeTable,
    pub q: &'a Poset,
    pub r: &'a Poset,
    pub s: &'a Poset,
    pub anchor: usize,
}

impl ProductCancel<'_> {
    fn split(&self, f: &Hom) -> (Hom, Hom) {
        let rn = self.r.len() as u32;
        (
            Hom(f.0.iter().map(|&v| v / rn).collect()),
            Hom(f.0.iter().map(|&v| v % rn).collect()),
        )
    }

    fn combine(&self, fq: &Hom, fr: &Hom) -> Hom {
        let rn = self.r.len() as u32;
        Hom(fq.0.iter().zip(&fr.0).map(|(&a, &b)| a * rn + b).collect())
    }

    fn split_image(&self, f: &Hom) -> (Hom, Hom) {
        let sn = self.s.len() as u32;
        (
            Hom(f.0.iter().map(|&v| v / sn).collect()),
            Hom(f.0.iter().map(|&v| v % sn).collect()),
        )
    }

    /// First-component injectivity over the whole table: for a fixed second
    /// component, distinct first components keep distinct image first
    /// components.
    pub fn check_first_component_injective(&self) -> Result<()> {
        for e in &self.t.entries {
            let mut groups: HashMap<Vec<u32>, HashMap<Vec<u32>, Vec<u32>>> = HashMap::new();
            for (i, h) in e.homs_r.iter().enumerate() {
                let (h1, h2) = self.split(h);
                let (i1, _) = self.split_image(&e.homs_s[e.map[i] as usize]);
                let group = groups.entry(h2.0).or_default();
                if let Some(prev) = group.get(&i1.0) {
                    if *prev != h1.0 {
                        return Err(Error::Condition27Violated);
                    }
                }
                group.insert(i1.0, h1.0);
            }
        }
        Ok(())
    }

    /// Constant first components must map to constant first components.
    pub fn check_constant_preserving(&self) -> Result<()> {
        for e in &self.t.entries {
            for (i, h) in e.homs_r.iter().enumerate() {
                let (h1, _) = self.split(h);
                if h1.is_constant() {
                    let (i1, _) = self.split_image(&e.homs_s[e.map[i] as usize]);
                    if !i1.is_constant() {
                        return Err(Error::Condition30Violated);
                    }
                }
            }
        }
        Ok(())
    }

    /// The anchored iteration at `xi`: first components
    /// `phi^0 = const anchor`, `phi^i = first(rho(phi^{i-1}, xi))`, recorded
    /// until the anchor constant returns. Fiber classes of the paired maps
    /// are checked to stay equal to those of `xi` along the way.
    pub fn phi_trace(&self, p: &Poset, xi: &Hom) -> Result<PhiTrace> {
        let fp = fingerprint(p, xi);
        let mut first = vec![Hom::constant(p.len(), self.anchor)];
        let cap = self
            .t
            .entries
            .iter()
            .map(|e| e.homs_r.len() + 2)
            .max()
            .unwrap_or(2);
        loop {
            let cur = first.last().unwrap();
            let paired = self.combine(cur, xi);
            if fingerprint(p, &paired) != fp {
                return Err(Error::AssertionFailed {
                    detail: "fiber classes drift along the iteration".into(),
                });
            }
            let img = self.t.apply(p, &paired)?;
            let (i1, _) = self.split_image(&img);
            let done = i1 == first[0];
            first.push(i1);
            if done {
                return Ok(PhiTrace { first });
            }
            assert!(first.len() <= cap, "iteration exceeded the hom count");
        }
    }

    /// The cancellation scheme `R -> S`: map `xi` to the second component of
    /// the image of the last pre-anchor iterate.
    pub fn cancel_scheme(&self, members: &[Poset], budget: &mut Budget) -> Result<SchemeTable> {
        self.check_first_component_injective()?;
        SchemeTable::build(self.r, self.s, members, budget, |p, xi| {
            let trace = self.phi_trace(p, xi)?;
            let n = trace.period();
            let paired = self.combine(&trace.first[n - 1], xi);
            let img = self.t.apply(p, &paired)?;
            Ok(self.split_image(&img).1)
        })
    }
}

/// Anchored first-component iterates; `first[0] == first[period()]` is the
/// anchor constant.
pub struct PhiTrace {
    pub first: Vec<Hom>,
}

impl PhiTrace {
    pub fn period(&self) -> usize {
        self.first.len() - 1
    }
}

/// Continue the first-component iteration to arbitrary depth (for
/// periodicity checks): returns `phi^0 .. phi^{upto}`.
pub fn phi_iterates(
    pc: &ProductCancel<'_>,
    p: &Poset,
    xi: &Hom,
    upto: usize,
) -> Result<Vec<Hom>> {
    let mut first = vec![Hom::constant(p.len(), pc.anchor)];
    for _ in 0..upto {
        let paired = pc.combine(first.last().unwrap(), xi);
        let img = pc.t.apply(p, &paired)?;
        first.push(pc.split_image(&img).0);
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_iteration_example() {
        // A = {1, 2}, B = {b}, C = {c}; b -> 1 -> 2 -> c
        let f = HashMap::from([(10, 1), (1, 2), (2, 20)]);
        let coded = InjectiveUnion::from_values(&[1, 2], &[10], &[20], &f).unwrap();
        let trace = iterate_injection(&coded, 0);
        assert_eq!(trace.terminal_index(), 3);
        assert_eq!(trace.terminal(), 2); // coded id of c
    }

    #[test]
    fn immediate_exit() {
        let f = HashMap::from([(10, 20), (1, 1), (2, 2)]);
        let coded = InjectiveUnion::from_values(&[1, 2], &[10], &[20], &f).unwrap();
        assert_eq!(coded.iterate_from(0).terminal_index(), 1);
    }

    #[test]
    fn overlap_and_noninjective_rejected() {
        let f = HashMap::new();
        assert!(matches!(
            InjectiveUnion::from_values(&[1], &[1], &[2], &f),
            Err(Error::DisjointnessViolated)
        ));
        let f = HashMap::from([(10, 1), (1, 1)]);
        assert!(matches!(
            InjectiveUnion::from_values(&[1], &[10], &[20], &f),
            Err(Error::NotInjective { .. })
        ));
    }

    #[test]
    fn cycle_condition_violation_detected() {
        // g(f(a,b)) constant: collides for |A| = 2
        let pc = ProductCycle {
            a_len: 2,
            b_len: 1,
            c_len: 1,
            f: vec![vec![0], vec![0]],
            g: vec![0],
        };
        assert!(matches!(
            pc.cycle_trace(0, 0),
            Err(Error::Condition26Violated { b: 0 })
        ));
    }

    #[test]
    fn two_cycle() {
        // a0 -> a1 -> a0
        let pc = ProductCycle {
            a_len: 2,
            b_len: 1,
            c_len: 2,
            f: vec![vec![0], vec![1]],
            g: vec![1, 0],
        };
        let tr = pc.cycle_trace(0, 0).unwrap();
        assert_eq!(tr.terminal_index(), 2);
        assert_eq!(tr.steps, vec![1, 0]);
    }
}
