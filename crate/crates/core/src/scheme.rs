//! Hom-schemes as finite data over an explicit catalog.
//!
//! A scheme table holds, for every catalog poset `P`, a total map
//! `H(P,R) -> H(P,S)`. Checks return verdicts with witnesses instead of
//! booleans: strong (per-P injectivity), fiber-class preservation, and
//! signature-comparability transfer. The bounded relation checks realize
//! the three order relations between posets at an explicit catalog bound.

use crate::bitset::ElemSet;
use crate::canon::{canonical_key, find_isomorphism, CanonKey};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::ev::{build_ev, ev_signature, find_strict_injection, EvMap, EvSystem};
use crate::hom::{
    count_homs, count_strict, enumerate_homs, fiber_class, hom_poset, restrict_hom, union_homs,
    Budget, Hom,
};
use crate::poset::Poset;
use crate::report::{Verdict, Witness};
use std::collections::HashMap;

/// Per-poset slice of a scheme table. `map[i]` is the index in `homs_s` of
/// the image of `homs_r[i]`.
pub struct SchemeEntry {
    pub poset: Poset,
    pub homs_r: Vec<Hom>,
    pub homs_s: Vec<Hom>,
    pub map: Vec<u32>,
}

/// Concrete witness of a Hom-scheme over a finite catalog: source, target,
/// and one total per-poset map for every catalog member.
pub struct SchemeTable {
    pub source: Poset,
    pub target: Poset,
    pub entries: Vec<SchemeEntry>,
    key_index: HashMap<CanonKey, usize>,
}

impl SchemeTable {
    /// Build a table by evaluating `f` on every enumerated homomorphism of
    /// every catalog member. Images must be order-preserving maps into the
    /// target.
    pub fn build(
        source: &Poset,
        target: &Poset,
        members: &[Poset],
        budget: &mut Budget,
        mut f: impl FnMut(&Poset, &Hom) -> Result<Hom>,
    ) -> Result<SchemeTable> {
        let mut entries = Vec::with_capacity(members.len());
        let mut key_index = HashMap::new();
        for p in members {
            let homs_r = enumerate_homs(p, source, budget)?;
            let homs_s = enumerate_homs(p, target, budget)?;
            let s_index: HashMap<&Hom, u32> = homs_s
                .iter()
                .enumerate()
                .map(|(i, h)| (h, i as u32))
                .collect();
            let mut map = Vec::with_capacity(homs_r.len());
            for h in &homs_r {
                let img = f(p, h)?;
                if !img.is_hom(p, target) {
                    return Err(Error::SchemeImageNotMonotone);
                }
                map.push(*s_index.get(&img).expect("image enumerated"));
            }
            key_index.insert(canonical_key(p), entries.len());
            entries.push(SchemeEntry {
                poset: p.clone(),
                homs_r,
                homs_s,
                map,
            });
        }
        Ok(SchemeTable {
            source: source.clone(),
            target: target.clone(),
            entries,
            key_index,
        })
    }

    pub fn catalog(&self) -> Vec<Poset> {
        self.entries.iter().map(|e| e.poset.clone()).collect()
    }

    pub fn bound_descr(&self) -> String {
        let max_n = self.entries.iter().map(|e| e.poset.len()).max().unwrap_or(0);
        format!("catalog of {} posets (n <= {})", self.entries.len(), max_n)
    }

    /// Entry whose poset is isomorphic to `p`, with an isomorphism
    /// `p -> member`.
    pub fn lookup(&self, p: &Poset) -> Result<(&SchemeEntry, Vec<usize>)> {
        let idx = *self
            .key_index
            .get(&canonical_key(p))
            .ok_or_else(|| Error::NotInCatalog(format!("{p:?}")))?;
        let entry = &self.entries[idx];
        if entry.poset == *p {
            return Ok((entry, (0..p.len()).collect()));
        }
        let iso = find_isomorphism(p, &entry.poset).expect("equal canonical keys");
        Ok((entry, iso))
    }

    /// Apply the scheme to a homomorphism on any poset isomorphic to a
    /// catalog member, transporting along the isomorphism.
    pub fn apply(&self, p: &Poset, f: &Hom) -> Result<Hom> {
        let (entry, iso) = self.lookup(p)?;
        let mut transported = vec![0u32; p.len()];
        for x in 0..p.len() {
            transported[iso[x]] = f.0[x];
        }
        let idx = entry
            .homs_r
            .binary_search(&Hom(transported))
            .expect("transported map is an enumerated homomorphism");
        let img = &entry.homs_s[entry.map[idx] as usize];
        Ok(Hom((0..p.len()).map(|x| img.0[iso[x]]).collect()))
    }

    /// Injectivity of every per-poset map.
    pub fn check_strong(&self) -> Verdict {
        for e in &self.entries {
            let mut seen: HashMap<u32, usize> = HashMap::new();
            for (i, &img) in e.map.iter().enumerate() {
                if let Some(&j) = seen.get(&img) {
                    return Verdict::Refuted {
                        witness: Witness::collision(&e.poset, &e.homs_r[j].0, &e.homs_r[i].0),
                    };
                }
                seen.insert(img, i);
            }
        }
        Verdict::Holds {
            bound: self.bound_descr(),
        }
    }

    /// Fiber-class preservation: the image homomorphism has the same
    /// per-element fiber classes as the original.
    pub fn check_g(&self) -> Verdict {
        for e in &self.entries {
            for (i, h) in e.homs_r.iter().enumerate() {
                let img = &e.homs_s[e.map[i] as usize];
                for x in e.poset.elements() {
                    if fiber_class(&e.poset, h, x) != fiber_class(&e.poset, img, x) {
                        return Verdict::Refuted {
                            witness: Witness::fingerprint_mismatch(&e.poset, &h.0, &img.0, x),
                        };
                    }
                }
            }
        }
        Verdict::Holds {
            bound: self.bound_descr(),
        }
    }

    /// Signature-comparability transfer across all catalog instances:
    /// whenever two signatures are related, the image signatures are related
    /// the same way (strictly for strict, equal for equal).
    pub fn check_i(&self, pair_cap: u64) -> Result<Verdict> {
        struct Item {
            entry: usize,
            hom: usize,
            x: usize,
        }
        let mut items = Vec::new();
        let mut sig_r = Vec::new();
        let mut sig_s = Vec::new();
        let rn = self.source.len();
        let sn = self.target.len();
        for (ei, e) in self.entries.iter().enumerate() {
            for (hi, h) in e.homs_r.iter().enumerate() {
                let img = &e.homs_s[e.map[hi] as usize];
                for x in e.poset.elements() {
                    items.push(Item {
                        entry: ei,
                        hom: hi,
                        x,
                    });
                    sig_r.push(ev_signature(&e.poset, rn, h, x));
                    sig_s.push(ev_signature(&e.poset, sn, img, x));
                }
            }
        }
        let pairs = (items.len() as u64) * (items.len() as u64);
        if pairs > pair_cap {
            return Err(Error::ComplexityCapExceeded {
                pairs,
                cap: pair_cap,
            });
        }
        for i in 0..items.len() {
            for j in 0..items.len() {
                if i == j {
                    continue;
                }
                let violated = if sig_r[i] == sig_r[j] {
                    sig_s[i] != sig_s[j]
                } else if sig_r[i].lt(&sig_r[j]) {
                    !sig_s[i].lt(&sig_s[j])
                } else {
                    continue;
                };
                if violated {
                    let (a, b) = (&items[i], &items[j]);
                    let ep = &self.entries[a.entry];
                    let eq = &self.entries[b.entry];
                    return Ok(Verdict::Refuted {
                        witness: Witness::TransferViolation {
                            p: crate::report::PosetData::of(&ep.poset),
                            q: crate::report::PosetData::of(&eq.poset),
                            hom_p: ep.homs_r[a.hom].0.iter().map(|v| v.to_string()).collect(),
                            hom_q: eq.homs_r[b.hom].0.iter().map(|v| v.to_string()).collect(),
                            x: ep.poset.label(a.x),
                            y: eq.poset.label(b.x),
                            detail: if sig_r[i] == sig_r[j] {
                                "equal signatures map to different signatures".into()
                            } else {
                                "strict signature pair does not stay strict".into()
                            },
                        },
                    });
                }
            }
        }
        Ok(Verdict::Holds {
            bound: self.bound_descr(),
        })
    }
}

/// The scheme induced by composing with an injective homomorphism
/// `sigma : R -> S`.
pub fn scheme_from_injection(
    sigma: &Hom,
    source: &Poset,
    target: &Poset,
    members: &[Poset],
    budget: &mut Budget,
) -> Result<SchemeTable> {
    if !sigma.is_injective() {
        let mut seen: HashMap<u32, usize> = HashMap::new();
        for (x, &v) in sigma.0.iter().enumerate() {
            if let Some(&y) = seen.get(&v) {
                return Err(Error::NotInjective { a: y, b: x });
            }
            seen.insert(v, x);
        }
    }
    if !sigma.is_hom(source, target) {
        return Err(Error::SchemeImageNotMonotone);
    }
    SchemeTable::build(source, target, members, budget, |_, f| {
        Ok(f.compose(sigma))
    })
}

/// Extend a scheme given only on connected posets to an arbitrary catalog:
/// the image of a homomorphism is the union of the per-component images.
pub fn extend_connected(
    conn: &SchemeTable,
    members: &[Poset],
    budget: &mut Budget,
) -> Result<SchemeTable> {
    for e in &conn.entries {
        if !e.poset.is_connected() {
            return Err(Error::NotInCatalog(format!(
                "{:?} is not connected",
                e.poset
            )));
        }
    }
    SchemeTable::build(&conn.source, &conn.target, members, budget, |p, f| {
        let comps = p.components();
        let mut images: Vec<(ElemSet, Hom)> = Vec::with_capacity(comps.len());
        for k in &comps {
            let sub = p.induced(k);
            let part = restrict_hom(f, k);
            let img = conn.apply(&sub, &part).map_err(|e| match e {
                Error::NotInCatalog(_) => Error::MissingComponentPoset { size: sub.len() },
                other => other,
            })?;
            images.push((k.clone(), img));
        }
        union_homs(
            p.len(),
            &images.iter().map(|(k, h)| (k, h)).collect::<Vec<_>>(),
        )
    })
}

/// The dual scheme: act on `H(P, dual R)` by reading it as `H(dual P, R)`.
/// Requires the catalog to be closed under dualization.
pub fn dual_scheme(t: &SchemeTable, budget: &mut Budget) -> Result<SchemeTable> {
    for (i, e) in t.entries.iter().enumerate() {
        if t.lookup(&e.poset.dual()).is_err() {
            return Err(Error::CatalogNotDualClosed { index: i });
        }
    }
    let members = t.catalog();
    SchemeTable::build(
        &t.source.dual(),
        &t.target.dual(),
        &members,
        budget,
        |p, f| t.apply(&p.dual(), f),
    )
}

/// Direct-sum scheme: on a connected poset every homomorphism lands in one
/// summand; map it there and re-embed. Extended to the full catalog
/// componentwise.
pub fn dirsum_scheme(
    t1: &SchemeTable,
    t2: &SchemeTable,
    members: &[Poset],
    budget: &mut Budget,
) -> Result<SchemeTable> {
    let source = t1.source.direct_sum(&t2.source);
    let target = t1.target.direct_sum(&t2.target);
    let r1 = t1.source.len() as u32;
    let s1 = t1.target.len() as u32;
    let connected: Vec<Poset> = members.iter().filter(|p| p.is_connected()).cloned().collect();
    let conn = SchemeTable::build(&source, &target, &connected, budget, |p, f| {
        if f.0.iter().all(|&v| v < r1) {
            t1.apply(p, f)
        } else if f.0.iter().all(|&v| v >= r1) {
            let lowered = Hom(f.0.iter().map(|&v| v - r1).collect());
            let img = t2.apply(p, &lowered)?;
            Ok(Hom(img.0.iter().map(|&v| v + s1).collect()))
        } else {
            // a connected image cannot straddle the two summands
            unreachable!("connected image straddles a direct sum")
        }
    })?;
    extend_connected(&conn, members, budget)
}

/// Product scheme: map the two component homomorphisms separately.
pub fn prod_scheme(
    t1: &SchemeTable,
    t2: &SchemeTable,
    members: &[Poset],
    budget: &mut Budget,
) -> Result<SchemeTable> {
    let source = t1.source.product(&t2.source);
    let target = t1.target.product(&t2.target);
    let r2 = t2.source.len() as u32;
    let s2 = t2.target.len() as u32;
    SchemeTable::build(&source, &target, members, budget, |p, f| {
        let f1 = Hom(f.0.iter().map(|&v| v / r2).collect());
        let f2 = Hom(f.0.iter().map(|&v| v % r2).collect());
        let i1 = t1.apply(p, &f1)?;
        let i2 = t2.apply(p, &f2)?;
        Ok(Hom(
            i1.0.iter().zip(&i2.0).map(|(&a, &b)| a * s2 + b).collect(),
        ))
    })
}

/// Hom-set scheme: from `H(Q,R)` (pointwise order) to `H(Q,S)` by composing
/// each value with the scheme's map at `Q`. The images must stay
/// order-preserving; this is checked and rejected otherwise.
pub fn homset_scheme(
    t: &SchemeTable,
    q: &Poset,
    members: &[Poset],
    budget: &mut Budget,
) -> Result<SchemeTable> {
    let (source, hr) = hom_poset(q, &t.source, budget)?;
    let (target, hs) = hom_poset(q, &t.target, budget)?;
    let hs_index: HashMap<&Hom, u32> = hs.iter().enumerate().map(|(i, h)| (h, i as u32)).collect();
    let mut value_map = Vec::with_capacity(hr.len());
    for h in &hr {
        let img = t.apply(q, h)?;
        value_map.push(*hs_index.get(&img).expect("image of a hom is enumerated"));
    }
    SchemeTable::build(&source, &target, members, budget, |_, f| {
        Ok(Hom(f.0.iter().map(|&v| value_map[v as usize]).collect()))
    })
}

// ---------------------------------------------------------------------------
// bounded relations between posets

fn bound_descr(members: &[Poset]) -> String {
    let max_n = members.iter().map(|p| p.len()).max().unwrap_or(0);
    format!("catalog of {} posets (n <= {})", members.len(), max_n)
}

/// Bounded hom-count dominance: `#H(P,R) <= #H(P,S)` for every catalog `P`.
pub fn check_hom_le(
    r: &Poset,
    s: &Poset,
    members: &[Poset],
    budget: &mut Budget,
) -> Result<Verdict> {
    for p in members {
        let cr = count_homs(p, r, budget)?;
        let cs = count_homs(p, s, budget)?;
        if cr > cs {
            return Ok(Verdict::Refuted {
                witness: Witness::count_gap(p, cr, cs),
            });
        }
    }
    Ok(Verdict::Holds {
        bound: bound_descr(members),
    })
}

/// Bounded strict-count dominance over connected catalog members, the
/// counting characterization of the fiber-preserving relation.
pub fn check_g_le(
    r: &Poset,
    s: &Poset,
    members: &[Poset],
    budget: &mut Budget,
) -> Result<Verdict> {
    for p in members.iter().filter(|p| p.is_connected()) {
        let cr = count_strict(p, r, budget)?;
        let cs = count_strict(p, s, budget)?;
        if cr > cs {
            return Ok(Verdict::Refuted {
                witness: Witness::count_gap(p, cr, cs),
            });
        }
    }
    Ok(Verdict::Holds {
        bound: format!("connected members of {}", bound_descr(members)),
    })
}

/// Validate the signature identity of an EV-level injection against every
/// catalog instance: the induced map on homomorphisms must reproduce the
/// mapped signature at every element. Returns a witness on failure.
pub fn validate_ev_map(
    eps: &EvMap,
    dom: &EvSystem,
    cod: &EvSystem,
    members: &[Poset],
    budget: &mut Budget,
) -> Result<Option<Witness>> {
    let r = dom.source();
    let s = cod.source();
    for p in members {
        for f in enumerate_homs(p, r, budget)? {
            let mut image = Vec::with_capacity(p.len());
            let mut sig_ids = Vec::with_capacity(p.len());
            for x in p.elements() {
                let sig = ev_signature(p, r.len(), &f, x);
                let i = dom
                    .index_of(&sig)
                    .expect("signature is an EV element of the source system");
                sig_ids.push(eps.apply(i as usize));
                image.push(cod.elem(eps.apply(i as usize)).base);
            }
            let eta = Hom(image);
            if !eta.is_hom(p, s) {
                return Ok(Some(Witness::Structural {
                    instance: format!("induced map on {:?}", p),
                    detail: "induced image is not order-preserving".into(),
                }));
            }
            for x in p.elements() {
                let got = ev_signature(p, s.len(), &eta, x);
                if got != *cod.elem(sig_ids[x]) {
                    return Ok(Some(Witness::Structural {
                        instance: format!("poset {:?}, hom {:?}, element {}", p, f.0, p.label(x)),
                        detail: "signature identity fails for the induced map".into(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Bounded signature-controlled dominance: search for an injective strict
/// EV-homomorphism whose induced maps satisfy the signature identity on the
/// whole catalog. Holding verdicts carry the witness injection.
pub fn check_i_le(
    r: &Poset,
    s: &Poset,
    members: &[Poset],
    caps: &Caps,
) -> Result<(Verdict, Option<EvMap>)> {
    let er = build_ev(r, caps.ev_cap)?;
    let es = build_ev(s, caps.ev_cap)?;
    if er.len() > es.len() {
        return Ok((
            Verdict::Refuted {
                witness: Witness::EvCountGap {
                    left: er.len() as u64,
                    right: es.len() as u64,
                },
            },
            None,
        ));
    }
    let mut budget = Budget::new(caps.search_budget);
    let mut validation_budget = Budget::new(caps.search_budget);
    let mut validation_error = None;
    let found = find_strict_injection(&er, &es, &mut budget, |cand| {
        match validate_ev_map(cand, &er, &es, members, &mut validation_budget) {
            Ok(None) => true,
            Ok(Some(_)) => false,
            Err(e) => {
                validation_error = Some(e);
                false
            }
        }
    })?;
    if let Some(e) = validation_error {
        return Err(e);
    }
    match found {
        Some(map) => Ok((
            Verdict::Holds {
                bound: format!(
                    "witness injection on {} EV elements, validated over {}",
                    er.len(),
                    bound_descr(members)
                ),
            },
            Some(map),
        )),
        None => Ok((
            Verdict::Refuted {
                witness: Witness::NoInjectionFound {
                    searched_nodes: budget.used(),
                },
            },
            None,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Poset {
        Poset::chain(2)
    }

    fn small_members() -> Vec<Poset> {
        vec![
            Poset::singleton(),
            Poset::antichain(2),
            c2(),
            Poset::chain(3),
        ]
    }

    #[test]
    fn injection_scheme_applies_by_composition() {
        let mut b = Budget::default();
        let sigma = Hom(vec![0, 1]); // C2 into bottom of C3
        let t = scheme_from_injection(&sigma, &c2(), &Poset::chain(3), &small_members(), &mut b)
            .unwrap();
        let f = Hom(vec![0, 1, 1]);
        assert_eq!(t.apply(&Poset::chain(3), &f).unwrap(), Hom(vec![0, 1, 1]));
        assert!(t.check_strong().holds());
    }

    #[test]
    fn non_injection_rejected() {
        let mut b = Budget::default();
        let sigma = Hom(vec![0, 0]);
        assert!(matches!(
            scheme_from_injection(&sigma, &c2(), &c2(), &small_members(), &mut b),
            Err(Error::NotInjective { .. })
        ));
    }

    #[test]
    fn collapsing_table_refuted_with_witness() {
        let mut b = Budget::default();
        let a2 = Poset::antichain(2);
        let a1 = Poset::singleton();
        let t = SchemeTable::build(&a2, &a1, &small_members(), &mut b, |p, _| {
            Ok(Hom::constant(p.len(), 0))
        })
        .unwrap();
        let verdict = t.check_strong();
        assert!(verdict.refuted());
        match verdict.witness().unwrap() {
            Witness::Collision { poset, .. } => assert_eq!(poset.elements.len(), 1),
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn apply_transports_along_isomorphism() {
        let mut b = Budget::default();
        // catalog holds a chain labelled the canonical way; apply on a
        // relabeled copy
        let t = scheme_from_injection(
            &Hom::identity(2),
            &c2(),
            &c2(),
            &[Poset::chain(2)],
            &mut b,
        )
        .unwrap();
        let flipped = Poset::from_leq(2, |x, y| x == y || (x == 1 && y == 0)).unwrap();
        let f = Hom(vec![1, 0]);
        assert_eq!(t.apply(&flipped, &f).unwrap(), f);
    }
}
