//! The bounded representation system: all non-isomorphic posets up to a
//! size bound, plus connected filtering, seeded random posets, and a binary
//! cache.
//!
//! Generation extends every (n-1)-element poset by a new element with every
//! admissible (ideal, filter) pair and deduplicates by canonical key. This
//! reaches every isomorphism class: deleting any element of an n-poset leaves
//! an (n-1)-poset from which the original is rebuilt by exactly such a pair.

use crate::bitset::ElemSet;
use crate::canon::{canonical_key, CanonKey};
use crate::error::{Error, Result};
use crate::poset::Poset;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::io::{Read, Write};

/// Hard ceiling for generation; beyond this the catalog sizes explode.
pub const MAX_GENERATION_BOUND: usize = 6;

/// Catalog of canonical representatives, sorted by (size, canonical key).
pub struct Catalog {
    pub max_n: usize,
    pub posets: Vec<Poset>,
    index: HashMap<CanonKey, usize>,
}

impl Catalog {
    pub fn position_of(&self, p: &Poset) -> Option<usize> {
        self.index.get(&canonical_key(p)).copied()
    }

    pub fn members(&self) -> &[Poset] {
        &self.posets
    }

    pub fn members_of_size(&self, n: usize) -> impl Iterator<Item = &Poset> {
        self.posets.iter().filter(move |p| p.len() == n)
    }

    /// Members that are connected, as a catalog of their own.
    pub fn connected_only(&self) -> Catalog {
        let posets: Vec<Poset> = self
            .posets
            .iter()
            .filter(|p| p.is_connected())
            .cloned()
            .collect();
        let index = posets
            .iter()
            .enumerate()
            .map(|(i, p)| (canonical_key(p), i))
            .collect();
        Catalog {
            max_n: self.max_n,
            posets,
            index,
        }
    }
}

/// All subsets of the carrier that are down-closed.
fn ideals(p: &Poset) -> Vec<ElemSet> {
    p.dual().upsets()
}

/// Generate the catalog up to `max_n` elements.
pub fn generate(max_n: usize) -> Result<Catalog> {
    if max_n == 0 || max_n > MAX_GENERATION_BOUND {
        return Err(Error::BoundTooLarge {
            requested: max_n,
            max: MAX_GENERATION_BOUND,
        });
    }
    let mut by_size: Vec<Vec<(CanonKey, Poset)>> = Vec::with_capacity(max_n);
    by_size.push(vec![(canonical_key(&Poset::singleton()), Poset::singleton())]);
    for size in 2..=max_n {
        let mut seen: HashMap<CanonKey, Poset> = HashMap::new();
        for (_, parent) in &by_size[size - 2] {
            let n_old = parent.len();
            let ids = ideals(parent);
            let filters = parent.upsets();
            for down in &ids {
                for up in &filters {
                    if !down.is_disjoint(up) {
                        continue;
                    }
                    // transitivity through the new element: everything below
                    // must already be below everything above
                    if !down
                        .iter()
                        .all(|d| up.iter().all(|u| parent.lt(d, u)))
                    {
                        continue;
                    }
                    let child = Poset::from_leq(n_old + 1, |x, y| {
                        if x == y {
                            true
                        } else if x < n_old && y < n_old {
                            parent.leq(x, y)
                        } else if y == n_old {
                            down.contains(x)
                        } else {
                            up.contains(y)
                        }
                    })
                    .expect("extension preserves order axioms");
                    let key = canonical_key(&child);
                    seen.entry(key).or_insert(child);
                }
            }
        }
        let mut level: Vec<(CanonKey, Poset)> = seen.into_iter().collect();
        level.sort_by(|a, b| a.0.cmp(&b.0));
        by_size.push(level);
    }
    let mut posets = Vec::new();
    let mut index = HashMap::new();
    for level in by_size {
        for (key, p) in level {
            index.insert(key, posets.len());
            posets.push(p);
        }
    }
    Ok(Catalog {
        max_n,
        posets,
        index,
    })
}

/// Deterministic random poset: a random orientation-compatible edge set,
/// transitively closed. Same seed, same relation.
pub fn random_poset(n: usize, seed: u64) -> Poset {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut covers = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.35) {
                covers.push((order[i], order[j]));
            }
        }
    }
    Poset::from_cover_ids(n, &covers)
        .expect("edges follow a fixed linear order, no cycles")
        .poset
}

// ---------------------------------------------------------------------------
// cache format: magic, version, max_n, count, then per poset the size and
// the row-major relation bits.

const CACHE_MAGIC: &[u8; 8] = b"HSCATLG\0";
const CACHE_VERSION: u32 = 1;

pub fn write_cache(catalog: &Catalog, mut w: impl Write) -> Result<()> {
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    w.write_all(&(catalog.max_n as u32).to_le_bytes())?;
    w.write_all(&(catalog.posets.len() as u64).to_le_bytes())?;
    for p in &catalog.posets {
        w.write_all(&(p.len() as u32).to_le_bytes())?;
        let bits = p.relation_bits();
        let mut bytes = vec![0u8; bits.len().div_ceil(8)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                bytes[i / 8] |= 1 << (i % 8);
            }
        }
        w.write_all(&bytes)?;
    }
    Ok(())
}

pub fn read_cache(mut r: impl Read) -> Result<Catalog> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(Error::BadCache("bad magic".into()));
    }
    let mut u32buf = [0u8; 4];
    r.read_exact(&mut u32buf)?;
    if u32::from_le_bytes(u32buf) != CACHE_VERSION {
        return Err(Error::BadCache("unsupported version".into()));
    }
    r.read_exact(&mut u32buf)?;
    let max_n = u32::from_le_bytes(u32buf) as usize;
    let mut u64buf = [0u8; 8];
    r.read_exact(&mut u64buf)?;
    let count = u64::from_le_bytes(u64buf) as usize;
    let mut posets = Vec::with_capacity(count);
    let mut index = HashMap::new();
    for _ in 0..count {
        r.read_exact(&mut u32buf)?;
        let n = u32::from_le_bytes(u32buf) as usize;
        if n == 0 || n > MAX_GENERATION_BOUND {
            return Err(Error::BadCache(format!("poset size {n} out of range")));
        }
        let mut bytes = vec![0u8; (n * n).div_ceil(8)];
        r.read_exact(&mut bytes)?;
        let p = Poset::from_leq(n, |x, y| {
            let i = x * n + y;
            bytes[i / 8] & (1 << (i % 8)) != 0
        })
        .map_err(|e| Error::BadCache(format!("invalid relation in cache: {e}")))?;
        index.insert(canonical_key(&p), posets.len());
        posets.push(p);
    }
    Ok(Catalog {
        max_n,
        posets,
        index,
    })
}

/// Generate, or load from `cache_dir` when a matching cache file exists
/// (writing one back after a fresh generation).
pub fn load_or_generate(max_n: usize, cache_dir: Option<&std::path::Path>) -> Result<Catalog> {
    let path = cache_dir.map(|d| d.join(format!("catalog_v{CACHE_VERSION}_n{max_n}.bin")));
    if let Some(p) = &path {
        if let Ok(file) = std::fs::File::open(p) {
            if let Ok(catalog) = read_cache(std::io::BufReader::new(file)) {
                if catalog.max_n == max_n {
                    return Ok(catalog);
                }
            }
        }
    }
    let catalog = generate(max_n)?;
    if let Some(p) = &path {
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent)?;
        }
        write_cache(&catalog, std::io::BufWriter::new(std::fs::File::create(p)?))?;
    }
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_checked() {
        assert!(matches!(generate(0), Err(Error::BoundTooLarge { .. })));
        assert!(matches!(generate(99), Err(Error::BoundTooLarge { .. })));
    }

    #[test]
    fn small_counts() {
        let c = generate(3).unwrap();
        let per_size: Vec<usize> = (1..=3).map(|n| c.members_of_size(n).count()).collect();
        assert_eq!(per_size, vec![1, 2, 5]);
        assert_eq!(c.connected_only().members_of_size(3).count(), 3);
    }

    #[test]
    fn seed_reproducibility() {
        let a = random_poset(6, 42);
        let b = random_poset(6, 42);
        assert_eq!(a, b);
        let c = random_poset(6, 43);
        // a different seed virtually always gives a different relation
        assert!(a != c || a.covers() == c.covers());
    }

    #[test]
    fn cache_round_trip() {
        let c = generate(3).unwrap();
        let mut buf = Vec::new();
        write_cache(&c, &mut buf).unwrap();
        let back = read_cache(buf.as_slice()).unwrap();
        assert_eq!(back.max_n, 3);
        assert_eq!(back.posets, c.posets);
    }

    #[test]
    fn corrupt_cache_rejected() {
        assert!(matches!(
            read_cache(b"NOTMAGIC........".as_slice()),
            Err(Error::BadCache(_))
        ));
    }
}
