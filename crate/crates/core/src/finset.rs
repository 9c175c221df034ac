//! Explicit finite sets, maps, subsets, and ordered partitions.
//!
//! A carrier is `{0, 1, .., size-1}` with optional display labels.  Subsets
//! are bitmasks over the carrier, so carriers that participate in subset
//! calculus are limited to 64 elements; that bound is far above every
//! exhaustive experiment in this crate.

use crate::error::{Error, Result};

/// Maximum carrier size for which subset masks are representable.
pub const MAX_SUBSET_CARRIER: usize = 64;

/// A finite carrier `{0, .., size-1}`, optionally labelled for display.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    size: usize,
    labels: Option<Vec<String>>,
}

impl FiniteSet {
    /// Unlabelled carrier of the given size.
    pub fn new(size: usize) -> Self {
        FiniteSet { size, labels: None }
    }

    /// Labelled carrier; labels must be pairwise distinct.
    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        for (i, a) in labels.iter().enumerate() {
            for b in labels.iter().skip(i + 1) {
                if a == b {
                    return Err(Error::InvalidStructure(format!(
                        "duplicate carrier label {a:?}"
                    )));
                }
            }
        }
        Ok(FiniteSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Display label of one element.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) if i < ls.len() => ls[i].clone(),
            _ => i.to_string(),
        }
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }
}

/// A total function between finite carriers, tabulated pointwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMap {
    dom: FiniteSet,
    cod: FiniteSet,
    table: Vec<usize>,
}

impl FiniteMap {
    /// Build a map from its value table; every entry must land in `cod`.
    pub fn new(dom: FiniteSet, cod: FiniteSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::CarrierMismatch {
                expected: dom.size(),
                found: table.len(),
            });
        }
        for &v in &table {
            if v >= cod.size() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    size: cod.size(),
                });
            }
        }
        Ok(FiniteMap { dom, cod, table })
    }

    /// The identity map on a carrier.
    pub fn identity(set: &FiniteSet) -> Self {
        FiniteMap {
            dom: set.clone(),
            cod: set.clone(),
            table: (0..set.size()).collect(),
        }
    }

    /// The constant map onto `value`.
    pub fn constant(dom: FiniteSet, cod: FiniteSet, value: usize) -> Result<Self> {
        if value >= cod.size() {
            return Err(Error::IndexOutOfRange {
                index: value,
                size: cod.size(),
            });
        }
        let table = vec![value; dom.size()];
        Ok(FiniteMap { dom, cod, table })
    }

    pub fn dom(&self) -> &FiniteSet {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// Whether this is an identity: equal carriers, every point fixed.
    pub fn is_identity(&self) -> bool {
        self.dom.size() == self.cod.size() && self.table.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Composite `self . first` (apply `first`, then `self`).
    pub fn compose(&self, first: &FiniteMap) -> Result<FiniteMap> {
        if first.cod.size() != self.dom.size() {
            return Err(Error::CarrierMismatch {
                expected: self.dom.size(),
                found: first.cod.size(),
            });
        }
        let table = first.table.iter().map(|&x| self.table[x]).collect();
        Ok(FiniteMap {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            table,
        })
    }

    /// Position of this map in the lexicographic enumeration of `[dom, cod]`.
    ///
    /// Callers guarantee the total count fits in `u64`; every enumeration in
    /// this crate is budget-checked before indices are taken.
    pub fn lex_index(&self) -> u64 {
        let base = self.cod.size() as u64;
        let mut idx = 0u64;
        for &v in &self.table {
            idx = idx * base + v as u64;
        }
        idx
    }
}

/// A subset of a carrier, as a bitmask (`bit i` = membership of element `i`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    carrier: FiniteSet,
    mask: u64,
}

impl Subset {
    pub fn new(carrier: FiniteSet, mask: u64) -> Result<Self> {
        if carrier.size() > MAX_SUBSET_CARRIER {
            return Err(Error::SizeCapExceeded {
                what: "subset carrier",
                required: carrier.size() as u128,
                cap: MAX_SUBSET_CARRIER as u128,
            });
        }
        if carrier.size() < 64 && (mask >> carrier.size()) != 0 {
            return Err(Error::IndexOutOfRange {
                index: (64 - mask.leading_zeros()) as usize - 1,
                size: carrier.size(),
            });
        }
        Ok(Subset { carrier, mask })
    }

    pub fn empty(carrier: FiniteSet) -> Self {
        Subset { carrier, mask: 0 }
    }

    pub fn full(carrier: FiniteSet) -> Result<Self> {
        let mask = full_mask(carrier.size())?;
        Ok(Subset { carrier, mask })
    }

    pub fn singleton(carrier: FiniteSet, x: usize) -> Result<Self> {
        if x >= carrier.size() {
            return Err(Error::IndexOutOfRange {
                index: x,
                size: carrier.size(),
            });
        }
        Ok(Subset {
            carrier,
            mask: 1 << x,
        })
    }

    pub fn from_members(carrier: FiniteSet, members: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &x in members {
            if x >= carrier.size() {
                return Err(Error::IndexOutOfRange {
                    index: x,
                    size: carrier.size(),
                });
            }
            mask |= 1 << x;
        }
        Ok(Subset { carrier, mask })
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.carrier.size() && (self.mask >> x) & 1 == 1
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.carrier.size())
            .filter(|&x| self.contains(x))
            .collect()
    }

    pub fn complement(&self) -> Subset {
        let full = full_mask(self.carrier.size()).expect("carrier already validated");
        Subset {
            carrier: self.carrier.clone(),
            mask: full & !self.mask,
        }
    }

    pub fn intersect(&self, other: &Subset) -> Subset {
        Subset {
            carrier: self.carrier.clone(),
            mask: self.mask & other.mask,
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        Subset {
            carrier: self.carrier.clone(),
            mask: self.mask | other.mask,
        }
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.mask & !other.mask == 0
    }

    /// The member set in its own right, together with its inclusion map.
    pub fn inclusion(&self) -> (FiniteSet, FiniteMap) {
        let members = self.members();
        let sub = FiniteSet::new(members.len());
        let incl = FiniteMap {
            dom: sub.clone(),
            cod: self.carrier.clone(),
            table: members,
        };
        (sub, incl)
    }
}

/// Bitmask of the full carrier `{0, .., size-1}`.
pub fn full_mask(size: usize) -> Result<u64> {
    if size > MAX_SUBSET_CARRIER {
        return Err(Error::SizeCapExceeded {
            what: "subset carrier",
            required: size as u128,
            cap: MAX_SUBSET_CARRIER as u128,
        });
    }
    Ok(if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    })
}

/// An ordered partition into possibly-empty, pairwise disjoint blocks that
/// cover the carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    carrier: FiniteSet,
    blocks: Vec<Subset>,
}

impl Partition {
    pub fn new(carrier: FiniteSet, blocks: Vec<Subset>) -> Result<Self> {
        let mut seen = 0u64;
        for b in &blocks {
            if b.carrier().size() != carrier.size() {
                return Err(Error::CarrierMismatch {
                    expected: carrier.size(),
                    found: b.carrier().size(),
                });
            }
            if seen & b.mask() != 0 {
                return Err(Error::InvalidStructure(
                    "partition blocks overlap".to_string(),
                ));
            }
            seen |= b.mask();
        }
        if seen != full_mask(carrier.size())? {
            return Err(Error::InvalidStructure(
                "partition blocks do not cover the carrier".to_string(),
            ));
        }
        Ok(Partition { carrier, blocks })
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// Preimage of a subset of the codomain.
pub fn preimage(f: &FiniteMap, target: &Subset) -> Result<Subset> {
    if target.carrier().size() != f.cod().size() {
        return Err(Error::CarrierMismatch {
            expected: f.cod().size(),
            found: target.carrier().size(),
        });
    }
    let mut mask = 0u64;
    for x in 0..f.dom().size() {
        if target.contains(f.apply(x)) {
            mask |= 1 << x;
        }
    }
    Ok(Subset {
        carrier: f.dom().clone(),
        mask,
    })
}

/// Image of the whole domain, as a subset of the codomain.
pub fn image(f: &FiniteMap) -> Subset {
    let mut mask = 0u64;
    for &v in f.table() {
        mask |= 1 << v;
    }
    Subset {
        carrier: f.cod().clone(),
        mask,
    }
}

/// Number of total functions `dom -> cod`, or a sizing error beyond `cap`.
pub fn count_maps(dom: &FiniteSet, cod: &FiniteSet, cap: u64) -> Result<u64> {
    let count = checked_pow(cod.size() as u128, dom.size() as u32);
    match count {
        Some(c) if c <= cap as u128 => Ok(c as u64),
        other => Err(Error::SizeCapExceeded {
            what: "map enumeration",
            required: other.unwrap_or(u128::MAX),
            cap: cap as u128,
        }),
    }
}

fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// All total functions `dom -> cod` in lexicographic table order.
///
/// The first map is the all-zero table and the last is the all-`(|cod|-1)`
/// table; [`FiniteMap::lex_index`] recovers each map's position.
pub fn enumerate_maps(dom: &FiniteSet, cod: &FiniteSet, cap: u64) -> Result<MapEnumerator> {
    let remaining = count_maps(dom, cod, cap)?;
    Ok(MapEnumerator {
        dom: dom.clone(),
        cod: cod.clone(),
        next_table: if remaining == 0 {
            None
        } else {
            Some(vec![0; dom.size()])
        },
    })
}

/// Iterator produced by [`enumerate_maps`].
#[derive(Debug)]
pub struct MapEnumerator {
    dom: FiniteSet,
    cod: FiniteSet,
    next_table: Option<Vec<usize>>,
}

impl Iterator for MapEnumerator {
    type Item = FiniteMap;

    fn next(&mut self) -> Option<FiniteMap> {
        let table = self.next_table.clone()?;
        let map = FiniteMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            table,
        };
        let t = self.next_table.as_mut().expect("checked above");
        let mut pos = t.len();
        loop {
            if pos == 0 {
                self.next_table = None;
                break;
            }
            pos -= 1;
            if t[pos] + 1 < self.cod.size() {
                t[pos] += 1;
                for entry in t.iter_mut().skip(pos + 1) {
                    *entry = 0;
                }
                break;
            }
        }
        Some(map)
    }
}

/// All ordered partitions of `carrier` into exactly `n` possibly-empty
/// blocks, in lexicographic order of the underlying block-assignment table.
///
/// There are `n^|carrier|` of them; a sizing error is returned beyond `cap`.
pub fn enumerate_partitions(
    carrier: &FiniteSet,
    n: usize,
    cap: u64,
) -> Result<impl Iterator<Item = Partition>> {
    let blocks_set = FiniteSet::new(n);
    let maps = enumerate_maps(carrier, &blocks_set, cap)?;
    let carrier = carrier.clone();
    Ok(maps.map(move |assignment| {
        let mut masks = vec![0u64; n];
        for x in 0..carrier.size() {
            masks[assignment.apply(x)] |= 1 << x;
        }
        Partition {
            carrier: carrier.clone(),
            blocks: masks
                .into_iter()
                .map(|mask| Subset {
                    carrier: carrier.clone(),
                    mask,
                })
                .collect(),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(n: usize) -> FiniteSet {
        FiniteSet::new(n)
    }

    #[test]
    fn labels_must_be_distinct() {
        assert!(FiniteSet::with_labels(vec!["a".into(), "b".into()]).is_ok());
        assert!(FiniteSet::with_labels(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn map_construction_validates_table() {
        assert!(FiniteMap::new(set(2), set(2), vec![0, 1]).is_ok());
        assert!(FiniteMap::new(set(2), set(2), vec![0]).is_err());
        assert!(FiniteMap::new(set(2), set(2), vec![0, 2]).is_err());
    }

    #[test]
    fn composition_and_identity() {
        let f = FiniteMap::new(set(2), set(3), vec![2, 0]).unwrap();
        let g = FiniteMap::new(set(3), set(2), vec![1, 1, 0]).unwrap();
        let gf = g.compose(&f).unwrap();
        assert_eq!(gf.table(), &[0, 1]);
        let id = FiniteMap::identity(&set(3));
        assert_eq!(id.compose(&f).unwrap(), f);
        assert!(f.compose(&g).is_ok());
        assert!(f.compose(&f).is_err());
    }

    #[test]
    fn enumeration_counts_match_the_power_formula() {
        for dom in 0..=4usize {
            for cod in 0..=4usize {
                let expected = (cod as u64).pow(dom as u32);
                let got = enumerate_maps(&set(dom), &set(cod), 1 << 20)
                    .unwrap()
                    .count();
                assert_eq!(got as u64, expected, "dom={dom} cod={cod}");
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_indexed() {
        let maps: Vec<_> = enumerate_maps(&set(3), &set(3), 1000).unwrap().collect();
        assert_eq!(maps.len(), 27);
        assert_eq!(maps[0].table(), &[0, 0, 0]);
        assert_eq!(maps[26].table(), &[2, 2, 2]);
        for (i, m) in maps.iter().enumerate() {
            assert_eq!(m.lex_index(), i as u64);
        }
        for w in maps.windows(2) {
            assert!(w[0].table() < w[1].table());
        }
    }

    #[test]
    fn enumeration_respects_the_cap() {
        let err = enumerate_maps(&set(10), &set(10), 1_000_000).unwrap_err();
        assert!(err.is_sizing());
    }

    #[test]
    fn preimage_and_image_basics() {
        let f = FiniteMap::new(set(3), set(2), vec![0, 1, 0]).unwrap();
        let ones = Subset::singleton(set(2), 1).unwrap();
        assert_eq!(preimage(&f, &ones).unwrap().members(), vec![1]);
        assert_eq!(image(&f).members(), vec![0, 1]);
        let c = FiniteMap::constant(set(3), set(2), 0).unwrap();
        assert_eq!(image(&c).members(), vec![0]);
        assert_eq!(preimage(&c, &ones).unwrap().members(), Vec::<usize>::new());
    }

    #[test]
    fn preimage_composes_exhaustively_on_small_carriers() {
        for a in 0..=3usize {
            for b in 0..=3usize {
                for c in 0..=3usize {
                    for f in enumerate_maps(&set(a), &set(b), 1 << 20).unwrap() {
                        for g in enumerate_maps(&set(b), &set(c), 1 << 20).unwrap() {
                            let gf = g.compose(&f).unwrap();
                            for mask in 0..(1u64 << c) {
                                let y = Subset::new(set(c), mask).unwrap();
                                let direct = preimage(&gf, &y).unwrap();
                                let staged = preimage(&f, &preimage(&g, &y).unwrap()).unwrap();
                                assert_eq!(direct.mask(), staged.mask());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn partition_validation() {
        let carrier = set(3);
        let b0 = Subset::from_members(carrier.clone(), &[0, 2]).unwrap();
        let b1 = Subset::from_members(carrier.clone(), &[1]).unwrap();
        let b2 = Subset::empty(carrier.clone());
        assert!(Partition::new(carrier.clone(), vec![b0.clone(), b1.clone(), b2]).is_ok());
        assert!(Partition::new(carrier.clone(), vec![b0.clone(), b0.clone()]).is_err());
        assert!(Partition::new(carrier, vec![b1]).is_err());
    }

    #[test]
    fn partition_enumeration_counts() {
        for x in 0..=4usize {
            for n in 0..=3usize {
                let expected = if x == 0 { 1 } else { (n as u64).pow(x as u32) };
                let parts: Vec<_> = enumerate_partitions(&set(x), n, 1 << 20).unwrap().collect();
                assert_eq!(parts.len() as u64, expected, "x={x} n={n}");
                for p in &parts {
                    assert_eq!(p.block_count(), n);
                    let rebuilt = Partition::new(set(x), p.blocks().to_vec());
                    assert!(rebuilt.is_ok());
                }
            }
        }
    }

    #[test]
    fn subset_algebra() {
        let s = Subset::from_members(set(4), &[0, 3]).unwrap();
        assert_eq!(s.complement().members(), vec![1, 2]);
        let t = Subset::from_members(set(4), &[0, 1]).unwrap();
        assert_eq!(s.intersect(&t).members(), vec![0]);
        assert_eq!(s.union(&t).members(), vec![0, 1, 3]);
        assert!(Subset::empty(set(4)).is_subset_of(&s));
        assert!(!s.is_subset_of(&t));
        let (members, incl) = s.inclusion();
        assert_eq!(members.size(), 2);
        assert_eq!(incl.table(), &[0, 3]);
    }

    #[test]
    fn subset_rejects_out_of_range_masks() {
        assert!(Subset::new(set(2), 0b100).is_err());
        assert!(Subset::new(set(2), 0b11).is_ok());
    }

    fn arb_map() -> impl Strategy<Value = FiniteMap> {
        (0usize..6, 1usize..6).prop_flat_map(|(dom, cod)| {
            prop::collection::vec(0..cod, dom).prop_map(move |table| {
                FiniteMap::new(FiniteSet::new(dom), FiniteSet::new(cod), table).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn image_size_is_bounded(f in arb_map()) {
            prop_assert!(image(&f).len() <= f.dom().size().min(f.cod().size()));
        }

        #[test]
        fn preimage_of_full_is_everything(f in arb_map()) {
            let full = Subset::full(f.cod().clone()).unwrap();
            prop_assert_eq!(preimage(&f, &full).unwrap().len(), f.dom().size());
        }
    }
}
