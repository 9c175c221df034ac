//! Subset families, ultrafilters, and the ultrafilter monad on finite carriers.
//!
//! An ultrafilter is a filter that contains exactly one of `Y` and its
//! complement for every subset `Y`.  On a finite carrier every ultrafilter is
//! principal, and [`galvin_horn_exhaustive`] verifies, by scanning every
//! subset family, that being an ultrafilter is equivalent to the partition
//! condition for all block counts and to the partition condition for exactly
//! three blocks.
//!
//! The monad structure is computed from the double-power-set formula: a
//! subset `Y` belongs to `multiply(W)` exactly when the set of ultrafilters
//! containing `Y` belongs to `W`.  Its correctness on finite carriers is
//! established by the exhaustive law checks in the test suite rather than
//! assumed.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::finset::{full_mask, FiniteMap, FiniteSet, Subset};

/// Carrier-size bound for operations that materialize families of subsets.
const MAX_FAMILY_CARRIER: usize = 20;

/// A set of subsets of a fixed carrier, stored as sorted bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    carrier: FiniteSet,
    members: BTreeSet<u64>,
}

impl SubsetFamily {
    pub fn empty(carrier: FiniteSet) -> Self {
        SubsetFamily {
            carrier,
            members: BTreeSet::new(),
        }
    }

    /// Family from raw subset masks; every mask must fit the carrier.
    pub fn from_masks<I: IntoIterator<Item = u64>>(carrier: FiniteSet, masks: I) -> Result<Self> {
        let full = full_mask(carrier.size())?;
        let mut members = BTreeSet::new();
        for m in masks {
            if m & !full != 0 {
                return Err(Error::IndexOutOfRange {
                    index: (64 - m.leading_zeros()) as usize - 1,
                    size: carrier.size(),
                });
            }
            members.insert(m);
        }
        Ok(SubsetFamily { carrier, members })
    }

    /// The full power set of the carrier.
    pub fn power_set(carrier: FiniteSet) -> Result<Self> {
        let n = carrier.size();
        if n > MAX_FAMILY_CARRIER {
            return Err(Error::SizeCapExceeded {
                what: "power set family",
                required: n as u128,
                cap: MAX_FAMILY_CARRIER as u128,
            });
        }
        let members = (0..(1u64 << n)).collect();
        Ok(SubsetFamily { carrier, members })
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.members.contains(&mask)
    }

    pub fn contains(&self, subset: &Subset) -> bool {
        self.contains_mask(subset.mask())
    }

    pub fn insert_mask(&mut self, mask: u64) -> Result<()> {
        let full = full_mask(self.carrier.size())?;
        if mask & !full != 0 {
            return Err(Error::IndexOutOfRange {
                index: (64 - mask.leading_zeros()) as usize - 1,
                size: self.carrier.size(),
            });
        }
        self.members.insert(mask);
        Ok(())
    }

    /// Member masks in ascending order.
    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().copied()
    }

    pub fn member_subsets(&self) -> Vec<Subset> {
        self.members
            .iter()
            .map(|&m| Subset::new(self.carrier.clone(), m).expect("member masks are validated"))
            .collect()
    }
}

/// True when the family is a filter: it contains the whole carrier, is
/// closed upward, and is closed under binary intersection.
///
/// Upward closure is checked by single-element enlargements, which suffices
/// because any superset is reached by a chain of them.
pub fn is_filter(family: &SubsetFamily) -> bool {
    let n = family.carrier.size();
    let full = full_mask(n).expect("family carriers fit the subset calculus");
    if !family.contains_mask(full) {
        return false;
    }
    for &m in &family.members {
        for x in 0..n {
            if (m >> x) & 1 == 0 && !family.contains_mask(m | (1 << x)) {
                return false;
            }
        }
    }
    for &a in &family.members {
        for &b in &family.members {
            if b > a {
                break;
            }
            if !family.contains_mask(a & b) {
                return false;
            }
        }
    }
    true
}

/// True when the family is an ultrafilter: a filter containing exactly one
/// of `Y` and its complement for every subset `Y`.
pub fn is_ultrafilter(family: &SubsetFamily) -> bool {
    let n = family.carrier.size();
    if n == 0 {
        // The only candidate pair is the empty set against itself, so the
        // "exactly one" requirement is unsatisfiable.
        return false;
    }
    let full = full_mask(n).expect("family carriers fit the subset calculus");
    if family.members.len() as u128 != 1u128 << (n - 1) {
        return false;
    }
    for &m in &family.members {
        if family.contains_mask(full & !m) {
            return false;
        }
    }
    is_filter(family)
}

/// True when every ordered partition of the carrier into `n` possibly-empty
/// blocks has exactly one block in the family.
pub fn satisfies_partition_condition(family: &SubsetFamily, n: usize, cap: u64) -> Result<bool> {
    let partitions = crate::finset::enumerate_partitions(&family.carrier, n, cap)?;
    for p in partitions {
        let hits = p
            .blocks()
            .iter()
            .filter(|b| family.contains_mask(b.mask()))
            .count();
        if hits != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True when the partition condition holds for every block count up to
/// `|carrier| + 1`, which on a finite carrier settles it for all counts.
pub fn satisfies_partition_condition_all(family: &SubsetFamily, cap: u64) -> Result<bool> {
    for n in 0..=family.carrier.size() + 1 {
        if !satisfies_partition_condition(family, n, cap)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the exhaustive scan over every subset family on a carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GalvinHornReport {
    pub carrier_size: usize,
    /// Total number of subset families scanned: `2^(2^n)`.
    pub family_count: u64,
    pub ultrafilter_count: u64,
    /// Families passing the partition condition for every block count.
    pub partition_all_count: u64,
    /// Families passing the partition condition for exactly three blocks.
    pub partition_three_count: u64,
    /// True when the three classifications agree on every single family.
    pub classifications_agree: bool,
    /// True when the ultrafilters found are exactly the principal ones.
    pub ultrafilters_principal: bool,
}

/// Scan every subset family on `x` and classify it three ways: ultrafilter,
/// partition condition for all block counts, partition condition for three
/// blocks.  Requires `|x| <= 4`; the scan is over `2^(2^|x|)` families.
pub fn galvin_horn_exhaustive(x: &FiniteSet) -> Result<GalvinHornReport> {
    let n = x.size();
    if n > 4 {
        return Err(Error::SizeCapExceeded {
            what: "exhaustive family scan",
            required: n as u128,
            cap: 4,
        });
    }
    let subsets = 1usize << n;
    let family_count = 1u64 << subsets;
    let full = (subsets - 1) as u64;

    // Partitions per block count, flattened to block-mask lists.  Block
    // counts up to n + 1 settle the all-counts condition on an n-element
    // carrier; the three-block list is kept separately.
    let collect = |blocks: usize| -> Result<Vec<Vec<u64>>> {
        Ok(crate::finset::enumerate_partitions(x, blocks, 1 << 20)?
            .map(|p| p.blocks().iter().map(|b| b.mask()).collect())
            .collect())
    };
    let mut partitions_all: Vec<Vec<Vec<u64>>> = Vec::new();
    for blocks in 0..=n + 1 {
        partitions_all.push(collect(blocks)?);
    }
    let partitions_three = collect(3)?;

    let in_family = |fam: u64, subset: u64| (fam >> subset) & 1 == 1;
    let partition_ok = |fam: u64, partitions: &[Vec<u64>]| {
        partitions.iter().all(|p| {
            let hits = p.iter().filter(|&&b| in_family(fam, b)).count();
            hits == 1
        })
    };

    let mut ultrafilter_count = 0u64;
    let mut partition_all_count = 0u64;
    let mut partition_three_count = 0u64;
    let mut agree = true;
    let mut principal = true;

    for fam in 0..family_count {
        let mut uf = in_family(fam, full);
        // Exactly one of each complementary pair.
        if uf {
            for y in 0..subsets as u64 {
                if in_family(fam, y) == in_family(fam, full & !y) {
                    uf = false;
                    break;
                }
            }
        }
        // Upward closure and binary intersections.
        if uf {
            'filter: for y in 0..subsets as u64 {
                if !in_family(fam, y) {
                    continue;
                }
                for bit in 0..n {
                    if (y >> bit) & 1 == 0 && !in_family(fam, y | (1 << bit)) {
                        uf = false;
                        break 'filter;
                    }
                }
                for z in 0..=y {
                    if in_family(fam, z) && !in_family(fam, y & z) {
                        uf = false;
                        break 'filter;
                    }
                }
            }
        }

        let p_all = partitions_all.iter().all(|ps| partition_ok(fam, ps));
        let p_three = partition_ok(fam, &partitions_three);

        if uf {
            ultrafilter_count += 1;
            // A principal family is determined by its witness point: the
            // unique x whose singleton belongs to the family.
            let witness = (0..n).find(|&bit| in_family(fam, 1 << bit));
            match witness {
                Some(w) => {
                    for y in 0..subsets as u64 {
                        if in_family(fam, y) != ((y >> w) & 1 == 1) {
                            principal = false;
                        }
                    }
                }
                None => principal = false,
            }
        }
        if p_all {
            partition_all_count += 1;
        }
        if p_three {
            partition_three_count += 1;
        }
        if uf != p_all || uf != p_three {
            agree = false;
        }
    }

    Ok(GalvinHornReport {
        carrier_size: n,
        family_count,
        ultrafilter_count,
        partition_all_count,
        partition_three_count,
        classifications_agree: agree,
        ultrafilters_principal: principal,
    })
}

/// An ultrafilter on a finite carrier, with its witness point.
///
/// On finite carriers every ultrafilter is the family of sets containing a
/// single point; the constructor finds that point and the invariant is
/// re-validated whenever an ultrafilter is built from raw family data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultrafilter {
    family: SubsetFamily,
    witness: usize,
}

impl Ultrafilter {
    /// The principal ultrafilter of all subsets containing `x`.
    pub fn principal(carrier: FiniteSet, x: usize) -> Result<Self> {
        let n = carrier.size();
        if x >= n {
            return Err(Error::IndexOutOfRange { index: x, size: n });
        }
        if n > MAX_FAMILY_CARRIER {
            return Err(Error::SizeCapExceeded {
                what: "principal ultrafilter family",
                required: n as u128,
                cap: MAX_FAMILY_CARRIER as u128,
            });
        }
        let members = (0..(1u64 << n)).filter(|m| (m >> x) & 1 == 1).collect();
        Ok(Ultrafilter {
            family: SubsetFamily { carrier, members },
            witness: x,
        })
    }

    /// Validate an arbitrary family as an ultrafilter and locate its witness.
    pub fn from_family(family: SubsetFamily) -> Result<Self> {
        if !is_ultrafilter(&family) {
            return Err(Error::InvalidStructure(
                "family is not an ultrafilter".to_string(),
            ));
        }
        let witness = family
            .carrier
            .elements()
            .find(|&x| family.contains_mask(1 << x))
            .ok_or_else(|| {
                Error::InvalidStructure("ultrafilter contains no singleton".to_string())
            })?;
        Ok(Ultrafilter { family, witness })
    }

    pub fn family(&self) -> &SubsetFamily {
        &self.family
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.family.carrier
    }

    pub fn witness(&self) -> usize {
        self.witness
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.family.contains_mask(mask)
    }

    pub fn contains(&self, subset: &Subset) -> bool {
        self.family.contains(subset)
    }
}

/// The monad unit at `x`: the principal ultrafilter.
pub fn unit(carrier: &FiniteSet, x: usize) -> Result<Ultrafilter> {
    Ultrafilter::principal(carrier.clone(), x)
}

/// Every ultrafilter on the carrier, indexed by witness point.
///
/// This order is the enumeration convention used wherever a set of
/// ultrafilters is itself treated as a finite carrier.
pub fn enumerate_ultrafilters(x: &FiniteSet) -> Result<Vec<Ultrafilter>> {
    x.elements()
        .map(|i| Ultrafilter::principal(x.clone(), i))
        .collect()
}

/// The set of ultrafilters on `x` as a carrier in enumeration order.
pub fn ultrafilter_carrier(x: &FiniteSet) -> FiniteSet {
    FiniteSet::new(x.size())
}

/// Pushforward along `f`: the sets whose preimage belongs to `u`.
pub fn pushforward(f: &FiniteMap, u: &Ultrafilter) -> Result<Ultrafilter> {
    if u.carrier().size() != f.dom().size() {
        return Err(Error::CarrierMismatch {
            expected: f.dom().size(),
            found: u.carrier().size(),
        });
    }
    let m = f.cod().size();
    if m > MAX_FAMILY_CARRIER {
        return Err(Error::SizeCapExceeded {
            what: "pushforward family",
            required: m as u128,
            cap: MAX_FAMILY_CARRIER as u128,
        });
    }
    let mut members = BTreeSet::new();
    for target in 0..(1u64 << m) {
        let mut pre = 0u64;
        for x in 0..f.dom().size() {
            if (target >> f.apply(x)) & 1 == 1 {
                pre |= 1 << x;
            }
        }
        if u.contains_mask(pre) {
            members.insert(target);
        }
    }
    let family = SubsetFamily {
        carrier: f.cod().clone(),
        members,
    };
    let pushed = Ultrafilter::from_family(family)?;
    debug_assert_eq!(pushed.witness(), f.apply(u.witness()));
    Ok(pushed)
}

/// Pushforward of an arbitrary family (no ultrafilter requirement).
pub fn family_pushforward(f: &FiniteMap, fam: &SubsetFamily) -> Result<SubsetFamily> {
    if fam.carrier().size() != f.dom().size() {
        return Err(Error::CarrierMismatch {
            expected: f.dom().size(),
            found: fam.carrier().size(),
        });
    }
    let m = f.cod().size();
    if m > MAX_FAMILY_CARRIER {
        return Err(Error::SizeCapExceeded {
            what: "pushforward family",
            required: m as u128,
            cap: MAX_FAMILY_CARRIER as u128,
        });
    }
    let mut members = BTreeSet::new();
    for target in 0..(1u64 << m) {
        let mut pre = 0u64;
        for x in 0..f.dom().size() {
            if (target >> f.apply(x)) & 1 == 1 {
                pre |= 1 << x;
            }
        }
        if fam.contains_mask(pre) {
            members.insert(target);
        }
    }
    Ok(SubsetFamily {
        carrier: f.cod().clone(),
        members,
    })
}

/// Monad multiplication via the double-power-set formula.
///
/// `w` lives on the enumerated set of ultrafilters on `x` (see
/// [`enumerate_ultrafilters`]); a subset `Y` of `x` belongs to the result
/// exactly when `{i : Y in U_i}` belongs to `w`.
pub fn multiply(x: &FiniteSet, w: &Ultrafilter) -> Result<Ultrafilter> {
    let us = enumerate_ultrafilters(x)?;
    if w.carrier().size() != us.len() {
        return Err(Error::CarrierMismatch {
            expected: us.len(),
            found: w.carrier().size(),
        });
    }
    let n = x.size();
    let mut members = BTreeSet::new();
    for y in 0..(1u64 << n) {
        let mut y_hat = 0u64;
        for (i, u) in us.iter().enumerate() {
            if u.contains_mask(y) {
                y_hat |= 1 << i;
            }
        }
        if w.contains_mask(y_hat) {
            members.insert(y);
        }
    }
    Ultrafilter::from_family(SubsetFamily {
        carrier: x.clone(),
        members,
    })
}

/// The multiplication tabulated as a map `U(U(x)) -> U(x)` on enumerations.
pub fn multiplication_map(x: &FiniteSet) -> Result<FiniteMap> {
    let ux = ultrafilter_carrier(x);
    let uux = ultrafilter_carrier(&ux);
    let mut table = Vec::with_capacity(uux.size());
    for w in enumerate_ultrafilters(&ux)? {
        table.push(multiply(x, &w)?.witness());
    }
    FiniteMap::new(uux, ux, table)
}

/// An endofunctor of finite sets, tabulated up to a carrier-size cap and
/// validated against the functor laws at construction.
pub struct EndofunctorData {
    cap: usize,
    on_object: Box<dyn Fn(&FiniteSet) -> FiniteSet + Send + Sync>,
    on_map: Box<dyn Fn(&FiniteMap) -> FiniteMap + Send + Sync>,
}

impl EndofunctorData {
    /// Wrap object and arrow assignments, checking identity and composition
    /// preservation exhaustively on all carriers of size at most `cap`.
    pub fn new(
        cap: usize,
        on_object: Box<dyn Fn(&FiniteSet) -> FiniteSet + Send + Sync>,
        on_map: Box<dyn Fn(&FiniteMap) -> FiniteMap + Send + Sync>,
    ) -> Result<Self> {
        let data = EndofunctorData {
            cap,
            on_object,
            on_map,
        };
        data.validate()?;
        Ok(data)
    }

    fn validate(&self) -> Result<()> {
        let cap_budget = 1u64 << 20;
        for n in 0..=self.cap {
            let x = FiniteSet::new(n);
            let fx = self.on_object(&x);
            let id_image = self.on_map(&FiniteMap::identity(&x));
            if id_image != FiniteMap::identity(&fx) {
                return Err(Error::InvalidStructure(format!(
                    "endofunctor does not preserve the identity on a {n}-element carrier"
                )));
            }
        }
        for a in 0..=self.cap {
            for b in 0..=self.cap {
                let xa = FiniteSet::new(a);
                let xb = FiniteSet::new(b);
                for f in crate::finset::enumerate_maps(&xa, &xb, cap_budget)? {
                    let ff = self.on_map(&f);
                    if ff.dom() != &self.on_object(&xa) || ff.cod() != &self.on_object(&xb) {
                        return Err(Error::InvalidStructure(
                            "endofunctor sends a map outside its image carriers".to_string(),
                        ));
                    }
                    for c in 0..=self.cap {
                        let xc = FiniteSet::new(c);
                        for g in crate::finset::enumerate_maps(&xb, &xc, cap_budget)? {
                            let composite = self.on_map(&g.compose(&f)?);
                            let staged = self.on_map(&g).compose(&ff)?;
                            if composite != staged {
                                return Err(Error::InvalidStructure(
                                    "endofunctor does not preserve composition".to_string(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn on_object(&self, x: &FiniteSet) -> FiniteSet {
        (self.on_object)(x)
    }

    pub fn on_map(&self, f: &FiniteMap) -> FiniteMap {
        (self.on_map)(f)
    }

    /// The identity endofunctor.
    pub fn identity(cap: usize) -> Result<Self> {
        EndofunctorData::new(
            cap,
            Box::new(|x: &FiniteSet| x.clone()),
            Box::new(|f: &FiniteMap| f.clone()),
        )
    }

    /// The ultrafilter endofunctor on enumerated carriers: a carrier maps to
    /// its set of ultrafilters and a map acts by pushforward, which on
    /// witness points is the original table.
    pub fn ultrafilter_functor(cap: usize) -> Result<Self> {
        EndofunctorData::new(
            cap,
            Box::new(|x: &FiniteSet| FiniteSet::new(x.size())),
            Box::new(|f: &FiniteMap| {
                FiniteMap::new(
                    FiniteSet::new(f.dom().size()),
                    FiniteSet::new(f.cod().size()),
                    f.table().to_vec(),
                )
                .expect("pushforward tables reuse validated tables")
            }),
        )
    }

    /// The constant endofunctor at `value`, sending every map to the identity.
    pub fn constant(value: FiniteSet, cap: usize) -> Result<Self> {
        let v2 = value.clone();
        EndofunctorData::new(
            cap,
            Box::new(move |_: &FiniteSet| value.clone()),
            Box::new(move |_: &FiniteMap| FiniteMap::identity(&v2)),
        )
    }
}

/// The canonical family attached to an element of `S(x)` for an endofunctor
/// `S`: the subsets `Y` of `x` whose inclusion carries `sigma` into its
/// image.  When `S` preserves finite coproducts this family is the component
/// at `sigma` of the unique transformation into the ultrafilter functor.
pub fn borger_alpha(s: &EndofunctorData, x: &FiniteSet, sigma: usize) -> Result<SubsetFamily> {
    if x.size() > s.cap() {
        return Err(Error::SizeCapExceeded {
            what: "endofunctor carrier cap",
            required: x.size() as u128,
            cap: s.cap() as u128,
        });
    }
    let sx = s.on_object(x);
    if sigma >= sx.size() {
        return Err(Error::IndexOutOfRange {
            index: sigma,
            size: sx.size(),
        });
    }
    let mut family = SubsetFamily::empty(x.clone());
    for mask in 0..(1u64 << x.size()) {
        let subset = Subset::new(x.clone(), mask)?;
        let (_, incl) = subset.inclusion();
        let s_incl = s.on_map(&incl);
        if s_incl.table().contains(&sigma) {
            family.insert_mask(mask)?;
        }
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::enumerate_maps;

    fn set(n: usize) -> FiniteSet {
        FiniteSet::new(n)
    }

    fn family(n: usize, masks: &[u64]) -> SubsetFamily {
        SubsetFamily::from_masks(set(n), masks.iter().copied()).unwrap()
    }

    #[test]
    fn filter_examples() {
        let x = set(3);
        assert!(is_filter(&SubsetFamily::power_set(x.clone()).unwrap()));
        assert!(is_filter(&family(3, &[0b111])));
        assert!(!is_filter(&SubsetFamily::empty(x)));
        assert!(!is_filter(&family(3, &[0b001])));
        assert!(is_filter(&family(3, &[0b011, 0b111, 0b101, 0b001])));
    }

    #[test]
    fn ultrafilter_examples() {
        assert!(is_ultrafilter(
            Ultrafilter::principal(set(3), 1).unwrap().family()
        ));
        assert!(!is_ultrafilter(&SubsetFamily::power_set(set(3)).unwrap()));
        // Subsets with at least two of three elements: complement dichotomy
        // holds but intersection closure fails.
        let two_plus = family(3, &[0b011, 0b101, 0b110, 0b111]);
        assert!(!is_ultrafilter(&two_plus));
        assert!(!is_filter(&two_plus));
    }

    #[test]
    fn no_ultrafilters_on_the_empty_carrier() {
        assert!(!is_ultrafilter(&family(0, &[])));
        assert!(!is_ultrafilter(&family(0, &[0])));
    }

    #[test]
    fn partition_condition_sharpness_at_three_blocks() {
        let two_plus = family(3, &[0b011, 0b101, 0b110, 0b111]);
        assert!(satisfies_partition_condition(&two_plus, 2, 1 << 20).unwrap());
        assert!(!satisfies_partition_condition(&two_plus, 3, 1 << 20).unwrap());
    }

    #[test]
    fn partition_condition_on_principal_ultrafilters() {
        for n in 1..=3usize {
            for x in 0..n {
                let u = Ultrafilter::principal(set(n), x).unwrap();
                for blocks in 0..=n + 1 {
                    assert!(
                        satisfies_partition_condition(u.family(), blocks, 1 << 20).unwrap(),
                        "n={n} x={x} blocks={blocks}"
                    );
                }
            }
        }
    }

    #[test]
    fn exhaustive_scan_small_carriers() {
        let expected = [(0usize, 2u64, 0u64), (1, 4, 1), (2, 16, 2), (3, 256, 3)];
        for (n, families, ultrafilters) in expected {
            let report = galvin_horn_exhaustive(&set(n)).unwrap();
            assert_eq!(report.family_count, families, "n={n}");
            assert_eq!(report.ultrafilter_count, ultrafilters, "n={n}");
            assert_eq!(report.partition_all_count, ultrafilters, "n={n}");
            assert_eq!(report.partition_three_count, ultrafilters, "n={n}");
            assert!(report.classifications_agree, "n={n}");
            assert!(report.ultrafilters_principal, "n={n}");
        }
    }

    #[test]
    fn exhaustive_scan_rejects_large_carriers() {
        assert!(galvin_horn_exhaustive(&set(5)).unwrap_err().is_sizing());
    }

    #[test]
    fn scan_agrees_with_the_public_predicates() {
        let x = set(2);
        let mut uf = 0u64;
        let mut pall = 0u64;
        let mut p3 = 0u64;
        for fam_mask in 0..16u64 {
            let masks: Vec<u64> = (0..4).filter(|s| (fam_mask >> s) & 1 == 1).collect();
            let fam = SubsetFamily::from_masks(x.clone(), masks).unwrap();
            if is_ultrafilter(&fam) {
                uf += 1;
            }
            if satisfies_partition_condition_all(&fam, 1 << 20).unwrap() {
                pall += 1;
            }
            if satisfies_partition_condition(&fam, 3, 1 << 20).unwrap() {
                p3 += 1;
            }
        }
        let report = galvin_horn_exhaustive(&x).unwrap();
        assert_eq!(report.ultrafilter_count, uf);
        assert_eq!(report.partition_all_count, pall);
        assert_eq!(report.partition_three_count, p3);
    }

    #[test]
    fn pushforward_examples() {
        let u = Ultrafilter::principal(set(3), 2).unwrap();
        let id = FiniteMap::identity(&set(3));
        assert_eq!(pushforward(&id, &u).unwrap(), u);
        let c = FiniteMap::constant(set(3), set(2), 0).unwrap();
        assert_eq!(pushforward(&c, &u).unwrap().witness(), 0);
        let f = FiniteMap::new(set(3), set(2), vec![1, 0, 1]).unwrap();
        assert_eq!(pushforward(&f, &u).unwrap().witness(), 1);
    }

    #[test]
    fn pushforward_is_functorial_on_small_carriers() {
        for a in 1..=3usize {
            for b in 1..=3usize {
                for c in 1..=3usize {
                    for f in enumerate_maps(&set(a), &set(b), 1 << 20).unwrap() {
                        for g in enumerate_maps(&set(b), &set(c), 1 << 20).unwrap() {
                            let gf = g.compose(&f).unwrap();
                            for x in 0..a {
                                let u = Ultrafilter::principal(set(a), x).unwrap();
                                let direct = pushforward(&gf, &u).unwrap();
                                let staged =
                                    pushforward(&g, &pushforward(&f, &u).unwrap()).unwrap();
                                assert_eq!(direct, staged);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unit_is_natural() {
        for a in 1..=3usize {
            for b in 1..=3usize {
                for f in enumerate_maps(&set(a), &set(b), 1 << 20).unwrap() {
                    for x in 0..a {
                        let lhs = pushforward(&f, &unit(&set(a), x).unwrap()).unwrap();
                        let rhs = unit(&set(b), f.apply(x)).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn multiplication_collapses_iterated_principals() {
        let x = set(3);
        let ux = ultrafilter_carrier(&x);
        for i in 0..3 {
            let w = Ultrafilter::principal(ux.clone(), i).unwrap();
            let mu = multiply(&x, &w).unwrap();
            assert_eq!(mu, Ultrafilter::principal(x.clone(), i).unwrap());
        }
    }

    #[test]
    fn multiplication_rejects_carrier_mismatch() {
        let w = Ultrafilter::principal(set(2), 0).unwrap();
        assert!(multiply(&set(3), &w).is_err());
    }

    #[test]
    fn unit_laws_hold_up_to_three_points() {
        for n in 0..=3usize {
            let x = set(n);
            let ux = ultrafilter_carrier(&x);
            for i in 0..n {
                // mu . unit_{U(x)} = id
                let left = multiply(&x, &unit(&ux, i).unwrap()).unwrap();
                assert_eq!(left.witness(), i);
                // mu . U(unit_x) = id: push the principal at i forward along
                // the unit viewed as a map x -> U(x), then multiply.
                let unit_map = FiniteMap::new(x.clone(), ux.clone(), (0..n).collect()).unwrap();
                let pushed = pushforward(&unit_map, &unit(&x, i).unwrap()).unwrap();
                let right = multiply(&x, &pushed).unwrap();
                assert_eq!(right.witness(), i);
            }
        }
    }

    #[test]
    fn multiplication_is_associative_up_to_two_points() {
        for n in 0..=2usize {
            let x = set(n);
            let ux = ultrafilter_carrier(&x);
            let mu_x = multiplication_map(&x).unwrap();
            let mu_ux = multiplication_map(&ux).unwrap();
            // U(mu_x) on enumerations reuses mu_x's table.
            let u_mu_x = FiniteMap::new(
                ultrafilter_carrier(&ultrafilter_carrier(&ux)),
                ultrafilter_carrier(&ux),
                mu_x.table().to_vec(),
            )
            .unwrap();
            let lhs = mu_x.compose(&mu_ux).unwrap();
            let rhs = mu_x.compose(&u_mu_x).unwrap();
            assert_eq!(lhs.table(), rhs.table(), "n={n}");
        }
    }

    #[test]
    fn borger_alpha_on_the_identity_functor_is_principal() {
        for n in 1..=4usize {
            let s = EndofunctorData::identity(n).unwrap();
            for sigma in 0..n {
                let fam = borger_alpha(&s, &set(n), sigma).unwrap();
                let expected = Ultrafilter::principal(set(n), sigma).unwrap();
                assert_eq!(&fam, expected.family());
            }
        }
    }

    #[test]
    fn borger_alpha_on_the_ultrafilter_functor_is_the_identity() {
        for n in 1..=3usize {
            let s = EndofunctorData::ultrafilter_functor(n).unwrap();
            for (i, u) in enumerate_ultrafilters(&set(n)).unwrap().iter().enumerate() {
                let fam = borger_alpha(&s, &set(n), i).unwrap();
                assert_eq!(&fam, u.family());
            }
        }
    }

    #[test]
    fn borger_alpha_on_a_constant_functor_is_the_power_set() {
        let s = EndofunctorData::constant(set(1), 3).unwrap();
        for n in 1..=3usize {
            let fam = borger_alpha(&s, &set(n), 0).unwrap();
            assert_eq!(fam, SubsetFamily::power_set(set(n)).unwrap());
        }
    }

    #[test]
    fn borger_alpha_is_natural_for_the_supplied_functors() {
        let cap = 3;
        let functors = [
            EndofunctorData::identity(cap).unwrap(),
            EndofunctorData::ultrafilter_functor(cap).unwrap(),
            EndofunctorData::constant(set(1), cap).unwrap(),
            EndofunctorData::constant(set(2), cap).unwrap(),
        ];
        for s in &functors {
            for a in 1..=cap {
                for b in 1..=cap {
                    for f in enumerate_maps(&set(a), &set(b), 1 << 20).unwrap() {
                        let sf = s.on_map(&f);
                        for sigma in 0..s.on_object(&set(a)).size() {
                            let lhs = borger_alpha(s, &set(b), sf.apply(sigma)).unwrap();
                            let rhs =
                                family_pushforward(&f, &borger_alpha(s, &set(a), sigma).unwrap())
                                    .unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn endofunctor_validation_rejects_non_functors() {
        // Identity on objects, but collapsing cross-carrier maps breaks
        // composition through a middle carrier of a different size.
        let broken = EndofunctorData::new(
            3,
            Box::new(|x: &FiniteSet| x.clone()),
            Box::new(|f: &FiniteMap| {
                if f.dom().size() == f.cod().size() {
                    f.clone()
                } else {
                    FiniteMap::constant(f.dom().clone(), f.cod().clone(), 0)
                        .expect("nonempty codomains in the validation sweep")
                }
            }),
        );
        assert!(broken.is_err());
        let not_identity = EndofunctorData::new(
            2,
            Box::new(|x: &FiniteSet| x.clone()),
            Box::new(|f: &FiniteMap| {
                FiniteMap::constant(f.dom().clone(), f.cod().clone(), 0)
                    .unwrap_or_else(|_| f.clone())
            }),
        );
        assert!(not_identity.is_err());
    }
}
