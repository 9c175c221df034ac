//! Codensity carriers over finite codomain families, and their comparison
//! with ultrafilters.
//!
//! Fixing a carrier `X` and a family of finite codomain sizes, the
//! codensity carrier is the limit of the canonical diagram over the
//! category of elements of maps out of `X`.  When the family is full and
//! reaches size three, that carrier is in bijection with the ultrafilters
//! on `X`: each ultrafilter contributes its integration point, and each
//! limit point is recovered as an ultrafilter from its coordinates at
//! characteristic maps.  Smaller or non-full families genuinely differ,
//! and the functions here expose both sides rather than hiding them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{category_of_elements, limit, ElementsCategory, LimitElement};
use crate::finset::{FiniteMap, FiniteSet, Subset};
use crate::integration::{characteristic_map, integrate};
use crate::ultrafilter::{enumerate_ultrafilters, SubsetFamily, Ultrafilter};
use crate::Caps;

/// A computed codensity carrier: the shape it was computed over and its
/// points in ascending choice order.
#[derive(Debug, Clone)]
pub struct CodensityCarrier {
    pub elements: ElementsCategory,
    pub points: Vec<LimitElement>,
}

impl CodensityCarrier {
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, point: &LimitElement) -> bool {
        self.points.binary_search(point).is_ok()
    }
}

/// Compute the codensity carrier of `x` over codomains of the given sizes.
pub fn codensity_carrier(
    sizes: &[usize],
    x: &FiniteSet,
    full: bool,
    caps: &Caps,
) -> Result<CodensityCarrier> {
    let elements = category_of_elements(sizes, x, full, caps)?;
    let points = limit(&elements.diagram(), caps)?;
    Ok(CodensityCarrier { elements, points })
}

/// The evaluation point of an element: its coordinate at `(b, f)` is
/// `f(x)`.  Natural for every shape, full or not.
pub fn unit_point(elements: &ElementsCategory, x: usize) -> Result<LimitElement> {
    if x >= elements.carrier.size() {
        return Err(Error::IndexOutOfRange {
            index: x,
            size: elements.carrier.size(),
        });
    }
    Ok(LimitElement {
        choices: elements.objects.iter().map(|o| o.map.apply(x)).collect(),
    })
}

/// The integration point of an ultrafilter: its coordinate at `(b, f)` is
/// the integral of `f`.
pub fn ultrafilter_to_point(elements: &ElementsCategory, u: &Ultrafilter) -> Result<LimitElement> {
    if u.carrier().size() != elements.carrier.size() {
        return Err(Error::CarrierMismatch {
            expected: elements.carrier.size(),
            found: u.carrier().size(),
        });
    }
    let choices = elements
        .objects
        .iter()
        .map(|o| integrate(u, &o.map))
        .collect::<Result<_>>()?;
    Ok(LimitElement { choices })
}

/// The membership family induced by a limit point: a subset belongs
/// exactly when the point's coordinate at the subset's characteristic map
/// is one.  Needs some codomain of size at least two.  The family is
/// returned as-is, whether or not it is an ultrafilter.
pub fn point_family(elements: &ElementsCategory, point: &LimitElement) -> Result<SubsetFamily> {
    let (size_index, &omega) = elements
        .sizes
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s >= 2)
        .max_by_key(|&(_, &s)| s)
        .ok_or_else(|| {
            Error::HypothesisViolated(
                "reading a family off a point needs a codomain of size at least two".to_string(),
            )
        })?;
    let x = &elements.carrier;
    let omega_set = FiniteSet::new(omega);
    let mut family = SubsetFamily::empty(x.clone());
    for mask in 0..=crate::finset::full_mask(x.size())? {
        let subset = Subset::new(x.clone(), mask)?;
        let chi = characteristic_map(&subset, &omega_set)?;
        let object = elements.object_index(size_index, &chi).ok_or_else(|| {
            Error::InvalidStructure("characteristic map missing from the shape".to_string())
        })?;
        if point.choices[object] == 1 {
            family.insert_mask(mask)?;
        }
    }
    Ok(family)
}

/// Read an ultrafilter off a limit point, validating that its membership
/// family really is one.
pub fn point_to_ultrafilter(
    elements: &ElementsCategory,
    point: &LimitElement,
) -> Result<Ultrafilter> {
    Ultrafilter::from_family(point_family(elements, point)?)
}

/// Whether evaluation is the unit: every evaluation point lies in the
/// carrier and equals the integration point of the principal ultrafilter
/// at its argument.  When the carrier set itself appears among the
/// codomain sizes, the unit must moreover be a bijection.
pub fn unit_is_evaluation(sizes: &[usize], x: &FiniteSet, caps: &Caps) -> Result<bool> {
    let carrier = codensity_carrier(sizes, x, true, caps)?;
    let mut units = Vec::with_capacity(x.size());
    for i in x.elements() {
        let unit = unit_point(&carrier.elements, i)?;
        if !carrier.contains(&unit) {
            return Ok(false);
        }
        let principal = Ultrafilter::principal(x.clone(), i)?;
        if ultrafilter_to_point(&carrier.elements, &principal)? != unit {
            return Ok(false);
        }
        units.push(unit);
    }
    if sizes.contains(&x.size()) {
        units.sort();
        units.dedup();
        if units.len() != x.size() || carrier.size() != x.size() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of comparing a codensity carrier with the ultrafilters on its
/// carrier set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodensityComparison {
    pub sizes: Vec<usize>,
    pub carrier_size: usize,
    pub codensity_size: usize,
    pub ultrafilter_count: usize,
    pub points_land_in_carrier: bool,
    pub injective: bool,
    pub recovery_roundtrips: bool,
}

impl CodensityComparison {
    pub fn bijective(&self) -> bool {
        self.codensity_size == self.ultrafilter_count
            && self.points_land_in_carrier
            && self.injective
            && self.recovery_roundtrips
    }
}

/// Verify that the codensity carrier over a full family reaching size
/// three is exactly the set of ultrafilters: integration points land in
/// the carrier injectively, and every carrier point recovers to an
/// ultrafilter whose integration point is itself.  Families that are
/// non-full or stop below three are refused; their carriers are still
/// computable with [`codensity_carrier`].
pub fn ultrafilter_comparison(
    sizes: &[usize],
    x: &FiniteSet,
    caps: &Caps,
) -> Result<CodensityComparison> {
    if sizes.iter().max().copied().unwrap_or(0) < 3 {
        return Err(Error::HypothesisViolated(
            "the comparison needs some codomain of size at least three".to_string(),
        ));
    }
    let carrier = codensity_carrier(sizes, x, true, caps)?;
    let ultrafilters = enumerate_ultrafilters(x)?;
    let mut points = Vec::with_capacity(ultrafilters.len());
    for u in &ultrafilters {
        points.push(ultrafilter_to_point(&carrier.elements, u)?);
    }
    let points_land_in_carrier = points.iter().all(|p| carrier.contains(p));
    let mut injective = true;
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            if a == b {
                injective = false;
            }
        }
    }
    let mut recovery_roundtrips = true;
    for point in &carrier.points {
        let recovered = point_to_ultrafilter(&carrier.elements, point)?;
        if ultrafilter_to_point(&carrier.elements, &recovered)? != *point {
            recovery_roundtrips = false;
        }
    }
    Ok(CodensityComparison {
        sizes: sizes.to_vec(),
        carrier_size: x.size(),
        codensity_size: carrier.size(),
        ultrafilter_count: ultrafilters.len(),
        points_land_in_carrier,
        injective,
        recovery_roundtrips,
    })
}

/// All maps `[X, B] -> B` commuting with postcomposition by every
/// endo-map of `B`, computed as the codensity carrier over the single
/// size.  The domain is indexed by the lexicographic enumeration of
/// `[X, B]`.
pub fn equivariant_maps(b: usize, x: &FiniteSet, caps: &Caps) -> Result<Vec<FiniteMap>> {
    let carrier = codensity_carrier(&[b], x, true, caps)?;
    let dom = FiniteSet::new(carrier.elements.objects.len());
    let cod = FiniteSet::new(b);
    carrier
        .points
        .iter()
        .map(|p| FiniteMap::new(dom.clone(), cod.clone(), p.choices.clone()))
        .collect()
}

/// Carrier size of the identities-only variant: with no connecting maps
/// the limit is the full product, of size `b^(b^|x|)`.
pub fn endomorphism_monad_carrier(b: usize, x: &FiniteSet, cap: u64) -> Result<u128> {
    let functions = (b as u128).checked_pow(x.size() as u32);
    let total = functions.and_then(|f| {
        if f > u32::MAX as u128 {
            None
        } else {
            (b as u128).checked_pow(f as u32)
        }
    });
    match total {
        Some(t) if t <= cap as u128 => Ok(t),
        Some(t) => Err(Error::SizeCapExceeded {
            what: "identities-only codensity carrier",
            required: t,
            cap: cap as u128,
        }),
        None => Err(Error::SizeCapExceeded {
            what: "identities-only codensity carrier",
            required: u128::MAX,
            cap: cap as u128,
        }),
    }
}

/// Largest modulus accepted by [`zn_fields_codensity`].
pub const MAX_ZN_MODULUS: u64 = 1_000_000;

/// Double dualization of `Z/n` into its prime fields.
///
/// The residue map into the product of `Z/p` over primes dividing `n`
/// factors as the quotient onto `Z/rad(n)` followed by an isomorphism,
/// and its kernel is the nilradical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZnFieldsReport {
    pub n: u64,
    pub prime_factors: Vec<(u64, u32)>,
    pub radical: u64,
    pub crt_bijective: bool,
    pub kernel_size: u64,
    pub kernel_is_nilradical: bool,
}

/// Prime factorization by trial division, smallest prime first.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidStructure("zero has no factorization".into()));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(factors)
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> Result<u64> {
    Ok(factorize(n)?.iter().map(|&(p, _)| p).product())
}

fn modpow(base: u64, mut exp: u32, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Residues modulo `n` that are nilpotent, in ascending order.
pub fn nilpotents(n: u64) -> Result<Vec<u64>> {
    if n == 0 || n > MAX_ZN_MODULUS {
        return Err(Error::SizeCapExceeded {
            what: "modulus",
            required: n as u128,
            cap: MAX_ZN_MODULUS as u128,
        });
    }
    // x is nilpotent mod n exactly when x^e = 0 for e = bit length of n,
    // since that exponent dominates every prime multiplicity in n.
    let e = 64 - n.leading_zeros();
    Ok((0..n).filter(|&x| modpow(x, e, n) == 0).collect())
}

/// Verify the shape of the double dualization of `Z/n` into prime fields.
pub fn zn_fields_codensity(n: u64) -> Result<ZnFieldsReport> {
    if n == 0 || n > MAX_ZN_MODULUS {
        return Err(Error::SizeCapExceeded {
            what: "modulus",
            required: n as u128,
            cap: MAX_ZN_MODULUS as u128,
        });
    }
    let prime_factors = factorize(n)?;
    let rad: u64 = prime_factors.iter().map(|&(p, _)| p).product();
    // Mixed-radix encoding of residue vectors; the residue map on Z/rad
    // is bijective exactly when no vector is hit twice.
    let mut seen = vec![false; rad as usize];
    let mut crt_bijective = true;
    for x in 0..rad {
        let mut idx = 0u64;
        for &(p, _) in &prime_factors {
            idx = idx * p + x % p;
        }
        if seen[idx as usize] {
            crt_bijective = false;
            break;
        }
        seen[idx as usize] = true;
    }
    let kernel: Vec<u64> = (0..n).filter(|&x| x % rad == 0).collect();
    let kernel_is_nilradical = kernel == nilpotents(n)?;
    Ok(ZnFieldsReport {
        n,
        prime_factors,
        radical: rad,
        crt_bijective,
        kernel_size: kernel.len() as u64,
        kernel_is_nilradical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::enumerate_maps;

    fn set(n: usize) -> FiniteSet {
        FiniteSet::new(n)
    }

    #[test]
    fn full_carriers_reaching_three_count_ultrafilters() {
        let caps = Caps::default();
        for x in 0..=3usize {
            let carrier = codensity_carrier(&[1, 2, 3], &set(x), true, &caps).unwrap();
            assert_eq!(carrier.size(), x, "x={x}");
        }
        assert_eq!(
            codensity_carrier(&[3], &set(2), true, &caps)
                .unwrap()
                .size(),
            2
        );
    }

    #[test]
    fn carriers_capped_at_two_are_strictly_larger() {
        let caps = Caps::default();
        let carrier = codensity_carrier(&[1, 2], &set(3), true, &caps).unwrap();
        assert_eq!(carrier.size(), 8);
    }

    #[test]
    fn comparison_is_bijective_when_the_family_reaches_three() {
        let caps = Caps::default();
        for x in 0..=3usize {
            let report = ultrafilter_comparison(&[1, 2, 3], &set(x), &caps).unwrap();
            assert!(report.bijective(), "x={x}: {report:?}");
            assert_eq!(report.codensity_size, x);
            assert_eq!(report.ultrafilter_count, x);
        }
        let report = ultrafilter_comparison(&[2, 3], &set(2), &caps).unwrap();
        assert!(report.bijective());
    }

    #[test]
    fn comparison_refuses_families_below_three() {
        let caps = Caps::default();
        let err = ultrafilter_comparison(&[1, 2], &set(3), &caps).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)));
    }

    #[test]
    fn unit_points_are_the_principal_integration_points() {
        let caps = Caps::default();
        for x in 1..=3usize {
            let carrier = codensity_carrier(&[1, 2, 3], &set(x), true, &caps).unwrap();
            for p in 0..x {
                let by_evaluation = unit_point(&carrier.elements, p).unwrap();
                let u = Ultrafilter::principal(set(x), p).unwrap();
                let by_integration = ultrafilter_to_point(&carrier.elements, &u).unwrap();
                assert_eq!(by_evaluation, by_integration);
                assert!(carrier.contains(&by_evaluation));
            }
        }
    }

    #[test]
    fn evaluation_is_the_unit_across_shapes() {
        let caps = Caps::default();
        for n in 0..=3usize {
            assert!(
                unit_is_evaluation(&[1, 2, 3], &set(n), &caps).unwrap(),
                "n={n}"
            );
        }
        // The carrier set among the codomains forces the unit to be a
        // bijection onto the whole carrier.
        assert!(unit_is_evaluation(&[2, 3], &set(3), &caps).unwrap());
        // Degenerate shapes still contain every evaluation point.
        assert!(unit_is_evaluation(&[1, 2], &set(3), &caps).unwrap());
    }

    /// Oracle: filter every raw map `[X, B] -> B` by the equivariance
    /// equation directly, without the limit machinery.
    fn equivariant_oracle(b: usize, x: usize) -> Vec<Vec<usize>> {
        let caps = Caps::default();
        let fs: Vec<FiniteMap> = enumerate_maps(&set(x), &set(b), caps.enumeration)
            .unwrap()
            .collect();
        let thetas: Vec<FiniteMap> = enumerate_maps(&set(b), &set(b), caps.enumeration)
            .unwrap()
            .collect();
        let composed_index: Vec<Vec<usize>> = thetas
            .iter()
            .map(|theta| {
                fs.iter()
                    .map(|f| {
                        let tf = theta.compose(f).unwrap();
                        fs.iter().position(|g| g.table() == tf.table()).unwrap()
                    })
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for phi in enumerate_maps(&set(fs.len()), &set(b), caps.enumeration).unwrap() {
            let equivariant = thetas.iter().enumerate().all(|(t, theta)| {
                (0..fs.len()).all(|i| phi.apply(composed_index[t][i]) == theta.apply(phi.apply(i)))
            });
            if equivariant {
                out.push(phi.table().to_vec());
            }
        }
        out
    }

    #[test]
    fn equivariant_maps_match_the_brute_force_oracle() {
        let caps = Caps::default();
        for (b, x) in [(2usize, 1usize), (2, 2), (2, 3), (3, 1), (3, 2)] {
            let fast: Vec<Vec<usize>> = equivariant_maps(b, &set(x), &caps)
                .unwrap()
                .iter()
                .map(|m| m.table().to_vec())
                .collect();
            let slow = equivariant_oracle(b, x);
            assert_eq!(fast, slow, "b={b} x={x}");
        }
    }

    #[test]
    fn equivariant_map_counts_are_frozen() {
        let caps = Caps::default();
        assert_eq!(equivariant_maps(3, &set(1), &caps).unwrap().len(), 1);
        assert_eq!(equivariant_maps(3, &set(2), &caps).unwrap().len(), 2);
        // A codomain of size two is not enough: five extra maps survive
        // alongside the three point evaluations.
        assert_eq!(equivariant_maps(2, &set(3), &caps).unwrap().len(), 8);
    }

    #[test]
    fn identities_only_carrier_is_the_full_product() {
        let caps = Caps::default();
        let carrier = codensity_carrier(&[2], &set(2), false, &caps).unwrap();
        assert_eq!(carrier.size(), 16);
        assert_eq!(
            endomorphism_monad_carrier(2, &set(2), caps.enumeration).unwrap(),
            16
        );
        assert_eq!(
            endomorphism_monad_carrier(3, &set(1), caps.enumeration).unwrap(),
            27
        );
        assert!(endomorphism_monad_carrier(4, &set(4), 1 << 20)
            .unwrap_err()
            .is_sizing());
    }

    #[test]
    fn ultrafilters_embed_into_the_identities_only_carrier() {
        let caps = Caps::default();
        let carrier = codensity_carrier(&[2], &set(2), false, &caps).unwrap();
        let points: Vec<LimitElement> = enumerate_ultrafilters(&set(2))
            .unwrap()
            .iter()
            .map(|u| ultrafilter_to_point(&carrier.elements, u).unwrap())
            .collect();
        assert_eq!(points.len(), 2);
        assert_ne!(points[0], points[1]);
        for p in &points {
            assert!(carrier.contains(p));
        }
    }

    #[test]
    fn factorization_and_radicals() {
        assert_eq!(factorize(1).unwrap(), Vec::new());
        assert_eq!(factorize(360).unwrap(), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97).unwrap(), vec![(97, 1)]);
        assert_eq!(radical(12).unwrap(), 6);
        assert_eq!(radical(8).unwrap(), 2);
        assert_eq!(radical(1).unwrap(), 1);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn zn_reports_match_hand_computations() {
        let r = zn_fields_codensity(12).unwrap();
        assert_eq!(r.radical, 6);
        assert!(r.crt_bijective);
        assert_eq!(r.kernel_size, 2);
        assert!(r.kernel_is_nilradical);

        let r = zn_fields_codensity(8).unwrap();
        assert_eq!(r.radical, 2);
        assert_eq!(r.kernel_size, 4);
        assert!(r.kernel_is_nilradical);
        assert_eq!(nilpotents(8).unwrap(), vec![0, 2, 4, 6]);

        let r = zn_fields_codensity(97).unwrap();
        assert_eq!(r.radical, 97);
        assert_eq!(r.kernel_size, 1);
        assert!(r.crt_bijective);

        let r = zn_fields_codensity(1).unwrap();
        assert_eq!(r.radical, 1);
        assert_eq!(r.kernel_size, 1);
        assert!(r.kernel_is_nilradical);
    }

    #[test]
    fn zn_reports_hold_across_a_range() {
        for n in 1..=400u64 {
            let r = zn_fields_codensity(n).unwrap();
            assert!(r.crt_bijective, "n={n}");
            assert!(r.kernel_is_nilradical, "n={n}");
            assert_eq!(r.kernel_size * r.radical, n, "n={n}");
        }
        assert!(zn_fields_codensity(MAX_ZN_MODULUS + 1).is_err());
        assert!(zn_fields_codensity(0).is_err());
    }
}
