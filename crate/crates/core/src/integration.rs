//! Integration of finitely-valued maps against an ultrafilter.
//!
//! The integral of `f : X -> B` against an ultrafilter on `X` is the unique
//! value whose preimage belongs to the ultrafilter.  It is computed by that
//! defining property, not by evaluating at the witness point; the agreement
//! of the two is a checked fact, not an assumption.

use crate::error::{Error, Result};
use crate::finset::{enumerate_maps, FiniteMap, FiniteSet, Subset};
use crate::ultrafilter::{enumerate_ultrafilters, pushforward, SubsetFamily, Ultrafilter};

/// The unique `b` in the codomain of `f` whose preimage belongs to `u`.
pub fn integrate(u: &Ultrafilter, f: &FiniteMap) -> Result<usize> {
    if u.carrier().size() != f.dom().size() {
        return Err(Error::CarrierMismatch {
            expected: f.dom().size(),
            found: u.carrier().size(),
        });
    }
    let mut found = None;
    for b in 0..f.cod().size() {
        let mut pre = 0u64;
        for x in 0..f.dom().size() {
            if f.apply(x) == b {
                pre |= 1 << x;
            }
        }
        if u.contains_mask(pre) {
            if found.is_some() {
                return Err(Error::InvalidStructure(
                    "two values integrate against the same ultrafilter".to_string(),
                ));
            }
            found = Some(b);
        }
    }
    found.ok_or_else(|| {
        Error::InvalidStructure("no value integrates against the ultrafilter".to_string())
    })
}

/// True when `f` and `g` agree on a set belonging to `u`.
pub fn check_almost_everywhere(u: &Ultrafilter, f: &FiniteMap, g: &FiniteMap) -> Result<bool> {
    if f.dom().size() != g.dom().size() || f.cod().size() != g.cod().size() {
        return Err(Error::CarrierMismatch {
            expected: f.dom().size(),
            found: g.dom().size(),
        });
    }
    if u.carrier().size() != f.dom().size() {
        return Err(Error::CarrierMismatch {
            expected: f.dom().size(),
            found: u.carrier().size(),
        });
    }
    let mut equalizer = 0u64;
    for x in 0..f.dom().size() {
        if f.apply(x) == g.apply(x) {
            equalizer |= 1 << x;
        }
    }
    let agree = u.contains_mask(equalizer);
    debug_assert!(!agree || integrate(u, f)? == integrate(u, g)?);
    Ok(agree)
}

/// True when post-composition with `theta` commutes with integration:
/// `theta(integral of f) = integral of (theta . f)`.
pub fn naturality_in_codomain(u: &Ultrafilter, theta: &FiniteMap, f: &FiniteMap) -> Result<bool> {
    let lhs = theta.apply(integrate(u, f)?);
    let rhs = integrate(u, &theta.compose(f)?)?;
    Ok(lhs == rhs)
}

/// True when integrating `g . p` against `u` equals integrating `g` against
/// the pushforward of `u` along `p`.
pub fn change_of_variables(p: &FiniteMap, u: &Ultrafilter, g: &FiniteMap) -> Result<bool> {
    let lhs = integrate(u, &g.compose(p)?)?;
    let rhs = integrate(&pushforward(p, u)?, g)?;
    Ok(lhs == rhs)
}

/// The characteristic map of a subset into a codomain whose elements `0` and
/// `1` play the roles of "out" and "in".
pub fn characteristic_map(subset: &Subset, omega: &FiniteSet) -> Result<FiniteMap> {
    if omega.size() < 2 {
        return Err(Error::HypothesisViolated(
            "characteristic maps need a codomain with at least two elements".to_string(),
        ));
    }
    let table = (0..subset.carrier().size())
        .map(|x| usize::from(subset.contains(x)))
        .collect();
    FiniteMap::new(subset.carrier().clone(), omega.clone(), table)
}

/// An integration operator tabulated extensionally: one value table per
/// codomain size up to a cap, indexed by [`FiniteMap::lex_index`].
///
/// Construction validates every naturality square between tabulated
/// codomains, which also forces the constant-map condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrationOperator {
    carrier: FiniteSet,
    target_cap: usize,
    tables: Vec<Vec<usize>>,
}

impl IntegrationOperator {
    /// Wrap raw value tables, checking shapes and all naturality squares.
    pub fn new(carrier: FiniteSet, tables: Vec<Vec<usize>>) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::InvalidStructure(
                "an integration operator needs at least the empty codomain table".to_string(),
            ));
        }
        let target_cap = tables.len() - 1;
        let cap_budget = 1u64 << 24;
        for (b, table) in tables.iter().enumerate() {
            let expected = crate::finset::count_maps(&carrier, &FiniteSet::new(b), cap_budget)?;
            if table.len() as u64 != expected {
                return Err(Error::CarrierMismatch {
                    expected: expected as usize,
                    found: table.len(),
                });
            }
            if table.iter().any(|&v| v >= b) {
                return Err(Error::IndexOutOfRange {
                    index: *table.iter().find(|&&v| v >= b).expect("just found one"),
                    size: b,
                });
            }
        }
        let op = IntegrationOperator {
            carrier,
            target_cap,
            tables,
        };
        op.validate_naturality()?;
        Ok(op)
    }

    fn validate_naturality(&self) -> Result<()> {
        let cap_budget = 1u64 << 24;
        for b in 0..=self.target_cap {
            let bs = FiniteSet::new(b);
            for c in 0..=self.target_cap {
                let cs = FiniteSet::new(c);
                for theta in enumerate_maps(&bs, &cs, cap_budget)? {
                    for f in enumerate_maps(&self.carrier, &bs, cap_budget)? {
                        let lhs = theta.apply(self.value(&f)?);
                        let rhs = self.value(&theta.compose(&f)?)?;
                        if lhs != rhs {
                            return Err(Error::InvalidStructure(format!(
                                "naturality square fails between codomains {b} and {c}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Tabulate integration against an ultrafilter for every codomain size
    /// up to `target_cap`.
    pub fn from_ultrafilter(u: &Ultrafilter, target_cap: usize) -> Result<Self> {
        let cap_budget = 1u64 << 24;
        let carrier = u.carrier().clone();
        let mut tables = Vec::with_capacity(target_cap + 1);
        for b in 0..=target_cap {
            let bs = FiniteSet::new(b);
            let mut table = Vec::new();
            for f in enumerate_maps(&carrier, &bs, cap_budget)? {
                table.push(integrate(u, &f)?);
            }
            tables.push(table);
        }
        IntegrationOperator::new(carrier, tables)
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn target_cap(&self) -> usize {
        self.target_cap
    }

    /// The operator's value on a tabulated map.
    pub fn value(&self, f: &FiniteMap) -> Result<usize> {
        if f.dom().size() != self.carrier.size() {
            return Err(Error::CarrierMismatch {
                expected: self.carrier.size(),
                found: f.dom().size(),
            });
        }
        let b = f.cod().size();
        if b > self.target_cap {
            return Err(Error::SizeCapExceeded {
                what: "integration operator codomain",
                required: b as u128,
                cap: self.target_cap as u128,
            });
        }
        Ok(self.tables[b][f.lex_index() as usize])
    }
}

/// Recover the subset family `{Y : I(char_Y) = 1}` from an integration
/// operator, using a codomain of size `omega_size >= 2`, and validate it as
/// an ultrafilter.
pub fn recover_ultrafilter(op: &IntegrationOperator, omega_size: usize) -> Result<Ultrafilter> {
    if omega_size < 2 {
        return Err(Error::HypothesisViolated(
            "recovery needs a codomain with at least two elements".to_string(),
        ));
    }
    let omega = FiniteSet::new(omega_size);
    let n = op.carrier().size();
    let mut family = SubsetFamily::empty(op.carrier().clone());
    for mask in 0..(1u64 << n) {
        let subset = Subset::new(op.carrier().clone(), mask)?;
        let chi = characteristic_map(&subset, &omega)?;
        if op.value(&chi)? == 1 {
            family.insert_mask(mask)?;
        }
    }
    Ultrafilter::from_family(family)
}

/// Whether, for every ultrafilter on `x`, enumerating all maps
/// `[X, Ω] -> Ω` and keeping those that fix constants and respect
/// almost-everywhere equality leaves exactly one survivor, namely the
/// integration table itself.
pub fn uniqueness_of_integration(x: &FiniteSet, omega: &FiniteSet, cap: u64) -> Result<bool> {
    let fs: Vec<FiniteMap> = enumerate_maps(x, omega, cap)?.collect();
    let r = omega.size() as u64;
    let required = (r as u128)
        .checked_pow(fs.len() as u32)
        .unwrap_or(u128::MAX);
    if required > cap as u128 {
        return Err(Error::SizeCapExceeded {
            what: "integration candidate maps",
            required,
            cap: cap as u128,
        });
    }
    let candidate_count = required as u64;
    for u in enumerate_ultrafilters(x)? {
        let expected: Vec<usize> = fs.iter().map(|f| integrate(&u, f)).collect::<Result<_>>()?;
        let mut survivors = 0usize;
        let mut integration_survives = false;
        for c in 0..candidate_count {
            let mut digits = Vec::with_capacity(fs.len());
            let mut rest = c;
            for _ in 0..fs.len() {
                digits.push((rest % r) as usize);
                rest /= r;
            }
            let constants_ok = (0..omega.size()).all(|v| {
                let cf = FiniteMap::constant(x.clone(), omega.clone(), v)
                    .expect("constants exist into a nonempty codomain");
                digits[cf.lex_index() as usize] == v
            });
            if !constants_ok {
                continue;
            }
            let ae_ok = fs.iter().enumerate().all(|(i, f)| {
                fs.iter().enumerate().all(|(j, g)| {
                    !check_almost_everywhere(&u, f, g).unwrap_or(false) || digits[i] == digits[j]
                })
            });
            if ae_ok {
                survivors += 1;
                if digits == expected {
                    integration_survives = true;
                }
            }
        }
        if survivors != 1 || !integration_survives {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ultrafilter::enumerate_ultrafilters;

    fn set(n: usize) -> FiniteSet {
        FiniteSet::new(n)
    }

    #[test]
    fn integration_of_constants_and_witness_evaluation() {
        for n in 1..=4usize {
            for x in 0..n {
                let u = Ultrafilter::principal(set(n), x).unwrap();
                for r in 0..3 {
                    let c = FiniteMap::constant(set(n), set(3), r).unwrap();
                    assert_eq!(integrate(&u, &c).unwrap(), r);
                }
                for f in enumerate_maps(&set(n), &set(3), 1 << 20).unwrap() {
                    assert_eq!(integrate(&u, &f).unwrap(), f.apply(x));
                }
            }
        }
    }

    #[test]
    fn integration_rejects_carrier_mismatch() {
        let u = Ultrafilter::principal(set(3), 0).unwrap();
        let f = FiniteMap::identity(&set(2));
        assert!(integrate(&u, &f).is_err());
    }

    #[test]
    fn almost_everywhere_agreement() {
        let u = Ultrafilter::principal(set(3), 1).unwrap();
        let f = FiniteMap::new(set(3), set(2), vec![0, 1, 0]).unwrap();
        let g = FiniteMap::new(set(3), set(2), vec![1, 1, 1]).unwrap();
        assert!(check_almost_everywhere(&u, &f, &g).unwrap());
        let h = FiniteMap::new(set(3), set(2), vec![0, 0, 0]).unwrap();
        assert!(!check_almost_everywhere(&u, &f, &h).unwrap());
        assert!(check_almost_everywhere(&u, &f, &f).unwrap());
    }

    #[test]
    fn naturality_holds_exhaustively_on_small_carriers() {
        for n in 1..=3usize {
            for b in 1..=3usize {
                for c in 1..=3usize {
                    for u in enumerate_ultrafilters(&set(n)).unwrap() {
                        for f in enumerate_maps(&set(n), &set(b), 1 << 20).unwrap() {
                            for theta in enumerate_maps(&set(b), &set(c), 1 << 20).unwrap() {
                                assert!(naturality_in_codomain(&u, &theta, &f).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn change_of_variables_holds_exhaustively_on_small_carriers() {
        for n in 1..=3usize {
            for m in 1..=3usize {
                for u in enumerate_ultrafilters(&set(n)).unwrap() {
                    for p in enumerate_maps(&set(n), &set(m), 1 << 20).unwrap() {
                        for g in enumerate_maps(&set(m), &set(2), 1 << 20).unwrap() {
                            assert!(change_of_variables(&p, &u, &g).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn operator_roundtrip_recovers_the_ultrafilter() {
        for n in 1..=4usize {
            for u in enumerate_ultrafilters(&set(n)).unwrap() {
                let op = IntegrationOperator::from_ultrafilter(&u, 3).unwrap();
                for omega in 2..=3usize {
                    assert_eq!(recover_ultrafilter(&op, omega).unwrap(), u);
                }
            }
        }
    }

    #[test]
    fn operator_validation_rejects_unnatural_tables() {
        // Tables that integrate against one ultrafilter at codomain sizes up
        // to two but against another at size three break a naturality square
        // along the inclusion of a two-element codomain into a three-element
        // one.  (Mixing at sizes one and two alone stays natural: a
        // one-element codomain carries no information.)
        let x = set(2);
        let u0 = Ultrafilter::principal(x.clone(), 0).unwrap();
        let u1 = Ultrafilter::principal(x.clone(), 1).unwrap();
        let mut tables = Vec::new();
        for b in 0..=3usize {
            let bs = set(b);
            let u = if b == 3 { &u1 } else { &u0 };
            let table: Vec<usize> = enumerate_maps(&x, &bs, 1 << 20)
                .unwrap()
                .map(|f| integrate(u, &f).unwrap())
                .collect();
            tables.push(table);
        }
        assert!(IntegrationOperator::new(x, tables).is_err());
    }

    #[test]
    fn operators_natural_up_to_codomain_two_need_not_come_from_ultrafilters() {
        // With no three-element codomain tabulated, mixing ultrafilters
        // between codomain sizes one and two passes every naturality square.
        let x = set(2);
        let u0 = Ultrafilter::principal(x.clone(), 0).unwrap();
        let u1 = Ultrafilter::principal(x.clone(), 1).unwrap();
        let mut tables = Vec::new();
        for b in 0..=2usize {
            let bs = set(b);
            let u = if b == 2 { &u1 } else { &u0 };
            let table: Vec<usize> = enumerate_maps(&x, &bs, 1 << 20)
                .unwrap()
                .map(|f| integrate(u, &f).unwrap())
                .collect();
            tables.push(table);
        }
        assert!(IntegrationOperator::new(x, tables).is_ok());
    }

    #[test]
    fn integration_is_the_unique_constant_respecting_ae_invariant_map() {
        // For every ultrafilter, enumerating all maps [X, R] -> R and
        // keeping those that fix constants and respect almost-everywhere
        // equality leaves exactly the integration table.
        for n in 1..=2usize {
            for r in 1..=2usize {
                assert!(
                    uniqueness_of_integration(&set(n), &set(r), 1 << 20).unwrap(),
                    "n={n} r={r}"
                );
            }
        }
        assert!(uniqueness_of_integration(&set(3), &set(3), 1 << 20).is_err());
    }
}
