//! Commutative rigs with tabulated operations, and rig-valued integrals.
//!
//! A rig here is a finite carrier with addition and multiplication tables,
//! validated exhaustively at construction: both operations commutative
//! monoids, multiplication distributing over addition, zero annihilating.
//! An integral with values in a rig is a linear map from the function rig
//! `R^X` to `R` whose value on every function lies in that function's image.
//! When `1 + 1 + 1` differs from `1`, those integrals correspond exactly to
//! the ultrafilters on `X`; [`theorem_rig_bijection`] verifies the
//! correspondence by enumeration and refuses degenerate rigs.

use crate::error::{Error, Result};
use crate::finset::{FiniteMap, FiniteSet};
use crate::integration::integrate;
use crate::ultrafilter::{enumerate_ultrafilters, Ultrafilter};

/// A finite commutative rig with explicit operation tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigSpec {
    name: String,
    carrier: FiniteSet,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
}

impl RigSpec {
    /// Build a rig from raw tables, validating every law exhaustively.
    pub fn new(
        name: impl Into<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let n = add.len();
        let rig = RigSpec {
            name: name.into(),
            carrier: FiniteSet::new(n),
            add,
            mul,
            zero,
            one,
        };
        rig.validate()?;
        Ok(rig)
    }

    fn validate(&self) -> Result<()> {
        let n = self.carrier.size();
        if n == 0 {
            return Err(Error::InvalidStructure("empty rig carrier".to_string()));
        }
        for table in [&self.add, &self.mul] {
            if table.len() != n {
                return Err(Error::InvalidStructure(
                    "operation table has the wrong number of rows".to_string(),
                ));
            }
            for row in table {
                if row.len() != n {
                    return Err(Error::InvalidStructure(
                        "operation table has a ragged row".to_string(),
                    ));
                }
                for &v in row {
                    if v >= n {
                        return Err(Error::IndexOutOfRange { index: v, size: n });
                    }
                }
            }
        }
        if self.zero >= n || self.one >= n {
            return Err(Error::IndexOutOfRange {
                index: self.zero.max(self.one),
                size: n,
            });
        }
        for a in 0..n {
            if self.add[a][self.zero] != a {
                return Err(Error::InvalidStructure(format!(
                    "zero is not an additive identity at {a}"
                )));
            }
            if self.mul[a][self.one] != a {
                return Err(Error::InvalidStructure(format!(
                    "one is not a multiplicative identity at {a}"
                )));
            }
            if self.mul[a][self.zero] != self.zero {
                return Err(Error::InvalidStructure(format!(
                    "zero does not annihilate at {a}"
                )));
            }
            for b in 0..n {
                if self.add[a][b] != self.add[b][a] {
                    return Err(Error::InvalidStructure(
                        "addition is not commutative".into(),
                    ));
                }
                if self.mul[a][b] != self.mul[b][a] {
                    return Err(Error::InvalidStructure(
                        "multiplication is not commutative".into(),
                    ));
                }
                for c in 0..n {
                    if self.add[self.add[a][b]][c] != self.add[a][self.add[b][c]] {
                        return Err(Error::InvalidStructure(
                            "addition is not associative".into(),
                        ));
                    }
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return Err(Error::InvalidStructure(
                            "multiplication is not associative".into(),
                        ));
                    }
                    if self.mul[a][self.add[b][c]] != self.add[self.mul[a][b]][self.mul[a][c]] {
                        return Err(Error::InvalidStructure(
                            "multiplication does not distribute over addition".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Integers modulo `n`.
    pub fn zmod(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidStructure("modulus must be positive".into()));
        }
        let add = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a * b) % n).collect())
            .collect();
        RigSpec::new(format!("z{n}"), add, mul, 0, 1 % n)
    }

    /// The two-element rig with join as addition and meet as multiplication.
    pub fn boolean() -> Self {
        RigSpec::new(
            "boolean",
            vec![vec![0, 1], vec![1, 1]],
            vec![vec![0, 0], vec![0, 1]],
            0,
            1,
        )
        .expect("the boolean tables satisfy the rig laws")
    }

    /// Min-plus arithmetic on `{0, .., k, infinity}`: addition is minimum,
    /// multiplication is truncated sum, element `k + 1` plays infinity.
    pub fn tropical(k: usize) -> Result<Self> {
        let n = k + 2;
        let inf = k + 1;
        let add = (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect();
        let mul = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if a == inf || b == inf || a + b > k {
                            inf
                        } else {
                            a + b
                        }
                    })
                    .collect()
            })
            .collect();
        RigSpec::new(format!("tropical{k}"), add, mul, inf, 0)
    }

    /// Parse the rig table file format:
    ///
    /// ```text
    /// rig <name> <size>
    /// <size rows of the addition table>
    /// <size rows of the multiplication table>
    /// zero <index>
    /// one <index>
    /// ```
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("rig") {
            return Err(Error::Parse(
                "expected header line 'rig <name> <size>'".into(),
            ));
        }
        let name = parts
            .next()
            .ok_or_else(|| Error::Parse("missing rig name".into()))?;
        let size: usize = parts
            .next()
            .ok_or_else(|| Error::Parse("missing rig size".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad rig size: {e}")))?;
        if parts.next().is_some() {
            return Err(Error::Parse("trailing tokens after the header".into()));
        }
        let mut read_table = |what: &str| -> Result<Vec<Vec<usize>>> {
            let mut rows = Vec::with_capacity(size);
            for i in 0..size {
                let line = lines
                    .next()
                    .ok_or_else(|| Error::Parse(format!("missing {what} row {i}")))?;
                let row: std::result::Result<Vec<usize>, _> =
                    line.split_whitespace().map(str::parse).collect();
                let row = row.map_err(|e| Error::Parse(format!("bad {what} row {i}: {e}")))?;
                if row.len() != size {
                    return Err(Error::Parse(format!(
                        "{what} row {i} has {} entries, expected {size}",
                        row.len()
                    )));
                }
                rows.push(row);
            }
            Ok(rows)
        };
        let add = read_table("addition")?;
        let mul = read_table("multiplication")?;
        let mut read_unit = |what: &str| -> Result<usize> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing '{what} <index>' line")))?;
            let mut parts = line.split_whitespace();
            if parts.next() != Some(what) {
                return Err(Error::Parse(format!("expected '{what} <index>' line")));
            }
            let idx = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what} index")))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad {what} index: {e}")))?;
            Ok(idx)
        };
        let zero = read_unit("zero")?;
        let one = read_unit("one")?;
        if let Some(extra) = lines.next() {
            return Err(Error::Parse(format!("unexpected trailing line {extra:?}")));
        }
        RigSpec::new(name, add, mul, zero, one)
    }

    /// Serialize in the table file format accepted by [`RigSpec::parse`].
    pub fn to_table_string(&self) -> String {
        let mut out = format!("rig {} {}\n", self.name, self.carrier.size());
        for table in [&self.add, &self.mul] {
            for row in table {
                let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.push_str(&cells.join(" "));
                out.push('\n');
            }
        }
        out.push_str(&format!("zero {}\none {}\n", self.zero, self.one));
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn sum(&self, values: impl IntoIterator<Item = usize>) -> usize {
        values
            .into_iter()
            .fold(self.zero, |acc, v| self.add(acc, v))
    }

    /// The element `1 + 1 + 1`.
    pub fn three(&self) -> usize {
        self.sum([self.one, self.one, self.one])
    }
}

/// True when `1 + 1 + 1` differs from `1`, the hypothesis under which
/// rig-valued integrals classify ultrafilters.
pub fn rig_three_neq_one(rig: &RigSpec) -> bool {
    rig.three() != rig.one()
}

/// The characteristic function of `{x}` as a map into the rig carrier.
pub fn point_characteristic(rig: &RigSpec, x_set: &FiniteSet, x: usize) -> Result<FiniteMap> {
    if x >= x_set.size() {
        return Err(Error::IndexOutOfRange {
            index: x,
            size: x_set.size(),
        });
    }
    let table = (0..x_set.size())
        .map(|y| if y == x { rig.one() } else { rig.zero() })
        .collect();
    FiniteMap::new(x_set.clone(), rig.carrier().clone(), table)
}

/// A linear map `R^X -> R` presented by one coefficient per point:
/// `I(f) = sum of f(x) * coefficient(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearIntegral {
    rig: RigSpec,
    carrier: FiniteSet,
    coefficients: Vec<usize>,
}

impl LinearIntegral {
    pub fn new(rig: RigSpec, carrier: FiniteSet, coefficients: Vec<usize>) -> Result<Self> {
        if coefficients.len() != carrier.size() {
            return Err(Error::CarrierMismatch {
                expected: carrier.size(),
                found: coefficients.len(),
            });
        }
        for &c in &coefficients {
            if c >= rig.size() {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    size: rig.size(),
                });
            }
        }
        Ok(LinearIntegral {
            rig,
            carrier,
            coefficients,
        })
    }

    /// The integral induced by an ultrafilter: each coefficient is the
    /// integral of the corresponding point's characteristic function.
    pub fn from_ultrafilter(u: &Ultrafilter, rig: &RigSpec) -> Result<Self> {
        let carrier = u.carrier().clone();
        let mut coefficients = Vec::with_capacity(carrier.size());
        for x in 0..carrier.size() {
            let chi = point_characteristic(rig, &carrier, x)?;
            coefficients.push(integrate(u, &chi)?);
        }
        LinearIntegral::new(rig.clone(), carrier, coefficients)
    }

    pub fn coefficients(&self) -> &[usize] {
        &self.coefficients
    }

    /// Value on a function given by its table of rig elements.
    pub fn eval(&self, f: &[usize]) -> Result<usize> {
        if f.len() != self.carrier.size() {
            return Err(Error::CarrierMismatch {
                expected: self.carrier.size(),
                found: f.len(),
            });
        }
        Ok(self
            .rig
            .sum((0..f.len()).map(|x| self.rig.mul(f[x], self.coefficients[x]))))
    }
}

/// All function tables `X -> R` in lexicographic order.
fn enumerate_tables(points: usize, rig_size: usize, cap: u64) -> Result<Vec<Vec<usize>>> {
    let maps =
        crate::finset::enumerate_maps(&FiniteSet::new(points), &FiniteSet::new(rig_size), cap)?;
    Ok(maps.map(|m| m.table().to_vec()).collect())
}

/// True when set-level integration against `u` is linear over the rig:
/// additive on every pair of functions and homogeneous for every scalar.
pub fn integral_is_linear(u: &Ultrafilter, rig: &RigSpec, cap: u64) -> Result<bool> {
    let n = u.carrier().size();
    let tables = enumerate_tables(n, rig.size(), cap)?;
    let as_map = |t: &[usize]| {
        FiniteMap::new(u.carrier().clone(), rig.carrier().clone(), t.to_vec())
            .expect("tables come from a validated enumeration")
    };
    for f in &tables {
        let int_f = integrate(u, &as_map(f))?;
        for g in &tables {
            let sum_table: Vec<usize> = (0..n).map(|x| rig.add(f[x], g[x])).collect();
            let lhs = integrate(u, &as_map(&sum_table))?;
            if lhs != rig.add(int_f, integrate(u, &as_map(g))?) {
                return Ok(false);
            }
        }
        for c in 0..rig.size() {
            let scaled: Vec<usize> = (0..n).map(|x| rig.mul(c, f[x])).collect();
            if integrate(u, &as_map(&scaled))? != rig.mul(c, int_f) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Enumerate every rig-valued integral on `x`: linear maps, presented by
/// coefficient vectors, whose value on each function lies in its image.
pub fn enumerate_integrals(x: &FiniteSet, rig: &RigSpec, cap: u64) -> Result<Vec<LinearIntegral>> {
    let tables = enumerate_tables(x.size(), rig.size(), cap)?;
    let mut found = Vec::new();
    for coeffs in enumerate_tables(x.size(), rig.size(), cap)? {
        let candidate = LinearIntegral::new(rig.clone(), x.clone(), coeffs)?;
        let mut ok = true;
        for f in &tables {
            let v = candidate.eval(f)?;
            if !f.contains(&v) {
                ok = false;
                break;
            }
        }
        if ok {
            found.push(candidate);
        }
    }
    Ok(found)
}

/// Outcome of matching ultrafilters against rig-valued integrals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigBijectionReport {
    pub rig_name: String,
    pub carrier_size: usize,
    pub ultrafilter_count: usize,
    pub integral_count: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl RigBijectionReport {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Verify that ultrafilters on `x` correspond exactly to rig-valued
/// integrals.  Refuses rigs in which `1 + 1 + 1 = 1`; those admit integrals
/// beyond the ultrafilters and are explored with [`enumerate_integrals`].
pub fn theorem_rig_bijection(x: &FiniteSet, rig: &RigSpec, cap: u64) -> Result<RigBijectionReport> {
    if !rig_three_neq_one(rig) {
        return Err(Error::HypothesisViolated(format!(
            "1 + 1 + 1 = 1 in rig {}; the correspondence needs 3 distinct from 1 \
             (enumerate_integrals still lists the integrals)",
            rig.name()
        )));
    }
    let integrals = enumerate_integrals(x, rig, cap)?;
    let ultrafilters = enumerate_ultrafilters(x)?;
    let images: Vec<LinearIntegral> = ultrafilters
        .iter()
        .map(|u| LinearIntegral::from_ultrafilter(u, rig))
        .collect::<Result<_>>()?;
    let mut injective = true;
    for (i, a) in images.iter().enumerate() {
        for b in images.iter().skip(i + 1) {
            if a == b {
                injective = false;
            }
        }
    }
    let surjective = integrals.iter().all(|i| images.contains(i))
        && images.iter().all(|i| integrals.contains(i));
    Ok(RigBijectionReport {
        rig_name: rig.name().to_string(),
        carrier_size: x.size(),
        ultrafilter_count: ultrafilters.len(),
        integral_count: integrals.len(),
        injective,
        surjective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize) -> FiniteSet {
        FiniteSet::new(n)
    }

    const CAP: u64 = 1 << 24;

    #[test]
    fn builtin_rigs_satisfy_the_laws() {
        for n in 1..=12 {
            RigSpec::zmod(n).unwrap();
        }
        RigSpec::boolean();
        for k in 0..=3 {
            RigSpec::tropical(k).unwrap();
        }
    }

    #[test]
    fn validation_rejects_broken_tables() {
        let z3 = RigSpec::zmod(3).unwrap();
        let mut bad_mul = z3.mul.clone();
        bad_mul[2][2] = 2;
        assert!(RigSpec::new("bad", z3.add.clone(), bad_mul, 0, 1).is_err());
        let mut bad_add = z3.add.clone();
        bad_add[0][1] = 0;
        assert!(RigSpec::new("bad", bad_add, z3.mul.clone(), 0, 1).is_err());
        assert!(RigSpec::new("bad", z3.add.clone(), z3.mul.clone(), 2, 1).is_err());
    }

    #[test]
    fn three_neq_one_across_builtins() {
        assert!(rig_three_neq_one(&RigSpec::zmod(3).unwrap()));
        assert!(rig_three_neq_one(&RigSpec::zmod(4).unwrap()));
        assert!(rig_three_neq_one(&RigSpec::zmod(5).unwrap()));
        assert!(rig_three_neq_one(&RigSpec::zmod(6).unwrap()));
        assert!(!rig_three_neq_one(&RigSpec::zmod(1).unwrap()));
        assert!(!rig_three_neq_one(&RigSpec::zmod(2).unwrap()));
        assert!(!rig_three_neq_one(&RigSpec::boolean()));
        assert!(!rig_three_neq_one(&RigSpec::tropical(2).unwrap()));
    }

    #[test]
    fn every_function_is_a_combination_of_point_characteristics() {
        let rigs = [
            RigSpec::zmod(2).unwrap(),
            RigSpec::zmod(3).unwrap(),
            RigSpec::boolean(),
            RigSpec::tropical(1).unwrap(),
        ];
        for rig in &rigs {
            for n in 0..=3usize {
                for f in enumerate_tables(n, rig.size(), CAP).unwrap() {
                    for x in 0..n {
                        let combined = rig.sum((0..n).map(|y| {
                            let chi = point_characteristic(rig, &set(n), y).unwrap();
                            rig.mul(f[y], chi.apply(x))
                        }));
                        assert_eq!(combined, f[x], "rig={} n={n}", rig.name());
                    }
                }
            }
        }
    }

    #[test]
    fn integration_is_linear_over_small_rigs() {
        for rig in [RigSpec::zmod(3).unwrap(), RigSpec::boolean()] {
            for n in 1..=3usize {
                for u in enumerate_ultrafilters(&set(n)).unwrap() {
                    assert!(integral_is_linear(&u, &rig, CAP).unwrap());
                }
            }
        }
    }

    /// Independent route: enumerate every map `R^X -> R` as a raw value
    /// table, keep those that are additive, homogeneous, and image-bounded.
    fn brute_force_integral_tables(x: usize, rig: &RigSpec) -> Vec<Vec<usize>> {
        let fs = enumerate_tables(x, rig.size(), CAP).unwrap();
        let lex = |t: &[usize]| -> usize { t.iter().fold(0usize, |acc, &v| acc * rig.size() + v) };
        let count = (rig.size() as u64).pow(fs.len() as u32);
        let mut out = Vec::new();
        for c in 0..count {
            let mut phi = Vec::with_capacity(fs.len());
            let mut rest = c;
            for _ in 0..fs.len() {
                phi.push((rest % rig.size() as u64) as usize);
                rest /= rig.size() as u64;
            }
            let additive = fs.iter().all(|f| {
                fs.iter().all(|g| {
                    let sum: Vec<usize> = (0..x).map(|i| rig.add(f[i], g[i])).collect();
                    phi[lex(&sum)] == rig.add(phi[lex(f)], phi[lex(g)])
                })
            });
            if !additive {
                continue;
            }
            let homogeneous = fs.iter().all(|f| {
                (0..rig.size()).all(|s| {
                    let scaled: Vec<usize> = (0..x).map(|i| rig.mul(s, f[i])).collect();
                    phi[lex(&scaled)] == rig.mul(s, phi[lex(f)])
                })
            });
            if !homogeneous {
                continue;
            }
            let image_bounded = fs.iter().all(|f| f.contains(&phi[lex(f)]));
            if image_bounded {
                out.push(phi);
            }
        }
        out
    }

    #[test]
    fn coefficient_enumeration_agrees_with_the_brute_force_oracle() {
        let cases = [
            (RigSpec::zmod(2).unwrap(), 3usize),
            (RigSpec::boolean(), 3),
            (RigSpec::zmod(3).unwrap(), 2),
            (RigSpec::tropical(1).unwrap(), 2),
        ];
        for (rig, x) in cases {
            let fs = enumerate_tables(x, rig.size(), CAP).unwrap();
            let by_coefficients: Vec<Vec<usize>> = enumerate_integrals(&set(x), &rig, CAP)
                .unwrap()
                .iter()
                .map(|i| fs.iter().map(|f| i.eval(f).unwrap()).collect())
                .collect();
            let oracle = brute_force_integral_tables(x, &rig);
            assert_eq!(
                by_coefficients.len(),
                oracle.len(),
                "rig={} x={x}",
                rig.name()
            );
            for t in &oracle {
                assert!(by_coefficients.contains(t), "rig={} x={x}", rig.name());
            }
        }
    }

    #[test]
    fn integral_counts_frozen_from_the_oracle() {
        assert_eq!(
            enumerate_integrals(&set(3), &RigSpec::zmod(3).unwrap(), CAP)
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            enumerate_integrals(&set(3), &RigSpec::zmod(2).unwrap(), CAP)
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            enumerate_integrals(&set(3), &RigSpec::boolean(), CAP)
                .unwrap()
                .len(),
            7
        );
    }

    #[test]
    fn no_integrals_on_the_empty_carrier() {
        // The only function table is empty, its image is empty, and the
        // empty sum lands on zero, so the image condition fails.
        let z3 = RigSpec::zmod(3).unwrap();
        assert!(enumerate_integrals(&set(0), &z3, CAP).unwrap().is_empty());
    }

    #[test]
    fn bijection_theorem_on_nondegenerate_rigs() {
        for (rig, xs) in [
            (RigSpec::zmod(3).unwrap(), vec![1usize, 2, 3]),
            (RigSpec::zmod(5).unwrap(), vec![3]),
            (RigSpec::zmod(6).unwrap(), vec![3]),
        ] {
            for x in xs {
                let report = theorem_rig_bijection(&set(x), &rig, CAP).unwrap();
                assert!(report.bijective(), "rig={} x={x}", rig.name());
                assert_eq!(report.ultrafilter_count, x);
                assert_eq!(report.integral_count, x);
            }
        }
    }

    #[test]
    fn bijection_theorem_refuses_degenerate_rigs() {
        for rig in [RigSpec::zmod(2).unwrap(), RigSpec::boolean()] {
            let err = theorem_rig_bijection(&set(3), &rig, CAP).unwrap_err();
            assert!(matches!(err, Error::HypothesisViolated(_)));
        }
    }

    #[test]
    fn distinct_ultrafilters_give_distinct_integrals_when_zero_neq_one() {
        for rig in [
            RigSpec::zmod(2).unwrap(),
            RigSpec::zmod(3).unwrap(),
            RigSpec::boolean(),
            RigSpec::tropical(1).unwrap(),
        ] {
            let us = enumerate_ultrafilters(&set(3)).unwrap();
            let images: Vec<_> = us
                .iter()
                .map(|u| LinearIntegral::from_ultrafilter(u, &rig).unwrap())
                .collect();
            for (i, a) in images.iter().enumerate() {
                for b in images.iter().skip(i + 1) {
                    assert_ne!(a, b, "rig={}", rig.name());
                }
            }
        }
    }

    #[test]
    fn table_format_roundtrip() {
        for rig in [
            RigSpec::zmod(4).unwrap(),
            RigSpec::boolean(),
            RigSpec::tropical(2).unwrap(),
        ] {
            let text = rig.to_table_string();
            let parsed = RigSpec::parse(&text).unwrap();
            assert_eq!(parsed, rig);
        }
    }

    #[test]
    fn parser_rejects_malformed_input() {
        assert!(RigSpec::parse("").is_err());
        assert!(RigSpec::parse("ring z2 2\n0 1\n1 0\n0 0\n0 1\nzero 0\none 1\n").is_err());
        assert!(RigSpec::parse("rig z2 2\n0 1\n1 0\n0 0\nzero 0\none 1\n").is_err());
        assert!(RigSpec::parse("rig z2 2\n0 1\n1 7\n0 0\n0 1\nzero 0\none 1\n").is_err());
        // Well-formed text whose tables break a law: one is not an identity.
        assert!(RigSpec::parse("rig bad 2\n0 1\n1 0\n0 0\n0 0\nzero 0\none 1\n").is_err());
        // Comments and blank lines are accepted.
        let commented = "# a comment\nrig z2 2\n\n0 1\n1 0\n0 0\n0 1\nzero 0\none 1\n";
        assert!(RigSpec::parse(commented).is_ok());
    }
}
