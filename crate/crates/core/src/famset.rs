//! Families of finite sets, their morphisms, and ultraproducts.
//!
//! A [`FamObject`] is a finite index set with a finite fiber over each
//! point.  A morphism of families maps indices forward and fibers
//! backward: a component at `x` goes from the target fiber over the image
//! of `x` into the fiber over `x`.  Against an ultrafilter on the index
//! set, the fibers contract to the ultraproduct, computed as the colimit
//! of fiber products over the members of the ultrafilter under reverse
//! inclusion.  The same set arises as a colimit over the opposite of a
//! category of elements, and [`ultraproduct_routes_agree`] checks the two
//! constructions against each other.  Ultraproducts make families into a
//! monad: the unit collapses a principal ultraproduct onto its witness
//! fiber, multiplication transports along the inverse collapse, and the
//! laws are verified by composing the finite data directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::category_of_elements;
use crate::fincat::{colimit, ColimitData, ElementsCategory, FiniteCategory, SetDiagram};
use crate::finset::{FiniteMap, FiniteSet, Subset};
use crate::integration::{characteristic_map, integrate};
use crate::ultrafilter::{
    enumerate_ultrafilters, multiplication_map, pushforward, ultrafilter_carrier, unit, Ultrafilter,
};
use crate::Caps;

/// A family of finite sets: one fiber size per index point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamObject {
    index: FiniteSet,
    sizes: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct FamLiteral {
    index: usize,
    components: Vec<usize>,
}

impl FamObject {
    pub fn new(index: FiniteSet, sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() != index.size() {
            return Err(Error::CarrierMismatch {
                expected: index.size(),
                found: sizes.len(),
            });
        }
        Ok(FamObject { index, sizes })
    }

    pub fn from_fiber_sizes(sizes: Vec<usize>) -> Self {
        FamObject {
            index: FiniteSet::new(sizes.len()),
            sizes,
        }
    }

    pub fn index(&self) -> &FiniteSet {
        &self.index
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn fiber(&self, x: usize) -> FiniteSet {
        FiniteSet::new(self.sizes[x])
    }

    /// Parse the JSON literal `{"index": n, "components": [sizes...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let literal: FamLiteral =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad family: {e}")))?;
        if literal.components.len() != literal.index {
            return Err(Error::Parse(format!(
                "family lists {} components for an index of size {}",
                literal.components.len(),
                literal.index
            )));
        }
        Ok(FamObject::from_fiber_sizes(literal.components))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FamLiteral {
            index: self.sizes.len(),
            components: self.sizes.clone(),
        })
        .expect("fiber lists serialize")
    }
}

/// A morphism of families: a base map on indices and, for each source
/// index, a component from the fiber over its image back into its fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamMorphism {
    dom: FamObject,
    cod: FamObject,
    base: FiniteMap,
    components: Vec<FiniteMap>,
}

impl FamMorphism {
    pub fn new(
        dom: FamObject,
        cod: FamObject,
        base: FiniteMap,
        components: Vec<FiniteMap>,
    ) -> Result<Self> {
        if base.dom().size() != dom.index.size() || base.cod().size() != cod.index.size() {
            return Err(Error::InvalidStructure(
                "base map does not match the index sets".into(),
            ));
        }
        if components.len() != dom.index.size() {
            return Err(Error::CarrierMismatch {
                expected: dom.index.size(),
                found: components.len(),
            });
        }
        for (x, c) in components.iter().enumerate() {
            if c.dom().size() != cod.sizes[base.apply(x)] || c.cod().size() != dom.sizes[x] {
                return Err(Error::InvalidStructure(format!(
                    "component at {x} does not run from the image fiber into the source fiber"
                )));
            }
        }
        Ok(FamMorphism {
            dom,
            cod,
            base,
            components,
        })
    }

    pub fn identity(object: &FamObject) -> Self {
        FamMorphism {
            dom: object.clone(),
            cod: object.clone(),
            base: FiniteMap::identity(&object.index),
            components: (0..object.index.size())
                .map(|x| FiniteMap::identity(&object.fiber(x)))
                .collect(),
        }
    }

    pub fn dom(&self) -> &FamObject {
        &self.dom
    }

    pub fn cod(&self) -> &FamObject {
        &self.cod
    }

    pub fn base(&self) -> &FiniteMap {
        &self.base
    }

    pub fn component(&self, x: usize) -> &FiniteMap {
        &self.components[x]
    }

    /// Composite `self . first`: compose bases forward and components
    /// backward through the first base map.
    pub fn compose(&self, first: &FamMorphism) -> Result<FamMorphism> {
        if first.cod != self.dom {
            return Err(Error::InvalidStructure(
                "family morphisms are not composable".into(),
            ));
        }
        let base = self.base.compose(&first.base)?;
        let components = (0..first.dom.index.size())
            .map(|x| first.components[x].compose(&self.components[first.base.apply(x)]))
            .collect::<Result<_>>()?;
        FamMorphism::new(first.dom.clone(), self.cod.clone(), base, components)
    }
}

fn member_bits(mask: u64) -> Vec<usize> {
    let mut bits = Vec::new();
    let mut rest = mask;
    while rest != 0 {
        bits.push(rest.trailing_zeros() as usize);
        rest &= rest - 1;
    }
    bits
}

fn tuple_product(bits: &[usize], sizes: &[usize], cap: u64) -> Result<usize> {
    let mut total: u128 = 1;
    for &x in bits {
        total *= sizes[x] as u128;
        if total > cap as u128 {
            return Err(Error::SizeCapExceeded {
                what: "fiber product",
                required: total,
                cap: cap as u128,
            });
        }
    }
    Ok(total as usize)
}

fn decode_tuple(mut index: usize, bits: &[usize], sizes: &[usize]) -> Vec<usize> {
    let mut tuple = Vec::with_capacity(bits.len());
    for &x in bits {
        tuple.push(index % sizes[x]);
        index /= sizes[x];
    }
    tuple
}

fn encode_tuple(tuple: &[usize], bits: &[usize], sizes: &[usize]) -> usize {
    let mut index = 0;
    for i in (0..bits.len()).rev() {
        index = index * sizes[bits[i]] + tuple[i];
    }
    index
}

/// An ultraproduct presented by its colimit over the members of the
/// ultrafilter: classes of pairs (member, tuple over the member).
#[derive(Debug, Clone)]
pub struct Ultraproduct {
    family: FamObject,
    ultrafilter: Ultrafilter,
    member_masks: Vec<u64>,
    member_elements: Vec<Vec<usize>>,
    classes: ColimitData,
}

/// Compute the ultraproduct of a family against an ultrafilter on its
/// index set.
pub fn ultraproduct(family: &FamObject, u: &Ultrafilter, cap: u64) -> Result<Ultraproduct> {
    if u.carrier().size() != family.index.size() {
        return Err(Error::CarrierMismatch {
            expected: family.index.size(),
            found: u.carrier().size(),
        });
    }
    let member_masks: Vec<u64> = u.family().masks().collect();
    let member_elements: Vec<Vec<usize>> = member_masks.iter().map(|&m| member_bits(m)).collect();
    let names = member_masks.iter().map(|m| format!("{m:b}")).collect();
    let category =
        FiniteCategory::from_preorder(names, |a, b| member_masks[b] & !member_masks[a] == 0)?;
    let fibers = member_elements
        .iter()
        .map(|bits| Ok(FiniteSet::new(tuple_product(bits, &family.sizes, cap)?)))
        .collect::<Result<Vec<_>>>()?;
    let maps = (0..category.arrow_count())
        .map(|f| {
            let (src, dst) = (category.src(f), category.dst(f));
            let table = (0..fibers[src].size())
                .map(|t| {
                    let tuple = decode_tuple(t, &member_elements[src], &family.sizes);
                    let sub: Vec<usize> = member_elements[dst]
                        .iter()
                        .map(|x| {
                            let pos = member_elements[src]
                                .iter()
                                .position(|y| y == x)
                                .expect("destination members are a subset of source members");
                            tuple[pos]
                        })
                        .collect();
                    encode_tuple(&sub, &member_elements[dst], &family.sizes)
                })
                .collect();
            FiniteMap::new(fibers[src].clone(), fibers[dst].clone(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    let diagram = SetDiagram::new(category, fibers, maps)?;
    let classes = colimit(&diagram, cap)?;
    Ok(Ultraproduct {
        family: family.clone(),
        ultrafilter: u.clone(),
        member_masks,
        member_elements,
        classes,
    })
}

impl Ultraproduct {
    pub fn size(&self) -> usize {
        self.classes.class_count
    }

    pub fn family(&self) -> &FamObject {
        &self.family
    }

    pub fn ultrafilter(&self) -> &Ultrafilter {
        &self.ultrafilter
    }

    pub fn member_masks(&self) -> &[u64] {
        &self.member_masks
    }

    fn member_index(&self, mask: u64) -> Result<usize> {
        self.member_masks
            .binary_search(&mask)
            .map_err(|_| Error::InvalidStructure(format!("{mask:b} is not a member")))
    }

    /// The class of a tuple over a member, entries listed in ascending
    /// index order.
    pub fn class_of(&self, mask: u64, tuple: &[usize]) -> Result<usize> {
        let mi = self.member_index(mask)?;
        let bits = &self.member_elements[mi];
        if tuple.len() != bits.len() {
            return Err(Error::CarrierMismatch {
                expected: bits.len(),
                found: tuple.len(),
            });
        }
        for (i, &x) in bits.iter().enumerate() {
            if tuple[i] >= self.family.sizes[x] {
                return Err(Error::IndexOutOfRange {
                    index: tuple[i],
                    size: self.family.sizes[x],
                });
            }
        }
        Ok(self
            .classes
            .class(mi, encode_tuple(tuple, bits, &self.family.sizes)))
    }

    /// The first pair (member mask, tuple) representing a class, scanning
    /// members in ascending mask order.
    pub fn representative(&self, class: usize) -> Result<(u64, Vec<usize>)> {
        for (mi, &mask) in self.member_masks.iter().enumerate() {
            for (t, &c) in self.classes.class_of[mi].iter().enumerate() {
                if c == class {
                    return Ok((
                        mask,
                        decode_tuple(t, &self.member_elements[mi], &self.family.sizes),
                    ));
                }
            }
        }
        Err(Error::IndexOutOfRange {
            index: class,
            size: self.size(),
        })
    }

    /// The collapse onto the witness fiber: every member contains the
    /// witness, and restrictions preserve its coordinate, so each class
    /// has a well-defined value there.  Errors if the collapse fails to
    /// be well defined or bijective.
    pub fn collapse_to_witness(&self) -> Result<FiniteMap> {
        let w = self.ultrafilter.witness();
        let mut values: Vec<Option<usize>> = vec![None; self.size()];
        for (mi, bits) in self.member_elements.iter().enumerate() {
            let pos = bits
                .iter()
                .position(|&x| x == w)
                .ok_or_else(|| Error::InvalidStructure("member misses the witness".into()))?;
            for (t, &class) in self.classes.class_of[mi].iter().enumerate() {
                let value = decode_tuple(t, bits, &self.family.sizes)[pos];
                match values[class] {
                    None => values[class] = Some(value),
                    Some(v) if v != value => {
                        return Err(Error::InvalidStructure(
                            "collapse is not constant on a class".into(),
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
        let table: Vec<usize> = values
            .into_iter()
            .map(|v| v.ok_or_else(|| Error::InvalidStructure("class without elements".into())))
            .collect::<Result<_>>()?;
        let mut seen = table.clone();
        seen.sort_unstable();
        seen.dedup();
        if table.len() != self.family.sizes[w] || seen.len() != table.len() {
            return Err(Error::InvalidStructure(
                "collapse onto the witness fiber is not bijective".into(),
            ));
        }
        FiniteMap::new(FiniteSet::new(self.size()), self.family.fiber(w), table)
    }

    /// The inverse collapse: the class of the singleton-member tuple
    /// holding one witness value.
    pub fn class_from_witness_value(&self, value: usize) -> Result<usize> {
        self.class_of(1u64 << self.ultrafilter.witness(), &[value])
    }
}

/// The ultraproduct computed over the opposite of a category of elements:
/// each object `(b, f)` carries the fiber product over the points where
/// `f` hits its integral, and arrows restrict.
#[derive(Debug, Clone)]
pub struct ElementsUltraproduct {
    pub elements: ElementsCategory,
    pub h_masks: Vec<u64>,
    pub classes: ColimitData,
}

impl ElementsUltraproduct {
    pub fn size(&self) -> usize {
        self.classes.class_count
    }
}

pub fn ultraproduct_via_elements(
    family: &FamObject,
    u: &Ultrafilter,
    sizes: &[usize],
    caps: &Caps,
) -> Result<ElementsUltraproduct> {
    if u.carrier().size() != family.index.size() {
        return Err(Error::CarrierMismatch {
            expected: family.index.size(),
            found: u.carrier().size(),
        });
    }
    let elements = category_of_elements(sizes, &family.index, true, caps)?;
    let mut h_masks = Vec::with_capacity(elements.objects.len());
    for object in &elements.objects {
        let value = integrate(u, &object.map)?;
        let mask = (0..family.index.size())
            .filter(|&x| object.map.apply(x) == value)
            .fold(0u64, |m, x| m | 1 << x);
        h_masks.push(mask);
    }
    let op = elements.category.opposite();
    let bit_lists: Vec<Vec<usize>> = h_masks.iter().map(|&m| member_bits(m)).collect();
    let fibers = bit_lists
        .iter()
        .map(|bits| {
            Ok(FiniteSet::new(tuple_product(
                bits,
                &family.sizes,
                caps.enumeration,
            )?))
        })
        .collect::<Result<Vec<_>>>()?;
    let maps = (0..op.arrow_count())
        .map(|f| {
            let (src, dst) = (op.src(f), op.dst(f));
            if h_masks[dst] & !h_masks[src] != 0 {
                return Err(Error::InvalidStructure(
                    "restriction target is not contained in its source".into(),
                ));
            }
            let table = (0..fibers[src].size())
                .map(|t| {
                    let tuple = decode_tuple(t, &bit_lists[src], &family.sizes);
                    let sub: Vec<usize> = bit_lists[dst]
                        .iter()
                        .map(|x| {
                            let pos = bit_lists[src]
                                .iter()
                                .position(|y| y == x)
                                .expect("containment was checked above");
                            tuple[pos]
                        })
                        .collect();
                    encode_tuple(&sub, &bit_lists[dst], &family.sizes)
                })
                .collect();
            FiniteMap::new(fibers[src].clone(), fibers[dst].clone(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    let diagram = SetDiagram::new(op, fibers, maps)?;
    let classes = colimit(&diagram, caps.enumeration)?;
    Ok(ElementsUltraproduct {
        elements,
        h_masks,
        classes,
    })
}

/// Outcome of matching the member-poset and elements-category routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltraproductRouteReport {
    pub poset_size: usize,
    pub elements_size: usize,
    pub well_defined: bool,
    pub bijective: bool,
}

impl UltraproductRouteReport {
    pub fn agree(&self) -> bool {
        self.well_defined && self.bijective && self.poset_size == self.elements_size
    }
}

/// Send each member's tuples through the coprojection at its
/// characteristic map and compare class structures.  The shape must
/// contain a codomain with at least three elements.
pub fn ultraproduct_routes_agree(
    family: &FamObject,
    u: &Ultrafilter,
    sizes: &[usize],
    caps: &Caps,
) -> Result<UltraproductRouteReport> {
    if !sizes.iter().any(|&s| s >= 3) {
        return Err(Error::HypothesisViolated(
            "matching the routes needs a codomain with at least three elements".to_string(),
        ));
    }
    let (size_index, &anchor) = sizes
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s >= 2)
        .min_by_key(|&(_, &s)| s)
        .expect("a size of at least three is present");
    let direct = ultraproduct(family, u, caps.enumeration)?;
    let via = ultraproduct_via_elements(family, u, sizes, caps)?;
    let omega = FiniteSet::new(anchor);
    let mut to_elements: Vec<Option<usize>> = vec![None; direct.size()];
    let mut well_defined = true;
    for (mi, &mask) in direct.member_masks().iter().enumerate() {
        let subset = Subset::new(family.index.clone(), mask)?;
        let chi = characteristic_map(&subset, &omega)?;
        let object = via.elements.object_index(size_index, &chi).ok_or_else(|| {
            Error::InvalidStructure("characteristic map missing from the shape".into())
        })?;
        if via.h_masks[object] != mask {
            well_defined = false;
            continue;
        }
        for (t, &class) in direct.classes.class_of[mi].iter().enumerate() {
            let elem_class = via.classes.class(object, t);
            match to_elements[class] {
                None => to_elements[class] = Some(elem_class),
                Some(c) if c != elem_class => well_defined = false,
                Some(_) => {}
            }
        }
    }
    let mut images: Vec<usize> = to_elements.iter().filter_map(|c| *c).collect();
    let total = images.len() == direct.size();
    images.sort_unstable();
    images.dedup();
    let bijective = total && images.len() == direct.size() && images.len() == via.size();
    Ok(UltraproductRouteReport {
        poset_size: direct.size(),
        elements_size: via.size(),
        well_defined,
        bijective,
    })
}

/// A family together with the ultraproducts over every ultrafilter on its
/// index set, in enumeration order.
#[derive(Debug, Clone)]
pub struct VObject {
    pub object: FamObject,
    pub ultraproducts: Vec<Ultraproduct>,
}

/// Apply the ultraproduct functor to a family: the new index set is the
/// set of ultrafilters, the new fibers are the ultraproducts.
pub fn v_on_object(family: &FamObject, cap: u64) -> Result<VObject> {
    let ultrafilters = enumerate_ultrafilters(&family.index)?;
    let mut sizes = Vec::with_capacity(ultrafilters.len());
    let mut ultraproducts = Vec::with_capacity(ultrafilters.len());
    for u in &ultrafilters {
        let up = ultraproduct(family, u, cap)?;
        sizes.push(up.size());
        ultraproducts.push(up);
    }
    let object = FamObject::new(ultrafilter_carrier(&family.index), sizes)?;
    Ok(VObject {
        object,
        ultraproducts,
    })
}

/// Apply the ultraproduct functor to a morphism.  The base pushes
/// ultrafilters forward; each component carries a class of the target
/// ultraproduct to the class of its componentwise pullback, checked to be
/// independent of the representative.
pub fn v_on_morphism(m: &FamMorphism, cap: u64) -> Result<FamMorphism> {
    let dom_v = v_on_object(&m.dom, cap)?;
    let cod_v = v_on_object(&m.cod, cap)?;
    let dom_ultrafilters = enumerate_ultrafilters(&m.dom.index)?;
    let mut base_table = Vec::with_capacity(dom_ultrafilters.len());
    for u in &dom_ultrafilters {
        base_table.push(pushforward(&m.base, u)?.witness());
    }
    let base = FiniteMap::new(
        ultrafilter_carrier(&m.dom.index),
        ultrafilter_carrier(&m.cod.index),
        base_table.clone(),
    )?;
    let mut components = Vec::with_capacity(dom_ultrafilters.len());
    for (i, _) in dom_ultrafilters.iter().enumerate() {
        let source = &cod_v.ultraproducts[base_table[i]];
        let target = &dom_v.ultraproducts[i];
        let mut table: Vec<Option<usize>> = vec![None; source.size()];
        for (mi, &mask) in source.member_masks().iter().enumerate() {
            let cod_bits = &source.member_elements[mi];
            let pre_mask = (0..m.dom.index.size())
                .filter(|&x| mask >> m.base.apply(x) & 1 == 1)
                .fold(0u64, |acc, x| acc | 1 << x);
            let pre_bits = member_bits(pre_mask);
            for (t, &class) in source.classes.class_of[mi].iter().enumerate() {
                let tuple = decode_tuple(t, cod_bits, &m.cod.sizes);
                let pulled: Vec<usize> = pre_bits
                    .iter()
                    .map(|&x| {
                        let pos = cod_bits
                            .iter()
                            .position(|&y| y == m.base.apply(x))
                            .expect("preimage points map into the member");
                        m.components[x].apply(tuple[pos])
                    })
                    .collect();
                let image = target.class_of(pre_mask, &pulled)?;
                match table[class] {
                    None => table[class] = Some(image),
                    Some(existing) if existing != image => {
                        return Err(Error::InvalidStructure(
                            "pullback of classes is not well defined".into(),
                        ))
                    }
                    Some(_) => {}
                }
            }
        }
        let table: Vec<usize> = table
            .into_iter()
            .map(|v| v.ok_or_else(|| Error::InvalidStructure("class without elements".into())))
            .collect::<Result<_>>()?;
        components.push(FiniteMap::new(
            FiniteSet::new(source.size()),
            FiniteSet::new(target.size()),
            table,
        )?);
    }
    FamMorphism::new(dom_v.object, cod_v.object, base, components)
}

/// The monad unit at a family: principal inclusion on indices, collapse
/// onto witness fibers backward.
pub fn monad_unit(family: &FamObject, cap: u64) -> Result<FamMorphism> {
    let v = v_on_object(family, cap)?;
    let n = family.index.size();
    let mut base_table = Vec::with_capacity(n);
    for x in 0..n {
        base_table.push(unit(&family.index, x)?.witness());
    }
    let base = FiniteMap::new(
        family.index.clone(),
        ultrafilter_carrier(&family.index),
        base_table.clone(),
    )?;
    let components = (0..n)
        .map(|x| v.ultraproducts[base_table[x]].collapse_to_witness())
        .collect::<Result<_>>()?;
    FamMorphism::new(family.clone(), v.object, base, components)
}

/// The monad multiplication at a family: ultrafilter multiplication on
/// indices, inverse collapse backward.
pub fn monad_mult(family: &FamObject, cap: u64) -> Result<FamMorphism> {
    let v = v_on_object(family, cap)?;
    let vv = v_on_object(&v.object, cap)?;
    let base = multiplication_map(&family.index)?;
    let components = (0..vv.object.index.size())
        .map(|j| {
            let source = &v.ultraproducts[base.apply(j)];
            let target = &vv.ultraproducts[j];
            let table = (0..source.size())
                .map(|c| target.class_from_witness_value(c))
                .collect::<Result<_>>()?;
            FiniteMap::new(
                FiniteSet::new(source.size()),
                FiniteSet::new(target.size()),
                table,
            )
        })
        .collect::<Result<_>>()?;
    FamMorphism::new(vv.object, v.object, base, components)
}

/// Outcome of checking the monad laws at one family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamMonadLaws {
    pub left_unit: bool,
    pub right_unit: bool,
    pub associative: bool,
}

impl FamMonadLaws {
    pub fn all_hold(&self) -> bool {
        self.left_unit && self.right_unit && self.associative
    }
}

/// Verify the monad laws at one family by composing the finite data.
pub fn monad_laws_at(family: &FamObject, cap: u64) -> Result<FamMonadLaws> {
    let v = v_on_object(family, cap)?;
    let mult = monad_mult(family, cap)?;
    let id_v = FamMorphism::identity(&v.object);

    let unit_at_v = monad_unit(&v.object, cap)?;
    let left_unit = mult.compose(&unit_at_v)? == id_v;

    let v_unit = v_on_morphism(&monad_unit(family, cap)?, cap)?;
    let right_unit = mult.compose(&v_unit)? == id_v;

    let mult_at_v = monad_mult(&v.object, cap)?;
    let v_mult = v_on_morphism(&mult, cap)?;
    let associative = mult.compose(&mult_at_v)? == mult.compose(&v_mult)?;

    Ok(FamMonadLaws {
        left_unit,
        right_unit,
        associative,
    })
}

/// Aggregated outcome of the exhaustive monad-law sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamMonadReport {
    pub families_checked: usize,
    pub failures: Vec<String>,
}

impl FamMonadReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the monad laws on every family with index size up to
/// `max_index` and fiber sizes up to `max_component`.
pub fn monad_laws_report(
    max_index: usize,
    max_component: usize,
    cap: u64,
) -> Result<FamMonadReport> {
    let mut families_checked = 0;
    let mut failures = Vec::new();
    for n in 0..=max_index {
        let mut sizes = vec![0usize; n];
        loop {
            let family = FamObject::from_fiber_sizes(sizes.clone());
            let laws = monad_laws_at(&family, cap)?;
            families_checked += 1;
            if !laws.all_hold() {
                failures.push(format!("{sizes:?}: {laws:?}"));
            }
            let mut pos = 0;
            while pos < n && sizes[pos] == max_component {
                sizes[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
            sizes[pos] += 1;
        }
    }
    Ok(FamMonadReport {
        families_checked,
        failures,
    })
}

/// Seeded random generation of families and morphisms.
pub mod sample {
    use rand::Rng;

    use super::{FamMorphism, FamObject};
    use crate::error::{Error, Result};
    use crate::finset::{FiniteMap, FiniteSet};

    /// A family with up to `max_index` points and fibers up to `max_fiber`.
    pub fn fam_object(rng: &mut impl Rng, max_index: usize, max_fiber: usize) -> FamObject {
        let n = rng.random_range(0..=max_index);
        let sizes = (0..n).map(|_| rng.random_range(0..=max_fiber)).collect();
        FamObject::from_fiber_sizes(sizes)
    }

    /// A morphism between two given families, when one exists: each index
    /// needs an image whose fiber maps into its own.
    pub fn fam_morphism(
        rng: &mut impl Rng,
        dom: &FamObject,
        cod: &FamObject,
    ) -> Result<FamMorphism> {
        let mut base_table = Vec::with_capacity(dom.index().size());
        let mut components = Vec::with_capacity(dom.index().size());
        for x in 0..dom.index().size() {
            let valid: Vec<usize> = (0..cod.index().size())
                .filter(|&y| cod.sizes()[y] == 0 || dom.sizes()[x] > 0)
                .collect();
            if valid.is_empty() {
                return Err(Error::InvalidStructure(format!(
                    "no valid image for index {x}"
                )));
            }
            let y = valid[rng.random_range(0..valid.len())];
            base_table.push(y);
            let table = (0..cod.sizes()[y])
                .map(|_| rng.random_range(0..dom.sizes()[x]))
                .collect();
            components.push(FiniteMap::new(
                FiniteSet::new(cod.sizes()[y]),
                FiniteSet::new(dom.sizes()[x]),
                table,
            )?);
        }
        let base = FiniteMap::new(dom.index().clone(), cod.index().clone(), base_table)?;
        FamMorphism::new(dom.clone(), cod.clone(), base, components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const CAP: u64 = 1 << 24;

    fn principal(n: usize, x: usize) -> Ultrafilter {
        Ultrafilter::principal(FiniteSet::new(n), x).unwrap()
    }

    #[test]
    fn json_literal_roundtrip() {
        let fam = FamObject::from_fiber_sizes(vec![2, 3, 0, 1]);
        let text = fam.to_json();
        assert_eq!(text, r#"{"index":4,"components":[2,3,0,1]}"#);
        assert_eq!(FamObject::from_json(&text).unwrap(), fam);
        assert!(FamObject::from_json("{}").is_err());
        assert!(FamObject::from_json(r#"{"index":1,"components":[-1]}"#).is_err());
        assert!(FamObject::from_json(r#"{"index":2,"components":[1]}"#).is_err());
    }

    #[test]
    fn morphism_validation_and_composition() {
        let a = FamObject::from_fiber_sizes(vec![2, 1]);
        let b = FamObject::from_fiber_sizes(vec![3]);
        let base = FiniteMap::new(a.index().clone(), b.index().clone(), vec![0, 0]).unwrap();
        let comps = vec![
            FiniteMap::new(FiniteSet::new(3), FiniteSet::new(2), vec![0, 1, 0]).unwrap(),
            FiniteMap::new(FiniteSet::new(3), FiniteSet::new(1), vec![0, 0, 0]).unwrap(),
        ];
        let m = FamMorphism::new(a.clone(), b.clone(), base.clone(), comps).unwrap();
        let id_a = FamMorphism::identity(&a);
        let id_b = FamMorphism::identity(&b);
        assert_eq!(m.compose(&id_a).unwrap(), m);
        assert_eq!(id_b.compose(&m).unwrap(), m);
        // Component running the wrong way is rejected.
        let bad = FamMorphism::new(
            a.clone(),
            b.clone(),
            base,
            vec![
                FiniteMap::new(FiniteSet::new(2), FiniteSet::new(3), vec![0, 1]).unwrap(),
                FiniteMap::new(FiniteSet::new(3), FiniteSet::new(1), vec![0, 0, 0]).unwrap(),
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn ultraproducts_collapse_to_the_witness_fiber() {
        let fam = FamObject::from_fiber_sizes(vec![2, 3, 2]);
        for x in 0..3 {
            let up = ultraproduct(&fam, &principal(3, x), CAP).unwrap();
            assert_eq!(up.size(), fam.sizes()[x], "x={x}");
            let collapse = up.collapse_to_witness().unwrap();
            for s in 0..fam.sizes()[x] {
                assert_eq!(collapse.apply(up.class_from_witness_value(s).unwrap()), s);
            }
        }
    }

    #[test]
    fn empty_fibers_empty_the_ultraproduct_only_at_their_point() {
        let fam = FamObject::from_fiber_sizes(vec![0, 1]);
        assert_eq!(ultraproduct(&fam, &principal(2, 1), CAP).unwrap().size(), 1);
        assert_eq!(ultraproduct(&fam, &principal(2, 0), CAP).unwrap().size(), 0);
        let all_empty = FamObject::from_fiber_sizes(vec![0, 0]);
        assert_eq!(
            ultraproduct(&all_empty, &principal(2, 0), CAP)
                .unwrap()
                .size(),
            0
        );
    }

    #[test]
    fn classes_identify_tuples_agreeing_on_a_member() {
        let fam = FamObject::from_fiber_sizes(vec![2, 2, 3]);
        let up = ultraproduct(&fam, &principal(3, 2), CAP).unwrap();
        // Tuples over the full set agreeing at the witness are identified.
        let full = 0b111u64;
        let a = up.class_of(full, &[0, 0, 1]).unwrap();
        let b = up.class_of(full, &[1, 1, 1]).unwrap();
        let c = up.class_of(full, &[0, 0, 2]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(up.class_of(0b100, &[1]).unwrap(), a);
        let (mask, tuple) = up.representative(a).unwrap();
        assert_eq!(up.class_of(mask, &tuple).unwrap(), a);
    }

    #[test]
    fn elements_route_matches_the_member_poset_route() {
        let caps = Caps::default();
        let families = [
            FamObject::from_fiber_sizes(vec![2, 3]),
            FamObject::from_fiber_sizes(vec![0, 2]),
            FamObject::from_fiber_sizes(vec![2, 1, 3]),
            FamObject::from_fiber_sizes(vec![1, 0, 2]),
        ];
        for fam in &families {
            let n = fam.index().size();
            for x in 0..n {
                let u = principal(n, x);
                for sizes in [vec![1usize, 2, 3], vec![3]] {
                    let report = ultraproduct_routes_agree(fam, &u, &sizes, &caps).unwrap();
                    assert!(
                        report.agree(),
                        "fam={:?} x={x} sizes={sizes:?}: {report:?}",
                        fam.sizes()
                    );
                }
            }
        }
    }

    #[test]
    fn route_comparison_needs_a_three_element_codomain() {
        let caps = Caps::default();
        let fam = FamObject::from_fiber_sizes(vec![2, 2]);
        let err = ultraproduct_routes_agree(&fam, &principal(2, 0), &[1, 2], &caps).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated(_)));
    }

    #[test]
    fn functor_preserves_identities_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 6 {
            let a = sample::fam_object(&mut rng, 3, 3);
            let b = sample::fam_object(&mut rng, 3, 3);
            let c = sample::fam_object(&mut rng, 3, 3);
            let (m1, m2) = match (
                sample::fam_morphism(&mut rng, &a, &b),
                sample::fam_morphism(&mut rng, &b, &c),
            ) {
                (Ok(m1), Ok(m2)) => (m1, m2),
                _ => continue,
            };
            let va = v_on_object(&a, CAP).unwrap();
            assert_eq!(
                v_on_morphism(&FamMorphism::identity(&a), CAP).unwrap(),
                FamMorphism::identity(&va.object)
            );
            let lhs = v_on_morphism(&m2.compose(&m1).unwrap(), CAP).unwrap();
            let rhs = v_on_morphism(&m2, CAP)
                .unwrap()
                .compose(&v_on_morphism(&m1, CAP).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
            checked += 1;
        }
    }

    #[test]
    fn unit_is_natural() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 6 {
            let a = sample::fam_object(&mut rng, 3, 3);
            let b = sample::fam_object(&mut rng, 3, 3);
            let m = match sample::fam_morphism(&mut rng, &a, &b) {
                Ok(m) => m,
                Err(_) => continue,
            };
            let lhs = v_on_morphism(&m, CAP)
                .unwrap()
                .compose(&monad_unit(&a, CAP).unwrap());
            let rhs = monad_unit(&b, CAP).unwrap().compose(&m);
            assert_eq!(lhs.unwrap(), rhs.unwrap());
            checked += 1;
        }
    }

    #[test]
    fn monad_laws_hold_on_small_families() {
        for sizes in [vec![2usize, 3], vec![0, 2], vec![1, 2, 2]] {
            let fam = FamObject::from_fiber_sizes(sizes.clone());
            let laws = monad_laws_at(&fam, CAP).unwrap();
            assert!(laws.all_hold(), "sizes={sizes:?}: {laws:?}");
        }
    }

    #[test]
    fn monad_law_sweep_covers_every_small_family() {
        let report = monad_laws_report(2, 2, CAP).unwrap();
        assert_eq!(report.families_checked, 1 + 3 + 9);
        assert!(report.all_hold(), "{:?}", report.failures);
    }

    #[test]
    fn constant_families_collapse_to_the_constant_fiber() {
        let fam = FamObject::from_fiber_sizes(vec![3, 3, 3]);
        for x in 0..3 {
            let up = ultraproduct(&fam, &principal(3, x), CAP).unwrap();
            assert_eq!(up.size(), 3);
            assert!(up.collapse_to_witness().is_ok());
        }
    }
}
