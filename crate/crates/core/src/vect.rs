//! Vector spaces over prime fields and double dualization at desk scale.
//!
//! Vectors over `F_p` in dimension `d` are indexed little-endian: index
//! `sum v_i * p^i` stands for the coordinate vector `(v_0, .., v_{d-1})`.
//! Linear forms use the same convention on their coefficient rows, so the
//! dual space shares the index scheme of its source.  On top of this sit
//! the double dual as a filtered enumeration, the codensity carrier over
//! spaces of bounded dimension built as a limit of a concrete diagram,
//! integration of vector-valued maps against ultrafilters, and the monad
//! structure of iterated dualization on explicitly tabulated spaces.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{limit, FiniteCategory, LimitElement, SetDiagram};
use crate::finset::{FiniteMap, FiniteSet};
use crate::integration::integrate;
use crate::ultrafilter::Ultrafilter;
use crate::Caps;

/// Largest prime modulus accepted for field arithmetic.
pub const MAX_PRIME: usize = 997;

/// The field `F_p` for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: usize,
}

impl PrimeField {
    pub fn new(p: usize) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) {
            return Err(Error::InvalidStructure(format!(
                "field order {p} is out of range 2..={MAX_PRIME}"
            )));
        }
        if (2..p)
            .take_while(|q| q * q <= p)
            .any(|q| p.is_multiple_of(q))
        {
            return Err(Error::InvalidStructure(format!(
                "field order {p} is not prime"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        (a + b) % self.p
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        a * b % self.p
    }
}

/// The space `F_p^d` with its little-endian vector indexing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VectorSpace {
    field: PrimeField,
    dim: usize,
}

impl VectorSpace {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        VectorSpace { field, dim }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors, `p^d`, when it fits the cap.
    pub fn carrier_size(&self, cap: u64) -> Result<usize> {
        let total = (self.field.p as u128)
            .checked_pow(self.dim as u32)
            .unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::SizeCapExceeded {
                what: "vector space carrier",
                required: total,
                cap: cap as u128,
            });
        }
        Ok(total as usize)
    }

    pub fn index_to_vector(&self, mut index: usize) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.dim);
        for _ in 0..self.dim {
            v.push(index % self.field.p);
            index /= self.field.p;
        }
        v
    }

    pub fn vector_to_index(&self, v: &[usize]) -> usize {
        v.iter()
            .rev()
            .fold(0, |acc, &digit| acc * self.field.p + digit)
    }
}

/// A linear map as a row-major matrix over the common field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    dom: VectorSpace,
    cod: VectorSpace,
    entries: Vec<usize>,
}

impl LinearMap {
    pub fn new(dom: VectorSpace, cod: VectorSpace, entries: Vec<usize>) -> Result<Self> {
        if dom.field != cod.field {
            return Err(Error::InvalidStructure(
                "linear maps need a common base field".into(),
            ));
        }
        if entries.len() != dom.dim * cod.dim {
            return Err(Error::CarrierMismatch {
                expected: dom.dim * cod.dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|&e| e >= dom.field.p) {
            return Err(Error::IndexOutOfRange {
                index: *entries.iter().max().unwrap(),
                size: dom.field.p,
            });
        }
        Ok(LinearMap { dom, cod, entries })
    }

    pub fn identity(space: VectorSpace) -> Self {
        let mut entries = vec![0; space.dim * space.dim];
        for i in 0..space.dim {
            entries[i * space.dim + i] = 1;
        }
        LinearMap {
            dom: space,
            cod: space,
            entries,
        }
    }

    pub fn dom(&self) -> VectorSpace {
        self.dom
    }

    pub fn cod(&self) -> VectorSpace {
        self.cod
    }

    pub fn entry(&self, row: usize, col: usize) -> usize {
        self.entries[row * self.dom.dim + col]
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn apply_vector(&self, v: &[usize]) -> Vec<usize> {
        let f = &self.dom.field;
        (0..self.cod.dim)
            .map(|r| (0..self.dom.dim).fold(0, |acc, c| f.add(acc, f.mul(self.entry(r, c), v[c]))))
            .collect()
    }

    pub fn apply_index(&self, index: usize) -> usize {
        self.cod
            .vector_to_index(&self.apply_vector(&self.dom.index_to_vector(index)))
    }

    /// Composite `self . first`.
    pub fn compose(&self, first: &LinearMap) -> Result<LinearMap> {
        if first.cod != self.dom {
            return Err(Error::CarrierMismatch {
                expected: self.dom.dim,
                found: first.cod.dim,
            });
        }
        let f = &self.dom.field;
        let mut entries = vec![0; first.dom.dim * self.cod.dim];
        for r in 0..self.cod.dim {
            for c in 0..first.dom.dim {
                let mut acc = 0;
                for k in 0..self.dom.dim {
                    acc = f.add(acc, f.mul(self.entry(r, k), first.entry(k, c)));
                }
                entries[r * first.dom.dim + c] = acc;
            }
        }
        LinearMap::new(first.dom, self.cod, entries)
    }

    /// The underlying map of carriers under the index conventions.
    pub fn as_finite_map(&self, cap: u64) -> Result<FiniteMap> {
        let dom_size = self.dom.carrier_size(cap)?;
        let cod_size = self.cod.carrier_size(cap)?;
        let table = (0..dom_size).map(|i| self.apply_index(i)).collect();
        FiniteMap::new(FiniteSet::new(dom_size), FiniteSet::new(cod_size), table)
    }

    /// Entrywise sum of two parallel maps.
    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::InvalidStructure(
                "sums need parallel linear maps".into(),
            ));
        }
        let f = &self.dom.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        LinearMap::new(self.dom, self.cod, entries)
    }

    /// Entrywise scalar multiple.
    pub fn scale(&self, lambda: usize) -> Result<LinearMap> {
        if lambda >= self.dom.field.p {
            return Err(Error::IndexOutOfRange {
                index: lambda,
                size: self.dom.field.p,
            });
        }
        let f = &self.dom.field;
        let entries = self.entries.iter().map(|&a| f.mul(lambda, a)).collect();
        LinearMap::new(self.dom, self.cod, entries)
    }

    /// Rank by Gaussian elimination over the field.
    pub fn rank(&self) -> usize {
        let p = self.dom.field.p;
        let (rows, cols) = (self.cod.dim, self.dom.dim);
        let mut m: Vec<Vec<usize>> = (0..rows)
            .map(|r| (0..cols).map(|c| self.entry(r, c)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = (1..p)
                .find(|&x| m[rank][col] * x % p == 1)
                .expect("nonzero residues are invertible modulo a prime");
            for entry in &mut m[rank][col..] {
                *entry = *entry * inv % p;
            }
            let pivot_row = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[col] != 0 {
                    let factor = row[col];
                    for (entry, &pe) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *entry = (*entry + (p - 1) * factor % p * pe) % p;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }
}

/// The dual of a space: same dimension, forms indexed by coefficient rows.
pub fn dual_space(space: VectorSpace) -> VectorSpace {
    space
}

/// The dual of a map: the transpose, running contravariantly between the
/// dual spaces.
pub fn dual_map(f: &LinearMap) -> LinearMap {
    let mut entries = Vec::with_capacity(f.entries.len());
    for r in 0..f.dom.dim {
        for c in 0..f.cod.dim {
            entries.push(f.entry(c, r));
        }
    }
    LinearMap {
        dom: dual_space(f.cod),
        cod: dual_space(f.dom),
        entries,
    }
}

/// All linear maps between two spaces, ordered by the little-endian index
/// of their row-major entry lists.
pub fn enumerate_linear_maps(
    dom: VectorSpace,
    cod: VectorSpace,
    cap: u64,
) -> Result<Vec<LinearMap>> {
    if dom.field != cod.field {
        return Err(Error::InvalidStructure(
            "linear maps need a common base field".into(),
        ));
    }
    let p = dom.field.p;
    let cells = dom.dim * cod.dim;
    let total = (p as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::SizeCapExceeded {
            what: "linear map enumeration",
            required: total,
            cap: cap as u128,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    for index in 0..total as usize {
        let mut entries = Vec::with_capacity(cells);
        let mut rest = index;
        for _ in 0..cells {
            entries.push(rest % p);
            rest /= p;
        }
        out.push(LinearMap::new(dom, cod, entries)?);
    }
    Ok(out)
}

/// Value tables of every linear form on the space, ordered by the index of
/// their coefficient rows.  Entry `v` of table `a` is `sum a_i * v_i`.
pub fn linear_forms(space: VectorSpace, cap: u64) -> Result<Vec<Vec<usize>>> {
    let line = VectorSpace::new(space.field, 1);
    let n = space.carrier_size(cap)?;
    enumerate_linear_maps(space, line, cap)?
        .iter()
        .map(|form| Ok((0..n).map(|v| form.apply_index(v)).collect()))
        .collect()
}

/// Elements of the double dual: tables over form indices, linear for the
/// coefficient-wise structure of the dual space.
pub fn enumerate_double_dual(space: VectorSpace, cap: u64) -> Result<Vec<Vec<usize>>> {
    let p = space.field.p;
    let n_forms = space.carrier_size(cap)?;
    let dual = space;
    let total = (p as u128).checked_pow(n_forms as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::SizeCapExceeded {
            what: "double dual enumeration",
            required: total,
            cap: cap as u128,
        });
    }
    let add_forms: Vec<Vec<usize>> = (0..n_forms)
        .map(|a| {
            let va = dual.index_to_vector(a);
            (0..n_forms)
                .map(|b| {
                    let vb = dual.index_to_vector(b);
                    let sum: Vec<usize> = va
                        .iter()
                        .zip(&vb)
                        .map(|(&x, &y)| space.field.add(x, y))
                        .collect();
                    dual.vector_to_index(&sum)
                })
                .collect()
        })
        .collect();
    let scale_forms: Vec<Vec<usize>> = (0..p)
        .map(|lambda| {
            (0..n_forms)
                .map(|a| {
                    let va = dual.index_to_vector(a);
                    let scaled: Vec<usize> =
                        va.iter().map(|&x| space.field.mul(lambda, x)).collect();
                    dual.vector_to_index(&scaled)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for candidate in 0..total as usize {
        let mut table = Vec::with_capacity(n_forms);
        let mut rest = candidate;
        for _ in 0..n_forms {
            table.push(rest % p);
            rest /= p;
        }
        let additive = (0..n_forms).all(|a| {
            (a..n_forms).all(|b| table[add_forms[a][b]] == space.field.add(table[a], table[b]))
        });
        if additive
            && (0..n_forms)
                .all(|a| (0..p).all(|l| table[scale_forms[l][a]] == space.field.mul(l, table[a])))
        {
            out.push(table);
        }
    }
    Ok(out)
}

/// The double dual element given by evaluating forms at the vector.
pub fn evaluation_element(space: VectorSpace, vector: usize, cap: u64) -> Result<Vec<usize>> {
    let forms = linear_forms(space, cap)?;
    if vector >= forms.len() {
        return Err(Error::IndexOutOfRange {
            index: vector,
            size: forms.len(),
        });
    }
    Ok(forms.iter().map(|t| t[vector]).collect())
}

/// Check that evaluation is a bijection onto the double dual.
pub fn double_dual_is_evaluation(space: VectorSpace, cap: u64) -> Result<bool> {
    let elements = enumerate_double_dual(space, cap)?;
    let n = space.carrier_size(cap)?;
    let mut images: Vec<Vec<usize>> = (0..n)
        .map(|v| evaluation_element(space, v, cap))
        .collect::<Result<_>>()?;
    images.sort();
    images.dedup();
    if images.len() != n || elements.len() != n {
        return Ok(false);
    }
    let mut sorted = elements;
    sorted.sort();
    Ok(sorted == images)
}

/// Pushforward of a double dual element along a linear map: precompose
/// every form of the target with the map.
pub fn double_dual_pushforward(l: &LinearMap, element: &[usize], cap: u64) -> Result<Vec<usize>> {
    let dual_dom = l.dom();
    let n_dom_forms = dual_dom.carrier_size(cap)?;
    if element.len() != n_dom_forms {
        return Err(Error::CarrierMismatch {
            expected: n_dom_forms,
            found: element.len(),
        });
    }
    let line = VectorSpace::new(l.dom().field, 1);
    let cod_forms = enumerate_linear_maps(l.cod(), line, cap)?;
    cod_forms
        .iter()
        .map(|eta| {
            let pulled = eta.compose(l)?;
            let row: Vec<usize> = (0..l.dom().dim).map(|c| pulled.entry(0, c)).collect();
            Ok(element[l.dom().vector_to_index(&row)])
        })
        .collect()
}

/// Integrate a vector-valued map coordinatewise against an ultrafilter.
/// `values[x]` is the vector index assigned to `x`.
pub fn vect_integrate(
    u: &Ultrafilter,
    space: VectorSpace,
    values: &[usize],
    cap: u64,
) -> Result<usize> {
    let n = u.carrier().size();
    if values.len() != n {
        return Err(Error::CarrierMismatch {
            expected: n,
            found: values.len(),
        });
    }
    let size = space.carrier_size(cap)?;
    if let Some(&bad) = values.iter().find(|&&v| v >= size) {
        return Err(Error::IndexOutOfRange { index: bad, size });
    }
    let field_set = FiniteSet::new(space.field.p);
    let mut digits = Vec::with_capacity(space.dim);
    for i in 0..space.dim {
        let coord_table: Vec<usize> = values
            .iter()
            .map(|&v| space.index_to_vector(v)[i])
            .collect();
        let coord = FiniteMap::new(u.carrier().clone(), field_set.clone(), coord_table)?;
        digits.push(integrate(u, &coord)?);
    }
    Ok(space.vector_to_index(&digits))
}

/// The shape for the codensity carrier of a space: objects are linear maps
/// out of it into spaces of dimension at most `max_dim`, arrows are the
/// linear maps commuting with them.
#[derive(Debug, Clone)]
pub struct VectElements {
    pub space: VectorSpace,
    pub max_dim: usize,
    pub objects: Vec<(usize, LinearMap)>,
    thetas: Vec<LinearMap>,
    category: FiniteCategory,
}

impl VectElements {
    pub fn theta(&self, arrow: usize) -> &LinearMap {
        &self.thetas[arrow]
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.category
    }

    pub fn object_index(&self, dim: usize, xi: &LinearMap) -> Option<usize> {
        self.objects
            .iter()
            .position(|(w, m)| *w == dim && m.entries() == xi.entries())
    }

    pub fn diagram(&self, cap: u64) -> Result<SetDiagram> {
        let fibers = self
            .objects
            .iter()
            .map(|(_, xi)| Ok(FiniteSet::new(xi.cod().carrier_size(cap)?)))
            .collect::<Result<Vec<_>>>()?;
        let maps = self
            .thetas
            .iter()
            .map(|t| t.as_finite_map(cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(SetDiagram::new_unchecked(
            self.category.clone(),
            fibers,
            maps,
        ))
    }
}

/// Build the shape for `space` with codomain dimensions `0..=max_dim`.
pub fn vect_elements(space: VectorSpace, max_dim: usize, caps: &Caps) -> Result<VectElements> {
    let mut objects = Vec::new();
    let mut total: u128 = 0;
    for w in 0..=max_dim {
        let target = VectorSpace::new(space.field, w);
        let these = enumerate_linear_maps(space, target, caps.enumeration)?;
        total += these.len() as u128;
        if total > caps.enumeration as u128 {
            return Err(Error::SizeCapExceeded {
                what: "vector shape objects",
                required: total,
                cap: caps.enumeration as u128,
            });
        }
        objects.extend(these.into_iter().map(|xi| (w, xi)));
    }
    let mut object_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for (i, (w, xi)) in objects.iter().enumerate() {
        object_index.insert((*w, xi.entries().to_vec()), i);
    }
    let mut arrows = Vec::new();
    let mut thetas = Vec::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for (src, (w, xi)) in objects.iter().enumerate() {
        for w2 in 0..=max_dim {
            let target = VectorSpace::new(space.field, w2);
            for theta in enumerate_linear_maps(xi.cod(), target, caps.enumeration)? {
                let composed = theta.compose(xi)?;
                let dst = object_index[&(w2, composed.entries().to_vec())];
                if w2 == *w && theta.entries() == LinearMap::identity(xi.cod()).entries() {
                    identities[src] = arrows.len();
                }
                arrows.push((src, dst, format!("{src}->{dst}:{:?}", theta.entries())));
                thetas.push(theta);
            }
        }
    }
    let object_names = objects
        .iter()
        .map(|(w, xi)| format!("({w}, {:?})", xi.entries()))
        .collect();
    let category = FiniteCategory::new_unchecked(object_names, arrows, identities, None);
    Ok(VectElements {
        space,
        max_dim,
        objects,
        thetas,
        category,
    })
}

/// The codensity carrier of the space over bounded-dimension codomains.
pub fn vect_codensity_carrier(
    space: VectorSpace,
    max_dim: usize,
    caps: &Caps,
) -> Result<(VectElements, Vec<LimitElement>)> {
    let elements = vect_elements(space, max_dim, caps)?;
    let points = limit(&elements.diagram(caps.enumeration)?, caps)?;
    Ok((elements, points))
}

/// Whether every carrier point acts additively and homogeneously on each
/// hom-set of the skeleton, exhaustively over parallel pairs and scalars.
pub fn linearity_for_free(
    elements: &VectElements,
    points: &[LimitElement],
    cap: u64,
) -> Result<bool> {
    let space = elements.space;
    let field = space.field();
    for w in 0..=elements.max_dim {
        let target = VectorSpace::new(field, w);
        let maps = enumerate_linear_maps(space, target, cap)?;
        let index_of = |m: &LinearMap| -> Result<usize> {
            elements
                .object_index(w, m)
                .ok_or_else(|| Error::InvalidStructure("linear map missing from the shape".into()))
        };
        for f in &maps {
            let fi = index_of(f)?;
            for g in &maps {
                let gi = index_of(g)?;
                let si = index_of(&f.add(g)?)?;
                for point in points {
                    let fv = target.index_to_vector(point.choices[fi]);
                    let gv = target.index_to_vector(point.choices[gi]);
                    let sv = target.index_to_vector(point.choices[si]);
                    if (0..w).any(|i| field.add(fv[i], gv[i]) != sv[i]) {
                        return Ok(false);
                    }
                }
            }
            for lambda in 0..field.order() {
                let li = index_of(&f.scale(lambda)?)?;
                for point in points {
                    let fv = target.index_to_vector(point.choices[fi]);
                    let lv = target.index_to_vector(point.choices[li]);
                    if (0..w).any(|i| field.mul(lambda, fv[i]) != lv[i]) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The evaluation point of a vector: coordinate `xi(v)` at object `xi`.
pub fn vect_unit_point(elements: &VectElements, vector: usize) -> LimitElement {
    LimitElement {
        choices: elements
            .objects
            .iter()
            .map(|(_, xi)| xi.apply_index(vector))
            .collect(),
    }
}

/// Read a vector off a limit point from its coordinates at the standard
/// coordinate forms, then verify the whole point is that vector's
/// evaluation.
pub fn point_to_vector(elements: &VectElements, point: &LimitElement) -> Result<usize> {
    let space = elements.space;
    let line = VectorSpace::new(space.field, 1);
    let mut digits = Vec::with_capacity(space.dim);
    for i in 0..space.dim {
        let mut entries = vec![0; space.dim];
        entries[i] = 1;
        let form = LinearMap::new(space, line, entries)?;
        let object = elements.object_index(1, &form).ok_or_else(|| {
            Error::InvalidStructure("coordinate form missing from the shape".into())
        })?;
        digits.push(point.choices[object]);
    }
    let vector = space.vector_to_index(&digits);
    if vect_unit_point(elements, vector) != *point {
        return Err(Error::InvalidStructure(
            "point is not the evaluation of any vector".into(),
        ));
    }
    Ok(vector)
}

/// Outcome of comparing a codensity carrier with its source space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectComparison {
    pub field_order: usize,
    pub dim: usize,
    pub max_dim: usize,
    pub space_size: usize,
    pub codensity_size: usize,
    pub evaluation_injective: bool,
    pub recovery_roundtrips: bool,
}

impl VectComparison {
    pub fn bijective(&self) -> bool {
        self.space_size == self.codensity_size
            && self.evaluation_injective
            && self.recovery_roundtrips
    }
}

/// Verify that the codensity carrier over dimensions up to `max_dim >= 2`
/// is exactly the space itself: evaluation lands injectively in the
/// carrier and every carrier point recovers to a vector.  Dimension caps
/// below two are refused; their carriers are still computable with
/// [`vect_codensity_carrier`].
pub fn vect_comparison(space: VectorSpace, max_dim: usize, caps: &Caps) -> Result<VectComparison> {
    if max_dim < 2 {
        return Err(Error::HypothesisViolated(
            "the comparison needs codomain dimensions up to at least two".to_string(),
        ));
    }
    let (elements, points) = vect_codensity_carrier(space, max_dim, caps)?;
    let n = space.carrier_size(caps.enumeration)?;
    let images: Vec<LimitElement> = (0..n).map(|v| vect_unit_point(&elements, v)).collect();
    let evaluation_injective = {
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        sorted.len() == n && images.iter().all(|p| points.binary_search(p).is_ok())
    };
    let mut recovery_roundtrips = true;
    for point in &points {
        match point_to_vector(&elements, point) {
            Ok(_) => {}
            Err(_) => {
                recovery_roundtrips = false;
            }
        }
    }
    Ok(VectComparison {
        field_order: space.field.p,
        dim: space.dim,
        max_dim,
        space_size: n,
        codensity_size: points.len(),
        evaluation_injective,
        recovery_roundtrips,
    })
}

/// A finite vector space tabulated element by element: closed under
/// pointwise addition and scaling, containing the zero table.  The
/// scaffolding for iterating duals, where each dual space is the table
/// space of linear forms on the previous one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpace {
    field: PrimeField,
    elements: Vec<Vec<usize>>,
}

impl TableSpace {
    /// Build from element tables; sorts them, then validates closure.
    pub fn new(field: PrimeField, mut elements: Vec<Vec<usize>>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::InvalidStructure("a table space is nonempty".into()));
        }
        let width = elements[0].len();
        if elements.iter().any(|e| e.len() != width) {
            return Err(Error::InvalidStructure("ragged element tables".into()));
        }
        if elements.iter().any(|e| e.iter().any(|&v| v >= field.p)) {
            return Err(Error::InvalidStructure("table entry out of field".into()));
        }
        let space = TableSpace { field, elements };
        for a in 0..space.elements.len() {
            for b in 0..space.elements.len() {
                if space.index_of(&space.add(a, b)).is_none() {
                    return Err(Error::InvalidStructure(format!(
                        "not closed under addition at ({a}, {b})"
                    )));
                }
            }
            for l in 0..field.p {
                if space.index_of(&space.scale(l, a)).is_none() {
                    return Err(Error::InvalidStructure(format!(
                        "not closed under scaling at ({l}, {a})"
                    )));
                }
            }
        }
        Ok(space)
    }

    /// The standard space `F_p^d`: all digit vectors of length `d`.
    pub fn standard(field: PrimeField, dim: usize, cap: u64) -> Result<Self> {
        let n = VectorSpace::new(field, dim).carrier_size(cap)?;
        let space = VectorSpace::new(field, dim);
        let elements = (0..n).map(|i| space.index_to_vector(i)).collect();
        TableSpace::new(field, elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &[usize] {
        &self.elements[i]
    }

    pub fn index_of(&self, table: &[usize]) -> Option<usize> {
        self.elements
            .binary_search_by(|e| e.as_slice().cmp(table))
            .ok()
    }

    fn add(&self, a: usize, b: usize) -> Vec<usize> {
        self.elements[a]
            .iter()
            .zip(&self.elements[b])
            .map(|(&x, &y)| self.field.add(x, y))
            .collect()
    }

    fn scale(&self, lambda: usize, a: usize) -> Vec<usize> {
        self.elements[a]
            .iter()
            .map(|&x| self.field.mul(lambda, x))
            .collect()
    }

    /// The space of linear forms: tables over the elements, additive and
    /// homogeneous for the pointwise structure.
    pub fn forms(&self, cap: u64) -> Result<TableSpace> {
        let p = self.field.p;
        let n = self.len();
        let total = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::SizeCapExceeded {
                what: "form enumeration",
                required: total,
                cap: cap as u128,
            });
        }
        let sum_index: Vec<Vec<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        self.index_of(&self.add(a, b))
                            .expect("closure was validated")
                    })
                    .collect()
            })
            .collect();
        let scale_index: Vec<Vec<usize>> = (0..p)
            .map(|l| {
                (0..n)
                    .map(|a| {
                        self.index_of(&self.scale(l, a))
                            .expect("closure was validated")
                    })
                    .collect()
            })
            .collect();
        let mut found = Vec::new();
        for candidate in 0..total as usize {
            let mut table = Vec::with_capacity(n);
            let mut rest = candidate;
            for _ in 0..n {
                table.push(rest % p);
                rest /= p;
            }
            let additive = (0..n).all(|a| {
                (a..n).all(|b| table[sum_index[a][b]] == self.field.add(table[a], table[b]))
            });
            let homogeneous = additive
                && (0..p).all(|l| {
                    (0..n).all(|a| table[scale_index[l][a]] == self.field.mul(l, table[a]))
                });
            if additive && homogeneous {
                found.push(table);
            }
        }
        TableSpace::new(self.field, found)
    }

    /// The double dual: forms of forms.
    pub fn double_dual(&self, cap: u64) -> Result<TableSpace> {
        self.forms(cap)?.forms(cap)
    }
}

/// Monad data for iterated dualization at one space, with the law checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualMonadReport {
    pub field_order: usize,
    pub dim: usize,
    pub unit_bijective: bool,
    pub left_unit: bool,
    pub right_unit: bool,
    pub associative: bool,
}

impl DualMonadReport {
    pub fn all_hold(&self) -> bool {
        self.unit_bijective && self.left_unit && self.right_unit && self.associative
    }
}

/// The unit at a table space: the element of the double dual evaluating
/// forms at the given element.
fn unit_into(forms_s: &TableSpace, ts: &TableSpace, i: usize) -> Result<usize> {
    let table: Vec<usize> = (0..forms_s.len()).map(|f| forms_s.element(f)[i]).collect();
    ts.index_of(&table)
        .ok_or_else(|| Error::InvalidStructure("evaluation landed outside the double dual".into()))
}

/// Multiplication at a table space: restrict an element of the fourth
/// dual along the evaluation forms.  `forms_ts` are the forms on the
/// double dual, `t2s` its double dual.
fn mult_into(
    forms_s: &TableSpace,
    ts: &TableSpace,
    forms_ts: &TableSpace,
    t2s: &TableSpace,
    big_xi: usize,
) -> Result<usize> {
    let mut table = Vec::with_capacity(forms_s.len());
    for xi in 0..forms_s.len() {
        let ev_xi: Vec<usize> = (0..ts.len()).map(|phi| ts.element(phi)[xi]).collect();
        let idx = forms_ts.index_of(&ev_xi).ok_or_else(|| {
            Error::InvalidStructure("evaluation form missing from the dual".into())
        })?;
        table.push(t2s.element(big_xi)[idx]);
    }
    ts.index_of(&table).ok_or_else(|| {
        Error::InvalidStructure("multiplication landed outside the double dual".into())
    })
}

/// The action of dualization on a morphism given as an index table
/// `l: s -> s2`: precompose forms, then transpose again.
fn dual_on_morphism(
    s: &TableSpace,
    forms_s: &TableSpace,
    ts: &TableSpace,
    forms_s2: &TableSpace,
    ts2: &TableSpace,
    l: &[usize],
) -> Result<Vec<usize>> {
    let mut pulled_index = Vec::with_capacity(forms_s2.len());
    for eta in 0..forms_s2.len() {
        let pulled: Vec<usize> = (0..s.len()).map(|e| forms_s2.element(eta)[l[e]]).collect();
        pulled_index.push(forms_s.index_of(&pulled).ok_or_else(|| {
            Error::InvalidStructure("precomposed form is not linear on the source".into())
        })?);
    }
    let mut out = Vec::with_capacity(ts.len());
    for phi in 0..ts.len() {
        let table: Vec<usize> = (0..forms_s2.len())
            .map(|eta| ts.element(phi)[pulled_index[eta]])
            .collect();
        out.push(ts2.index_of(&table).ok_or_else(|| {
            Error::InvalidStructure("pushforward landed outside the double dual".into())
        })?);
    }
    Ok(out)
}

/// Check the monad laws of iterated dualization on `F_p^d` by direct
/// computation on tabulated spaces.
pub fn dual_monad_report(field: PrimeField, dim: usize, cap: u64) -> Result<DualMonadReport> {
    let s = TableSpace::standard(field, dim, cap)?;
    let f1 = s.forms(cap)?;
    let ts = f1.forms(cap)?;
    let f3 = ts.forms(cap)?;
    let t2s = f3.forms(cap)?;
    let f5 = t2s.forms(cap)?;
    let t3s = f5.forms(cap)?;

    let unit: Vec<usize> = (0..s.len())
        .map(|i| unit_into(&f1, &ts, i))
        .collect::<Result<_>>()?;
    let unit_bijective = {
        let mut seen = unit.clone();
        seen.sort();
        seen.dedup();
        seen.len() == s.len() && s.len() == ts.len()
    };

    let mu: Vec<usize> = (0..t2s.len())
        .map(|xi| mult_into(&f1, &ts, &f3, &t2s, xi))
        .collect::<Result<_>>()?;

    // Left unit: the unit of the double dual, then multiplication.
    let unit_at_ts: Vec<usize> = (0..ts.len())
        .map(|i| unit_into(&f3, &t2s, i))
        .collect::<Result<_>>()?;
    let left_unit = (0..ts.len()).all(|phi| mu[unit_at_ts[phi]] == phi);

    // Right unit: the dualized unit, then multiplication.
    let t_unit = dual_on_morphism(&s, &f1, &ts, &f3, &t2s, &unit)?;
    let right_unit = (0..ts.len()).all(|phi| mu[t_unit[phi]] == phi);

    // Associativity: multiplication at the double dual against the
    // dualized multiplication, followed by multiplication.
    let mu_at_ts: Vec<usize> = (0..t3s.len())
        .map(|xi| mult_into(&f3, &t2s, &f5, &t3s, xi))
        .collect::<Result<_>>()?;
    let t_mu = dual_on_morphism(&t2s, &f5, &t3s, &f3, &t2s, &mu)?;
    let associative = (0..t3s.len()).all(|omega| mu[mu_at_ts[omega]] == mu[t_mu[omega]]);

    Ok(DualMonadReport {
        field_order: field.p,
        dim,
        unit_bijective,
        left_unit,
        right_unit,
        associative,
    })
}
