//! Finite categories, set-valued diagrams, and their limits and colimits.
//!
//! A [`FiniteCategory`] stores objects, arrows, identities, and (when small
//! enough to materialize) a composition table.  A [`SetDiagram`] assigns a
//! finite fiber to each object and a compatible map to each arrow.  Limits
//! are computed by constraint propagation with a backtracking search and are
//! cross-checkable against a naive product-filter oracle; colimits glue
//! fibers with a union-find.  [`category_of_elements`] builds the comma
//! category of maps from a fixed carrier into a chosen family of finite
//! sets, the shape over which codensity limits are taken.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{count_maps, enumerate_maps, FiniteMap, FiniteSet};
use crate::Caps;

/// Largest diagram fiber the limit solver accepts; domains are bitmasks.
pub const MAX_FIBER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
struct ArrowData {
    src: usize,
    dst: usize,
    name: String,
}

/// A finite category: objects `0..object_count`, indexed arrows, and a
/// composition table keyed by `(second, first)`.
///
/// The table is optional so that very large categories can still be carried
/// around for limit computations, which only read sources and targets.
/// Operations that genuinely need composition return an error when the
/// table was not materialized.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    object_names: Vec<String>,
    arrows: Vec<ArrowData>,
    identities: Vec<usize>,
    composition: Option<HashMap<(usize, usize), usize>>,
}

impl FiniteCategory {
    /// Build and exhaustively validate a category: identity typing and
    /// laws, composition typing, totality on composable pairs, and
    /// associativity on all composable triples.
    pub fn new(
        object_names: Vec<String>,
        arrows: Vec<(usize, usize, String)>,
        identities: Vec<usize>,
        composition: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let cat = FiniteCategory {
            object_names,
            arrows: arrows
                .into_iter()
                .map(|(src, dst, name)| ArrowData { src, dst, name })
                .collect(),
            identities,
            composition: Some(composition),
        };
        cat.validate()?;
        Ok(cat)
    }

    /// Build without validation; for constructions correct by design where
    /// exhaustive checking would dominate the run.
    pub fn new_unchecked(
        object_names: Vec<String>,
        arrows: Vec<(usize, usize, String)>,
        identities: Vec<usize>,
        composition: Option<HashMap<(usize, usize), usize>>,
    ) -> Self {
        FiniteCategory {
            object_names,
            arrows: arrows
                .into_iter()
                .map(|(src, dst, name)| ArrowData { src, dst, name })
                .collect(),
            identities,
            composition,
        }
    }

    fn validate(&self) -> Result<()> {
        let n_obj = self.object_count();
        let n_arr = self.arrow_count();
        for a in &self.arrows {
            if a.src >= n_obj || a.dst >= n_obj {
                return Err(Error::IndexOutOfRange {
                    index: a.src.max(a.dst),
                    size: n_obj,
                });
            }
        }
        if self.identities.len() != n_obj {
            return Err(Error::InvalidStructure(
                "one identity arrow per object is required".into(),
            ));
        }
        for (o, &id) in self.identities.iter().enumerate() {
            if id >= n_arr {
                return Err(Error::IndexOutOfRange {
                    index: id,
                    size: n_arr,
                });
            }
            if self.arrows[id].src != o || self.arrows[id].dst != o {
                return Err(Error::InvalidStructure(format!(
                    "identity of object {o} is not an endo-arrow of {o}"
                )));
            }
        }
        let table = self
            .composition
            .as_ref()
            .expect("the checked constructor always supplies a table");
        for (&(g, f), &c) in table {
            if g >= n_arr || f >= n_arr || c >= n_arr {
                return Err(Error::IndexOutOfRange {
                    index: g.max(f).max(c),
                    size: n_arr,
                });
            }
            if self.arrows[f].dst != self.arrows[g].src {
                return Err(Error::InvalidStructure(format!(
                    "table entry ({g}, {f}) composes non-composable arrows"
                )));
            }
            if self.arrows[c].src != self.arrows[f].src || self.arrows[c].dst != self.arrows[g].dst
            {
                return Err(Error::InvalidStructure(format!(
                    "composite of ({g}, {f}) has the wrong endpoints"
                )));
            }
        }
        for f in 0..n_arr {
            for g in 0..n_arr {
                if self.arrows[f].dst == self.arrows[g].src && !table.contains_key(&(g, f)) {
                    return Err(Error::InvalidStructure(format!(
                        "composable pair ({g}, {f}) is missing from the table"
                    )));
                }
            }
        }
        for (f, arrow) in self.arrows.iter().enumerate() {
            if table[&(f, self.identities[arrow.src])] != f
                || table[&(self.identities[arrow.dst], f)] != f
            {
                return Err(Error::InvalidStructure(format!(
                    "identity laws fail at arrow {f}"
                )));
            }
        }
        for f in 0..n_arr {
            for g in 0..n_arr {
                if self.arrows[f].dst != self.arrows[g].src {
                    continue;
                }
                let gf = table[&(g, f)];
                for h in 0..n_arr {
                    if self.arrows[g].dst != self.arrows[h].src {
                        continue;
                    }
                    if table[&(h, gf)] != table[&(table[&(h, g)], f)] {
                        return Err(Error::InvalidStructure(format!(
                            "associativity fails at ({h}, {g}, {f})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The thin category of a preorder given by its order relation.
    /// Rejects relations that fail reflexivity or transitivity.
    pub fn from_preorder(
        object_names: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let n = object_names.len();
        for a in 0..n {
            if !leq(a, a) {
                return Err(Error::InvalidStructure(format!(
                    "preorder is not reflexive at {a}"
                )));
            }
            for b in 0..n {
                for c in 0..n {
                    if leq(a, b) && leq(b, c) && !leq(a, c) {
                        return Err(Error::InvalidStructure(format!(
                            "preorder is not transitive at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut arrows = Vec::new();
        let mut arrow_index = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    arrow_index.insert((a, b), arrows.len());
                    arrows.push((a, b, format!("{a}<={b}")));
                }
            }
        }
        let identities = (0..n).map(|a| arrow_index[&(a, a)]).collect();
        let mut composition = HashMap::new();
        for (&(a, b), &f) in &arrow_index {
            for (&(b2, c), &g) in &arrow_index {
                if b == b2 {
                    composition.insert((g, f), arrow_index[&(a, c)]);
                }
            }
        }
        FiniteCategory::new(object_names, arrows, identities, composition)
    }

    /// The category with the same objects, reversed arrows, and the
    /// transposed composition table.
    pub fn opposite(&self) -> Self {
        FiniteCategory {
            object_names: self.object_names.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowData {
                    src: a.dst,
                    dst: a.src,
                    name: format!("{}^op", a.name),
                })
                .collect(),
            identities: self.identities.clone(),
            composition: self
                .composition
                .as_ref()
                .map(|t| t.iter().map(|(&(g, f), &c)| ((f, g), c)).collect()),
        }
    }

    pub fn object_count(&self) -> usize {
        self.object_names.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn object_name(&self, o: usize) -> &str {
        &self.object_names[o]
    }

    pub fn arrow_name(&self, f: usize) -> &str {
        &self.arrows[f].name
    }

    pub fn src(&self, f: usize) -> usize {
        self.arrows[f].src
    }

    pub fn dst(&self, f: usize) -> usize {
        self.arrows[f].dst
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn has_composition_table(&self) -> bool {
        self.composition.is_some()
    }

    /// The composite `g` after `f`, requiring a materialized table.
    pub fn compose(&self, g: usize, f: usize) -> Result<usize> {
        let table = self.composition.as_ref().ok_or(Error::SizeCapExceeded {
            what: "composition table",
            required: 0,
            cap: 0,
        })?;
        table.get(&(g, f)).copied().ok_or_else(|| {
            Error::InvalidStructure(format!("arrows {g} and {f} are not composable"))
        })
    }

    /// Arrow indices from `a` to `b` in ascending order.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.arrow_count())
            .filter(|&f| self.arrows[f].src == a && self.arrows[f].dst == b)
            .collect()
    }

    /// Whether every pair of objects admits a cone and every parallel pair
    /// of arrows is equalized by some arrow into the common source.
    /// Requires a composition table and a nonempty category.
    pub fn is_cofiltered(&self) -> Result<bool> {
        if self.composition.is_none() {
            return Err(Error::SizeCapExceeded {
                what: "composition table",
                required: 0,
                cap: 0,
            });
        }
        if self.object_count() == 0 {
            return Ok(false);
        }
        for a in 0..self.object_count() {
            for b in 0..self.object_count() {
                let spanned = (0..self.object_count())
                    .any(|c| !self.hom(c, a).is_empty() && !self.hom(c, b).is_empty());
                if !spanned {
                    return Ok(false);
                }
            }
        }
        for f in 0..self.arrow_count() {
            for g in 0..self.arrow_count() {
                if f == g
                    || self.arrows[f].src != self.arrows[g].src
                    || self.arrows[f].dst != self.arrows[g].dst
                {
                    continue;
                }
                let a = self.arrows[f].src;
                let equalized = (0..self.arrow_count()).any(|e| {
                    self.arrows[e].dst == a
                        && self.compose(f, e).unwrap() == self.compose(g, e).unwrap()
                });
                if !equalized {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// A functor to finite sets: one fiber per object, one map per arrow.
#[derive(Debug, Clone)]
pub struct SetDiagram {
    category: FiniteCategory,
    fibers: Vec<FiniteSet>,
    maps: Vec<FiniteMap>,
}

impl SetDiagram {
    /// Build and validate: typing of every map, identities to identities,
    /// and functoriality on all composable pairs when the category carries
    /// a composition table.
    pub fn new(
        category: FiniteCategory,
        fibers: Vec<FiniteSet>,
        maps: Vec<FiniteMap>,
    ) -> Result<Self> {
        if fibers.len() != category.object_count() {
            return Err(Error::CarrierMismatch {
                expected: category.object_count(),
                found: fibers.len(),
            });
        }
        if maps.len() != category.arrow_count() {
            return Err(Error::CarrierMismatch {
                expected: category.arrow_count(),
                found: maps.len(),
            });
        }
        for (f, map) in maps.iter().enumerate() {
            if map.dom().size() != fibers[category.src(f)].size()
                || map.cod().size() != fibers[category.dst(f)].size()
            {
                return Err(Error::InvalidStructure(format!(
                    "map at arrow {f} does not match its fibers"
                )));
            }
        }
        for o in 0..category.object_count() {
            let id = &maps[category.identity(o)];
            if (0..fibers[o].size()).any(|v| id.apply(v) != v) {
                return Err(Error::InvalidStructure(format!(
                    "identity arrow of object {o} does not act as the identity"
                )));
            }
        }
        if category.has_composition_table() {
            for f in 0..category.arrow_count() {
                for g in 0..category.arrow_count() {
                    if category.dst(f) != category.src(g) {
                        continue;
                    }
                    let gf = category.compose(g, f)?;
                    for v in 0..fibers[category.src(f)].size() {
                        if maps[gf].apply(v) != maps[g].apply(maps[f].apply(v)) {
                            return Err(Error::InvalidStructure(format!(
                                "functoriality fails at pair ({g}, {f})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(SetDiagram {
            category,
            fibers,
            maps,
        })
    }

    /// Build without validation; for diagrams correct by construction.
    pub fn new_unchecked(
        category: FiniteCategory,
        fibers: Vec<FiniteSet>,
        maps: Vec<FiniteMap>,
    ) -> Self {
        SetDiagram {
            category,
            fibers,
            maps,
        }
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.category
    }

    pub fn fiber(&self, o: usize) -> &FiniteSet {
        &self.fibers[o]
    }

    pub fn map(&self, f: usize) -> &FiniteMap {
        &self.maps[f]
    }
}

/// One element of a limit: a choice of fiber element per object, commuting
/// with every arrow of the diagram.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LimitElement {
    pub choices: Vec<usize>,
}

struct LimitSearch<'a> {
    diagram: &'a SetDiagram,
    arcs: Vec<(usize, usize, bool)>,
    touching: Vec<Vec<usize>>,
    node_budget: u64,
    nodes: u64,
    solutions: Vec<LimitElement>,
}

impl<'a> LimitSearch<'a> {
    /// Narrow both endpoint domains of every queued arc to a fixed point.
    /// Returns false when some domain empties.
    fn propagate(&mut self, domains: &mut [u64], seed: Option<usize>) -> bool {
        let mut queue: Vec<usize> = match seed {
            Some(var) => self.touching[var].clone(),
            None => (0..self.arcs.len()).collect(),
        };
        let mut queued = vec![false; self.arcs.len()];
        for &a in &queue {
            queued[a] = true;
        }
        while let Some(arc) = queue.pop() {
            queued[arc] = false;
            let (arrow, var, forward) = self.arcs[arc];
            let map = self.diagram.map(arrow);
            let src = self.diagram.category.src(arrow);
            let dst = self.diagram.category.dst(arrow);
            let before = domains[var];
            let mut after = 0u64;
            if forward {
                // Keep w in dom(dst) only when some v in dom(src) maps to it.
                let mut rest = domains[src];
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    after |= 1u64 << map.apply(v);
                }
                after &= before;
            } else {
                // Keep v in dom(src) only when its image stays in dom(dst).
                let mut rest = before;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    if domains[dst] & (1u64 << map.apply(v)) != 0 {
                        after |= 1u64 << v;
                    }
                }
            }
            if after == before {
                continue;
            }
            domains[var] = after;
            if after == 0 {
                return false;
            }
            for &next in &self.touching[var] {
                if !queued[next] {
                    queued[next] = true;
                    queue.push(next);
                }
            }
        }
        true
    }

    fn search(&mut self, domains: &[u64]) -> Result<()> {
        let pick = (0..domains.len())
            .filter(|&v| domains[v].count_ones() > 1)
            .min_by_key(|&v| domains[v].count_ones());
        let var = match pick {
            Some(v) => v,
            None => {
                self.solutions.push(LimitElement {
                    choices: domains
                        .iter()
                        .map(|d| d.trailing_zeros() as usize)
                        .collect(),
                });
                return Ok(());
            }
        };
        let mut rest = domains[var];
        while rest != 0 {
            let value = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            self.nodes += 1;
            if self.nodes > self.node_budget {
                return Err(Error::SizeCapExceeded {
                    what: "limit search nodes",
                    required: self.nodes as u128,
                    cap: self.node_budget as u128,
                });
            }
            let mut scratch = domains.to_vec();
            scratch[var] = 1u64 << value;
            if self.propagate(&mut scratch, Some(var)) {
                self.search(&scratch)?;
            }
        }
        Ok(())
    }
}

/// All elements of the limit of a set diagram, in ascending choice order.
///
/// Solved as a constraint problem: fiber domains are bitmasks, endo-arrows
/// become fixed-point prefilters, the rest propagate in both directions
/// until stable, and remaining ambiguity is settled by backtracking on a
/// smallest-domain-first variable order under `caps.solver_nodes`.
pub fn limit(diagram: &SetDiagram, caps: &Caps) -> Result<Vec<LimitElement>> {
    let n_obj = diagram.category.object_count();
    let mut domains = Vec::with_capacity(n_obj);
    for o in 0..n_obj {
        let size = diagram.fiber(o).size();
        if size > MAX_FIBER {
            return Err(Error::SizeCapExceeded {
                what: "limit fiber",
                required: size as u128,
                cap: MAX_FIBER as u128,
            });
        }
        domains.push(if size == 64 {
            u64::MAX
        } else {
            (1u64 << size) - 1
        });
    }
    let mut arcs = Vec::new();
    for f in 0..diagram.category.arrow_count() {
        let (src, dst) = (diagram.category.src(f), diagram.category.dst(f));
        if src == dst {
            let map = diagram.map(f);
            let mut fixed = 0u64;
            for v in 0..diagram.fiber(src).size() {
                if map.apply(v) == v {
                    fixed |= 1u64 << v;
                }
            }
            domains[src] &= fixed;
        } else {
            arcs.push((f, dst, true));
            arcs.push((f, src, false));
        }
    }
    if domains.contains(&0) && n_obj > 0 {
        return Ok(Vec::new());
    }
    // Arcs to reconsider when a variable's domain shrinks: forward arcs
    // reading it as source, backward arcs reading it as destination.
    let mut touching = vec![Vec::new(); n_obj];
    for (i, &(arrow, _, forward)) in arcs.iter().enumerate() {
        let read = if forward {
            diagram.category.src(arrow)
        } else {
            diagram.category.dst(arrow)
        };
        touching[read].push(i);
    }
    let mut searcher = LimitSearch {
        diagram,
        arcs,
        touching,
        node_budget: caps.solver_nodes,
        nodes: 0,
        solutions: Vec::new(),
    };
    if searcher.propagate(&mut domains, None) {
        searcher.search(&domains)?;
    }
    let mut solutions = searcher.solutions;
    solutions.sort();
    Ok(solutions)
}

/// Limit by brute force: enumerate the full product of fibers and keep the
/// tuples commuting with every arrow.  Independent of the solver; used to
/// cross-check it.
pub fn naive_limit(diagram: &SetDiagram, cap: u64) -> Result<Vec<LimitElement>> {
    let n_obj = diagram.category.object_count();
    let mut total: u128 = 1;
    for o in 0..n_obj {
        total = total.saturating_mul(diagram.fiber(o).size() as u128);
        if total > cap as u128 {
            return Err(Error::SizeCapExceeded {
                what: "naive limit product",
                required: total,
                cap: cap as u128,
            });
        }
    }
    let mut out = Vec::new();
    let mut choices = vec![0usize; n_obj];
    if n_obj == 0 {
        return Ok(vec![LimitElement { choices }]);
    }
    if (0..n_obj).any(|o| diagram.fiber(o).size() == 0) {
        return Ok(Vec::new());
    }
    loop {
        let commutes = (0..diagram.category.arrow_count()).all(|f| {
            diagram.map(f).apply(choices[diagram.category.src(f)])
                == choices[diagram.category.dst(f)]
        });
        if commutes {
            out.push(LimitElement {
                choices: choices.clone(),
            });
        }
        let mut pos = n_obj;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            choices[pos] += 1;
            if choices[pos] < diagram.fiber(pos).size() {
                break;
            }
            choices[pos] = 0;
        }
    }
}

/// A colimit presented by its gluing: per object, per fiber element, the
/// index of its class.  Classes are numbered by first appearance when
/// scanning objects in order and elements in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColimitData {
    pub class_count: usize,
    pub class_of: Vec<Vec<usize>>,
}

impl ColimitData {
    pub fn class(&self, object: usize, element: usize) -> usize {
        self.class_of[object][element]
    }
}

/// The colimit of a set diagram: the disjoint union of fibers modulo the
/// relation generated by `v ~ map(v)` across every arrow.
pub fn colimit(diagram: &SetDiagram, cap: u64) -> Result<ColimitData> {
    let n_obj = diagram.category.object_count();
    let mut offsets = Vec::with_capacity(n_obj);
    let mut total = 0usize;
    for o in 0..n_obj {
        offsets.push(total);
        total += diagram.fiber(o).size();
        if total as u128 > cap as u128 {
            return Err(Error::SizeCapExceeded {
                what: "colimit carrier",
                required: total as u128,
                cap: cap as u128,
            });
        }
    }
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for f in 0..diagram.category.arrow_count() {
        let (src, dst) = (diagram.category.src(f), diagram.category.dst(f));
        for v in 0..diagram.fiber(src).size() {
            let a = find(&mut parent, offsets[src] + v);
            let b = find(&mut parent, offsets[dst] + diagram.map(f).apply(v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut class_index: HashMap<usize, usize> = HashMap::new();
    let mut class_of = Vec::with_capacity(n_obj);
    for (o, &offset) in offsets.iter().enumerate() {
        let mut row = Vec::with_capacity(diagram.fiber(o).size());
        for v in 0..diagram.fiber(o).size() {
            let root = find(&mut parent, offset + v);
            let next = class_index.len();
            row.push(*class_index.entry(root).or_insert(next));
        }
        class_of.push(row);
    }
    Ok(ColimitData {
        class_count: class_index.len(),
        class_of,
    })
}

/// One object of a category of elements: a chosen codomain index together
/// with a map from the fixed carrier into that codomain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementsObject {
    pub size_index: usize,
    pub map: FiniteMap,
}

/// The category of elements of `Hom(X, -)` restricted to codomains of the
/// given sizes, together with the map data needed to run diagrams over it.
#[derive(Debug, Clone)]
pub struct ElementsCategory {
    pub sizes: Vec<usize>,
    pub carrier: FiniteSet,
    pub full: bool,
    pub category: FiniteCategory,
    pub objects: Vec<ElementsObject>,
    thetas: Vec<FiniteMap>,
}

impl ElementsCategory {
    /// The connecting map carried by an arrow of the shape category.
    pub fn theta(&self, arrow: usize) -> &FiniteMap {
        &self.thetas[arrow]
    }

    /// The index of the object `(size_index, f)`, when present.
    pub fn object_index(&self, size_index: usize, f: &FiniteMap) -> Option<usize> {
        self.objects
            .iter()
            .position(|o| o.size_index == size_index && o.map.table() == f.table())
    }

    /// The canonical diagram: each object `(b, f)` goes to the codomain
    /// set `b`, each arrow to its connecting map.
    pub fn diagram(&self) -> SetDiagram {
        let fibers = self.objects.iter().map(|o| o.map.cod().clone()).collect();
        SetDiagram::new_unchecked(self.category.clone(), fibers, self.thetas.clone())
    }
}

/// Build the category of elements of maps from `x` into sets of the given
/// sizes.  With `full` set, arrows are all maps between codomains commuting
/// with the chosen elements; otherwise only identities, which cuts the
/// shape down to a discrete category of elements.
pub fn category_of_elements(
    sizes: &[usize],
    x: &FiniteSet,
    full: bool,
    caps: &Caps,
) -> Result<ElementsCategory> {
    let mut objects = Vec::new();
    let mut total: u128 = 0;
    for (si, &b) in sizes.iter().enumerate() {
        total += count_maps(x, &FiniteSet::new(b), caps.enumeration)? as u128;
        if total > caps.enumeration as u128 {
            return Err(Error::SizeCapExceeded {
                what: "elements category objects",
                required: total,
                cap: caps.enumeration as u128,
            });
        }
        for f in enumerate_maps(x, &FiniteSet::new(b), caps.enumeration)? {
            objects.push(ElementsObject {
                size_index: si,
                map: f,
            });
        }
    }
    let mut object_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for (i, o) in objects.iter().enumerate() {
        object_index.insert((o.size_index, o.map.table().to_vec()), i);
    }
    let mut arrows = Vec::new();
    let mut thetas = Vec::new();
    let mut arrow_index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    let mut identities = vec![usize::MAX; objects.len()];
    for (src, o) in objects.iter().enumerate() {
        let b = o.map.cod();
        for (ci, &c) in sizes.iter().enumerate() {
            let c_set = FiniteSet::new(c);
            for theta in enumerate_maps(b, &c_set, caps.enumeration)? {
                if !full && !(ci == o.size_index && theta.is_identity()) {
                    continue;
                }
                let g = theta.compose(&o.map)?;
                let dst = object_index[&(ci, g.table().to_vec())];
                let idx = arrows.len();
                if ci == o.size_index && theta.is_identity() {
                    identities[src] = idx;
                }
                arrow_index.insert((src, dst, theta.table().to_vec()), idx);
                arrows.push((src, dst, format!("{}->{}:{:?}", src, dst, theta.table())));
                thetas.push(theta);
            }
        }
    }
    let mut in_degree = vec![0u128; objects.len()];
    let mut out_degree = vec![0u128; objects.len()];
    for a in &arrows {
        out_degree[a.0] += 1;
        in_degree[a.1] += 1;
    }
    let pair_count: u128 = (0..objects.len())
        .map(|o| in_degree[o] * out_degree[o])
        .sum();
    let composition = if pair_count <= caps.composition_pairs as u128 {
        let mut table = HashMap::new();
        for (f, theta_f) in thetas.iter().enumerate() {
            for (g, theta_g) in thetas.iter().enumerate() {
                if arrows[f].1 != arrows[g].0 {
                    continue;
                }
                let composite = theta_g.compose(theta_f)?;
                let key = (arrows[f].0, arrows[g].1, composite.table().to_vec());
                table.insert((g, f), arrow_index[&key]);
            }
        }
        Some(table)
    } else {
        None
    };
    let object_names = objects
        .iter()
        .map(|o| format!("({}, {:?})", o.map.cod().size(), o.map.table()))
        .collect();
    let category = FiniteCategory::new_unchecked(object_names, arrows, identities, composition);
    Ok(ElementsCategory {
        sizes: sizes.to_vec(),
        carrier: x.clone(),
        full,
        category,
        objects,
        thetas,
    })
}

/// Serializable snapshot of a diagram over a category of elements.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DiagramDump {
    pub schema: u32,
    pub carrier_size: usize,
    pub sizes: Vec<usize>,
    pub full: bool,
    pub objects: Vec<DumpObject>,
    pub arrows: Vec<DumpArrow>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DumpObject {
    pub codomain_size: usize,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DumpArrow {
    pub src: usize,
    pub dst: usize,
    pub theta: Vec<usize>,
}

impl DiagramDump {
    pub const SCHEMA: u32 = 1;

    pub fn from_elements(elements: &ElementsCategory) -> Self {
        DiagramDump {
            schema: Self::SCHEMA,
            carrier_size: elements.carrier.size(),
            sizes: elements.sizes.clone(),
            full: elements.full,
            objects: elements
                .objects
                .iter()
                .map(|o| DumpObject {
                    codomain_size: o.map.cod().size(),
                    map: o.map.table().to_vec(),
                })
                .collect(),
            arrows: (0..elements.category.arrow_count())
                .map(|f| DumpArrow {
                    src: elements.category.src(f),
                    dst: elements.category.dst(f),
                    theta: elements.theta(f).table().to_vec(),
                })
                .collect(),
        }
    }
}
