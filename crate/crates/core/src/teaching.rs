//! Concept classes of closed neighborhoods, teaching maps, and the
//! non-clashing verifier. The verifier is the correctness oracle for every
//! solver, kernel and construction in this crate: nothing claims "yes"
//! without a map that passes [`verify`].

use std::collections::BTreeMap;

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::graph::Graph;

/// Which teaching maps are admissible.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Teaching sets may contain arbitrary vertices (negative examples allowed).
    General,
    /// Every teaching set must be a subset of its concept.
    Positive,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::General => "general",
            Variant::Positive => "positive",
        }
    }
}

/// One concept: a closed neighborhood, tagged with every center that
/// induces it. The canonical center is the smallest.
#[derive(Clone, Debug)]
pub struct Concept {
    canonical: usize,
    members: VertexSet,
    centers: Vec<usize>,
}

impl Concept {
    pub fn canonical(&self) -> usize {
        self.canonical
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }
}

/// A set of distinct closed-neighborhood concepts over one graph.
///
/// Centers inducing equal neighborhoods are merged into a single concept at
/// construction; the merges are recorded so callers can expand answers back
/// to all centers.
#[derive(Clone, Debug)]
pub struct ConceptClass {
    n: usize,
    concepts: Vec<Concept>,
    merged: Vec<(usize, usize)>,
}

impl ConceptClass {
    pub fn new(g: &Graph, centers: &[usize]) -> Result<Self, Error> {
        let mut concepts: Vec<Concept> = Vec::new();
        let mut merged = Vec::new();
        let mut sorted = centers.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &c in &sorted {
            let nbhd = g.closed_neighborhood(c)?;
            match concepts.iter_mut().find(|k| k.members == nbhd) {
                Some(k) => {
                    merged.push((c, k.canonical));
                    k.centers.push(c);
                }
                None => concepts.push(Concept { canonical: c, members: nbhd, centers: vec![c] }),
            }
        }
        Ok(ConceptClass { n: g.vertex_count(), concepts, merged })
    }

    /// The class containing every closed neighborhood of `g`.
    pub fn all_neighborhoods(g: &Graph) -> Self {
        let centers: Vec<usize> = g.vertices().collect();
        Self::new(g, &centers).expect("all vertices are valid centers")
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn canonical_centers(&self) -> impl Iterator<Item = usize> + '_ {
        self.concepts.iter().map(|c| c.canonical)
    }

    /// Center-to-canonical pairs recorded for merged duplicates.
    pub fn merged(&self) -> &[(usize, usize)] {
        &self.merged
    }

    pub fn index_of_canonical(&self, center: usize) -> Option<usize> {
        self.concepts.iter().position(|c| c.canonical == center)
    }

    pub fn index_of_set(&self, set: &VertexSet) -> Option<usize> {
        self.concepts.iter().position(|c| &c.members == set)
    }

    /// Whether the closed neighborhood of `v` (as a set) belongs to the class.
    pub fn contains_neighborhood(&self, g: &Graph, v: usize) -> Result<bool, Error> {
        let nbhd = g.closed_neighborhood(v)?;
        Ok(self.index_of_set(&nbhd).is_some())
    }

    pub fn max_concept_size(&self) -> usize {
        self.concepts.iter().map(|c| c.members.len()).max().unwrap_or(0)
    }
}

/// An assignment of an example set to each concept, keyed by canonical center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeachingMap {
    width: usize,
    sets: BTreeMap<usize, VertexSet>,
}

impl TeachingMap {
    /// The all-empty map over the concepts of `class`.
    pub fn empty_for(class: &ConceptClass) -> Self {
        let sets = class
            .canonical_centers()
            .map(|c| (c, VertexSet::empty(class.universe())))
            .collect();
        TeachingMap { width: class.universe(), sets }
    }

    pub fn assign(&mut self, canonical: usize, examples: VertexSet) -> Result<(), Error> {
        if !self.sets.contains_key(&canonical) {
            return Err(Error::MapUnknownConcept { center: canonical });
        }
        self.sets.insert(canonical, examples);
        Ok(())
    }

    pub fn get(&self, canonical: usize) -> Option<&VertexSet> {
        self.sets.get(&canonical)
    }

    /// Deterministic iteration in canonical-center order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &VertexSet)> {
        self.sets.iter().map(|(&c, s)| (c, s))
    }

    /// The size of the map: the maximum teaching-set cardinality.
    pub fn size(&self) -> usize {
        self.sets.values().map(|s| s.len()).max().unwrap_or(0)
    }
}

/// A pair of concepts no example in their teaching sets tells apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClashWitness {
    pub first: usize,
    pub second: usize,
}

/// Outcome of verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Clash(ClashWitness),
    /// `example` was taught for the concept at `center` but lies outside it.
    NotPositive { center: usize, example: usize },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

/// The concept family restricted to the `alive`-induced subgraph, in
/// original vertex ids: `(canonical alive center, restricted member set)`
/// per concept that still has an alive center. Used by the kernelizations,
/// whose deletions never merge two distinct surviving concepts.
pub(crate) fn restricted_family(
    alive: &VertexSet,
    class: &ConceptClass,
) -> Vec<(usize, VertexSet)> {
    let mut family = Vec::new();
    for concept in class.concepts() {
        if let Some(&canon) = concept.centers().iter().find(|&&c| alive.contains(c)) {
            family.push((canon, concept.members().intersection(alive)));
        }
    }
    family
}

/// The closed neighborhood of `v` in the `alive`-induced subgraph.
pub(crate) fn masked_neighborhood(g: &Graph, alive: &VertexSet, v: usize) -> VertexSet {
    let mut nb = g.neighbors(v).intersection(alive);
    nb.insert(v);
    nb
}

/// Checks the non-clashing condition for every pair that involves the
/// concept centered at `v`, under alive-restricted neighborhoods. `sets`
/// holds the teaching assignment as `(canonical center, examples)` pairs.
pub(crate) fn masked_pairs_ok(
    g: &Graph,
    alive: &VertexSet,
    sets: &[(usize, VertexSet)],
    v: usize,
    tv: &VertexSet,
) -> bool {
    let nv = masked_neighborhood(g, alive, v);
    for &(c, ref tc) in sets {
        if c == v {
            continue;
        }
        let diff = nv.symmetric_difference(&masked_neighborhood(g, alive, c));
        if diff.is_empty() {
            continue;
        }
        if !tv.intersects(&diff) && !tc.intersects(&diff) {
            return false;
        }
    }
    true
}

/// True iff example `w` lies in exactly one of `N[u]`, `N[v]`.
pub fn distinguishes(g: &Graph, w: usize, u: usize, v: usize) -> bool {
    let nu = g.closed_neighborhood(u).expect("valid vertex");
    let nv = g.closed_neighborhood(v).expect("valid vertex");
    nu.contains(w) != nv.contains(w)
}

/// True iff every teaching set is a subset of its concept.
pub fn is_positive(map: &TeachingMap, class: &ConceptClass) -> bool {
    class.concepts().iter().all(|c| match map.get(c.canonical()) {
        Some(set) => set.is_subset(c.members()),
        None => false,
    })
}

/// Checks the non-clashing condition (and positivity, for the positive
/// variant) of `map` on `class`.
///
/// Failures are reported deterministically: the first positivity violation
/// in canonical-center order, else the lexicographically first clashing pair
/// of canonical centers. A map whose domain differs from the concept set is
/// an input error, not a verdict.
pub fn verify(
    g: &Graph,
    class: &ConceptClass,
    map: &TeachingMap,
    variant: Variant,
) -> Result<Verdict, Error> {
    for concept in class.concepts() {
        if map.get(concept.canonical()).is_none() {
            return Err(Error::MapMissingConcept { center: concept.canonical() });
        }
    }
    for (center, _) in map.iter() {
        if class.index_of_canonical(center).is_none() {
            return Err(Error::MapUnknownConcept { center });
        }
    }
    for (_, set) in map.iter() {
        for v in set.iter() {
            g.check_vertex(v)?;
        }
    }

    if variant == Variant::Positive {
        for concept in class.concepts() {
            let set = map.get(concept.canonical()).expect("domain checked");
            let outside = set.difference(concept.members());
            if let Some(example) = outside.first() {
                return Ok(Verdict::NotPositive { center: concept.canonical(), example });
            }
        }
    }

    let concepts = class.concepts();
    for i in 0..concepts.len() {
        for j in i + 1..concepts.len() {
            let diff = concepts[i].members().symmetric_difference(concepts[j].members());
            let ti = map.get(concepts[i].canonical()).expect("domain checked");
            let tj = map.get(concepts[j].canonical()).expect("domain checked");
            if !ti.intersects(&diff) && !tj.intersects(&diff) {
                return Ok(Verdict::Clash(ClashWitness {
                    first: concepts[i].canonical(),
                    second: concepts[j].canonical(),
                }));
            }
        }
    }
    Ok(Verdict::Ok)
}
