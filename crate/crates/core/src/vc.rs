//! Vertex-cover kernelization with solution lifting for the general
//! (negative examples allowed) variant.
//!
//! Pipeline: given a cover `X`, answer yes immediately once the budget
//! reaches the explicit upper-bound map. Otherwise shrink false-twin
//! classes of the independent set: surplus non-concept twins are deleted
//! outright, and concept twins are deleted once a class holds more of them
//! than the pigeonhole threshold needs. Deletions are logged so a kernel
//! solution can be replayed back into one for the original instance.

use num_bigint::BigUint;
use num_traits::One;

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::graph::Graph;
use crate::solver::{self, Instance, SearchStats, SolveOptions, SolveResult};
use crate::teaching::{
    masked_pairs_ok, restricted_family, verify, ConceptClass, TeachingMap, Variant,
};

/// Thresholds derived from a vertex cover.
#[derive(Clone, Debug)]
pub struct VcParameters {
    pub cover: VertexSet,
    /// The pigeonhole constant `2^(2^|X|+|X|) + 1`, or `None` when `|X|`
    /// makes it larger than any graph we could hold (the concept-twin rule
    /// then never fires; documented behavior, not an error).
    pub q: Option<BigUint>,
    /// The guaranteed-yes budget `2^(|X|+1) + |X|`.
    pub k_bound: BigUint,
}

impl VcParameters {
    pub fn new(cover: VertexSet) -> Self {
        let x = cover.len();
        let q = if x >= 6 {
            None
        } else {
            Some((BigUint::one() << ((1usize << x) + x)) + BigUint::one())
        };
        let k_bound = (BigUint::one() << (x + 1)) + BigUint::from(x);
        VcParameters { cover, q, k_bound }
    }

    /// The concept-twin rule fires once a class holds at least this many
    /// concept twins (one more than the kernel keeps).
    pub fn concept_twin_trigger(&self, k: usize) -> Option<BigUint> {
        self.q.as_ref().map(|q| q + BigUint::from(2 * k + 2))
    }

    /// Upper bound on kernel vertices: `2^|X| (q + 2k + 1) + 2^|X| + |X|`.
    pub fn kernel_size_bound(&self, k: usize) -> Option<BigUint> {
        let x = self.cover.len();
        self.q.as_ref().map(|q| {
            (BigUint::one() << x) * (q + BigUint::from(2 * k + 1))
                + (BigUint::one() << x)
                + BigUint::from(x)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VcRule {
    /// A twin class held more concept twins than the threshold; one was
    /// deleted and must be re-taught when lifting.
    SurplusConceptTwin,
    /// Two twins in the independent set were both non-concepts; deleting
    /// one needs no map change when lifting.
    NonConceptTwin,
}

#[derive(Clone, Debug)]
pub struct VcDeletion {
    pub vertex: usize,
    pub rule: VcRule,
    /// Concept twins of `vertex` alive at deletion time (original ids).
    pub concept_twins: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct VcKernelTrace {
    pub deletions: Vec<VcDeletion>,
}

/// A kernelized instance plus everything needed to lift solutions back.
#[derive(Clone, Debug)]
pub struct VcKernel {
    pub instance: Instance,
    /// Kernel vertex id to original vertex id.
    pub to_original: Vec<usize>,
    pub trace: VcKernelTrace,
}

pub enum VcOutcome {
    Kernel(Box<VcKernel>),
    /// The budget already covers the explicit upper-bound map.
    ImmediateYes(TeachingMap),
}

/// The explicit bounded-size map behind the yes cut: covered vertices teach
/// the cover plus two representatives of every twin class of the
/// independent set (one if the class is a singleton); independent vertices
/// teach the cover plus themselves.
pub fn upper_bound_map(
    g: &Graph,
    cover: &VertexSet,
    class: &ConceptClass,
) -> Result<TeachingMap, Error> {
    g.is_vertex_cover(cover)?;
    let n = g.vertex_count();
    let independent = VertexSet::full(n).difference(cover);
    let twin_classes = g.false_twin_classes(&independent);

    let mut covered_set = cover.clone();
    for tc in &twin_classes {
        let mut reps = tc.iter();
        if let Some(s) = reps.next() {
            covered_set.insert(s);
        }
        if let Some(t) = reps.next() {
            covered_set.insert(t);
        }
    }

    let mut map = TeachingMap::empty_for(class);
    for concept in class.concepts() {
        // Prefer the per-vertex rule of an independent vertex inducing this
        // concept; fall back to the covered-vertex rule.
        let witness = independent
            .iter()
            .find(|&y| g.closed_neighborhood(y).expect("valid") == *concept.members());
        let set = match witness {
            Some(y) => {
                let mut s = cover.clone();
                s.insert(y);
                s
            }
            None => covered_set.clone(),
        };
        map.assign(concept.canonical(), set)?;
    }
    Ok(map)
}

/// Applies the yes cut and the two twin rules exhaustively.
pub fn kernelize(inst: &Instance, cover: &VertexSet) -> Result<VcOutcome, Error> {
    if inst.variant != Variant::General {
        return Err(Error::WrongVariant { expected: "general", found: inst.variant.name() });
    }
    let g = &inst.graph;
    g.is_vertex_cover(cover)?;
    let params = VcParameters::new(cover.clone());
    if BigUint::from(inst.k) >= params.k_bound {
        return Ok(VcOutcome::ImmediateYes(upper_bound_map(g, cover, &inst.concepts)?));
    }

    let n = g.vertex_count();
    let mut alive = VertexSet::full(n);
    let mut trace = VcKernelTrace::default();
    let trigger = params.concept_twin_trigger(inst.k);

    loop {
        let family = restricted_family(&alive, &inst.concepts);
        let independent = alive.difference(cover);
        let classes = g.false_twin_classes(&independent);
        let is_concept = |v: usize| -> bool {
            let mut nb = g.neighbors(v).intersection(&alive);
            nb.insert(v);
            family.iter().any(|(_, set)| *set == nb)
        };

        // Non-concept twins first: any class with two of them loses the
        // highest-id one.
        let mut deleted = None;
        'rr3: for tc in &classes {
            let non_concepts: Vec<usize> = tc.iter().filter(|&v| !is_concept(v)).collect();
            if non_concepts.len() >= 2 {
                let v = *non_concepts.last().expect("len >= 2");
                trace.deletions.push(VcDeletion {
                    vertex: v,
                    rule: VcRule::NonConceptTwin,
                    concept_twins: Vec::new(),
                });
                deleted = Some(v);
                break 'rr3;
            }
        }
        if deleted.is_none() {
            if let Some(trigger) = &trigger {
                'rr2: for tc in &classes {
                    let concept_twins: Vec<usize> = tc.iter().filter(|&v| is_concept(v)).collect();
                    if BigUint::from(concept_twins.len()) >= *trigger {
                        let v = *concept_twins.last().expect("trigger is at least 1");
                        let remaining =
                            concept_twins.iter().copied().filter(|&u| u != v).collect();
                        trace.deletions.push(VcDeletion {
                            vertex: v,
                            rule: VcRule::SurplusConceptTwin,
                            concept_twins: remaining,
                        });
                        deleted = Some(v);
                        break 'rr2;
                    }
                }
            }
        }
        match deleted {
            Some(v) => alive.remove(v),
            None => break,
        }
    }

    let (kernel_graph, to_original) = g.induced(&alive);
    let mut to_kernel = vec![usize::MAX; n];
    for (new, &old) in to_original.iter().enumerate() {
        to_kernel[old] = new;
    }
    let mut kernel_centers = Vec::new();
    for concept in inst.concepts.concepts() {
        for &c in concept.centers() {
            if alive.contains(c) {
                kernel_centers.push(to_kernel[c]);
            }
        }
    }
    let kernel_class = ConceptClass::new(&kernel_graph, &kernel_centers)?;
    let surviving = restricted_family(&alive, &inst.concepts).len();
    debug_assert_eq!(
        kernel_class.len(),
        surviving,
        "twin deletions must not merge or split concepts"
    );
    let instance = Instance::new(kernel_graph, kernel_class, inst.k, Variant::General);
    Ok(VcOutcome::Kernel(Box::new(VcKernel { instance, to_original, trace })))
}

/// Replays the deletion trace backwards, extending `kernel_map` to a map
/// for the original instance. Each restored concept twin copies a
/// surviving twin's teaching set with the twin swapped for itself.
pub fn lift(
    kernel_map: &TeachingMap,
    kernel: &VcKernel,
    original: &Instance,
) -> Result<TeachingMap, Error> {
    let g = &original.graph;
    let n = g.vertex_count();
    let mut alive = VertexSet::from_iter(n, kernel.to_original.iter().copied());

    // Teaching sets in original ids, keyed by canonical center.
    let mut sets: Vec<(usize, VertexSet)> = kernel_map
        .iter()
        .map(|(kc, ks)| {
            let oc = kernel.to_original[kc];
            let os = VertexSet::from_iter(n, ks.iter().map(|v| kernel.to_original[v]));
            (oc, os)
        })
        .collect();

    for record in kernel.trace.deletions.iter().rev() {
        let v = record.vertex;
        alive.insert(v);
        if record.rule == VcRule::NonConceptTwin {
            continue;
        }
        // Prefer twins that teach themselves; the pigeonhole argument
        // guarantees one exists, and the pair check below is the safety net.
        let mut candidates = record.concept_twins.clone();
        candidates.sort_unstable_by_key(|&u| {
            let self_taught = sets
                .iter()
                .any(|&(c, ref s)| c == u && s.contains(u));
            (!self_taught, u)
        });
        let mut placed = false;
        for u in candidates {
            let donor = match sets.iter().find(|&&(c, _)| c == u) {
                Some((_, s)) => s.clone(),
                None => continue,
            };
            let mut lifted = donor;
            lifted.remove(u);
            lifted.insert(v);
            if masked_pairs_ok(g, &alive, &sets, v, &lifted) {
                sets.push((v, lifted));
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::LiftingFailed { vertex: v });
        }
    }

    let mut map = TeachingMap::empty_for(&original.concepts);
    for (c, s) in sets {
        map.assign(c, s)?;
    }
    match verify(g, &original.concepts, &map, Variant::General)? {
        v if v.is_ok() && map.size() <= original.k => Ok(map),
        _ => Err(Error::LiftingFailed { vertex: usize::MAX }),
    }
}

/// Full pipeline: cover (given or 2-approximated), kernelize, solve the
/// kernel exactly, lift the certificate.
pub fn solve(
    inst: &Instance,
    cover: Option<&VertexSet>,
    opts: &SolveOptions,
) -> Result<SolveResult, Error> {
    let cover = match cover {
        Some(x) => {
            inst.graph.is_vertex_cover(x)?;
            x.clone()
        }
        None => inst.graph.vertex_cover_2approx(),
    };
    match kernelize(inst, &cover)? {
        VcOutcome::ImmediateYes(map) => {
            debug_assert!(verify(&inst.graph, &inst.concepts, &map, Variant::General)?.is_ok());
            Ok(SolveResult { decision: true, map: Some(map), stats: SearchStats::default() })
        }
        VcOutcome::Kernel(kernel) => {
            let res = solver::solve(&kernel.instance, opts)?;
            if !res.decision {
                return Ok(SolveResult { decision: false, map: None, stats: res.stats });
            }
            let kmap = res.map.expect("yes result carries a map");
            let lifted = lift(&kmap, &kernel, inst)?;
            Ok(SolveResult { decision: true, map: Some(lifted), stats: res.stats })
        }
    }
}
