//! Treedepth kernelization with solution lifting for the positive variant.
//!
//! Working bottom-up through a treedepth decomposition, the components
//! hanging below each node are grouped by a canonical signature (internal
//! isomorphism + per-vertex separator adjacency + per-vertex concept flag).
//! Once a signature class outgrows its pigeonhole threshold, surplus
//! members are deleted; the recorded bijections to surviving copies let a
//! kernel solution be replayed back into one for the original instance.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::graph::Graph;
use crate::solver::{self, Instance, SolveOptions, SolveResult};
use crate::teaching::{
    masked_neighborhood, masked_pairs_ok, restricted_family, verify, ConceptClass, TeachingMap,
    Variant,
};
use crate::treedepth::{self, RootedForest};

/// Caps for the signature machinery.
#[derive(Clone, Copy, Debug)]
pub struct TdOptions {
    /// Components larger than this are never canonicalized (the deletion
    /// rule simply does not fire for them).
    pub signature_cap: usize,
    /// When component size plus separator size exceeds this, the class
    /// threshold is treated as infinite.
    pub threshold_cap: usize,
}

impl Default for TdOptions {
    fn default() -> Self {
        TdOptions { signature_cap: 12, threshold_cap: 16 }
    }
}

/// Label-preserving orderings tried during canonicalization are capped to
/// keep highly symmetric components from blowing up.
const ORDERING_CAP: u64 = 1_000_000;

/// Canonical form of a component under isomorphisms that preserve separator
/// adjacency and concept membership. Equal signatures certify such an
/// isomorphism (read off the canonical vertex orders).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentSignature(Vec<u64>);

/// Signature of the component `a` of `G - x`, with concept flags taken
/// from `class`.
pub fn component_signature(
    g: &Graph,
    a: &VertexSet,
    x: &VertexSet,
    class: &ConceptClass,
    cap: usize,
) -> Result<ComponentSignature, Error> {
    let alive = VertexSet::full(g.vertex_count());
    let family = restricted_family(&alive, class);
    canonical_form(g, &alive, a, x, &family, cap).map(|(sig, _)| sig)
}

/// Canonicalizes one component: returns the signature and the vertex order
/// realizing it. Positionwise pairing of equal-signature components is a
/// conditions-preserving isomorphism.
fn canonical_form(
    g: &Graph,
    alive: &VertexSet,
    comp: &VertexSet,
    x: &VertexSet,
    family: &[(usize, VertexSet)],
    cap: usize,
) -> Result<(ComponentSignature, Vec<usize>), Error> {
    let verts: Vec<usize> = comp.iter().collect();
    let t = verts.len();
    if t > cap {
        return Err(Error::ComponentCapExceeded { size: t, cap });
    }

    // Per-vertex label: separator adjacency plus concept membership.
    let labels: Vec<(Vec<usize>, bool)> = verts
        .iter()
        .map(|&v| {
            let xadj: Vec<usize> = g.neighbors(v).intersection(x).iter().collect();
            let nb = masked_neighborhood(g, alive, v);
            let flag = family.iter().any(|(_, set)| *set == nb);
            (xadj, flag)
        })
        .collect();

    let adj: Vec<Vec<bool>> = (0..t)
        .map(|i| (0..t).map(|j| g.has_edge(verts[i], verts[j])).collect())
        .collect();

    // Initial colors by label rank, then iterated refinement on internal
    // adjacency. Refinement is isomorphism-invariant, so it only shrinks
    // the orderings we must try.
    let mut sorted_labels: Vec<&(Vec<usize>, bool)> = labels.iter().collect();
    sorted_labels.sort();
    sorted_labels.dedup();
    let mut color: Vec<usize> =
        labels.iter().map(|l| sorted_labels.iter().position(|s| *s == l).unwrap()).collect();
    loop {
        let keys: Vec<(usize, Vec<usize>)> = (0..t)
            .map(|i| {
                let mut nb: Vec<usize> =
                    (0..t).filter(|&j| adj[i][j]).map(|j| color[j]).collect();
                nb.sort_unstable();
                (color[i], nb)
            })
            .collect();
        let mut sorted_keys: Vec<&(usize, Vec<usize>)> = keys.iter().collect();
        sorted_keys.sort();
        sorted_keys.dedup();
        let next: Vec<usize> =
            keys.iter().map(|k| sorted_keys.iter().position(|s| *s == k).unwrap()).collect();
        if next == color {
            break;
        }
        color = next;
    }

    let class_count = color.iter().max().map_or(0, |&c| c + 1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); class_count];
    for i in 0..t {
        classes[color[i]].push(i);
    }

    let mut orderings: u64 = 1;
    for c in &classes {
        for f in 1..=c.len() as u64 {
            orderings = orderings.saturating_mul(f);
        }
    }
    if orderings > ORDERING_CAP {
        return Err(Error::ComponentCapExceeded { size: t, cap });
    }

    // Header: component size, then per color class its size and the label
    // shared by its members (refinement never splits labels apart, but two
    // color classes can share a label, so record it per class).
    let mut header: Vec<u64> = vec![t as u64, class_count as u64];
    for c in &classes {
        let (xadj, flag) = &labels[c[0]];
        header.push(c.len() as u64);
        header.push(u64::from(*flag));
        header.push(xadj.len() as u64);
        header.extend(xadj.iter().map(|&v| v as u64));
    }

    // Minimize the adjacency encoding over class-preserving orderings.
    let mut per_class: Vec<Vec<Vec<usize>>> = classes.iter().map(|c| permutations(c)).collect();
    for p in &mut per_class {
        p.sort();
    }
    let mut pick = vec![0usize; classes.len()];
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    loop {
        let order: Vec<usize> =
            pick.iter().enumerate().flat_map(|(ci, &pi)| per_class[ci][pi].clone()).collect();
        let mut bits: Vec<u64> = Vec::with_capacity(t * t / 64 + 1);
        let mut word = 0u64;
        let mut used = 0;
        for i in 0..t {
            for j in i + 1..t {
                word = (word << 1) | u64::from(adj[order[i]][order[j]]);
                used += 1;
                if used == 64 {
                    bits.push(word);
                    word = 0;
                    used = 0;
                }
            }
        }
        if used > 0 {
            bits.push(word << (64 - used));
        }
        if best.as_ref().is_none_or(|(b, _)| bits < *b) {
            best = Some((bits, order));
        }
        // Odometer over the per-class permutation choices.
        let mut slot = 0;
        loop {
            if slot == pick.len() {
                let (bits, order) = best.expect("at least one ordering");
                let mut encoded = header;
                encoded.extend(bits);
                let canonical: Vec<usize> = order.into_iter().map(|i| verts[i]).collect();
                return Ok((ComponentSignature(encoded), canonical));
            }
            pick[slot] += 1;
            if pick[slot] < per_class[slot].len() {
                break;
            }
            pick[slot] = 0;
            slot += 1;
        }
    }
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// One deleted component with everything lifting needs.
#[derive(Clone, Debug)]
pub struct TdDeletion {
    /// Decomposition node whose class check fired.
    pub node: usize,
    /// Ancestors of the node (inclusive) at deletion time.
    pub separator: VertexSet,
    /// Deleted vertices in canonical order.
    pub deleted: Vec<usize>,
    /// Concept flag per canonical position at deletion time.
    pub deleted_concept: Vec<bool>,
    /// Surviving class members in their canonical orders, position-aligned
    /// with `deleted`; ordered by smallest vertex.
    pub survivors: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default)]
pub struct TdKernelTrace {
    pub deletions: Vec<TdDeletion>,
}

#[derive(Clone, Debug)]
pub struct TdKernel {
    pub instance: Instance,
    /// Kernel vertex id to original vertex id.
    pub to_original: Vec<usize>,
    pub trace: TdKernelTrace,
}

/// Prunes the graph bottom-up along the decomposition: while a signature
/// class at some node holds more than `2^(t+|X|+1)` members, the member
/// with the highest minimum vertex id is deleted.
pub fn kernelize(
    inst: &Instance,
    decomp: &RootedForest,
    opts: &TdOptions,
) -> Result<TdKernel, Error> {
    if inst.variant != Variant::Positive {
        return Err(Error::WrongVariant { expected: "positive", found: inst.variant.name() });
    }
    let g = &inst.graph;
    decomp.validate_for(g)?;
    let n = g.vertex_count();
    let mut alive = VertexSet::full(n);
    let mut trace = TdKernelTrace::default();

    let mut nodes: Vec<usize> = (0..n).filter(|&v| !decomp.children(v).is_empty()).collect();
    nodes.sort_by_key(|&v| (Reverse(decomp.depth(v)), v));

    for &node in &nodes {
        let x = decomp.ancestors_inclusive(node);
        let xsize = x.len();
        let desc = decomp.descendants(node);
        debug_assert!(x.is_subset(&alive), "separators stay alive during bottom-up pruning");
        loop {
            let family = restricted_family(&alive, &inst.concepts);
            let mut blocked = VertexSet::full(n);
            blocked.remove_all(&alive);
            blocked.union_with(&x);
            let comps: Vec<VertexSet> = g
                .components_after_removal(&blocked)
                .into_iter()
                .filter(|c| c.is_subset(&desc))
                .collect();

            let mut groups: BTreeMap<ComponentSignature, Vec<Vec<usize>>> = BTreeMap::new();
            for comp in &comps {
                let t = comp.len();
                if t > opts.signature_cap || t + xsize > opts.threshold_cap {
                    continue;
                }
                let (sig, order) =
                    canonical_form(g, &alive, comp, &x, &family, opts.signature_cap)?;
                groups.entry(sig).or_default().push(order);
            }

            // Fire on the largest oversized class.
            let mut target: Option<&mut Vec<Vec<usize>>> = None;
            for members in groups.values_mut() {
                let t = members[0].len();
                let threshold = 1u64 << (t + xsize + 1);
                if members.len() as u64 > threshold {
                    let better = match &target {
                        Some(cur) => members.len() > cur.len(),
                        None => true,
                    };
                    if better {
                        target = Some(members);
                    }
                }
            }
            let Some(members) = target else { break };
            members.sort_by_key(|order| order.iter().min().copied());
            let deleted = members.pop().expect("oversized class is nonempty");
            let survivors = members.clone();
            let deleted_concept = deleted
                .iter()
                .map(|&p| {
                    let nb = masked_neighborhood(g, &alive, p);
                    family.iter().any(|(_, set)| *set == nb)
                })
                .collect();
            for &p in &deleted {
                alive.remove(p);
            }
            trace.deletions.push(TdDeletion {
                node,
                separator: x.clone(),
                deleted,
                deleted_concept,
                survivors,
            });
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
    debug_assert_eq!(
        kernel_class.len(),
        restricted_family(&alive, &inst.concepts).len(),
        "component deletions must not merge or split concepts"
    );
    let instance = Instance::new(kernel_graph, kernel_class, inst.k, Variant::Positive);
    Ok(TdKernel { instance, to_original, trace })
}

/// Replays the deletion trace backwards. Every restored concept copies a
/// surviving class member's teaching set, separator part verbatim and
/// component part pulled through the recorded bijection; survivors are
/// tried in order until the restored pairs check out.
pub fn lift(
    kernel_map: &TeachingMap,
    kernel: &TdKernel,
    original: &Instance,
) -> Result<TeachingMap, Error> {
    let g = &original.graph;
    let n = g.vertex_count();
    let mut alive = VertexSet::from_iter(n, kernel.to_original.iter().copied());

    let mut sets: Vec<(usize, VertexSet)> = kernel_map
        .iter()
        .map(|(kc, ks)| {
            let oc = kernel.to_original[kc];
            let os = VertexSet::from_iter(n, ks.iter().map(|v| kernel.to_original[v]));
            (oc, os)
        })
        .collect();

    for record in kernel.trace.deletions.iter().rev() {
        for &p in &record.deleted {
            alive.insert(p);
        }
        let mut placed = false;
        'survivors: for survivor in &record.survivors {
            let mut additions: Vec<(usize, VertexSet)> = Vec::new();
            for (i, &p) in record.deleted.iter().enumerate() {
                if !record.deleted_concept[i] {
                    continue;
                }
                let q = survivor[i];
                let Some((_, donor)) = sets.iter().find(|&&(c, _)| c == q) else {
                    continue 'survivors;
                };
                let mut lifted = donor.intersection(&record.separator);
                for (j, &qj) in survivor.iter().enumerate() {
                    if donor.contains(qj) {
                        lifted.insert(record.deleted[j]);
                    }
                }
                additions.push((p, lifted));
            }
            let mut scratch = sets.clone();
            scratch.extend(additions.iter().cloned());
            if additions
                .iter()
                .all(|(p, tp)| masked_pairs_ok(g, &alive, &scratch, *p, tp))
            {
                sets = scratch;
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::LiftingFailed { vertex: record.deleted[0] });
        }
    }

    let mut map = TeachingMap::empty_for(&original.concepts);
    for (c, s) in sets {
        map.assign(c, s)?;
    }
    match verify(g, &original.concepts, &map, Variant::Positive)? {
        v if v.is_ok() && map.size() <= original.k => Ok(map),
        _ => Err(Error::LiftingFailed { vertex: usize::MAX }),
    }
}

/// Full pipeline: decompose (given, or exact at desk scale, or heuristic
/// beyond the exact cap), kernelize bottom-up, solve the kernel exactly,
/// lift the certificate.
pub fn solve(
    inst: &Instance,
    decomp: Option<&RootedForest>,
    opts: &SolveOptions,
    td_opts: &TdOptions,
) -> Result<SolveResult, Error> {
    if inst.variant != Variant::Positive {
        return Err(Error::WrongVariant { expected: "positive", found: inst.variant.name() });
    }
    let owned;
    let decomp = match decomp {
        Some(d) => {
            d.validate_for(&inst.graph)?;
            d
        }
        None => {
            owned = match treedepth::exact(&inst.graph) {
                Ok(d) => d,
                Err(Error::TreedepthCapExceeded { .. }) => treedepth::heuristic(&inst.graph),
                Err(e) => return Err(e),
            };
            &owned
        }
    };
    let kernel = kernelize(inst, decomp, td_opts)?;
    let res = solver::solve(&kernel.instance, opts)?;
    if !res.decision {
        return Ok(SolveResult { decision: false, map: None, stats: res.stats });
    }
    let kmap = res.map.expect("yes result carries a map");
    let lifted = lift(&kmap, &kernel, inst)?;
    Ok(SolveResult { decision: true, map: Some(lifted), stats: res.stats })
}
