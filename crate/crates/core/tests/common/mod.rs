//! Shared test oracles and instance generators.
//!
//! Everything here restates definitions from scratch on purpose: membership
//! vectors instead of bitsets, natural concept order instead of the
//! solver's degree order, plain product enumeration instead of the pruned
//! search. Agreement between these oracles and the library is what the
//! test suites check, so none of this may call into the code paths it
//! judges.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use nctm_core::gadgets::CnfFormula;
use nctm_core::io;
use nctm_core::squares::SquareArrangement;
use nctm_core::teaching::{ConceptClass, TeachingMap, Variant};
use nctm_core::{Graph, VertexSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Closed neighborhood as a membership vector.
pub fn nbhd(g: &Graph, v: usize) -> Vec<bool> {
    let n = g.vertex_count();
    let mut m = vec![false; n];
    m[v] = true;
    for u in 0..n {
        if g.has_edge(u, v) {
            m[u] = true;
        }
    }
    m
}

/// Distinct closed neighborhoods of `centers`, tagged with their smallest
/// center, in ascending center order. Independent restatement of concept
/// deduplication.
pub fn naive_concepts(g: &Graph, centers: &[usize]) -> Vec<(usize, Vec<bool>)> {
    let mut sorted = centers.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: Vec<(usize, Vec<bool>)> = Vec::new();
    for &c in &sorted {
        let m = nbhd(g, c);
        if !out.iter().any(|(_, seen)| *seen == m) {
            out.push((c, m));
        }
    }
    out
}

/// Direct restatement of the verification condition: positivity when
/// requested, and for every pair of distinct concepts some example in the
/// union of their teaching sets that lies in exactly one of them.
pub fn naive_verify_ok(
    g: &Graph,
    centers: &[usize],
    map: &BTreeMap<usize, Vec<usize>>,
    positive: bool,
) -> bool {
    let concepts = naive_concepts(g, centers);
    for (c, members) in &concepts {
        let teach = &map[c];
        if positive && teach.iter().any(|&w| !members[w]) {
            return false;
        }
    }
    for i in 0..concepts.len() {
        for j in i + 1..concepts.len() {
            let (ci, mi) = &concepts[i];
            let (cj, mj) = &concepts[j];
            let told_apart = map[ci]
                .iter()
                .chain(map[cj].iter())
                .any(|&w| mi[w] != mj[w]);
            if !told_apart {
                return false;
            }
        }
    }
    true
}

/// All subsets of `ground` with at most `k` elements, by binary counter.
fn small_subsets(ground: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u64..(1 << ground.len()) {
        if mask.count_ones() as usize <= k {
            out.push(
                ground
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect(),
            );
        }
    }
    out
}

/// Unpruned enumeration over complete candidate products in natural
/// concept order. A prefix is rejected only when a fully assigned pair
/// already clashes, which discards no complete map. Returns a witness
/// assignment on yes.
pub fn enumerate_decide(
    g: &Graph,
    centers: &[usize],
    k: usize,
    positive: bool,
) -> Option<BTreeMap<usize, Vec<usize>>> {
    let concepts = naive_concepts(g, centers);
    let everything: Vec<usize> = (0..g.vertex_count()).collect();
    let candidates: Vec<Vec<Vec<usize>>> = concepts
        .iter()
        .map(|(_, members)| {
            let ground: Vec<usize> = if positive {
                members
                    .iter()
                    .enumerate()
                    .filter(|&(_, &inside)| inside)
                    .map(|(v, _)| v)
                    .collect()
            } else {
                everything.clone()
            };
            small_subsets(&ground, k)
        })
        .collect();

    let mut chosen: Vec<usize> = Vec::new();
    let mut found: Option<Vec<usize>> = None;
    enumerate_rec(&concepts, &candidates, &mut chosen, &mut |complete| {
        found = Some(complete.to_vec());
        true
    });
    found.map(|pick| {
        concepts
            .iter()
            .enumerate()
            .map(|(pos, (c, _))| (*c, candidates[pos][pick[pos]].clone()))
            .collect()
    })
}

/// Visits every complete non-clashing assignment; the visitor returns true
/// to stop early.
pub fn enumerate_all_nctms(
    g: &Graph,
    centers: &[usize],
    k: usize,
    positive: bool,
    mut visit: impl FnMut(&BTreeMap<usize, Vec<usize>>) -> bool,
) {
    let concepts = naive_concepts(g, centers);
    let everything: Vec<usize> = (0..g.vertex_count()).collect();
    let candidates: Vec<Vec<Vec<usize>>> = concepts
        .iter()
        .map(|(_, members)| {
            let ground: Vec<usize> = if positive {
                members
                    .iter()
                    .enumerate()
                    .filter(|&(_, &inside)| inside)
                    .map(|(v, _)| v)
                    .collect()
            } else {
                everything.clone()
            };
            small_subsets(&ground, k)
        })
        .collect();
    let mut chosen = Vec::new();
    enumerate_rec(&concepts, &candidates, &mut chosen, &mut |complete| {
        let map: BTreeMap<usize, Vec<usize>> = concepts
            .iter()
            .enumerate()
            .map(|(pos, (c, _))| (*c, candidates[pos][complete[pos]].clone()))
            .collect();
        visit(&map)
    });
}

fn enumerate_rec(
    concepts: &[(usize, Vec<bool>)],
    candidates: &[Vec<Vec<usize>>],
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    let pos = chosen.len();
    if pos == concepts.len() {
        return visit(chosen);
    }
    'cand: for ci in 0..candidates[pos].len() {
        for earlier in 0..pos {
            let (_, mi) = &concepts[earlier];
            let (_, mj) = &concepts[pos];
            if mi == mj {
                continue;
            }
            let ti = &candidates[earlier][chosen[earlier]];
            let tj = &candidates[pos][ci];
            if !ti.iter().chain(tj.iter()).any(|&w| mi[w] != mj[w]) {
                continue 'cand;
            }
        }
        chosen.push(ci);
        if enumerate_rec(concepts, candidates, chosen, visit) {
            chosen.pop();
            return true;
        }
        chosen.pop();
    }
    false
}

/// Teaching dimension of an abstract set system by brute force, matching
/// the non-clashing definition literally: example `w` tells `C` and `C'`
/// apart iff it belongs to exactly one.
pub fn abstract_dimension(universe: usize, concepts: &[Vec<usize>], positive: bool) -> usize {
    let members: Vec<Vec<bool>> = concepts
        .iter()
        .map(|c| {
            let mut m = vec![false; universe];
            for &v in c {
                m[v] = true;
            }
            m
        })
        .collect();
    let everything: Vec<usize> = (0..universe).collect();
    for k in 0..=universe {
        let candidates: Vec<Vec<Vec<usize>>> = members
            .iter()
            .map(|m| {
                let ground: Vec<usize> = if positive {
                    m.iter().enumerate().filter(|&(_, &x)| x).map(|(v, _)| v).collect()
                } else {
                    everything.clone()
                };
                small_subsets(&ground, k)
            })
            .collect();
        if abstract_rec(&members, &candidates, &mut Vec::new()) {
            return k;
        }
    }
    unreachable!("teaching every concept by its full member set is non-clashing")
}

fn abstract_rec(
    members: &[Vec<bool>],
    candidates: &[Vec<Vec<usize>>],
    chosen: &mut Vec<usize>,
) -> bool {
    let pos = chosen.len();
    if pos == members.len() {
        return true;
    }
    'cand: for ci in 0..candidates[pos].len() {
        for earlier in 0..pos {
            if members[earlier] == members[pos] {
                continue;
            }
            let ti = &candidates[earlier][chosen[earlier]];
            let tj = &candidates[pos][ci];
            if !ti
                .iter()
                .chain(tj.iter())
                .any(|&w| members[earlier][w] != members[pos][w])
            {
                continue 'cand;
            }
        }
        chosen.push(ci);
        if abstract_rec(members, candidates, chosen) {
            chosen.pop();
            return true;
        }
        chosen.pop();
    }
    false
}

/// Minimum elimination-forest height over all vertex orders: an
/// independent route to the treedepth for small graphs.
pub fn treedepth_by_orders(g: &Graph) -> usize {
    let n = g.vertex_count();
    let verts: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    permute(&verts, &mut |order| {
        let mut rank = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut worst = 0;
        for comp in components_of(g, &verts) {
            worst = worst.max(order_height(g, &comp, &rank));
        }
        best = best.min(worst);
    });
    best
}

fn order_height(g: &Graph, verts: &[usize], rank: &[usize]) -> usize {
    if verts.is_empty() {
        return 0;
    }
    let root = *verts.iter().max_by_key(|&&v| rank[v]).unwrap();
    let rest: Vec<usize> = verts.iter().copied().filter(|&v| v != root).collect();
    let mut deepest = 0;
    for comp in components_of(g, &rest) {
        deepest = deepest.max(order_height(g, &comp, rank));
    }
    1 + deepest
}

fn components_of(g: &Graph, verts: &[usize]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = verts.to_vec();
    let mut out = Vec::new();
    while let Some(&seed) = remaining.first() {
        let mut comp = vec![seed];
        let mut frontier = vec![seed];
        remaining.retain(|&v| v != seed);
        while let Some(u) = frontier.pop() {
            let adjacent: Vec<usize> =
                remaining.iter().copied().filter(|&w| g.has_edge(u, w)).collect();
            for w in adjacent {
                remaining.retain(|&v| v != w);
                comp.push(w);
                frontier.push(w);
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn permute(items: &[usize], visit: &mut impl FnMut(&[usize])) {
    let mut work = items.to_vec();
    permute_rec(&mut work, 0, visit);
}

fn permute_rec(work: &mut Vec<usize>, at: usize, visit: &mut impl FnMut(&[usize])) {
    if at == work.len() {
        visit(work);
        return;
    }
    for i in at..work.len() {
        work.swap(at, i);
        permute_rec(work, at + 1, visit);
        work.swap(at, i);
    }
}

/// All connected graphs on exactly `n` vertices, one per isomorphism class.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(n >= 1 && n <= 6);
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let verts: Vec<usize> = (0..n).collect();
    for mask in 0u64..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        if !g.is_connected() {
            continue;
        }
        // Canonical form: the least edge mask over all vertex relabelings.
        let mut canon = u64::MAX;
        permute(&verts, &mut |order| {
            let mut relabeled = 0u64;
            for &(u, v) in &edges {
                let (a, b) = (order[u].min(order[v]), order[u].max(order[v]));
                let idx = pairs.iter().position(|&p| p == (a, b)).unwrap();
                relabeled |= 1 << idx;
            }
            canon = canon.min(relabeled);
        });
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

/// Converts an oracle-style map into the library representation.
pub fn to_teaching_map(class: &ConceptClass, raw: &BTreeMap<usize, Vec<usize>>) -> TeachingMap {
    let mut map = TeachingMap::empty_for(class);
    for (&c, examples) in raw {
        map.assign(c, VertexSet::from_iter(class.universe(), examples.iter().copied()))
            .unwrap();
    }
    map
}

pub fn variant_of(positive: bool) -> Variant {
    if positive {
        Variant::Positive
    } else {
        Variant::General
    }
}

// ---------------------------------------------------------------------
// Random instance generators (all seeded).
// ---------------------------------------------------------------------

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, edge_prob: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(edge_prob) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// A graph whose edges all touch `cover_size` designated vertices, so that
/// set is a vertex cover.
pub fn random_covered_graph(rng: &mut ChaCha8Rng, n: usize, cover_size: usize) -> (Graph, VertexSet) {
    let mut g = Graph::new(n);
    let cover = VertexSet::from_iter(n, 0..cover_size);
    for x in 0..cover_size {
        for y in x + 1..cover_size {
            if rng.gen_bool(0.5) {
                g.add_edge(x, y).unwrap();
            }
        }
        for v in cover_size..n {
            if rng.gen_bool(0.4) {
                g.add_edge(x, v).unwrap();
            }
        }
    }
    (g, cover)
}

/// Stars, double stars and spiders: all of treedepth at most 3.
pub fn random_low_depth_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    match rng.gen_range(0..3) {
        0 => {
            let leaves = rng.gen_range(3..max_n);
            let mut g = Graph::new(leaves + 1);
            for v in 1..=leaves {
                g.add_edge(0, v).unwrap();
            }
            g
        }
        1 => {
            let left = rng.gen_range(2..=(max_n - 3) / 2);
            let right = rng.gen_range(2..=(max_n - 2 - left));
            let mut g = Graph::new(2 + left + right);
            g.add_edge(0, 1).unwrap();
            for v in 0..left {
                g.add_edge(0, 2 + v).unwrap();
            }
            for v in 0..right {
                g.add_edge(1, 2 + left + v).unwrap();
            }
            g
        }
        _ => {
            // Spider: legs of length 1 or 2 hanging off a center.
            let legs = rng.gen_range(3..=(max_n - 1) / 2);
            let mut edges = Vec::new();
            let mut next = 1;
            for _ in 0..legs {
                edges.push((0, next));
                if rng.gen_bool(0.5) && next + 1 < max_n {
                    edges.push((next, next + 1));
                    next += 2;
                } else {
                    next += 1;
                }
            }
            Graph::from_edges(next, &edges).unwrap()
        }
    }
}

/// A nonempty random subset of the vertices, as concept centers.
pub fn random_centers(rng: &mut ChaCha8Rng, n: usize, keep_prob: f64) -> Vec<usize> {
    let mut centers: Vec<usize> = (0..n).filter(|_| rng.gen_bool(keep_prob)).collect();
    if centers.is_empty() {
        centers.push(rng.gen_range(0..n));
    }
    centers
}

pub fn random_formula(rng: &mut ChaCha8Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(3..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let mut vars: Vec<usize> = (1..=n).collect();
            vars.shuffle(rng);
            vars.truncate(3);
            vars.iter()
                .map(|&v| if rng.gen_bool(0.5) { v as i64 } else { -(v as i64) })
                .collect()
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}

/// Random rational centers on a small grid of quarter-integer steps.
pub fn random_arrangement(rng: &mut ChaCha8Rng, n: usize) -> SquareArrangement {
    let centers = (0..n)
        .map(|_| {
            let x = format!("{}/4", rng.gen_range(0..=12));
            let y = format!("{}/4", rng.gen_range(0..=12));
            (io::parse_rational(&x).unwrap(), io::parse_rational(&y).unwrap())
        })
        .collect();
    SquareArrangement::new(centers)
}

/// A random abstract concept class with distinct members.
pub fn random_abstract_class(
    rng: &mut ChaCha8Rng,
    universe: usize,
    max_concepts: usize,
) -> Vec<Vec<usize>> {
    let want = rng.gen_range(1..=max_concepts);
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut guard = 0;
    while seen.len() < want && guard < 200 {
        guard += 1;
        let concept: Vec<usize> = (0..universe).filter(|_| rng.gen_bool(0.5)).collect();
        if !seen.contains(&concept) {
            seen.push(concept);
        }
    }
    seen
}
