//! Exact decision and optimization for non-clashing teaching dimension by
//! backtracking over per-concept candidate teaching sets.
//!
//! Concepts are assigned one at a time; every freshly assigned set is
//! checked against all previously assigned ones, so a completed assignment
//! is a verified non-clashing map. Candidate sets are enumerated in
//! size-ascending then lexicographic order, which makes returned witnesses
//! deterministic in single-threaded mode.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::graph::Graph;
use crate::teaching::{verify, ConceptClass, TeachingMap, Variant};

/// One decision problem: does a (positive) non-clashing teaching map of size
/// at most `k` exist for `concepts` in `graph`?
#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    pub concepts: ConceptClass,
    pub k: usize,
    pub variant: Variant,
}

impl Instance {
    pub fn new(graph: Graph, concepts: ConceptClass, k: usize, variant: Variant) -> Self {
        Instance { graph, concepts, k, variant }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SearchStats {
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub decision: bool,
    pub map: Option<TeachingMap>,
    pub stats: SearchStats,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Abort with a resource-exhausted error after this many search nodes.
    pub node_limit: Option<u64>,
    /// Workers for distributing the top-level branching. 1 = deterministic.
    pub threads: usize,
    /// Map candidate lists between false-twin concepts instead of
    /// re-enumerating them. Off by default; correctness tests run without it.
    pub twin_candidate_reuse: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { node_limit: None, threads: 1, twin_candidate_reuse: false }
    }
}

pub fn solve_positive(inst: &Instance, opts: &SolveOptions) -> Result<SolveResult, Error> {
    if inst.variant != Variant::Positive {
        return Err(Error::WrongVariant { expected: "positive", found: inst.variant.name() });
    }
    solve(inst, opts)
}

pub fn solve_general(inst: &Instance, opts: &SolveOptions) -> Result<SolveResult, Error> {
    if inst.variant != Variant::General {
        return Err(Error::WrongVariant { expected: "general", found: inst.variant.name() });
    }
    solve(inst, opts)
}

/// Decides the instance, returning a verified witness map on yes.
pub fn solve(inst: &Instance, opts: &SolveOptions) -> Result<SolveResult, Error> {
    let search = Search::build(inst, opts.twin_candidate_reuse);
    let nodes = AtomicU64::new(0);
    let outcome = if opts.threads > 1 && !search.candidates.is_empty() {
        search.run_parallel(opts, &nodes)?
    } else {
        let stop = AtomicBool::new(false);
        let mut chosen = Vec::with_capacity(search.len());
        let mut sat = vec![vec![false; search.len()]; search.len()];
        search
            .dfs(0, &mut chosen, &mut sat, &nodes, opts.node_limit, &stop)?
            .then(|| chosen)
    };
    let stats = SearchStats { nodes: nodes.load(Ordering::Relaxed) };
    match outcome {
        Some(chosen) => {
            let map = search.to_map(inst, &chosen);
            debug_assert!(verify(&inst.graph, &inst.concepts, &map, inst.variant)
                .expect("witness domain matches")
                .is_ok());
            Ok(SolveResult { decision: true, map: Some(map), stats })
        }
        None => Ok(SolveResult { decision: false, map: None, stats }),
    }
}

/// The smallest `k` admitting a yes answer, with a witness map. Starts at
/// `k = 0`; the identity map `T(B) = B` guarantees termination for both
/// variants.
pub fn nctd(
    g: &Graph,
    concepts: &ConceptClass,
    variant: Variant,
    opts: &SolveOptions,
) -> Result<(usize, TeachingMap), Error> {
    let bound = concepts.max_concept_size();
    for k in 0..=bound {
        let inst = Instance::new(g.clone(), concepts.clone(), k, variant);
        let res = solve(&inst, opts)?;
        if res.decision {
            return Ok((k, res.map.expect("yes result carries a map")));
        }
    }
    unreachable!("the identity teaching map is non-clashing at k = max concept size")
}

struct Search {
    /// Canonical center per position, in assignment order.
    centers: Vec<usize>,
    /// Candidate teaching sets per position.
    candidates: Vec<Vec<VertexSet>>,
    /// diff[d][m] = symmetric difference of the concepts at positions d and m.
    diff: Vec<Vec<VertexSet>>,
}

impl Search {
    fn build(inst: &Instance, twin_reuse: bool) -> Search {
        let n = inst.graph.vertex_count();
        let mut order: Vec<usize> = (0..inst.concepts.len()).collect();
        // Larger neighborhoods first: their candidate sets are the most
        // constrained against each other, so failures surface early.
        order.sort_by_key(|&i| {
            let c = &inst.concepts.concepts()[i];
            (usize::MAX - c.members().len(), c.canonical())
        });

        let mut centers = Vec::with_capacity(order.len());
        let mut grounds: Vec<VertexSet> = Vec::with_capacity(order.len());
        let mut membs: Vec<VertexSet> = Vec::with_capacity(order.len());
        for &i in &order {
            let c = &inst.concepts.concepts()[i];
            centers.push(c.canonical());
            membs.push(c.members().clone());
            grounds.push(match inst.variant {
                Variant::Positive => c.members().clone(),
                Variant::General => VertexSet::full(n),
            });
        }

        let mut candidates: Vec<Vec<VertexSet>> = Vec::with_capacity(order.len());
        for pos in 0..order.len() {
            let reused = twin_reuse
                .then(|| {
                    (0..pos).find(|&p| {
                        inst.graph.neighbors(centers[p]) == inst.graph.neighbors(centers[pos])
                    })
                })
                .flatten();
            let cands = match reused {
                Some(p) => candidates[p]
                    .iter()
                    .map(|s| swap_pair(s, centers[p], centers[pos]))
                    .collect(),
                None => subsets_up_to(&grounds[pos], inst.k, n),
            };
            candidates.push(cands);
        }

        let diff = (0..order.len())
            .map(|d| (0..d).map(|m| membs[d].symmetric_difference(&membs[m])).collect())
            .collect();
        Search { centers, candidates, diff }
    }

    fn len(&self) -> usize {
        self.centers.len()
    }

    /// Depth-first assignment from `pos` on. `sat[m][d]` caches whether the
    /// set assigned at position `m` already distinguishes the pair `(m, d)`.
    fn dfs(
        &self,
        pos: usize,
        chosen: &mut Vec<usize>,
        sat: &mut [Vec<bool>],
        nodes: &AtomicU64,
        limit: Option<u64>,
        stop: &AtomicBool,
    ) -> Result<bool, Error> {
        if pos == self.len() {
            return Ok(true);
        }
        if stop.load(Ordering::Relaxed) {
            return Ok(false);
        }
        'cand: for (ci, cand) in self.candidates[pos].iter().enumerate() {
            let seen = nodes.fetch_add(1, Ordering::Relaxed) + 1;
            if let Some(l) = limit {
                if seen > l {
                    return Err(Error::ResourceExhausted { nodes: seen });
                }
            }
            for m in 0..pos {
                if !sat[m][pos] && !cand.intersects(&self.diff[pos][m]) {
                    continue 'cand;
                }
            }
            for d in pos + 1..self.len() {
                sat[pos][d] = cand.intersects(&self.diff[d][pos]);
            }
            chosen.push(ci);
            if self.dfs(pos + 1, chosen, sat, nodes, limit, stop)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    /// Distributes the first position's candidates across workers. The first
    /// witness found wins; a global no requires every branch exhausted.
    fn run_parallel(
        &self,
        opts: &SolveOptions,
        nodes: &AtomicU64,
    ) -> Result<Option<Vec<usize>>, Error> {
        let stop = AtomicBool::new(false);
        let witness: Mutex<Option<Vec<usize>>> = Mutex::new(None);
        let failure: Mutex<Option<Error>> = Mutex::new(None);
        std::thread::scope(|scope| {
            for worker in 0..opts.threads {
                let stop = &stop;
                let witness = &witness;
                let failure = &failure;
                scope.spawn(move || {
                    let mut first = worker;
                    while first < self.candidates[0].len() && !stop.load(Ordering::Relaxed) {
                        let mut chosen = vec![first];
                        let mut sat = vec![vec![false; self.len()]; self.len()];
                        let cand = &self.candidates[0][first];
                        for d in 1..self.len() {
                            sat[0][d] = cand.intersects(&self.diff[d][0]);
                        }
                        nodes.fetch_add(1, Ordering::Relaxed);
                        match self.dfs(1, &mut chosen, &mut sat, nodes, opts.node_limit, stop) {
                            Ok(true) => {
                                *witness.lock().unwrap() = Some(chosen);
                                stop.store(true, Ordering::Relaxed);
                                return;
                            }
                            Ok(false) => {}
                            Err(e) => {
                                *failure.lock().unwrap() = Some(e);
                                stop.store(true, Ordering::Relaxed);
                                return;
                            }
                        }
                        first += opts.threads;
                    }
                });
            }
        });
        let found = witness.lock().unwrap().take();
        let failed = failure.lock().unwrap().take();
        match (found, failed) {
            (Some(w), _) => Ok(Some(w)),
            (None, Some(e)) => Err(e),
            (None, None) => Ok(None),
        }
    }

    fn to_map(&self, inst: &Instance, chosen: &[usize]) -> TeachingMap {
        let mut map = TeachingMap::empty_for(&inst.concepts);
        for (pos, &ci) in chosen.iter().enumerate() {
            map.assign(self.centers[pos], self.candidates[pos][ci].clone())
                .expect("assignment order covers exactly the concept centers");
        }
        map
    }
}

fn swap_pair(s: &VertexSet, a: usize, b: usize) -> VertexSet {
    let mut out = s.clone();
    if s.contains(a) != s.contains(b) {
        if s.contains(a) {
            out.remove(a);
            out.insert(b);
        } else {
            out.remove(b);
            out.insert(a);
        }
    }
    out
}

/// All subsets of `ground` of cardinality at most `k`, size-ascending and
/// lexicographic within each size.
pub fn subsets_up_to(ground: &VertexSet, k: usize, width: usize) -> Vec<VertexSet> {
    let elems: Vec<usize> = ground.iter().collect();
    let mut out = vec![VertexSet::empty(width)];
    for size in 1..=k.min(elems.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(VertexSet::from_iter(width, idx.iter().map(|&i| elems[i])));
            if !next_combination(&mut idx, elems.len()) {
                break;
            }
        }
    }
    out
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic
/// order; false once the last combination has been visited.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
