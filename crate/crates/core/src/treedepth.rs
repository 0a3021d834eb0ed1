//! Treedepth decompositions: rooted forests in which every edge of the graph
//! connects an ancestor-descendant pair.
//!
//! The exact routine implements the recursion
//! `td(G) = 1 + min over v of max over components of G - v`, memoized on
//! vertex subsets, so it is only usable at desk scale (per-component cap,
//! default 20 vertices). The heuristic routine always succeeds and returns a
//! valid but possibly non-minimum decomposition; kernelization is safe with
//! any valid decomposition.

use std::collections::HashMap;

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::graph::Graph;

/// Default per-component cap for the exact recursion.
pub const DEFAULT_EXACT_CAP: usize = 20;

/// A rooted forest on the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedForest {
    parent: Vec<Option<usize>>,
}

impl RootedForest {
    pub fn from_parents(parent: Vec<Option<usize>>) -> Self {
        RootedForest { parent }
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&v| self.parent[v].is_none()).collect()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.parent.len()).filter(|&u| self.parent[u] == Some(v)).collect()
    }

    /// Number of vertices on the path from `v` up to its root, inclusive.
    pub fn depth(&self, v: usize) -> usize {
        let mut d = 1;
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        d
    }

    /// Maximum root-to-leaf vertex count; 0 for the empty forest.
    pub fn height(&self) -> usize {
        (0..self.parent.len()).map(|v| self.depth(v)).max().unwrap_or(0)
    }

    /// The set `{v} ∪ ancestors(v)`.
    pub fn ancestors_inclusive(&self, v: usize) -> VertexSet {
        let mut s = VertexSet::empty(self.parent.len());
        let mut cur = v;
        s.insert(cur);
        while let Some(p) = self.parent[cur] {
            s.insert(p);
            cur = p;
        }
        s
    }

    /// All strict descendants of `v`.
    pub fn descendants(&self, v: usize) -> VertexSet {
        let n = self.parent.len();
        let mut s = VertexSet::empty(n);
        // Repeated sweeps are fine at the sizes we handle.
        let mut changed = true;
        while changed {
            changed = false;
            for u in 0..n {
                if s.contains(u) {
                    continue;
                }
                if let Some(p) = self.parent[u] {
                    if p == v || s.contains(p) {
                        s.insert(u);
                        changed = true;
                    }
                }
            }
        }
        s
    }

    /// Checks that this is a valid treedepth decomposition of `g`: same
    /// vertex set, acyclic parent pointers, and every edge of `g` joins an
    /// ancestor-descendant pair.
    pub fn validate_for(&self, g: &Graph) -> Result<(), Error> {
        let n = g.vertex_count();
        if self.parent.len() != n {
            return Err(Error::InvalidDecomposition(format!(
                "forest has {} vertices, graph has {}",
                self.parent.len(),
                n
            )));
        }
        for v in 0..n {
            if let Some(p) = self.parent[v] {
                if p >= n {
                    return Err(Error::InvalidDecomposition(format!(
                        "parent {p} of {v} out of range"
                    )));
                }
            }
            // Walk to the root; a walk longer than n vertices means a cycle.
            let mut steps = 0;
            let mut cur = v;
            while let Some(p) = self.parent[cur] {
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidDecomposition(format!(
                        "cycle in parent chain at vertex {v}"
                    )));
                }
                cur = p;
            }
        }
        for (u, v) in g.edges() {
            let au = self.ancestors_inclusive(u);
            let av = self.ancestors_inclusive(v);
            if !au.contains(v) && !av.contains(u) {
                return Err(Error::InvalidDecomposition(format!(
                    "edge {u}-{v} joins incomparable vertices"
                )));
            }
        }
        Ok(())
    }
}

/// A minimum-height treedepth decomposition, computed exactly.
///
/// Disconnected graphs yield a forest; the height is the maximum over
/// components. Errors when a component exceeds `cap` vertices.
pub fn exact_capped(g: &Graph, cap: usize) -> Result<RootedForest, Error> {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    for comp in g.components() {
        if comp.len() > cap.min(64) {
            return Err(Error::TreedepthCapExceeded { n: comp.len(), cap: cap.min(64) });
        }
        let verts: Vec<usize> = comp.iter().collect();
        let mut solver = ExactSolver::new(g, &verts);
        let full = if verts.len() == 64 { u64::MAX } else { (1u64 << verts.len()) - 1 };
        solver.solve(full);
        solver.build(full, None, &mut parent);
    }
    Ok(RootedForest { parent })
}

pub fn exact(g: &Graph) -> Result<RootedForest, Error> {
    exact_capped(g, DEFAULT_EXACT_CAP)
}

/// The treedepth of `g`.
pub fn treedepth(g: &Graph) -> Result<usize, Error> {
    Ok(exact(g)?.height())
}

/// A valid decomposition obtained by repeatedly rooting each component at
/// its maximum-degree vertex. Always succeeds; the height may exceed the
/// treedepth.
pub fn heuristic(g: &Graph) -> RootedForest {
    let n = g.vertex_count();
    let mut parent = vec![None; n];
    for comp in g.components() {
        grow_heuristic(g, &comp, None, &mut parent);
    }
    RootedForest { parent }
}

fn grow_heuristic(g: &Graph, comp: &VertexSet, above: Option<usize>, parent: &mut [Option<usize>]) {
    let root = comp
        .iter()
        .max_by_key(|&v| (g.neighbors(v).intersection(comp).len(), usize::MAX - v))
        .expect("component is nonempty");
    parent[root] = above;
    let mut rest = comp.clone();
    rest.remove(root);
    let mut blocked = VertexSet::full(g.vertex_count());
    blocked.remove_all(&rest);
    for sub in g.components_after_removal(&blocked) {
        grow_heuristic(g, &sub, Some(root), parent);
    }
}

/// Memoized exact recursion over subsets of one component, in local ids.
struct ExactSolver {
    adj: Vec<u64>,
    verts: Vec<usize>,
    memo: HashMap<u64, (usize, usize)>,
}

impl ExactSolver {
    fn new(g: &Graph, verts: &[usize]) -> Self {
        let mut local = HashMap::new();
        for (i, &v) in verts.iter().enumerate() {
            local.insert(v, i);
        }
        let adj = verts
            .iter()
            .map(|&v| {
                let mut m = 0u64;
                for w in g.neighbors(v).iter() {
                    if let Some(&j) = local.get(&w) {
                        m |= 1 << j;
                    }
                }
                m
            })
            .collect();
        ExactSolver { adj, verts: verts.to_vec(), memo: HashMap::new() }
    }

    fn components(&self, mask: u64) -> Vec<u64> {
        let mut rest = mask;
        let mut out = Vec::new();
        while rest != 0 {
            let seed = rest & rest.wrapping_neg();
            let mut comp = seed;
            let mut frontier = seed;
            while frontier != 0 {
                let v = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let fresh = self.adj[v] & mask & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    /// Minimum decomposition height of the connected set `mask`.
    fn solve(&mut self, mask: u64) -> usize {
        if mask.count_ones() == 1 {
            return 1;
        }
        if let Some(&(h, _)) = self.memo.get(&mask) {
            return h;
        }
        let mut best = usize::MAX;
        let mut best_root = usize::MAX;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = mask & !(1 << v);
            let mut worst = 0;
            for comp in self.components(rest) {
                worst = worst.max(self.solve(comp));
                if 1 + worst >= best {
                    break;
                }
            }
            if 1 + worst < best {
                best = 1 + worst;
                best_root = v;
            }
        }
        self.memo.insert(mask, (best, best_root));
        best
    }

    /// Rebuilds parent pointers for the connected set `mask` below `above`.
    fn build(&mut self, mask: u64, above: Option<usize>, parent: &mut [Option<usize>]) {
        if mask.count_ones() == 1 {
            let v = mask.trailing_zeros() as usize;
            parent[self.verts[v]] = above;
            return;
        }
        let root = self.memo[&mask].1;
        parent[self.verts[root]] = above;
        for comp in self.components(mask & !(1 << root)) {
            self.build(comp, Some(self.verts[root]), parent);
        }
    }
}
