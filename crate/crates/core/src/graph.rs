//! Simple undirected graphs with bitset adjacency, plus the structural
//! primitives the solvers and kernelizations are built from: closed
//! neighborhoods, false-twin classes, a matching-based vertex cover
//! approximation, and connected components under vertex removal.

use crate::bitset::VertexSet;
use crate::error::Error;

/// A simple undirected graph on vertices `0..n`.
///
/// No self-loops, no parallel edges; adjacency is kept symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, adj: vec![VertexSet::empty(n); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, Error> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), Error> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop { vertex: u });
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), Error> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// The open neighborhood `N(v)`.
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    /// The closed neighborhood `N[v] = N(v) ∪ {v}`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet, Error> {
        self.check_vertex(v)?;
        let mut s = self.adj[v].clone();
        s.insert(v);
        Ok(s)
    }

    /// Partitions `domain` into classes of false twins: `u` and `v` share a
    /// class iff `N(u) = N(v)` (open neighborhoods). Classes are returned in
    /// ascending order of their smallest member.
    pub fn false_twin_classes(&self, domain: &VertexSet) -> Vec<VertexSet> {
        let mut classes: Vec<VertexSet> = Vec::new();
        let mut reps: Vec<usize> = Vec::new();
        for v in domain.iter() {
            match reps.iter().position(|&r| self.adj[r] == self.adj[v]) {
                Some(i) => classes[i].insert(v),
                None => {
                    reps.push(v);
                    classes.push(VertexSet::from_iter(self.n, [v]));
                }
            }
        }
        classes
    }

    /// A vertex cover of size at most twice the optimum, obtained by taking
    /// both endpoints of every edge in a greedily built maximal matching.
    /// Edges are scanned in lexicographic order, so the result is
    /// deterministic.
    pub fn vertex_cover_2approx(&self) -> VertexSet {
        let mut cover = VertexSet::empty(self.n);
        let mut matched = VertexSet::empty(self.n);
        for u in 0..self.n {
            if matched.contains(u) {
                continue;
            }
            if let Some(v) = self.adj[u].difference(&matched).first() {
                matched.insert(u);
                matched.insert(v);
                cover.insert(u);
                cover.insert(v);
            }
        }
        cover
    }

    /// True iff `x` touches every edge.
    pub fn is_vertex_cover(&self, x: &VertexSet) -> Result<(), Error> {
        for (u, v) in self.edges() {
            if !x.contains(u) && !x.contains(v) {
                return Err(Error::NotAVertexCover { u, v });
            }
        }
        Ok(())
    }

    /// Connected components of `G - x`, as a partition of `V \ x`.
    /// Components are listed in ascending order of their smallest vertex.
    pub fn components_after_removal(&self, x: &VertexSet) -> Vec<VertexSet> {
        let mut seen = x.clone();
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = VertexSet::empty(self.n);
            let mut stack = vec![s];
            seen.insert(s);
            comp.insert(s);
            while let Some(u) = stack.pop() {
                for w in self.adj[u].difference(&seen).iter() {
                    seen.insert(w);
                    comp.insert(w);
                    stack.push(w);
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_after_removal(&VertexSet::empty(self.n))
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// The subgraph induced by `keep`, with vertices renumbered densely.
    /// Returns the graph together with the map from new ids to old ids.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let to_old: Vec<usize> = keep.iter().collect();
        let mut to_new = vec![usize::MAX; self.n];
        for (new, &old) in to_old.iter().enumerate() {
            to_new[old] = new;
        }
        let mut g = Graph::new(to_old.len());
        for (new_u, &old_u) in to_old.iter().enumerate() {
            for old_v in self.adj[old_u].intersection(keep).iter() {
                if old_u < old_v {
                    g.adj[new_u].insert(to_new[old_v]);
                    g.adj[to_new[old_v]].insert(new_u);
                }
            }
        }
        (g, to_old)
    }
}

/// A path `0-1-...-(n-1)`.
pub fn path(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for v in 1..n {
        g.add_edge(v - 1, v).unwrap();
    }
    g
}

/// A star with center `0` and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    let mut g = Graph::new(leaves + 1);
    for v in 1..=leaves {
        g.add_edge(0, v).unwrap();
    }
    g
}

/// The complete graph on `n` vertices.
pub fn complete(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_neighborhood_examples() {
        let p3 = path(3);
        assert_eq!(p3.closed_neighborhood(1).unwrap().to_vec(), vec![0, 1, 2]);

        let lone = Graph::new(4);
        assert_eq!(lone.closed_neighborhood(2).unwrap().to_vec(), vec![2]);

        let k4 = complete(4);
        for v in 0..4 {
            assert_eq!(k4.closed_neighborhood(v).unwrap().to_vec(), vec![0, 1, 2, 3]);
        }

        assert!(matches!(
            p3.closed_neighborhood(3),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn neighborhood_symmetry() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 4)]).unwrap();
        for u in g.vertices() {
            let nu = g.closed_neighborhood(u).unwrap();
            assert!(nu.contains(u));
            for v in g.vertices() {
                let nv = g.closed_neighborhood(v).unwrap();
                assert_eq!(nu.contains(v), nv.contains(u));
            }
        }
    }

    #[test]
    fn false_twin_examples() {
        // Star K_{1,3}: all leaves share N(l) = {center}.
        let g = star(3);
        let leaves = VertexSet::from_iter(4, [1, 2, 3]);
        let classes = g.false_twin_classes(&leaves);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].to_vec(), vec![1, 2, 3]);

        // P3 endpoints both have N = {1}.
        let p3 = path(3);
        let ends = VertexSet::from_iter(3, [0, 2]);
        assert_eq!(p3.false_twin_classes(&ends).len(), 1);

        // P4 endpoints have different neighborhoods.
        let p4 = path(4);
        let ends = VertexSet::from_iter(4, [0, 3]);
        assert_eq!(p4.false_twin_classes(&ends).len(), 2);
    }

    #[test]
    fn twin_classes_partition_domain() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (4, 1), (4, 2)]).unwrap();
        let domain = VertexSet::full(6);
        let classes = g.false_twin_classes(&domain);
        let mut union = VertexSet::empty(6);
        let mut total = 0;
        for c in &classes {
            assert!(!c.is_empty());
            assert!(!union.intersects(c));
            union.union_with(c);
            total += c.len();
        }
        assert_eq!(union, domain);
        assert_eq!(total, 6);
    }

    #[test]
    fn cover_examples() {
        assert!(Graph::new(5).vertex_cover_2approx().is_empty());

        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.vertex_cover_2approx().to_vec(), vec![0, 1]);

        let s5 = star(5);
        let cover = s5.vertex_cover_2approx();
        assert_eq!(cover.len(), 2);
        assert!(cover.contains(0));
        s5.is_vertex_cover(&cover).unwrap();
    }

    #[test]
    fn cover_covers_all_edges() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (1, 4)])
            .unwrap();
        g.is_vertex_cover(&g.vertex_cover_2approx()).unwrap();
        assert!(g.is_vertex_cover(&VertexSet::from_iter(7, [0, 2])).is_err());
    }

    #[test]
    fn component_examples() {
        let p3 = path(3);
        let comps = p3.components_after_removal(&VertexSet::from_iter(3, [1]));
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].to_vec(), vec![0]);
        assert_eq!(comps[1].to_vec(), vec![2]);

        let comps = p3.components_after_removal(&VertexSet::empty(3));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].to_vec(), vec![0, 1, 2]);

        let k4 = complete(4);
        let comps = k4.components_after_removal(&VertexSet::from_iter(4, [0]));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].to_vec(), vec![1, 2, 3]);
    }

    #[test]
    fn induced_subgraph() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (h, to_old) = g.induced(&VertexSet::from_iter(5, [1, 2, 4]));
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(to_old, vec![1, 2, 4]);
        assert_eq!(h.edges(), vec![(0, 1)]);
    }
}
