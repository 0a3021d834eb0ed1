//! Constructive teaching maps with fixed size bounds for planar graphs:
//! size at most 7 for the positive variant and at most 5 for the general
//! variant.
//!
//! Planarity itself is never tested. The constructions run optimistically
//! and every counting bound the proofs take from planarity is enforced at
//! runtime instead: if a teaching set would outgrow its bound, or too many
//! vertices share three common neighbors, the input cannot have been planar
//! and the construction aborts. A returned map is always verified, so a
//! non-planar input can produce an error but never a silently clashing map.

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::graph::Graph;
use crate::teaching::{verify, ConceptClass, TeachingMap, Variant};

/// A positive non-clashing map of size at most 7.
///
/// Concepts of degree at most 6 teach their whole neighborhood. Higher
/// degrees start from their three smallest neighbors and the fix-up loop
/// adds one distinguishing vertex per still-clashing pair.
pub fn positive_nctm(g: &Graph, class: &ConceptClass) -> Result<TeachingMap, Error> {
    build(g, class, Variant::Positive, 7, 7)
}

/// A non-clashing map (negative examples allowed) of size at most 5.
///
/// Concepts of degree at most 4 teach their whole neighborhood. Higher
/// degrees start from their three smallest neighbors plus, when it exists
/// and lies outside the neighborhood, the unique other common neighbor of
/// those three as a negative example.
pub fn general_nctm(g: &Graph, class: &ConceptClass) -> Result<TeachingMap, Error> {
    build(g, class, Variant::General, 5, 5)
}

fn build(
    g: &Graph,
    class: &ConceptClass,
    variant: Variant,
    low_size: usize,
    cap: usize,
) -> Result<TeachingMap, Error> {
    let n = class.universe();
    let mut sets: Vec<VertexSet> = Vec::with_capacity(class.len());
    let mut high: Vec<bool> = Vec::with_capacity(class.len());
    for concept in class.concepts() {
        // |N[v]| = d(v) + 1, a property of the concept set itself.
        if concept.members().len() <= low_size {
            sets.push(concept.members().clone());
            high.push(false);
            continue;
        }
        high.push(true);
        let center = concept.canonical();
        let mut seed = VertexSet::empty(n);
        let mut neighbors = concept.members().clone();
        neighbors.remove(center);
        for v in neighbors.iter().take(3) {
            seed.insert(v);
        }
        if variant == Variant::General {
            // At most one vertex besides the center can see all three seeds
            // in a planar graph; two or more witness a K_{3,3}.
            let seeds: Vec<usize> = seed.iter().collect();
            let mut common: Vec<usize> = g
                .vertices()
                .filter(|&u| u != center && seeds.iter().all(|&s| g.neighbors(u).contains(s)))
                .collect();
            if common.len() > 1 {
                return Err(Error::PlanarityViolated(format!(
                    "{} vertices besides {center} are adjacent to all of {seeds:?}",
                    common.len()
                )));
            }
            if let Some(u) = common.pop() {
                if !concept.members().contains(u) {
                    seed.insert(u);
                }
            }
        }
        sets.push(seed);
    }

    // Fix-up: repeatedly repair the first clashing pair that involves a
    // high-degree concept. Each addition settles its pair for good, so at
    // most one pass per pair is needed.
    let concepts = class.concepts();
    let mut budget = concepts.len() * cap + 1;
    loop {
        let mut repaired = false;
        'pairs: for i in 0..concepts.len() {
            for j in i + 1..concepts.len() {
                if !high[i] && !high[j] {
                    continue;
                }
                let diff = concepts[i].members().symmetric_difference(concepts[j].members());
                if sets[i].intersects(&diff) || sets[j].intersects(&diff) {
                    continue;
                }
                let (v, y) = if high[i] { (i, j) } else { (j, i) };
                let into_v = concepts[v].members().difference(concepts[y].members());
                let (target, w) = match into_v.first() {
                    Some(w) => (v, w),
                    None => {
                        let into_y = concepts[y].members().difference(concepts[v].members());
                        match into_y.first() {
                            Some(w) => (y, w),
                            None => {
                                return Err(Error::PlanarityViolated(format!(
                                    "concepts {} and {} admit no distinguishing vertex",
                                    concepts[i].canonical(),
                                    concepts[j].canonical()
                                )))
                            }
                        }
                    }
                };
                if sets[target].len() >= cap {
                    return Err(Error::PlanarityViolated(format!(
                        "teaching set of concept {} would exceed {cap} examples",
                        concepts[target].canonical()
                    )));
                }
                sets[target].insert(w);
                repaired = true;
                break 'pairs;
            }
        }
        if !repaired {
            break;
        }
        budget -= 1;
        if budget == 0 {
            return Err(Error::PlanarityViolated("fix-up loop did not converge".into()));
        }
    }

    let mut map = TeachingMap::empty_for(class);
    for (concept, set) in concepts.iter().zip(sets) {
        map.assign(concept.canonical(), set)?;
    }
    match verify(g, class, &map, variant)? {
        v if v.is_ok() => Ok(map),
        v => Err(Error::PlanarityViolated(format!("constructed map fails verification: {v:?}"))),
    }
}

/// A `rows x cols` grid graph.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut g = Graph::new(rows * cols);
    let id = |r: usize, c: usize| r * cols + c;
    for r in 0..rows {
        for c in 0..cols {
            if r + 1 < rows {
                g.add_edge(id(r, c), id(r + 1, c)).unwrap();
            }
            if c + 1 < cols {
                g.add_edge(id(r, c), id(r, c + 1)).unwrap();
            }
        }
    }
    g
}

/// A wheel: a hub (vertex 0) joined to every vertex of a cycle.
pub fn wheel(rim: usize) -> Graph {
    let mut g = Graph::new(rim + 1);
    for v in 1..=rim {
        g.add_edge(0, v).unwrap();
        let next = if v == rim { 1 } else { v + 1 };
        g.add_edge(v, next).unwrap();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{star, Graph};
    use crate::teaching::Verdict;

    fn check(g: &Graph, map: &TeachingMap, class: &ConceptClass, variant: Variant, cap: usize) {
        assert_eq!(verify(g, class, map, variant).unwrap(), Verdict::Ok);
        assert!(map.size() <= cap, "size {} exceeds {cap}", map.size());
    }

    #[test]
    fn grid_teaches_whole_neighborhoods() {
        let g = grid(3, 3);
        let class = ConceptClass::all_neighborhoods(&g);
        let map = positive_nctm(&g, &class).unwrap();
        for concept in class.concepts() {
            assert_eq!(map.get(concept.canonical()).unwrap(), concept.members());
        }
        check(&g, &map, &class, Variant::Positive, 7);
        assert!(map.size() <= 5);

        let map = general_nctm(&g, &class).unwrap();
        check(&g, &map, &class, Variant::General, 5);
    }

    #[test]
    fn star_seven_center_is_seeded() {
        let g = star(7);
        let class = ConceptClass::all_neighborhoods(&g);
        let map = positive_nctm(&g, &class).unwrap();
        // Center has degree 7: three smallest leaves, no fix-up needed.
        assert_eq!(map.get(0).unwrap().to_vec(), vec![1, 2, 3]);
        for leaf in 1..=7 {
            assert_eq!(map.get(leaf).unwrap().len(), 2);
        }
        check(&g, &map, &class, Variant::Positive, 7);
    }

    #[test]
    fn wheel_five_general() {
        let g = wheel(5);
        let class = ConceptClass::all_neighborhoods(&g);
        let map = general_nctm(&g, &class).unwrap();
        check(&g, &map, &class, Variant::General, 5);
    }

    #[test]
    fn star_five_general() {
        let g = star(5);
        let class = ConceptClass::all_neighborhoods(&g);
        let map = general_nctm(&g, &class).unwrap();
        check(&g, &map, &class, Variant::General, 5);
    }

    #[test]
    fn dense_bipartite_aborts_or_verifies() {
        // K_{3,5} plus a pendant: three common neighbors of any seed triple
        // from the large side certify non-planarity for the general variant.
        let mut g = Graph::new(9);
        for a in 0..3 {
            for b in 3..8 {
                g.add_edge(a, b).unwrap();
            }
        }
        g.add_edge(0, 8).unwrap();
        let class = ConceptClass::all_neighborhoods(&g);
        assert!(matches!(general_nctm(&g, &class), Err(Error::PlanarityViolated(_))));

        // The positive construction on K_{3,7}+pendant either aborts or
        // returns a verifying map; it never returns silently clashing output.
        let mut g = Graph::new(11);
        for a in 0..3 {
            for b in 3..10 {
                g.add_edge(a, b).unwrap();
            }
        }
        g.add_edge(0, 10).unwrap();
        let class = ConceptClass::all_neighborhoods(&g);
        match positive_nctm(&g, &class) {
            Ok(map) => check(&g, &map, &class, Variant::Positive, 7),
            Err(Error::PlanarityViolated(_)) => {}
            Err(other) => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn trees_and_grids_never_abort() {
        let mut cases = vec![grid(2, 5), grid(4, 4), star(9), wheel(6), wheel(7)];
        // A caterpillar tree.
        let mut cat = Graph::new(12);
        for v in 1..6 {
            cat.add_edge(v - 1, v).unwrap();
        }
        for (i, leaf) in (6..12).enumerate() {
            cat.add_edge(i % 5, leaf).unwrap();
        }
        cases.push(cat);
        for g in cases {
            let class = ConceptClass::all_neighborhoods(&g);
            let pos = positive_nctm(&g, &class).unwrap();
            check(&g, &pos, &class, Variant::Positive, 7);
            let gen = general_nctm(&g, &class).unwrap();
            check(&g, &gen, &class, Variant::General, 5);
        }
    }
}
