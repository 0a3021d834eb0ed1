//! Instance generators used as end-to-end oracles for the solvers: the two
//! 3-SAT gadget families whose size-1 teaching maps correspond exactly to
//! satisfying assignments, and the clique encoding that turns an arbitrary
//! finite binary concept class into closed neighborhoods.

use std::collections::BTreeMap;

use crate::bitset::VertexSet;
use crate::error::Error;
use crate::graph::Graph;
use crate::solver::Instance;
use crate::teaching::{ConceptClass, TeachingMap, Variant};

/// A 3-CNF formula. Every clause has exactly three literals over three
/// distinct variables; literals are DIMACS-style signed integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[i64; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self, Error> {
        if clauses.is_empty() {
            return Err(Error::InvalidInput("formula has no clauses".into()));
        }
        let mut checked = Vec::with_capacity(clauses.len());
        for (j, clause) in clauses.iter().enumerate() {
            if clause.len() != 3 {
                return Err(Error::MalformedClause(format!(
                    "clause {} has {} literals, need exactly 3",
                    j + 1,
                    clause.len()
                )));
            }
            let mut lits = [clause[0], clause[1], clause[2]];
            lits.sort_by_key(|l| l.unsigned_abs());
            for lit in lits {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::MalformedClause(format!(
                        "literal {lit} in clause {} out of range",
                        j + 1
                    )));
                }
            }
            if lits[0].unsigned_abs() == lits[1].unsigned_abs()
                || lits[1].unsigned_abs() == lits[2].unsigned_abs()
            {
                return Err(Error::MalformedClause(format!(
                    "clause {} repeats a variable",
                    j + 1
                )));
            }
            checked.push(lits);
        }
        Ok(CnfFormula { num_vars, clauses: checked })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i64; 3]] {
        &self.clauses
    }

    pub fn is_satisfied_by(&self, tau: &[bool]) -> bool {
        self.clauses.iter().all(|c| Self::clause_holds(c, tau))
    }

    fn clause_holds(clause: &[i64; 3], tau: &[bool]) -> bool {
        clause.iter().any(|&lit| {
            let value = tau[(lit.unsigned_abs() as usize) - 1];
            if lit > 0 {
                value
            } else {
                !value
            }
        })
    }
}

/// The five pairwise false twins hanging off one variable-position vertex in
/// the general gadget, together with their shared hub.
#[derive(Clone, Debug)]
pub struct TwinBlock {
    /// The variable-position vertex the block is attached to.
    pub anchor: usize,
    /// Five pairwise false twins; the first one is the only non-concept.
    pub twins: [usize; 5],
    /// Adjacent to all five twins and to the anchor.
    pub hub: usize,
}

/// Vertex lookup for a generated gadget instance.
#[derive(Clone, Debug)]
pub struct GadgetLayout {
    pub variant: Variant,
    pub num_vars: usize,
    pub num_clauses: usize,
    /// v_1..v_n in variable order.
    pub variables: Vec<usize>,
    /// True/false literal vertices per variable.
    pub literals_true: Vec<usize>,
    pub literals_false: Vec<usize>,
    /// Clause vertices in clause order.
    pub clauses: Vec<usize>,
    /// Occurrence vertex per (clause index, variable index), 0-based.
    pub occurrences: BTreeMap<(usize, usize), usize>,
    /// Pendant partners (positive gadget only, else empty).
    pub variable_pendants: Vec<usize>,
    pub clause_pendants: Vec<usize>,
    /// The literal-free variable position (general gadget only).
    pub dummy_variable: Option<usize>,
    /// Twin blocks (general gadget only): the dummy position first, then
    /// one per variable in order.
    pub twin_blocks: Vec<TwinBlock>,
}

/// A generated hardness instance bundled with its formula and layout.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub formula: CnfFormula,
    pub instance: Instance,
    pub layout: GadgetLayout,
}

/// Builds the general-variant gadget: a yes answer at `k = 1` (negative
/// examples allowed) is equivalent to satisfiability of `phi`.
pub fn encode_general(phi: &CnfFormula) -> Gadget {
    let n = phi.num_vars();
    let m = phi.clauses().len();
    // Numbering: variable positions (dummy first), literals, occurrence
    // vertices, clause vertices, then the twin blocks.
    let dummy = 0usize;
    let variables: Vec<usize> = (1..=n).collect();
    let literals_true: Vec<usize> = (0..n).map(|i| n + 1 + 2 * i).collect();
    let literals_false: Vec<usize> = (0..n).map(|i| n + 2 + 2 * i).collect();
    let occ_base = 3 * n + 1;
    let clause_base = occ_base + 3 * m;
    let aux_base = clause_base + m;
    let clauses: Vec<usize> = (0..m).map(|j| clause_base + j).collect();
    let total = aux_base + 6 * (n + 1);

    let mut g = Graph::new(total);
    let mut occurrences = BTreeMap::new();
    let mut twin_blocks = Vec::with_capacity(n + 1);

    for i in 0..n {
        g.add_edge(variables[i], literals_true[i]).unwrap();
        g.add_edge(variables[i], literals_false[i]).unwrap();
    }
    // One twin block per variable position, dummy included.
    for (slot, &anchor) in std::iter::once(&dummy).chain(variables.iter()).enumerate() {
        let base = aux_base + 6 * slot;
        let twins = [base, base + 1, base + 2, base + 3, base + 4];
        let hub = base + 5;
        for t in twins {
            g.add_edge(hub, t).unwrap();
            g.add_edge(anchor, t).unwrap();
        }
        g.add_edge(anchor, hub).unwrap();
        twin_blocks.push(TwinBlock { anchor, twins, hub });
    }
    let mut next_occ = occ_base;
    for (j, clause) in phi.clauses().iter().enumerate() {
        for &lit in clause {
            let i = lit.unsigned_abs() as usize - 1;
            // A positive literal attaches the false vertex to the clause and
            // vice versa: the clause neighborhood must avoid the literal
            // vertex the satisfying choice teaches.
            let attached = if lit > 0 { literals_false[i] } else { literals_true[i] };
            g.add_edge(attached, clauses[j]).unwrap();
            let occ = next_occ;
            next_occ += 1;
            occurrences.insert((j, i), occ);
            g.add_edge(occ, variables[i]).unwrap();
            g.add_edge(occ, clauses[j]).unwrap();
            let block = &twin_blocks[i + 1];
            g.add_edge(occ, block.hub).unwrap();
            for t in block.twins {
                g.add_edge(occ, t).unwrap();
            }
        }
    }
    // Clause and variable-position vertices form a clique.
    let clique: Vec<usize> =
        std::iter::once(dummy).chain(variables.iter().copied()).chain(clauses.iter().copied()).collect();
    for a in 0..clique.len() {
        for b in a + 1..clique.len() {
            g.add_edge(clique[a], clique[b]).unwrap();
        }
    }

    let mut centers: Vec<usize> = clauses.clone();
    for block in &twin_blocks {
        centers.push(block.anchor);
        centers.push(block.hub);
        centers.extend_from_slice(&block.twins[1..]);
    }
    let concepts = ConceptClass::new(&g, &centers).expect("centers are valid vertices");
    assert_eq!(concepts.len(), centers.len(), "gadget neighborhoods are pairwise distinct");

    let layout = GadgetLayout {
        variant: Variant::General,
        num_vars: n,
        num_clauses: m,
        variables,
        literals_true,
        literals_false,
        clauses,
        occurrences,
        variable_pendants: Vec::new(),
        clause_pendants: Vec::new(),
        dummy_variable: Some(dummy),
        twin_blocks,
    };
    let instance = Instance::new(g, concepts, 1, Variant::General);
    Gadget { formula: phi.clone(), instance, layout }
}

/// Builds the positive-variant gadget: a yes answer at `k = 1` with positive
/// examples only is equivalent to satisfiability of `phi`.
pub fn encode_positive(phi: &CnfFormula) -> Gadget {
    let n = phi.num_vars();
    let m = phi.clauses().len();
    // Numbering: variables, their pendants, literals, occurrence vertices,
    // clause vertices, clause pendants.
    let variables: Vec<usize> = (0..n).collect();
    let variable_pendants: Vec<usize> = (0..n).map(|i| n + i).collect();
    let literals_true: Vec<usize> = (0..n).map(|i| 2 * n + 2 * i).collect();
    let literals_false: Vec<usize> = (0..n).map(|i| 2 * n + 2 * i + 1).collect();
    let occ_base = 4 * n;
    let clause_base = occ_base + 3 * m;
    let clauses: Vec<usize> = (0..m).map(|j| clause_base + j).collect();
    let clause_pendants: Vec<usize> = (0..m).map(|j| clause_base + m + j).collect();
    let total = clause_base + 2 * m;

    let mut g = Graph::new(total);
    let mut occurrences = BTreeMap::new();
    for i in 0..n {
        g.add_edge(variables[i], variable_pendants[i]).unwrap();
        g.add_edge(variables[i], literals_true[i]).unwrap();
        g.add_edge(variables[i], literals_false[i]).unwrap();
    }
    let mut next_occ = occ_base;
    for (j, clause) in phi.clauses().iter().enumerate() {
        g.add_edge(clauses[j], clause_pendants[j]).unwrap();
        for &lit in clause {
            let i = lit.unsigned_abs() as usize - 1;
            let attached = if lit > 0 { literals_false[i] } else { literals_true[i] };
            g.add_edge(attached, clauses[j]).unwrap();
            let occ = next_occ;
            next_occ += 1;
            occurrences.insert((j, i), occ);
            g.add_edge(occ, variables[i]).unwrap();
            g.add_edge(occ, variable_pendants[i]).unwrap();
            g.add_edge(occ, clauses[j]).unwrap();
        }
    }

    let mut centers: Vec<usize> = Vec::new();
    centers.extend_from_slice(&variables);
    centers.extend_from_slice(&variable_pendants);
    centers.extend_from_slice(&clauses);
    centers.extend_from_slice(&clause_pendants);
    let concepts = ConceptClass::new(&g, &centers).expect("centers are valid vertices");
    assert_eq!(concepts.len(), centers.len(), "gadget neighborhoods are pairwise distinct");

    let layout = GadgetLayout {
        variant: Variant::Positive,
        num_vars: n,
        num_clauses: m,
        variables,
        literals_true,
        literals_false,
        clauses,
        occurrences,
        variable_pendants,
        clause_pendants,
        dummy_variable: None,
        twin_blocks: Vec::new(),
    };
    let instance = Instance::new(g, concepts, 1, Variant::Positive);
    Gadget { formula: phi.clone(), instance, layout }
}

impl Gadget {
    /// The proofs' explicit size-1 teaching map for a satisfying assignment.
    pub fn assignment_to_map(&self, tau: &[bool]) -> Result<TeachingMap, Error> {
        if tau.len() != self.formula.num_vars() || !self.formula.is_satisfied_by(tau) {
            return Err(Error::UnsatisfyingAssignment);
        }
        let lay = &self.layout;
        let n = self.instance.graph.vertex_count();
        let singleton = |v: usize| VertexSet::from_iter(n, [v]);
        let mut map = TeachingMap::empty_for(&self.instance.concepts);
        for i in 0..lay.num_vars {
            let chosen = if tau[i] { lay.literals_true[i] } else { lay.literals_false[i] };
            map.assign(lay.variables[i], singleton(chosen))?;
        }
        for (j, clause) in self.formula.clauses().iter().enumerate() {
            let i = clause
                .iter()
                .map(|&lit| (lit.unsigned_abs() as usize - 1, lit > 0))
                .filter(|&(i, positive)| tau[i] == positive)
                .map(|(i, _)| i)
                .min()
                .expect("tau satisfies every clause");
            map.assign(lay.clauses[j], singleton(lay.occurrences[&(j, i)]))?;
        }
        match lay.variant {
            Variant::General => {
                for block in &lay.twin_blocks {
                    for &t in &block.twins[1..] {
                        map.assign(t, singleton(t))?;
                    }
                    map.assign(block.hub, singleton(block.twins[0]))?;
                }
                map.assign(
                    lay.dummy_variable.expect("general gadget has the dummy position"),
                    singleton(lay.variables[0]),
                )?;
            }
            Variant::Positive => {
                for i in 0..lay.num_vars {
                    map.assign(lay.variable_pendants[i], singleton(lay.variable_pendants[i]))?;
                }
                for j in 0..lay.num_clauses {
                    map.assign(lay.clause_pendants[j], singleton(lay.clause_pendants[j]))?;
                }
            }
        }
        Ok(map)
    }

    /// Reads an assignment back out of a size-1 teaching map: each variable
    /// concept must be taught by one of its two literal vertices.
    pub fn map_to_assignment(&self, map: &TeachingMap) -> Result<Vec<bool>, Error> {
        let lay = &self.layout;
        let n = self.instance.graph.vertex_count();
        let mut tau = Vec::with_capacity(lay.num_vars);
        for i in 0..lay.num_vars {
            let v = lay.variables[i];
            let set = map.get(v).ok_or(Error::MapMissingConcept { center: v })?;
            if *set == VertexSet::from_iter(n, [lay.literals_true[i]]) {
                tau.push(true);
            } else if *set == VertexSet::from_iter(n, [lay.literals_false[i]]) {
                tau.push(false);
            } else {
                return Err(Error::AssignmentExtraction { vertex: v });
            }
        }
        Ok(tau)
    }
}

/// Encodes an abstract finite binary concept class as closed neighborhoods:
/// the universe keeps its vertices, each concept gains a representative
/// vertex adjacent to exactly its members, and the representatives form a
/// clique.
pub fn encode_concept_class(
    universe: usize,
    concepts: &[Vec<usize>],
) -> Result<(Graph, ConceptClass), Error> {
    if concepts.is_empty() {
        return Err(Error::InvalidInput("concept list is empty".into()));
    }
    let mut seen: Vec<VertexSet> = Vec::new();
    for (index, c) in concepts.iter().enumerate() {
        for &v in c {
            if v >= universe {
                return Err(Error::VertexOutOfRange { vertex: v, n: universe });
            }
        }
        let set = VertexSet::from_iter(universe, c.iter().copied());
        if seen.contains(&set) {
            return Err(Error::DuplicateConcept { index });
        }
        seen.push(set);
    }

    let n = universe + concepts.len();
    let mut g = Graph::new(n);
    for (idx, concept) in concepts.iter().enumerate() {
        let rep = universe + idx;
        for &v in concept {
            g.add_edge(rep, v).unwrap();
        }
        for other in 0..idx {
            g.add_edge(rep, universe + other).unwrap();
        }
    }
    let centers: Vec<usize> = (universe..n).collect();
    let class = ConceptClass::new(&g, &centers)?;
    Ok((g, class))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{nctd, solve, SolveOptions};
    use crate::teaching::{verify, Verdict};

    fn phi_single() -> CnfFormula {
        CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap()
    }

    /// The two-clause formula drawn as the general-gadget illustration.
    fn phi_general_example() -> CnfFormula {
        CnfFormula::new(4, vec![vec![-1, 2, -3], vec![-2, 3, 4]]).unwrap()
    }

    /// The two-clause formula drawn as the positive-gadget illustration.
    fn phi_positive_example() -> CnfFormula {
        CnfFormula::new(4, vec![vec![-1, -2, -4], vec![1, -2, 3]]).unwrap()
    }

    #[test]
    fn formula_validation() {
        assert!(CnfFormula::new(3, vec![]).is_err());
        assert!(CnfFormula::new(3, vec![vec![1, 2]]).is_err());
        assert!(CnfFormula::new(3, vec![vec![1, -1, 2]]).is_err());
        assert!(CnfFormula::new(2, vec![vec![1, 2, 3]]).is_err());
        assert!(CnfFormula::new(3, vec![vec![1, 2, 0]]).is_err());
    }

    #[test]
    fn general_gadget_counts() {
        let gadget = encode_general(&phi_single());
        assert_eq!(gadget.instance.graph.vertex_count(), 38);
        assert_eq!(gadget.instance.concepts.len(), 25);

        let fig = encode_general(&phi_general_example());
        assert_eq!(fig.instance.graph.vertex_count(), 51);
        assert_eq!(fig.instance.concepts.len(), 32);
    }

    #[test]
    fn positive_gadget_counts() {
        let gadget = encode_positive(&phi_single());
        assert_eq!(gadget.instance.graph.vertex_count(), 17);
        assert_eq!(gadget.instance.concepts.len(), 8);

        let fig = encode_positive(&phi_positive_example());
        assert_eq!(fig.instance.graph.vertex_count(), 26);
        assert_eq!(fig.instance.concepts.len(), 12);
    }

    #[test]
    fn twin_blocks_are_pairwise_false_twins() {
        let gadget = encode_general(&phi_general_example());
        let g = &gadget.instance.graph;
        for block in &gadget.layout.twin_blocks {
            for a in 0..5 {
                for b in a + 1..5 {
                    assert_eq!(g.neighbors(block.twins[a]), g.neighbors(block.twins[b]));
                }
            }
            // Four of the five twins are concepts; the first is not.
            for &t in &block.twins[1..] {
                assert!(gadget.instance.concepts.contains_neighborhood(g, t).unwrap());
            }
            assert!(!gadget.instance.concepts.contains_neighborhood(g, block.twins[0]).unwrap());
        }
    }

    #[test]
    fn pendant_neighborhood_is_nested() {
        let gadget = encode_positive(&phi_positive_example());
        let g = &gadget.instance.graph;
        let lay = &gadget.layout;
        for i in 0..lay.num_vars {
            let nv = g.closed_neighborhood(lay.variables[i]).unwrap();
            let np = g.closed_neighborhood(lay.variable_pendants[i]).unwrap();
            assert!(np.is_subset(&nv));
            let diff = nv.difference(&np);
            assert_eq!(diff.to_vec(), {
                let mut want = vec![lay.literals_true[i], lay.literals_false[i]];
                want.sort_unstable();
                want
            });
        }
    }

    #[test]
    fn satisfying_assignment_yields_verified_map() {
        // All-false satisfies the positive example formula.
        let gadget = encode_positive(&phi_positive_example());
        let tau = vec![false; 4];
        let map = gadget.assignment_to_map(&tau).unwrap();
        assert_eq!(map.size(), 1);
        assert_eq!(
            verify(&gadget.instance.graph, &gadget.instance.concepts, &map, Variant::Positive)
                .unwrap(),
            Verdict::Ok
        );

        // tau = (F, T, F, T) satisfies the general example formula.
        let gadget = encode_general(&phi_general_example());
        let tau = vec![false, true, false, true];
        let map = gadget.assignment_to_map(&tau).unwrap();
        assert_eq!(
            verify(&gadget.instance.graph, &gadget.instance.concepts, &map, Variant::General)
                .unwrap(),
            Verdict::Ok
        );
        let lay = &gadget.layout;
        let n = gadget.instance.graph.vertex_count();
        for block in &lay.twin_blocks {
            assert_eq!(*map.get(block.hub).unwrap(), VertexSet::from_iter(n, [block.twins[0]]));
        }
        assert_eq!(
            *map.get(lay.dummy_variable.unwrap()).unwrap(),
            VertexSet::from_iter(n, [lay.variables[0]])
        );
    }

    #[test]
    fn unsatisfying_assignment_is_rejected() {
        let phi = CnfFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        let gadget = encode_positive(&phi);
        assert!(matches!(
            gadget.assignment_to_map(&[false, false, false]),
            Err(Error::UnsatisfyingAssignment)
        ));
    }

    #[test]
    fn assignment_round_trip() {
        let gadget = encode_positive(&phi_positive_example());
        let tau = vec![false, false, true, false];
        let map = gadget.assignment_to_map(&tau).unwrap();
        assert_eq!(gadget.map_to_assignment(&map).unwrap(), tau);
    }

    #[test]
    fn extraction_rejects_non_literal_teaching() {
        let gadget = encode_positive(&phi_positive_example());
        let tau = vec![false; 4];
        let mut map = gadget.assignment_to_map(&tau).unwrap();
        let v1 = gadget.layout.variables[0];
        let n = gadget.instance.graph.vertex_count();
        map.assign(v1, VertexSet::from_iter(n, [v1])).unwrap();
        assert!(matches!(
            gadget.map_to_assignment(&map),
            Err(Error::AssignmentExtraction { .. })
        ));
    }

    #[test]
    fn solver_witness_extracts_a_satisfying_assignment() {
        let gadget = encode_positive(&phi_positive_example());
        let res = solve(&gadget.instance, &SolveOptions::default()).unwrap();
        assert!(res.decision);
        let tau = gadget.map_to_assignment(&res.map.unwrap()).unwrap();
        assert!(gadget.formula.is_satisfied_by(&tau));
    }

    #[test]
    fn concept_class_encoding_matches_figure() {
        // Universe {0..4}; concepts {0,3}, {1,4}, {1,2,4}.
        let (g, class) =
            encode_concept_class(5, &[vec![0, 3], vec![1, 4], vec![1, 2, 4]]).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(class.len(), 3);
        assert_eq!(g.edge_count(), 3 + 2 + 2 + 3);
        assert!(g.has_edge(5, 0) && g.has_edge(5, 3));
        assert!(g.has_edge(6, 1) && g.has_edge(6, 4));
        assert!(g.has_edge(7, 1) && g.has_edge(7, 2) && g.has_edge(7, 4));
        assert!(g.has_edge(5, 6) && g.has_edge(5, 7) && g.has_edge(6, 7));
    }

    #[test]
    fn empty_concept_is_allowed() {
        let (g, class) = encode_concept_class(3, &[vec![]]).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.degree(3), 0);
        assert_eq!(class.len(), 1);
    }

    #[test]
    fn duplicate_concepts_are_rejected() {
        assert!(matches!(
            encode_concept_class(3, &[vec![0, 1], vec![1, 0]]),
            Err(Error::DuplicateConcept { index: 1 })
        ));
        assert!(encode_concept_class(3, &[]).is_err());
    }

    #[test]
    fn tiny_encoding_has_the_expected_dimension() {
        // Frozen from the abstract brute force: the class {{0},{1}} over a
        // 2-element universe has teaching dimension 1 in both variants.
        let (g, class) = encode_concept_class(2, &[vec![0], vec![1]]).unwrap();
        let opts = SolveOptions::default();
        assert_eq!(nctd(&g, &class, Variant::General, &opts).unwrap().0, 1);
        assert_eq!(nctd(&g, &class, Variant::Positive, &opts).unwrap().0, 1);
    }
}
