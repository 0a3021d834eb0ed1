//! Intersection graphs of axis-parallel closed unit squares, and the
//! four-example positive teaching map they admit: teaching each
//! neighborhood by its extreme members in the four axis directions.
//!
//! Coordinates are exact rationals so boundary contact (squares exactly one
//! unit apart) is classified correctly.

use num_rational::BigRational;
use num_traits::One;

use crate::error::Error;
use crate::graph::Graph;
use crate::teaching::{verify, ConceptClass, TeachingMap, Variant};
use crate::VertexSet;

/// Centers of axis-parallel closed unit squares (side length 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareArrangement {
    centers: Vec<(BigRational, BigRational)>,
}

impl SquareArrangement {
    pub fn new(centers: Vec<(BigRational, BigRational)>) -> Self {
        SquareArrangement { centers }
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[(BigRational, BigRational)] {
        &self.centers
    }
}

/// The intersection graph: squares `i` and `j` are adjacent iff
/// `|xi - xj| <= 1` and `|yi - yj| <= 1` (closed squares, so boundary
/// contact counts).
pub fn intersection_graph(arr: &SquareArrangement) -> Graph {
    let one = BigRational::one();
    let n = arr.len();
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let (xi, yi) = &arr.centers[i];
            let (xj, yj) = &arr.centers[j];
            let dx = if xi >= xj { xi - xj } else { xj - xi };
            let dy = if yi >= yj { yi - yj } else { yj - yi };
            if dx <= one && dy <= one {
                g.add_edge(i, j).expect("indices are in range");
            }
        }
    }
    g
}

/// A positive non-clashing map of size at most 4: each concept is taught by
/// the leftmost, rightmost, topmost and bottommost members of its
/// neighborhood (ties broken towards the lowest index).
pub fn positive_nctm(arr: &SquareArrangement, class: &ConceptClass) -> Result<TeachingMap, Error> {
    let g = intersection_graph(arr);
    let mut map = TeachingMap::empty_for(class);
    for concept in class.concepts() {
        let members: Vec<usize> = concept.members().iter().collect();
        let x = |v: usize| &arr.centers[v].0;
        let y = |v: usize| &arr.centers[v].1;
        let mut extremes = VertexSet::empty(class.universe());
        for pick in [
            members.iter().copied().min_by_key(|&v| (x(v).clone(), v)),
            members.iter().copied().max_by_key(|&v| (x(v).clone(), usize::MAX - v)),
            members.iter().copied().max_by_key(|&v| (y(v).clone(), usize::MAX - v)),
            members.iter().copied().min_by_key(|&v| (y(v).clone(), v)),
        ] {
            if let Some(v) = pick {
                extremes.insert(v);
            }
        }
        map.assign(concept.canonical(), extremes)?;
    }
    match verify(&g, class, &map, Variant::Positive)? {
        v if v.is_ok() => Ok(map),
        v => Err(Error::ConstructionFailed(format!(
            "extreme-square map failed verification: {v:?}"
        ))),
    }
}
