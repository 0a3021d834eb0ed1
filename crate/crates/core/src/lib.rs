//! Solvers, kernelizations and constructive bounds for (positive)
//! non-clashing teaching maps of closed neighborhoods in graphs.
//!
//! A concept class here is a family of closed neighborhoods `N[v]` in a
//! simple graph. A teaching map assigns each concept a set of example
//! vertices; it is non-clashing when every pair of distinct concepts is told
//! apart by some example in the union of their teaching sets, and positive
//! when every teaching set lies inside its concept. This crate provides:
//!
//! - the verifier for both variants ([`teaching`]),
//! - an exact backtracking solver and dimension computation ([`solver`]),
//! - a vertex-cover kernelization with solution lifting for the general
//!   variant ([`vc`]),
//! - a treedepth kernelization with solution lifting for the positive
//!   variant ([`td`]),
//! - constructive size bounds for planar and unit-square graphs
//!   ([`planar`], [`squares`]),
//! - instance generators: 3-SAT gadgets and the clique encoding of abstract
//!   concept classes ([`gadgets`]),
//! - the text formats shared with the command-line front end ([`io`]).

pub mod bitset;
mod error;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod planar;
pub mod solver;
pub mod squares;
pub mod td;
pub mod teaching;
pub mod treedepth;
pub mod vc;

pub use bitset::VertexSet;
pub use error::Error;
pub use graph::Graph;
pub use solver::{Instance, SearchStats, SolveOptions, SolveResult};
pub use teaching::{ClashWitness, Concept, ConceptClass, TeachingMap, Variant, Verdict};
pub use treedepth::RootedForest;
