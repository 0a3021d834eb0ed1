//! Fixed-width bitsets over the vertex range `0..n` of a graph.
//!
//! Every set operation the solvers rely on (union, intersection, symmetric
//! difference, subset tests) is a handful of word operations, which is what
//! makes the exhaustive searches and pair checks affordable.

use std::fmt;

const BITS: usize = u64::BITS as usize;

/// A set of vertex ids drawn from the fixed universe `0..width`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    width: usize,
    blocks: Vec<u64>,
}

impl VertexSet {
    /// The empty set over a universe of `width` vertices.
    pub fn empty(width: usize) -> Self {
        VertexSet { width, blocks: vec![0; width.div_ceil(BITS)] }
    }

    /// The full set `{0, .., width-1}`.
    pub fn full(width: usize) -> Self {
        let mut s = Self::empty(width);
        for v in 0..width {
            s.insert(v);
        }
        s
    }

    pub fn from_iter(width: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(width);
        for v in members {
            s.insert(v);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.width);
        self.blocks[v / BITS] |= 1 << (v % BITS);
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.width);
        self.blocks[v / BITS] &= !(1 << (v % BITS));
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.width && self.blocks[v / BITS] & (1 << (v % BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn remove_all(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    /// True when the two sets share at least one vertex.
    pub fn intersects(&self, other: &Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    /// The smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Ascending iterator over the members.
    pub fn iter(&self) -> Iter<'_> {
        Iter { set: self, block: 0, bits: self.blocks.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!(self.width, other.width);
        VertexSet {
            width: self.width,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

pub struct Iter<'a> {
    set: &'a VertexSet,
    block: usize,
    bits: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.bits == 0 {
            self.block += 1;
            if self.block >= self.set.blocks.len() {
                return None;
            }
            self.bits = self.set.blocks[self.block];
        }
        let tz = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(self.block * BITS + tz)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
