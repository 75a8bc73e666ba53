use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A subset of the nodes `0..universe` of a graph, backed by a bit vector.
///
/// Sets remember their universe size so complements are well defined;
/// operations on sets from different universes panic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    universe: usize,
    words: Vec<u64>,
    len: usize,
}

impl NodeSet {
    /// Empty set over `0..universe`.
    pub fn empty(universe: usize) -> Self {
        NodeSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
            len: 0,
        }
    }

    /// The full set `0..universe`.
    pub fn full(universe: usize) -> Self {
        let mut s = NodeSet::empty(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    pub fn singleton(universe: usize, node: usize) -> Result<Self> {
        NodeSet::from_members(universe, [node])
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Result<Self> {
        let mut s = NodeSet::empty(universe);
        for v in members {
            if v >= universe {
                return Err(Error::arg(format!(
                    "node {v} outside universe of size {universe}"
                )));
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.universe
    }

    pub fn contains(&self, node: usize) -> bool {
        node < self.universe && self.words[node / 64] & (1 << (node % 64)) != 0
    }

    /// Inserts `node`, returning true if it was not already present.
    pub fn insert(&mut self, node: usize) -> bool {
        assert!(node < self.universe, "node outside universe");
        let w = &mut self.words[node / 64];
        let bit = 1u64 << (node % 64);
        if *w & bit == 0 {
            *w |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn remove(&mut self, node: usize) -> bool {
        if !self.contains(node) {
            return false;
        }
        self.words[node / 64] &= !(1u64 << (node % 64));
        self.len -= 1;
        true
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        NodeSet {
            universe: self.universe,
            words,
            len,
        }
    }

    pub fn complement(&self) -> NodeSet {
        let mut s = NodeSet::empty(self.universe);
        for v in 0..self.universe {
            if !self.contains(v) {
                s.insert(v);
            }
        }
        s
    }

    pub fn with(&self, node: usize) -> NodeSet {
        let mut s = self.clone();
        s.insert(node);
        s
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(|&v| self.contains(v))
    }

    pub fn members(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

// Lexicographic order on the ascending member sequence; used for
// deterministic tie-breaking.
impl Ord for NodeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}
