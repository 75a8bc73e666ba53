//! Shared fixtures: the canonical small graphs with hand-derived values and
//! seeded random connected graphs.
#![allow(dead_code)] // each test binary uses a different subset

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stubborn_opt::{Graph, NodeSet, WalkKind, WalkMatrix};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p3() -> Graph {
    Graph::from_edges(&[(0, 1), (1, 2)]).unwrap()
}

pub fn p4() -> Graph {
    Graph::from_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap()
}

pub fn c4() -> Graph {
    Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
}

pub fn k3() -> Graph {
    Graph::from_edges(&[(0, 1), (1, 2), (2, 0)]).unwrap()
}

/// Star with center 0 and leaves 1..=4.
pub fn star5() -> Graph {
    Graph::from_edges(&[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap()
}

/// Triangle 0-1-2 with pendant 3 attached to 2.
pub fn triangle_pendant() -> Graph {
    Graph::from_edges(&[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
}

pub fn canonical() -> Vec<(&'static str, Graph)> {
    vec![
        ("p3", p3()),
        ("p4", p4()),
        ("c4", c4()),
        ("k3", k3()),
        ("star5", star5()),
        ("triangle_pendant", triangle_pendant()),
    ]
}

pub fn uniform(g: Graph) -> WalkMatrix {
    WalkMatrix::uniform(Arc::new(g))
}

pub fn lazy(g: Graph) -> WalkMatrix {
    WalkMatrix::build(Arc::new(g), WalkKind::Lazy)
}

pub fn set(universe: usize, members: &[usize]) -> NodeSet {
    NodeSet::from_members(universe, members.iter().copied()).unwrap()
}

/// Random connected graph: a random spanning tree plus each remaining pair
/// independently with probability `extra`.
pub fn random_connected_graph(n: usize, extra: f64, rng: &mut Rng8) -> Graph {
    assert!(n >= 2);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        edges.push((parent, v));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if !edges.contains(&(u, v)) && rng.random::<f64>() < extra {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(&edges).unwrap()
}

/// Random nonempty proper subset of `0..n`.
pub fn random_proper_subset(n: usize, rng: &mut Rng8) -> NodeSet {
    loop {
        let mut s = NodeSet::empty(n);
        for v in 0..n {
            if rng.random::<f64>() < 0.4 {
                s.insert(v);
            }
        }
        if !s.is_empty() && !s.is_full() {
            return s;
        }
    }
}
