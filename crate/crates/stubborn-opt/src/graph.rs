use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Largest node count accepted by the dense pipeline.
pub const MAX_NODES: usize = 50_000;

/// An immutable connected graph with positive edge weights.
///
/// Node labels from input files are remapped to dense ids `0..N` in
/// first-appearance order; original labels are kept for output. Weights may
/// differ between the two orientations of an edge, but every edge is present
/// in both directions.
#[derive(Clone, Debug)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// Per node: `(neighbor, weight)` sorted by neighbor id.
    adj: Vec<Vec<(usize, f64)>>,
    /// Undirected edges in first-appearance order.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds an unweighted graph from undirected edges; node ids must be dense.
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Graph> {
        let mut b = GraphBuilder::new();
        for &(u, v) in edges {
            b.add_line(&u.to_string(), &v.to_string(), None)
                .map_err(Error::data)?;
        }
        b.finish()
    }

    /// Builds a graph with symmetric weights from undirected edges.
    pub fn from_weighted_edges(edges: &[(usize, usize, f64)]) -> Result<Graph> {
        let mut b = GraphBuilder::new();
        for &(u, v, w) in edges {
            b.add_line(&u.to_string(), &v.to_string(), Some(w))
                .map_err(Error::data)?;
        }
        b.finish()
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adj[node].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Neighbors of `node` with the outgoing weight, ascending by id.
    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adj[node]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search_by_key(&v, |&(n, _)| n).is_ok()
    }

    /// Undirected edges in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn label(&self, node: usize) -> &str {
        &self.labels[node]
    }

    pub fn node_id(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Maps a list of labels onto a `NodeSet`.
    pub fn resolve_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<NodeSet> {
        let mut set = NodeSet::empty(self.node_count());
        for l in labels {
            let l = l.as_ref();
            let id = self
                .node_id(l)
                .ok_or_else(|| Error::data(format!("unknown node label '{l}'")))?;
            set.insert(id);
        }
        Ok(set)
    }

    pub fn labels_of(&self, set: &NodeSet) -> Vec<String> {
        set.iter().map(|v| self.labels[v].clone()).collect()
    }

    /// True iff every edge has at least one endpoint in `a`.
    pub fn is_vertex_cover(&self, a: &NodeSet) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| a.contains(u) || a.contains(v))
    }

    /// Vertex cover from a greedy maximal matching over edges in input order.
    ///
    /// The result is at most twice the minimum vertex cover and is
    /// deterministic for a fixed edge order.
    pub fn vertex_cover_matching(&self) -> NodeSet {
        let mut matched = vec![false; self.node_count()];
        let mut cover = NodeSet::empty(self.node_count());
        for &(u, v) in &self.edges {
            if !matched[u] && !matched[v] {
                matched[u] = true;
                matched[v] = true;
                cover.insert(u);
                cover.insert(v);
            }
        }
        cover
    }

    /// True iff every node outside `a` has a neighbor in `a` (`a` is a
    /// dominating set). Empty sets dominate nothing.
    pub fn is_one_dominant(&self, a: &NodeSet) -> bool {
        if a.is_empty() {
            return false;
        }
        (0..self.node_count())
            .filter(|&v| !a.contains(v))
            .all(|v| self.adj[v].iter().any(|&(n, _)| a.contains(n)))
    }

    /// Connected components of the subgraph induced on the complement of `a`,
    /// each component reported in ascending order of its smallest member.
    pub fn complement_components(&self, a: &NodeSet) -> Result<Vec<NodeSet>> {
        if a.is_full() {
            return Err(Error::arg("complement of the full set is empty"));
        }
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        for start in 0..n {
            if a.contains(start) || seen[start] {
                continue;
            }
            let mut comp = NodeSet::empty(n);
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for &(u, _) in &self.adj[v] {
                    if !a.contains(u) && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            components.push(comp);
        }
        Ok(components)
    }

    /// Number of edges with both endpoints outside `a` (uncovered edges).
    pub fn uncovered_edge_count(&self, a: &NodeSet) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| !a.contains(u) && !a.contains(v))
            .count()
    }

    /// Number of edges with exactly one endpoint in `a`.
    pub fn boundary_edge_count(&self, a: &NodeSet) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| a.contains(u) != a.contains(v))
            .count()
    }

    /// Outgoing weight of `u -> v`, if the edge exists.
    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj[u]
            .binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|k| self.adj[u][k].1)
    }
}

/// Incremental construction shared by the file parser and the in-code
/// constructors. Each orientation of an edge may be assigned a weight at most
/// once; unweighted lines assign both orientations with weight 1.
pub(crate) struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    oriented: HashMap<(usize, usize), f64>,
    pairs: Vec<(usize, usize)>,
}

impl GraphBuilder {
    pub(crate) fn new() -> Self {
        GraphBuilder {
            labels: Vec::new(),
            index: HashMap::new(),
            oriented: HashMap::new(),
            pairs: Vec::new(),
        }
    }

    fn intern(&mut self, label: &str) -> usize {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    /// Records one input line. `weight: None` declares the undirected edge
    /// with unit weight; `Some(w)` assigns `w` to the orientation `u -> v`.
    pub(crate) fn add_line(
        &mut self,
        u: &str,
        v: &str,
        weight: Option<f64>,
    ) -> std::result::Result<(), String> {
        if u == v {
            return Err(format!("self-loop at node '{u}'"));
        }
        if let Some(w) = weight {
            if !w.is_finite() || w <= 0.0 {
                return Err(format!("edge weight must be positive, got {w}"));
            }
        }
        let ui = self.intern(u);
        let vi = self.intern(v);
        let fresh = !self.oriented.contains_key(&(ui, vi)) && !self.oriented.contains_key(&(vi, ui));
        match weight {
            None => {
                if self.oriented.contains_key(&(ui, vi)) || self.oriented.contains_key(&(vi, ui)) {
                    return Err(format!("duplicate edge {u} {v}"));
                }
                self.oriented.insert((ui, vi), 1.0);
                self.oriented.insert((vi, ui), 1.0);
            }
            Some(w) => {
                if self.oriented.contains_key(&(ui, vi)) {
                    return Err(format!("duplicate edge {u} {v}"));
                }
                self.oriented.insert((ui, vi), w);
            }
        }
        if fresh {
            self.pairs.push((ui, vi));
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> Result<Graph> {
        let GraphBuilder {
            labels,
            index,
            mut oriented,
            pairs,
        } = self;
        let n = labels.len();
        if n == 0 {
            return Err(Error::data("graph has no edges"));
        }
        if n > MAX_NODES {
            return Err(Error::data(format!(
                "graph has {n} nodes; the dense pipeline supports at most {MAX_NODES}"
            )));
        }
        // A single stated orientation is used symmetrically.
        for &(u, v) in &pairs {
            if !oriented.contains_key(&(v, u)) {
                let w = oriented[&(u, v)];
                oriented.insert((v, u), w);
            }
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (&(u, v), &w) in &oriented {
            adj[u].push((v, w));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        let g = Graph {
            labels,
            index,
            adj,
            edges: pairs,
        };
        // Connectivity over the undirected view.
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &(u, _) in &g.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        if reached != n {
            return Err(Error::data(format!(
                "graph is disconnected: reached {reached} of {n} nodes"
            )));
        }
        Ok(g)
    }
}
