//! Transition matrices for random walks on a graph and their stationary
//! distributions.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Tolerance on row sums of a transition matrix.
pub const ROW_SUM_TOL: f64 = 1e-12;
/// Tolerance on the stationary residual `pi P - pi`.
pub const STATIONARY_TOL: f64 = 1e-9;
/// Entrywise tolerance for the detailed-balance check.
pub const REVERSIBLE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkKind {
    /// Steps to a uniformly random neighbor.
    Uniform,
    /// Stays put with probability 1/2, otherwise takes a uniform step.
    Lazy,
    /// Steps to neighbor `j` with probability proportional to the outgoing
    /// edge weight.
    Weighted,
}

impl WalkKind {
    pub fn name(self) -> &'static str {
        match self {
            WalkKind::Uniform => "uniform",
            WalkKind::Lazy => "lazy",
            WalkKind::Weighted => "weighted",
        }
    }
}

/// A row-stochastic transition matrix over the nodes of a graph.
#[derive(Clone, Debug)]
pub struct WalkMatrix {
    graph: Arc<Graph>,
    kind: WalkKind,
    p: DMatrix<f64>,
}

impl WalkMatrix {
    pub fn build(graph: Arc<Graph>, kind: WalkKind) -> WalkMatrix {
        let n = graph.node_count();
        let mut p = DMatrix::zeros(n, n);
        match kind {
            WalkKind::Uniform => fill_uniform(&graph, &mut p),
            WalkKind::Lazy => {
                fill_uniform(&graph, &mut p);
                // Exactly (I + P)/2 entrywise.
                for i in 0..n {
                    for j in 0..n {
                        let base = if i == j { 1.0 } else { 0.0 };
                        p[(i, j)] = (base + p[(i, j)]) / 2.0;
                    }
                }
            }
            WalkKind::Weighted => {
                for i in 0..n {
                    let total: f64 = graph.neighbors(i).iter().map(|&(_, w)| w).sum();
                    for &(j, w) in graph.neighbors(i) {
                        p[(i, j)] = w / total;
                    }
                }
            }
        }
        WalkMatrix { graph, kind, p }
    }

    pub fn uniform(graph: Arc<Graph>) -> WalkMatrix {
        WalkMatrix::build(graph, WalkKind::Uniform)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.p[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Stationary distribution of the walk.
    ///
    /// Uniform and lazy walks share the closed form `pi(i) = deg(i) / 2|E|`.
    /// Weighted walks are solved by power iteration on the lazy chain, which
    /// has the same stationary vector and converges on periodic graphs.
    pub fn stationary(&self) -> Result<StationaryDist> {
        let n = self.node_count();
        match self.kind {
            WalkKind::Uniform | WalkKind::Lazy => {
                let total: f64 = (0..n).map(|i| self.graph.degree(i) as f64).sum();
                let pi = DVector::from_fn(n, |i, _| self.graph.degree(i) as f64 / total);
                Ok(StationaryDist { pi })
            }
            WalkKind::Weighted => {
                let mut pi = DVector::from_element(n, 1.0 / n as f64);
                let mut converged = false;
                for _ in 0..1_000_000 {
                    let next = (self.p.transpose() * &pi + &pi) / 2.0;
                    let delta = (&next - &pi).amax();
                    pi = next;
                    if delta < 1e-12 {
                        converged = true;
                        break;
                    }
                }
                let residual = (self.p.transpose() * &pi - &pi).amax();
                if !converged || residual > STATIONARY_TOL {
                    return Err(Error::numerical(format!(
                        "stationary distribution did not converge: residual {residual:.3e}"
                    )));
                }
                Ok(StationaryDist { pi })
            }
        }
    }

    /// True iff detailed balance `pi(i) P(i,j) = pi(j) P(j,i)` holds
    /// entrywise within `REVERSIBLE_TOL`.
    pub fn check_reversible(&self, pi: &StationaryDist) -> bool {
        let n = self.node_count();
        for i in 0..n {
            for j in (i + 1)..n {
                let flow_ij = pi.get(i) * self.p[(i, j)];
                let flow_ji = pi.get(j) * self.p[(j, i)];
                if (flow_ij - flow_ji).abs() > REVERSIBLE_TOL {
                    return false;
                }
            }
        }
        true
    }
}

/// Stationary distribution `pi` with `pi P = pi`.
#[derive(Clone, Debug)]
pub struct StationaryDist {
    pi: DVector<f64>,
}

impl StationaryDist {
    pub fn get(&self, node: usize) -> f64 {
        self.pi[node]
    }

    pub fn as_slice(&self) -> &[f64] {
        self.pi.as_slice()
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }
}

fn fill_uniform(graph: &Graph, p: &mut DMatrix<f64>) {
    for i in 0..graph.node_count() {
        let deg = graph.degree(i) as f64;
        for &(j, _) in graph.neighbors(i) {
            p[(i, j)] = 1.0 / deg;
        }
    }
}
