//! Expected first hitting times to a target set, the fundamental matrix of
//! the absorbing chain, absorption probabilities, and the quasi-stationary
//! spectrum of the substochastic block.
//!
//! With `A` absorbing and `Q` the transition matrix restricted to the nodes
//! outside `A`, the expected-steps vector solves `(I - Q) h = 1`, the
//! fundamental matrix is `(I - Q)^{-1}` (expected visits, counting time 0,
//! so its row sums equal `h`), and absorption probabilities are
//! `(I - Q)^{-1} R` where `R` holds the transitions into `A`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::walk::WalkMatrix;

/// Max-norm residual accepted from the dense solves.
pub const SOLVE_TOL: f64 = 1e-9;
/// Residual target for the quasi-stationary power iteration.
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Hitting times `h(i) = E_i[steps to reach A]` for every `i` outside `A`,
/// together with their sum `F(A)`.
#[derive(Clone, Debug)]
pub struct HittingProfile {
    target: NodeSet,
    rest: Vec<usize>,
    h: Vec<f64>,
    f: f64,
}

impl HittingProfile {
    pub fn target(&self) -> &NodeSet {
        &self.target
    }

    /// Sum of hitting times over all nodes outside the target.
    pub fn f(&self) -> f64 {
        self.f
    }

    /// Hitting time from `node`, if `node` lies outside the target.
    pub fn get(&self, node: usize) -> Option<f64> {
        self.rest
            .binary_search(&node)
            .ok()
            .map(|idx| self.h[idx])
    }

    /// `(node, h(node))` pairs in ascending node order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.rest.iter().copied().zip(self.h.iter().copied())
    }

    pub fn values(&self) -> &[f64] {
        &self.h
    }
}

/// Expected visit counts before absorption: `gamma(i, j)` is the expected
/// number of times a walk from `i` occupies `j` before reaching the target.
#[derive(Clone, Debug)]
pub struct FundamentalMatrix {
    rest: Vec<usize>,
    gamma: DMatrix<f64>,
}

impl FundamentalMatrix {
    /// Transient nodes indexing the matrix, ascending.
    pub fn nodes(&self) -> &[usize] {
        &self.rest
    }

    pub fn get(&self, from: usize, to: usize) -> Option<f64> {
        let i = self.rest.binary_search(&from).ok()?;
        let j = self.rest.binary_search(&to).ok()?;
        Some(self.gamma[(i, j)])
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.gamma
    }
}

/// Probabilities of being absorbed at each target node:
/// `get(b, s) = P[walk from b reaches s before any other target node]`.
#[derive(Clone, Debug)]
pub struct AbsorptionMatrix {
    rest: Vec<usize>,
    targets: Vec<usize>,
    probs: DMatrix<f64>,
}

impl AbsorptionMatrix {
    pub fn nodes(&self) -> &[usize] {
        &self.rest
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn get(&self, from: usize, target: usize) -> Option<f64> {
        let i = self.rest.binary_search(&from).ok()?;
        let j = self.targets.binary_search(&target).ok()?;
        Some(self.probs[(i, j)])
    }
}

/// Dominant eigenvalue of the substochastic block and its normalized left
/// eigenvector (the quasi-stationary distribution over the transient nodes).
#[derive(Clone, Debug)]
pub struct QuasiStationary {
    pub lambda: f64,
    nodes: Vec<usize>,
    nu: Vec<f64>,
}

impl QuasiStationary {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }
}

fn complement_nodes(w: &WalkMatrix, a: &NodeSet) -> Vec<usize> {
    (0..w.node_count()).filter(|&v| !a.contains(v)).collect()
}

/// Restriction of the transition matrix to the rows and columns in `rest`.
fn substochastic_block(w: &WalkMatrix, rest: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rest.len(), rest.len(), |i, j| w.prob(rest[i], rest[j]))
}

fn check_target(w: &WalkMatrix, a: &NodeSet) -> Result<()> {
    if a.is_empty() {
        return Err(Error::arg("empty target set"));
    }
    if a.universe() != w.node_count() {
        return Err(Error::arg("node set universe does not match the graph"));
    }
    Ok(())
}

/// Solves `(I - Q) h = 1` for the expected hitting times to `a`.
pub fn hitting_times(w: &WalkMatrix, a: &NodeSet) -> Result<HittingProfile> {
    check_target(w, a)?;
    let rest = complement_nodes(w, a);
    if rest.is_empty() {
        return Ok(HittingProfile {
            target: a.clone(),
            rest,
            h: Vec::new(),
            f: 0.0,
        });
    }
    let q = substochastic_block(w, &rest);
    let m = DMatrix::identity(rest.len(), rest.len()) - &q;
    let ones = DVector::from_element(rest.len(), 1.0);
    let h = m
        .clone()
        .lu()
        .solve(&ones)
        .ok_or_else(|| Error::numerical("hitting-time system is singular"))?;
    let residual = (&m * &h - &ones).amax();
    if residual > SOLVE_TOL {
        return Err(Error::numerical(format!(
            "hitting-time solve residual {residual:.3e} exceeds {SOLVE_TOL:.0e}"
        )));
    }
    let f = h.iter().sum();
    Ok(HittingProfile {
        target: a.clone(),
        rest,
        h: h.as_slice().to_vec(),
        f,
    })
}

/// `F(A)`: the sum of expected hitting times from all nodes outside `a`.
pub fn f_value(w: &WalkMatrix, a: &NodeSet) -> Result<f64> {
    hitting_times(w, a).map(|p| p.f())
}

/// Expected visit counts `(I - Q)^{-1}`.
pub fn fundamental_matrix(w: &WalkMatrix, a: &NodeSet) -> Result<FundamentalMatrix> {
    check_target(w, a)?;
    let rest = complement_nodes(w, a);
    let q = substochastic_block(w, &rest);
    let m = DMatrix::identity(rest.len(), rest.len()) - q;
    let gamma = m
        .try_inverse()
        .ok_or_else(|| Error::numerical("fundamental-matrix system is singular"))?;
    Ok(FundamentalMatrix { rest, gamma })
}

/// Absorption probabilities `(I - Q)^{-1} R` for target nodes in ascending
/// order. Rows sum to 1: absorption is certain on a connected graph.
pub fn absorption_matrix(w: &WalkMatrix, a: &NodeSet) -> Result<AbsorptionMatrix> {
    check_target(w, a)?;
    let rest = complement_nodes(w, a);
    let targets = a.members();
    let q = substochastic_block(w, &rest);
    let r = DMatrix::from_fn(rest.len(), targets.len(), |i, j| {
        w.prob(rest[i], targets[j])
    });
    let m = DMatrix::identity(rest.len(), rest.len()) - q;
    let probs = m
        .lu()
        .solve(&r)
        .ok_or_else(|| Error::numerical("absorption system is singular"))?;
    for i in 0..rest.len() {
        let row_sum: f64 = probs.row(i).iter().sum();
        if (row_sum - 1.0).abs() > SOLVE_TOL {
            return Err(Error::numerical(format!(
                "absorption row sum {row_sum} deviates from 1"
            )));
        }
    }
    Ok(AbsorptionMatrix {
        rest,
        targets,
        probs,
    })
}

/// Largest eigenvalue of `Q` and its normalized left eigenvector, by power
/// iteration on `Q + I` (the shift keeps periodic blocks convergent).
pub fn spectral_radius(w: &WalkMatrix, a: &NodeSet) -> Result<QuasiStationary> {
    check_target(w, a)?;
    let rest = complement_nodes(w, a);
    let n = rest.len();
    if n == 0 {
        return Ok(QuasiStationary {
            lambda: 0.0,
            nodes: rest,
            nu: Vec::new(),
        });
    }
    let q = substochastic_block(w, &rest);
    let qt = q.transpose();
    let mut nu = DVector::from_element(n, 1.0 / n as f64);
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    for _ in 0..1_000_000 {
        let prod = &qt * &nu;
        let shifted = &prod + &nu;
        let norm = shifted.iter().sum::<f64>();
        nu = shifted / norm;
        lambda = norm - 1.0;
        // Residual of the unshifted problem.
        residual = (&qt * &nu - &nu * lambda).amax();
        if residual < 1e-13 {
            break;
        }
    }
    if residual > SPECTRAL_TOL {
        return Err(Error::numerical(format!(
            "power iteration did not converge: residual {residual:.3e}"
        )));
    }
    Ok(QuasiStationary {
        lambda,
        nodes: rest,
        nu: nu.as_slice().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::walk::{WalkKind, WalkMatrix};
    use std::sync::Arc;

    fn walk(edges: &[(usize, usize)]) -> WalkMatrix {
        WalkMatrix::uniform(Arc::new(Graph::from_edges(edges).unwrap()))
    }

    fn p3() -> WalkMatrix {
        walk(&[(0, 1), (1, 2)])
    }

    fn set(w: &WalkMatrix, members: &[usize]) -> NodeSet {
        NodeSet::from_members(w.node_count(), members.iter().copied()).unwrap()
    }

    #[test]
    fn p3_middle_is_cover() {
        let w = p3();
        let prof = hitting_times(&w, &set(&w, &[1])).unwrap();
        assert_eq!(prof.get(0), Some(1.0));
        assert_eq!(prof.get(2), Some(1.0));
        assert!((prof.f() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn p3_endpoint() {
        let w = p3();
        let prof = hitting_times(&w, &set(&w, &[0])).unwrap();
        assert!((prof.get(1).unwrap() - 3.0).abs() < 1e-9);
        assert!((prof.get(2).unwrap() - 4.0).abs() < 1e-9);
        assert!((prof.f() - 7.0).abs() < 1e-9);
    }

    #[test]
    fn star_leaf_target() {
        let w = walk(&[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let prof = hitting_times(&w, &set(&w, &[1])).unwrap();
        assert!((prof.get(0).unwrap() - 7.0).abs() < 1e-9);
        for leaf in [2, 3, 4] {
            assert!((prof.get(leaf).unwrap() - 8.0).abs() < 1e-9);
        }
        assert!((prof.f() - 31.0).abs() < 1e-9);
    }

    #[test]
    fn f_values_on_small_graphs() {
        let c4 = walk(&[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!((f_value(&c4, &set(&c4, &[0])).unwrap() - 10.0).abs() < 1e-9);

        let k3 = walk(&[(0, 1), (1, 2), (2, 0)]);
        assert!((f_value(&k3, &set(&k3, &[0])).unwrap() - 4.0).abs() < 1e-9);

        let p4 = walk(&[(0, 1), (1, 2), (2, 3)]);
        assert!((f_value(&p4, &set(&p4, &[1, 2])).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_targets() {
        let w = p3();
        assert!(matches!(
            hitting_times(&w, &NodeSet::empty(3)),
            Err(Error::InvalidArgument(_))
        ));
        let full = hitting_times(&w, &NodeSet::full(3)).unwrap();
        assert_eq!(full.f(), 0.0);
        assert_eq!(full.iter().count(), 0);
        // One transient node: 1x1 solve.
        let prof = hitting_times(&w, &set(&w, &[0, 1])).unwrap();
        assert_eq!(prof.get(2), Some(1.0));
    }

    #[test]
    fn fundamental_p3() {
        let w = p3();
        let fm = fundamental_matrix(&w, &set(&w, &[1])).unwrap();
        assert_eq!(fm.get(0, 0), Some(1.0));
        assert_eq!(fm.get(0, 2), Some(0.0));
        assert_eq!(fm.get(2, 2), Some(1.0));

        // Q over {1,2} for target {0}: visits [[2,1],[2,2]], row sums (3,4) = h.
        let fm = fundamental_matrix(&w, &set(&w, &[0])).unwrap();
        assert!((fm.get(1, 1).unwrap() - 2.0).abs() < 1e-9);
        assert!((fm.get(1, 2).unwrap() - 1.0).abs() < 1e-9);
        assert!((fm.get(2, 1).unwrap() - 2.0).abs() < 1e-9);
        assert!((fm.get(2, 2).unwrap() - 2.0).abs() < 1e-9);
        let prof = hitting_times(&w, &set(&w, &[0])).unwrap();
        for (k, &node) in fm.nodes().iter().enumerate() {
            let row_sum: f64 = fm.matrix().row(k).iter().sum();
            assert!((row_sum - prof.get(node).unwrap()).abs() < 1e-8);
        }
    }

    #[test]
    fn absorption_p3_and_p4() {
        let w = p3();
        let ab = absorption_matrix(&w, &set(&w, &[0, 2])).unwrap();
        assert!((ab.get(1, 0).unwrap() - 0.5).abs() < 1e-12);
        assert!((ab.get(1, 2).unwrap() - 0.5).abs() < 1e-12);

        let p4 = walk(&[(0, 1), (1, 2), (2, 3)]);
        let ab = absorption_matrix(&p4, &set(&p4, &[0, 3])).unwrap();
        assert!((ab.get(1, 0).unwrap() - 2.0 / 3.0).abs() < 1e-9);
        assert!((ab.get(1, 3).unwrap() - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn spectral_radius_p3() {
        let w = p3();
        // A^c independent: Q = 0.
        let qs = spectral_radius(&w, &set(&w, &[1])).unwrap();
        assert!(qs.lambda.abs() < 1e-12);

        // Q = [[0,1/2],[1,0]] has eigenvalues +-1/sqrt(2).
        let qs = spectral_radius(&w, &set(&w, &[0])).unwrap();
        assert!((qs.lambda - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn quasi_stationary_identity() {
        // nu . h = 1/(1 - lambda) for the normalized left eigenvector.
        let w = walk(&[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        for target in [vec![0], vec![1], vec![1, 3]] {
            let a = set(&w, &target);
            let qs = spectral_radius(&w, &a).unwrap();
            let prof = hitting_times(&w, &a).unwrap();
            let dot: f64 = qs
                .nodes()
                .iter()
                .zip(qs.nu())
                .map(|(&node, &mass)| mass * prof.get(node).unwrap())
                .sum();
            assert!((dot - 1.0 / (1.0 - qs.lambda)).abs() < 1e-8);
        }
    }

    #[test]
    fn lazy_walk_doubles_hitting_times() {
        let g = Arc::new(Graph::from_edges(&[(0, 1), (1, 2), (2, 3)]).unwrap());
        let u = WalkMatrix::uniform(Arc::clone(&g));
        let l = WalkMatrix::build(g, WalkKind::Lazy);
        let a = NodeSet::singleton(4, 0).unwrap();
        let fu = f_value(&u, &a).unwrap();
        let fl = f_value(&l, &a).unwrap();
        assert!((fl - 2.0 * fu).abs() < 1e-8);
    }
}
