//! Cheap upper bounds on the hitting-time objective `F(A)` and the
//! degree-based surrogate used for screening.
//!
//! Three bounds are provided. For dominating sets, escape mass alone bounds
//! `F(A) <= (N - |A|) / (1 - sigma*)`, with the degree form
//! `F(A) <= (N - |A|) d*` as a coarser corollary for uniform walks. For
//! arbitrary sets of a reversible chain, the landing distribution on the
//! boundary of `A^c` has expected hitting time exactly `1 / Phi(A^c)`
//! (the bottleneck ratio), which combined with uncovered-edge counts and
//! per-node accessibility yields
//! `F(A) <= N - |A| + (1/Phi) (sum of uncovered edges) (sum of 1/d(i,A))`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hitting::{absorption_matrix, hitting_times};
use crate::nodeset::NodeSet;
use crate::walk::{StationaryDist, WalkKind, WalkMatrix};

/// Distribution of landing points in `A^c` for a stationary walk that was in
/// `A` one step earlier. Supported exactly on the nodes adjacent to `A`.
#[derive(Clone, Debug)]
pub struct PsiDistribution {
    nodes: Vec<usize>,
    psi: Vec<f64>,
}

impl PsiDistribution {
    /// Nodes of `A^c` in ascending order.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn get(&self, node: usize) -> Option<f64> {
        self.nodes
            .binary_search(&node)
            .ok()
            .map(|idx| self.psi[idx])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.nodes.iter().copied().zip(self.psi.iter().copied())
    }
}

/// Accessibility `d(i, A)` for every node outside `A`: the psi-weighted
/// probability that a walk from the boundary reaches `i` before `A`.
#[derive(Clone, Debug)]
pub struct Accessibility {
    nodes: Vec<usize>,
    d: Vec<f64>,
}

impl Accessibility {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn get(&self, node: usize) -> Option<f64> {
        self.nodes.binary_search(&node).ok().map(|idx| self.d[idx])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.nodes.iter().copied().zip(self.d.iter().copied())
    }
}

/// All bound components for one target set.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// Bottleneck ratio of `A^c`.
    pub phi: f64,
    /// Edges with both endpoints outside the set.
    pub uncovered: usize,
    /// Largest escape mass over rows of the substochastic block.
    pub sigma_star: f64,
    /// Accessibility per node outside the set, keyed by node id.
    pub d: Vec<(usize, f64)>,
    /// Dominance bound, present when the set is one-dominant.
    pub bound_dominant: Option<f64>,
    /// General bottleneck bound; valid for reversible chains.
    pub bound_general: f64,
    /// Degree bound, present for uniform walks on one-dominant sets.
    pub bound_degree: Option<f64>,
    /// Degree surrogate; absent for weighted walks.
    pub surrogate: Option<f64>,
}

fn check_proper(w: &WalkMatrix, a: &NodeSet, what: &str) -> Result<()> {
    if a.universe() != w.node_count() {
        return Err(Error::arg("node set universe does not match the graph"));
    }
    if a.is_empty() {
        return Err(Error::arg(format!("{what} requires a nonempty set")));
    }
    if a.is_full() {
        return Err(Error::arg(format!("{what} requires a proper subset")));
    }
    Ok(())
}

fn require_reversible(w: &WalkMatrix, pi: &StationaryDist, what: &str) -> Result<()> {
    if !w.check_reversible(pi) {
        return Err(Error::data(format!(
            "{what} requires a reversible chain; detailed balance fails"
        )));
    }
    Ok(())
}

// The crossing-count representation behind the general bound breaks when the
// walker can hold in place: a lazy cover already has F = 2(N - |A|), above
// the bound's cover value.
fn require_no_holding(w: &WalkMatrix, what: &str) -> Result<()> {
    if w.kind() == WalkKind::Lazy {
        return Err(Error::arg(format!(
            "{what} requires a walk without holding probability; use the uniform walk"
        )));
    }
    Ok(())
}

/// Bottleneck ratio of `b`: stationary flow leaving `b` over stationary mass
/// of `b`. Equals `|boundary edges| / (sum of degrees in b)` for uniform
/// walks.
pub fn bottleneck_ratio(w: &WalkMatrix, pi: &StationaryDist, b: &NodeSet) -> Result<f64> {
    check_proper(w, b, "bottleneck ratio")?;
    let n = w.node_count();
    let mut flow = 0.0;
    let mut mass = 0.0;
    for x in b.iter() {
        mass += pi.get(x);
        for y in 0..n {
            if !b.contains(y) {
                flow += pi.get(x) * w.prob(x, y);
            }
        }
    }
    Ok(flow / mass)
}

/// Landing distribution on `A^c`: `psi(y)` is proportional to the stationary
/// flow from `A` into `y`. Requires a reversible chain.
pub fn psi_distribution(
    w: &WalkMatrix,
    pi: &StationaryDist,
    a: &NodeSet,
) -> Result<PsiDistribution> {
    check_proper(w, a, "landing distribution")?;
    require_reversible(w, pi, "the landing distribution")?;
    let nodes: Vec<usize> = (0..w.node_count()).filter(|&v| !a.contains(v)).collect();
    let mut psi: Vec<f64> = nodes
        .iter()
        .map(|&y| a.iter().map(|x| pi.get(x) * w.prob(x, y)).sum())
        .collect();
    let total: f64 = psi.iter().sum();
    for p in &mut psi {
        *p /= total;
    }
    Ok(PsiDistribution { nodes, psi })
}

/// Both sides of the boundary-landing identity: the expected hitting time to
/// `a` from the landing distribution, and the inverse bottleneck ratio of
/// `A^c`. They agree for irreducible reversible chains.
pub fn basu_identity_check(
    w: &WalkMatrix,
    pi: &StationaryDist,
    a: &NodeSet,
) -> Result<(f64, f64)> {
    let psi = psi_distribution(w, pi, a)?;
    let prof = hitting_times(w, a)?;
    let lhs: f64 = psi
        .iter()
        .map(|(node, mass)| mass * prof.get(node).unwrap())
        .sum();
    let rhs = 1.0 / bottleneck_ratio(w, pi, &a.complement())?;
    Ok((lhs, rhs))
}

/// Largest escape mass `max_{j not in A} sum_{k not in A} P(j, k)`.
pub fn sigma_star(w: &WalkMatrix, a: &NodeSet) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::arg("sigma* requires a nonempty set"));
    }
    let n = w.node_count();
    let mut best: f64 = 0.0;
    for j in 0..n {
        if a.contains(j) {
            continue;
        }
        let row: f64 = (0..n).filter(|&k| !a.contains(k)).map(|k| w.prob(j, k)).sum();
        best = best.max(row);
    }
    Ok(best)
}

/// Dominance bound `(N - |A|) / (1 - sigma*)`; exact when `A^c` is
/// independent, i.e. when the set is a vertex cover.
pub fn bound_one_dominant(w: &WalkMatrix, a: &NodeSet) -> Result<f64> {
    check_proper(w, a, "the dominance bound")?;
    if !w.graph().is_one_dominant(a) {
        return Err(Error::arg("the dominance bound requires a one-dominant set"));
    }
    let s = sigma_star(w, a)?;
    let remaining = (w.node_count() - a.len()) as f64;
    if s == 0.0 {
        return Ok(remaining);
    }
    Ok(remaining / (1.0 - s))
}

/// Degree bound `(N - |A|) d*` for uniform walks on one-dominant sets.
pub fn bound_degree(w: &WalkMatrix, a: &NodeSet) -> Result<f64> {
    check_proper(w, a, "the degree bound")?;
    if w.kind() != WalkKind::Uniform {
        return Err(Error::arg("the degree bound applies to the uniform walk"));
    }
    if !w.graph().is_one_dominant(a) {
        return Err(Error::arg("the degree bound requires a one-dominant set"));
    }
    Ok((w.node_count() - a.len()) as f64 * w.graph().max_degree() as f64)
}

/// Accessibility `d(i, A)` for every `i` outside `a`.
///
/// Each non-isolated `i` costs one absorption solve with `a + {i}` as the
/// target; a node of `A^c` with no neighbors in `A^c` can only be landed on
/// directly, so `d(i, A) = psi(i)` there.
pub fn accessibility(w: &WalkMatrix, pi: &StationaryDist, a: &NodeSet) -> Result<Accessibility> {
    let psi = psi_distribution(w, pi, a)?;
    let g = w.graph();
    let boundary: Vec<usize> = psi
        .iter()
        .filter(|&(_, mass)| mass > 0.0)
        .map(|(node, _)| node)
        .collect();
    let nodes = psi.nodes().to_vec();
    let d: Vec<f64> = nodes
        .par_iter()
        .map(|&i| {
            let own = psi.get(i).unwrap();
            let isolated = g.neighbors(i).iter().all(|&(nb, _)| a.contains(nb));
            if isolated {
                return Ok(own);
            }
            let absorbing = a.with(i);
            let hit = absorption_matrix(w, &absorbing)?;
            let mut total = own;
            for &b in &boundary {
                if b != i {
                    total += psi.get(b).unwrap() * hit.get(b, i).unwrap();
                }
            }
            Ok(total)
        })
        .collect::<Result<_>>()?;
    Ok(Accessibility { nodes, d })
}

/// General bottleneck bound
/// `N - |A| + (1/Phi) (uncovered edges) (sum of 1/d(i,A))`.
/// Exact when `a` is a vertex cover.
pub fn bound_general(w: &WalkMatrix, pi: &StationaryDist, a: &NodeSet) -> Result<f64> {
    check_proper(w, a, "the general bound")?;
    require_no_holding(w, "the general bound")?;
    require_reversible(w, pi, "the general bound")?;
    let remaining = (w.node_count() - a.len()) as f64;
    let uncovered = w.graph().uncovered_edge_count(a);
    if uncovered == 0 {
        return Ok(remaining);
    }
    let phi = bottleneck_ratio(w, pi, &a.complement())?;
    let acc = accessibility(w, pi, a)?;
    let inv_sum: f64 = acc.iter().map(|(_, d)| 1.0 / d).sum();
    Ok(remaining + (1.0 / phi) * uncovered as f64 * inv_sum)
}

/// Degree surrogate
/// `S(A) = 1 + (sum of degrees over A^c / boundary edges) * uncovered edges`,
/// defined for uniform-walk semantics on the plain graph.
pub fn surrogate(g: &crate::graph::Graph, a: &NodeSet) -> Result<f64> {
    if a.universe() != g.node_count() {
        return Err(Error::arg("node set universe does not match the graph"));
    }
    if a.is_empty() || a.is_full() {
        return Err(Error::arg("the surrogate requires a nonempty proper subset"));
    }
    let uncovered = g.uncovered_edge_count(a) as f64;
    let boundary = g.boundary_edge_count(a) as f64;
    let outside_degrees: f64 = (0..g.node_count())
        .filter(|&v| !a.contains(v))
        .map(|v| g.degree(v) as f64)
        .sum();
    Ok(1.0 + outside_degrees / boundary * uncovered)
}

/// Membership level certified by the dominance bound: a one-dominant set
/// smaller than the reference cover has rank at least
/// `1 - ((N-|A|)/(1-sigma*) - (N-C)) / (F_max - (N-C))`.
pub fn nu_star(w: &WalkMatrix, a: &NodeSet, cover_size: usize, f_max: f64) -> Result<f64> {
    check_proper(w, a, "nu*")?;
    if !w.graph().is_one_dominant(a) {
        return Err(Error::arg("nu* requires a one-dominant set"));
    }
    if a.len() > cover_size {
        return Err(Error::arg("nu* requires |A| <= cover size"));
    }
    let s = sigma_star(w, a)?;
    if s >= 1.0 {
        return Err(Error::arg("nu* requires sigma* < 1"));
    }
    let n = w.node_count() as f64;
    let f_min = n - cover_size as f64;
    let denom = f_max - f_min;
    if denom <= 0.0 {
        return Err(Error::arg("nu* requires F_max > N - C"));
    }
    let dominant = (n - a.len() as f64) / (1.0 - s);
    Ok(1.0 - (dominant - f_min) / denom)
}

/// Assembles every applicable bound component for one set.
pub fn bound_report(w: &WalkMatrix, pi: &StationaryDist, a: &NodeSet) -> Result<BoundReport> {
    check_proper(w, a, "the bound report")?;
    require_no_holding(w, "the bound report")?;
    let g = w.graph();
    let phi = bottleneck_ratio(w, pi, &a.complement())?;
    let uncovered = g.uncovered_edge_count(a);
    let sigma = sigma_star(w, a)?;
    let acc = accessibility(w, pi, a)?;
    let dominant = g.is_one_dominant(a);
    let bound_dominant = if dominant {
        Some(bound_one_dominant(w, a)?)
    } else {
        None
    };
    let bound_deg = if dominant && w.kind() == WalkKind::Uniform {
        Some(bound_degree(w, a)?)
    } else {
        None
    };
    let general = bound_general(w, pi, a)?;
    let surr = if w.kind() == WalkKind::Weighted {
        None
    } else {
        Some(surrogate(g, a)?)
    };
    Ok(BoundReport {
        phi,
        uncovered,
        sigma_star: sigma,
        d: acc.iter().collect(),
        bound_dominant,
        bound_general: general,
        bound_degree: bound_deg,
        surrogate: surr,
    })
}
