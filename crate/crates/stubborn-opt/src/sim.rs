//! Synchronous averaging with a held-fixed stubborn set, for empirical
//! validation that low-`F` sets converge faster.
//!
//! Every stubborn node keeps one shared constant, so the equilibrium is that
//! constant everywhere and the tracked error is just the max-norm distance
//! to it. The error contracts like the dominant eigenvalue of the
//! substochastic block, which is what the fitted rate is compared against.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hitting::{f_value, spectral_radius};
use crate::nodeset::NodeSet;
use crate::stats::{ls_slope, spearman};
use crate::walk::WalkMatrix;

/// Record of one consensus run.
#[derive(Clone, Debug)]
pub struct ConsensusTrace {
    pub stubborn: NodeSet,
    pub stubborn_value: f64,
    pub x0: Vec<f64>,
    /// State after the last step; stubborn entries match `x0` exactly.
    pub final_state: Vec<f64>,
    /// Max-norm distance to equilibrium at steps `0..=steps`.
    pub errors: Vec<f64>,
    /// Geometric decay factor fitted over the final half of the trace;
    /// 0 when the tail has already reached equilibrium exactly.
    pub empirical_rate: f64,
}

/// Iterates `x(i) <- sum_j P(i,j) x(j)` on non-stubborn nodes for `steps`
/// steps, holding stubborn entries fixed.
///
/// All stubborn entries of `x0` must carry the same value; that constant is
/// the equilibrium.
pub fn simulate(w: &WalkMatrix, a: &NodeSet, x0: &[f64], steps: usize) -> Result<ConsensusTrace> {
    if a.is_empty() {
        return Err(Error::arg("stubborn set must be nonempty"));
    }
    if a.universe() != w.node_count() || x0.len() != w.node_count() {
        return Err(Error::arg("state vector length does not match the graph"));
    }
    if steps == 0 {
        return Err(Error::arg("steps must be positive"));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("initial state must be finite"));
    }
    let c = x0[a.iter().next().unwrap()];
    if a.iter().any(|i| x0[i] != c) {
        return Err(Error::arg(
            "stubborn entries of the initial state must share one value",
        ));
    }
    let n = w.node_count();
    let mut x = x0.to_vec();
    let mut errors = Vec::with_capacity(steps + 1);
    let max_err = |x: &[f64]| x.iter().map(|v| (v - c).abs()).fold(0.0, f64::max);
    errors.push(max_err(&x));
    let mut next = vec![0.0; n];
    for _ in 0..steps {
        for i in 0..n {
            if a.contains(i) {
                next[i] = x[i];
            } else {
                next[i] = (0..n).map(|j| w.prob(i, j) * x[j]).sum();
            }
        }
        std::mem::swap(&mut x, &mut next);
        errors.push(max_err(&x));
    }
    let empirical_rate = fit_rate(&errors);
    Ok(ConsensusTrace {
        stubborn: a.clone(),
        stubborn_value: c,
        x0: x0.to_vec(),
        final_state: x,
        errors,
        empirical_rate,
    })
}

/// Least-squares geometric rate over the final half of the error trace.
fn fit_rate(errors: &[f64]) -> f64 {
    let start = errors.len() / 2;
    let points: Vec<(f64, f64)> = errors
        .iter()
        .enumerate()
        .skip(start)
        .filter(|&(_, &e)| e > 0.0)
        .map(|(t, &e)| (t as f64, e.ln()))
        .collect();
    match ls_slope(&points) {
        Some(slope) => slope.exp(),
        None => 0.0,
    }
}

/// One row of the rate comparison table.
#[derive(Clone, Debug)]
pub struct RateRow {
    pub set: NodeSet,
    pub f: f64,
    pub lambda: f64,
    pub empirical_rate: f64,
}

/// Comparison of exact objective, spectral rate, and fitted empirical rate
/// across candidate sets of equal cardinality, sorted by ascending `F`.
#[derive(Clone, Debug)]
pub struct RateReport {
    pub rows: Vec<RateRow>,
    /// Spearman correlation between the `F` ordering and the spectral
    /// ordering; `None` when either has no variance.
    pub spearman_f_lambda: Option<f64>,
}

/// Simulates every candidate from a seeded random start and tabulates `F`,
/// the spectral rate, and the fitted rate.
pub fn rate_vs_f_report(
    w: &WalkMatrix,
    candidates: &[NodeSet],
    steps: usize,
    seed: u64,
) -> Result<RateReport> {
    let Some(first) = candidates.first() else {
        return Err(Error::arg("no candidate sets supplied"));
    };
    if candidates.iter().any(|c| c.len() != first.len()) {
        return Err(Error::arg("candidate sets must share one cardinality"));
    }
    let n = w.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = candidates
        .iter()
        .map(|a| {
            (0..n)
                .map(|i| if a.contains(i) { 0.0 } else { rng.random::<f64>() })
                .collect()
        })
        .collect();
    let mut rows: Vec<RateRow> = candidates
        .par_iter()
        .zip(starts)
        .map(|(a, x0)| {
            let f = f_value(w, a)?;
            let lambda = spectral_radius(w, a)?.lambda;
            let trace = simulate(w, a, &x0, steps)?;
            Ok(RateRow {
                set: a.clone(),
                f,
                lambda,
                empirical_rate: trace.empirical_rate,
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| a.f.total_cmp(&b.f).then_with(|| a.set.cmp(&b.set)));
    let fs: Vec<f64> = rows.iter().map(|r| r.f).collect();
    let lambdas: Vec<f64> = rows.iter().map(|r| r.lambda).collect();
    Ok(RateReport {
        spearman_f_lambda: spearman(&fs, &lambdas),
        rows,
    })
}
