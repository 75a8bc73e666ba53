//! Surrogate-based screening of candidate sets.
//!
//! Ranking all `K`-subsets by exact `F` is exactly the cost screening is
//! meant to avoid, so candidates are ordered by the degree surrogate and
//! only a handful of top sets get an exact evaluation. Normalized values
//! (`rho_s` over the whole candidate collection, `rho_f` over the evaluated
//! group) make the two orderings comparable.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::surrogate;
use crate::error::{Error, Result};
use crate::hitting::f_value;
use crate::nodeset::NodeSet;
use crate::walk::{WalkKind, WalkMatrix};

/// Candidate collections above this size are sampled instead of enumerated.
pub const ENUMERATION_LIMIT: u64 = 100_000;
/// Exact `F` is attached to at most this many top rows.
pub const EXACT_F_ROWS: usize = 10;
/// Exact `F` annotation is skipped on graphs larger than this.
pub const EXACT_F_MAX_NODES: usize = 2000;

/// One screened candidate.
#[derive(Clone, Debug)]
pub struct ScreenRow {
    pub set: NodeSet,
    pub surrogate: f64,
    /// Normalized surrogate over the full candidate collection.
    pub rho_s: f64,
    /// Exact objective, for the top rows on small graphs.
    pub f: Option<f64>,
    /// Normalized objective over the rows where `f` was computed.
    pub rho_f: Option<f64>,
}

/// Result of one screening pass.
#[derive(Clone, Debug)]
pub struct ScreenReport {
    /// Top rows by ascending surrogate.
    pub rows: Vec<ScreenRow>,
    /// Whether candidates were sampled rather than enumerated.
    pub sampled: bool,
    /// Number of candidate sets scored.
    pub candidates: usize,
}

/// Scores `K`-subsets by the surrogate and returns the best `count`.
///
/// All `C(N, K)` subsets are enumerated when that is at most
/// [`ENUMERATION_LIMIT`]; otherwise that many distinct candidates are drawn
/// with the seeded generator. Ties in the surrogate are broken by ascending
/// total degree outside the set, then lexicographically.
pub fn surrogate_screen(
    w: &WalkMatrix,
    k: usize,
    count: usize,
    seed: u64,
) -> Result<ScreenReport> {
    if w.kind() == WalkKind::Weighted {
        return Err(Error::arg(
            "screening uses uniform-walk semantics; weighted walks are not supported",
        ));
    }
    let g = w.graph();
    let n = g.node_count();
    if k == 0 || k >= n {
        return Err(Error::arg("K must be between 1 and N - 1"));
    }
    if count == 0 {
        return Err(Error::arg("count must be positive"));
    }

    let total = combinations(n, k);
    let (candidates, sampled) = if total <= ENUMERATION_LIMIT {
        (enumerate_subsets(n, k), false)
    } else {
        (sample_subsets(n, k, ENUMERATION_LIMIT as usize, seed), true)
    };

    let mut scored: Vec<(NodeSet, f64, usize)> = candidates
        .into_par_iter()
        .map(|set| {
            let s = surrogate(g, &set)?;
            let outside_deg: usize = (0..n).filter(|&v| !set.contains(v)).map(|v| g.degree(v)).sum();
            Ok((set, s, outside_deg))
        })
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then_with(|| a.2.cmp(&b.2))
            .then_with(|| a.0.cmp(&b.0))
    });

    let s_min = scored.first().map(|r| r.1).unwrap_or(0.0);
    let s_max = scored.last().map(|r| r.1).unwrap_or(0.0);
    let spread = s_max - s_min;
    let rho_s = |s: f64| if spread > 0.0 { (s_max - s) / spread } else { 1.0 };

    let scored_len = scored.len();
    let mut rows: Vec<ScreenRow> = scored
        .into_iter()
        .take(count)
        .map(|(set, s, _)| ScreenRow {
            rho_s: rho_s(s),
            surrogate: s,
            set,
            f: None,
            rho_f: None,
        })
        .collect();

    if n <= EXACT_F_MAX_NODES {
        let exact_rows = rows.len().min(EXACT_F_ROWS);
        let fs: Vec<f64> = rows[..exact_rows]
            .par_iter()
            .map(|row| f_value(w, &row.set))
            .collect::<Result<_>>()?;
        let f_min = fs.iter().copied().fold(f64::INFINITY, f64::min);
        let f_max = fs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let f_spread = f_max - f_min;
        for (row, f) in rows[..exact_rows].iter_mut().zip(fs) {
            row.f = Some(f);
            row.rho_f = Some(if f_spread > 0.0 {
                (f_max - f) / f_spread
            } else {
                1.0
            });
        }
    }

    Ok(ScreenReport {
        rows,
        sampled,
        candidates: scored_len,
    })
}

/// `C(n, k)` saturating at `u64::MAX`.
fn combinations(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u64) {
            Some(v) => v / (i as u64 + 1),
            None => return u64::MAX,
        };
    }
    acc
}

fn enumerate_subsets(n: usize, k: usize) -> Vec<NodeSet> {
    let mut out = Vec::new();
    let mut indices: Vec<usize> = (0..k).collect();
    loop {
        out.push(NodeSet::from_members(n, indices.iter().copied()).unwrap());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if indices[i] != i + n - k {
                break;
            }
        }
        indices[i] += 1;
        for j in (i + 1)..k {
            indices[j] = indices[j - 1] + 1;
        }
    }
}

fn sample_subsets(n: usize, k: usize, target: usize, seed: u64) -> Vec<NodeSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<usize>> = HashSet::with_capacity(target);
    let mut out = Vec::with_capacity(target);
    let mut attempts = 0usize;
    while out.len() < target && attempts < target.saturating_mul(20) {
        attempts += 1;
        let mut members: Vec<usize> = sample(&mut rng, n, k).into_iter().collect();
        members.sort_unstable();
        if seen.insert(members.clone()) {
            out.push(NodeSet::from_members(n, members).unwrap());
        }
    }
    out
}
