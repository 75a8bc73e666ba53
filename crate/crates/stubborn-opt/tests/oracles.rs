//! Cross-checks of the dense solves against an independent Monte-Carlo
//! walker and invariant sweeps over random instances.

mod common;

use std::sync::Arc;

use common::*;
use rand::Rng;

use stubborn_opt::hitting::{f_value, hitting_times};
use stubborn_opt::optimizer::{optimize, rho_normalized, OptimizerConfig, RankContext};
use stubborn_opt::{Graph, NodeSet, WalkKind, WalkMatrix};

/// Simulates walks straight off the adjacency lists, independently of the
/// matrix pipeline. Returns the sample mean and its standard error.
fn mc_hitting_time(
    g: &Graph,
    lazy: bool,
    a: &NodeSet,
    start: usize,
    walks: u32,
    rng: &mut Rng8,
) -> (f64, f64) {
    assert!(!a.contains(start));
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..walks {
        let mut node = start;
        let mut steps = 0u64;
        loop {
            if lazy && rng.random::<f64>() < 0.5 {
                steps += 1;
            } else {
                let nbrs = g.neighbors(node);
                node = nbrs[rng.random_range(0..nbrs.len())].0;
                steps += 1;
            }
            if a.contains(node) {
                break;
            }
        }
        sum += steps as f64;
        sum_sq += (steps * steps) as f64;
    }
    let n = walks as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

#[test]
fn monte_carlo_agreement() {
    let walks = 100_000;
    let mut rng = rng(0x0DAC1E);
    let cases: Vec<(&str, Graph, Vec<usize>, usize)> = vec![
        ("p3 from 1", p3(), vec![0], 1),
        ("p3 from 2", p3(), vec![0], 2),
        ("c4 opposite", c4(), vec![0], 2),
        ("star5 center", star5(), vec![1], 0),
        ("star5 other leaf", star5(), vec![1], 2),
        ("triangle pendant", triangle_pendant(), vec![3], 0),
    ];
    for (name, g, target, start) in cases {
        let n = g.node_count();
        let a = set(n, &target);
        let (mean, se) = mc_hitting_time(&g, false, &a, start, walks, &mut rng);
        let w = uniform(g);
        let exact = hitting_times(&w, &a).unwrap().get(start).unwrap();
        assert!(
            (mean - exact).abs() <= 3.0 * se,
            "{name}: MC {mean} +- {se} vs exact {exact}"
        );
    }
    // Lazy kind: the same walker with holding steps.
    let g = p3();
    let a = set(3, &[0]);
    let (mean, se) = mc_hitting_time(&g, true, &a, 1, walks, &mut rng);
    let w = lazy(p3());
    let exact = hitting_times(&w, &a).unwrap().get(1).unwrap();
    assert!(
        (mean - exact).abs() <= 3.0 * se,
        "lazy p3: MC {mean} +- {se} vs exact {exact}"
    );
}

#[test]
fn hitting_times_at_least_one() {
    let mut rng = rng(0x0DAC2E);
    for _ in 0..50 {
        let n = rng.random_range(3..=10);
        let g = random_connected_graph(n, 0.3, &mut rng);
        let arc = Arc::new(g);
        let a = random_proper_subset(n, &mut rng);
        for kind in [WalkKind::Uniform, WalkKind::Lazy, WalkKind::Weighted] {
            let w = WalkMatrix::build(Arc::clone(&arc), kind);
            let prof = hitting_times(&w, &a).unwrap();
            for (node, h) in prof.iter() {
                assert!(h >= 1.0 - 1e-12, "{kind:?} h({node}) = {h}");
            }
        }
    }
}

#[test]
fn monotone_over_random_nested_pairs() {
    let mut rng = rng(0x0DAC3E);
    for _ in 0..100 {
        let n = rng.random_range(3..=10);
        let g = random_connected_graph(n, 0.3, &mut rng);
        let w = uniform(g);
        let a = random_proper_subset(n, &mut rng);
        let mut b = a.clone();
        for v in 0..n {
            if rng.random::<f64>() < 0.3 {
                b.insert(v);
            }
        }
        let fa = f_value(&w, &a).unwrap();
        let fb = f_value(&w, &b).unwrap();
        assert!(fa >= fb - 1e-9, "F({a:?}) = {fa} < F({b:?}) = {fb}");
    }
}

#[test]
fn fundamental_row_sums_match_hitting_times() {
    let mut rng = rng(0x0DAC4E);
    for _ in 0..30 {
        let n = rng.random_range(3..=9);
        let g = random_connected_graph(n, 0.3, &mut rng);
        let w = uniform(g);
        let a = random_proper_subset(n, &mut rng);
        let prof = hitting_times(&w, &a).unwrap();
        let fm = stubborn_opt::hitting::fundamental_matrix(&w, &a).unwrap();
        for (k, &node) in fm.nodes().iter().enumerate() {
            let row_sum: f64 = fm.matrix().row(k).iter().sum();
            assert!((row_sum - prof.get(node).unwrap()).abs() < 1e-8);
            assert!(fm.get(node, node).unwrap() >= 1.0 - 1e-12);
        }
    }
}

#[test]
fn chi_delta_lower_bound() {
    // Whenever an extension passes a normalized-rank level eta above the
    // greedy value, the improvement factor is bounded below by
    // delta/(1-delta) with delta = 1 - rho(greedy)/eta. Scan for instances
    // where the offered set strictly beats classic greedy and check every
    // intermediate level.
    let mut rng = rng(0x0DAC7E);
    let mut strict_improvements = 0;
    for _ in 0..300 {
        let n = rng.random_range(5..=9);
        let g = random_connected_graph(n, 0.25, &mut rng);
        let w = uniform(g);
        let ctx = RankContext::new(&w, None).unwrap();
        for k in 2..=3usize.min(ctx.cover_size()) {
            let cfg = OptimizerConfig {
                k,
                nu: 0.0,
                m: 1,
                starter_cap: usize::MAX,
            };
            let res = optimize(&w, &ctx, &cfg).unwrap();
            let Some(chi) = res.chi else { continue };
            if res.f_offered < res.f_greedy - 1e-12 {
                strict_improvements += 1;
                assert!(chi > 0.0);
            }
            for trace in &res.traces {
                for step in &trace.steps {
                    let eta = rho_normalized(&ctx, res.f_empty_estimate, step.f).unwrap();
                    if eta > res.rho_greedy && res.rho_greedy > 0.0 {
                        let delta = 1.0 - res.rho_greedy / eta;
                        assert!(
                            chi >= delta / (1.0 - delta) - 1e-9,
                            "chi {chi} below delta bound {}",
                            delta / (1.0 - delta)
                        );
                    }
                }
            }
        }
    }
    assert!(
        strict_improvements > 0,
        "scan found no instance where the offered set beats classic greedy"
    );
}

#[test]
fn error_decay_envelope() {
    // After a burn-in the error trace sits below a geometric envelope only
    // slightly above the spectral rate.
    let cases: Vec<(Graph, Vec<usize>)> = vec![
        (p3(), vec![0]),
        (p4(), vec![0]),
        (c4(), vec![0]),
        (k3(), vec![0]),
        (star5(), vec![1]),
        (triangle_pendant(), vec![3]),
    ];
    let mut rng = rng(0x0DAC6E);
    for (g, target) in cases {
        let n = g.node_count();
        let a = set(n, &target);
        let w = uniform(g);
        let lambda = stubborn_opt::hitting::spectral_radius(&w, &a).unwrap().lambda;
        let x0: Vec<f64> = (0..n)
            .map(|i| if a.contains(i) { 0.0 } else { rng.random::<f64>() })
            .collect();
        let trace = stubborn_opt::sim::simulate(&w, &a, &x0, 200).unwrap();
        let envelope = lambda + 0.05;
        for t in 50..=200usize {
            let bound = trace.errors[0] * envelope.powi(t as i32);
            assert!(
                trace.errors[t] <= bound + 1e-12,
                "step {t}: error {} above envelope {bound}",
                trace.errors[t]
            );
        }
    }
}

#[test]
fn absorption_rows_sum_to_one() {
    let mut rng = rng(0x0DAC5E);
    for _ in 0..30 {
        let n = rng.random_range(3..=9);
        let g = random_connected_graph(n, 0.3, &mut rng);
        let w = uniform(g);
        let a = random_proper_subset(n, &mut rng);
        let ab = stubborn_opt::hitting::absorption_matrix(&w, &a).unwrap();
        for &from in ab.nodes() {
            let total: f64 = ab.targets().iter().map(|&s| ab.get(from, s).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-9);
            for &s in ab.targets() {
                let p = ab.get(from, s).unwrap();
                assert!((-1e-12..=1.0 + 1e-12).contains(&p));
            }
        }
    }
}
