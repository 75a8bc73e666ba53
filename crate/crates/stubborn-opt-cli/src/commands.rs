use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use stubborn_opt::bounds::bound_report;
use stubborn_opt::hitting::{f_value, hitting_times};
use stubborn_opt::optimizer::{optimize, OptimizerConfig, RankContext};
use stubborn_opt::parse::{load_edge_list, parse_set_line, parse_sets_file};
use stubborn_opt::screen::surrogate_screen;
use stubborn_opt::sim::simulate;
use stubborn_opt::{Error, Graph, NodeSet, Result, WalkKind, WalkMatrix};

use crate::output::{emit, json_document, quote, sig, sig_opt};
use crate::{Cli, Command, FormatArg};

/// Graphs larger than this skip the exact-F annotation in `bound`.
const EXACT_ANNOTATION_MAX_NODES: usize = 2000;

pub fn run(cli: &Cli) -> Result<()> {
    let graph_path = cli
        .graph
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--graph is required".into()))?;
    let graph = Arc::new(load_graph(graph_path)?);
    let kind: WalkKind = cli.walk.into();
    let walk = WalkMatrix::build(Arc::clone(&graph), kind);
    warn_if_irreversible(&walk);
    let format = cli.format.unwrap_or(match cli.command {
        Command::Simulate { .. } => FormatArg::Csv,
        _ => FormatArg::Json,
    });
    let text = match &cli.command {
        Command::Evaluate { sets, cover } => {
            cmd_evaluate(&walk, sets, cover.as_deref(), format)?
        }
        Command::Optimize { k, nu, m, cover } => {
            cmd_optimize(&walk, *k, *nu, *m, cover.as_deref(), format)?
        }
        Command::Screen { k, count } => cmd_screen(&walk, *k, *count, cli.seed, format)?,
        Command::Bound { set } => cmd_bound(&walk, set, format)?,
        Command::Simulate { set, steps } => cmd_simulate(&walk, set, *steps, cli.seed, format)?,
    };
    emit(cli.out.as_deref(), &text)
}

fn load_graph(path: &Path) -> Result<Graph> {
    let text = read_file(path)?;
    load_edge_list(&text)
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidData(format!("{}: {e}", path.display())))
}

/// Reversibility is a hard requirement only for the bound machinery;
/// elsewhere a weighted chain that breaks detailed balance just gets a note.
fn warn_if_irreversible(w: &WalkMatrix) {
    if w.kind() != WalkKind::Weighted {
        return;
    }
    if let Ok(pi) = w.stationary() {
        if !w.check_reversible(&pi) {
            eprintln!("warning: weighted walk is not reversible; bound commands will fail");
        }
    }
}

fn load_cover(graph: &Graph, path: Option<&Path>) -> Result<Option<NodeSet>> {
    let Some(path) = path else { return Ok(None) };
    let sets = parse_sets_file(&read_file(path)?)?;
    match sets.as_slice() {
        [labels] => Ok(Some(graph.resolve_set(labels)?)),
        _ => Err(Error::InvalidData(format!(
            "cover file {} must contain exactly one set line",
            path.display()
        ))),
    }
}

fn set_labels(graph: &Graph, set: &NodeSet) -> Vec<String> {
    graph.labels_of(set)
}

fn labels_json(graph: &Graph, set: &NodeSet) -> Value {
    Value::from(set_labels(graph, set))
}

fn cmd_evaluate(
    w: &WalkMatrix,
    sets_path: &Path,
    cover_path: Option<&Path>,
    format: FormatArg,
) -> Result<String> {
    let graph = w.graph();
    let parsed = parse_sets_file(&read_file(sets_path)?)?;
    if parsed.is_empty() {
        return Err(Error::InvalidData(format!(
            "{}: no sets found",
            sets_path.display()
        )));
    }
    let cover = load_cover(graph, cover_path)?;
    let ctx = RankContext::new(w, cover)?;
    let mut rows = Vec::with_capacity(parsed.len());
    for labels in &parsed {
        let set = graph.resolve_set(labels)?;
        if set.is_empty() {
            return Err(Error::InvalidData("empty set".into()));
        }
        let prof = hitting_times(w, &set)?;
        let h_min = prof.values().iter().copied().reduce(f64::min);
        let h_max = prof.values().iter().copied().reduce(f64::max);
        rows.push((set, prof.f(), h_min, h_max));
    }
    match format {
        FormatArg::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|(set, f, h_min, h_max)| {
                    json!({
                        "set": labels_json(graph, set),
                        "f": f,
                        "h_min": h_min,
                        "h_max": h_max,
                        "rank": ctx.rank(*f),
                    })
                })
                .collect();
            Ok(json_document(&Value::from(items)))
        }
        FormatArg::Csv => {
            let mut out = String::from("set,f,h_min,h_max,rank\n");
            for (set, f, h_min, h_max) in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    quote(&set_labels(graph, set).join(",")),
                    sig(*f),
                    sig_opt(*h_min),
                    sig_opt(*h_max),
                    sig(ctx.rank(*f)),
                ));
            }
            Ok(out)
        }
    }
}

fn cmd_optimize(
    w: &WalkMatrix,
    k: usize,
    nu: f64,
    m: usize,
    cover_path: Option<&Path>,
    format: FormatArg,
) -> Result<String> {
    if format == FormatArg::Csv {
        return Err(Error::InvalidArgument(
            "optimize emits JSON only; drop --format csv".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("--k must be positive".into()));
    }
    let graph = w.graph();
    let cover = load_cover(graph, cover_path)?;
    let ctx = RankContext::new(w, cover)?;
    let k = if k > ctx.cover_size() {
        eprintln!(
            "warning: K = {k} exceeds the reference cover size {}; clamping (any cover superset is optimal)",
            ctx.cover_size()
        );
        ctx.cover_size()
    } else {
        k
    };
    let result = optimize(w, &ctx, &OptimizerConfig::new(k, nu, m))?;
    let traces: Vec<Value> = result
        .traces
        .iter()
        .map(|t| {
            json!({
                "starter": labels_json(graph, &t.starter),
                "steps": t.steps.iter().map(|s| json!({
                    "added": graph.label(s.added),
                    "f": s.f,
                })).collect::<Vec<_>>(),
                "set": labels_json(graph, &t.set),
                "f": t.f,
            })
        })
        .collect();
    let doc = json!({
        "walk": w.kind().name(),
        "k": k,
        "nu": nu,
        "m": m,
        "cover_size": ctx.cover_size(),
        "offered": labels_json(graph, &result.offered),
        "f_offered": result.f_offered,
        "rank": result.rank,
        "greedy": labels_json(graph, &result.greedy_set),
        "f_greedy": result.f_greedy,
        "chi": result.chi,
        "rho_offered": result.rho_offered,
        "rho_greedy": result.rho_greedy,
        "f_empty_lower_estimate": result.f_empty_estimate,
        "traces": traces,
    });
    Ok(json_document(&doc))
}

fn cmd_screen(
    w: &WalkMatrix,
    k: usize,
    count: usize,
    seed: u64,
    format: FormatArg,
) -> Result<String> {
    let graph = w.graph();
    let report = surrogate_screen(w, k, count, seed)?;
    match format {
        FormatArg::Json => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "set": labels_json(graph, &r.set),
                        "surrogate": r.surrogate,
                        "rho_s": r.rho_s,
                        "f": r.f,
                        "rho_f": r.rho_f,
                    })
                })
                .collect();
            let doc = json!({
                "k": k,
                "candidates": report.candidates,
                "sampled": report.sampled,
                "rows": rows,
            });
            Ok(json_document(&doc))
        }
        FormatArg::Csv => {
            let mut out = String::from("set,surrogate,rho_s,f,rho_f\n");
            for r in &report.rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    quote(&set_labels(graph, &r.set).join(",")),
                    sig(r.surrogate),
                    sig(r.rho_s),
                    sig_opt(r.f),
                    sig_opt(r.rho_f),
                ));
            }
            Ok(out)
        }
    }
}

fn cmd_bound(w: &WalkMatrix, set_arg: &str, format: FormatArg) -> Result<String> {
    if format == FormatArg::Csv {
        return Err(Error::InvalidArgument(
            "bound emits JSON only; drop --format csv".into(),
        ));
    }
    let graph = w.graph();
    let labels = parse_set_line(set_arg).map_err(Error::InvalidArgument)?;
    let set = graph.resolve_set(&labels)?;
    let pi = w.stationary()?;
    let report = bound_report(w, &pi, &set)?;
    let mut d = Map::new();
    for &(node, value) in &report.d {
        d.insert(graph.label(node).to_string(), value.into());
    }
    let mut doc = json!({
        "set": labels_json(graph, &set),
        "walk": w.kind().name(),
        "phi": report.phi,
        "uncovered": report.uncovered,
        "sigma_star": report.sigma_star,
        "d": d,
        "bound_dominant": report.bound_dominant,
        "bound_general": report.bound_general,
        "bound_degree": report.bound_degree,
        "surrogate": report.surrogate,
    });
    if graph.node_count() <= EXACT_ANNOTATION_MAX_NODES {
        let f = f_value(w, &set)?;
        let slack = report.bound_general - f;
        let obj = doc.as_object_mut().expect("document is an object");
        obj.insert("exact_f".into(), f.into());
        obj.insert("slack".into(), slack.into());
        obj.insert("tight".into(), (slack.abs() < 1e-9).into());
    }
    Ok(json_document(&doc))
}

fn cmd_simulate(
    w: &WalkMatrix,
    set_arg: &str,
    steps: usize,
    seed: u64,
    format: FormatArg,
) -> Result<String> {
    if steps == 0 {
        return Err(Error::InvalidArgument("--steps must be positive".into()));
    }
    let graph = w.graph();
    let labels = parse_set_line(set_arg).map_err(Error::InvalidArgument)?;
    let set = graph.resolve_set(&labels)?;
    // Stubborn nodes pinned at 0, the rest uniform in [0, 1).
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0: Vec<f64> = (0..graph.node_count())
        .map(|i| if set.contains(i) { 0.0 } else { rng.random() })
        .collect();
    let trace = simulate(w, &set, &x0, steps)?;
    match format {
        FormatArg::Csv => {
            let mut out = String::from("step,error\n");
            for (t, err) in trace.errors.iter().enumerate() {
                out.push_str(&format!("{t},{}\n", sig(*err)));
            }
            Ok(out)
        }
        FormatArg::Json => {
            let doc = json!({
                "stubborn": labels_json(graph, &set),
                "stubborn_value": trace.stubborn_value,
                "steps": steps,
                "empirical_rate": trace.empirical_rate,
                "errors": trace.errors,
            });
            Ok(json_document(&doc))
        }
    }
}
