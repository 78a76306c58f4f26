//! Per-operation execution: expands the configured grid into tasks,
//! runs them on the worker pool, and assembles versioned rows in
//! (graph, point, seed) order regardless of scheduling.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{
    exact_diameter_applies, resolve_point, selftest, DiameterChoice, ExperimentConfig,
    OpKind, Table,
};
use crate::components::{
    attached_decorations, giant_stats, label_components, survival_fraction,
};
use crate::error::{Error, Result};
use crate::expansion::{
    audit_expansion, extract_expander, AuditParams, ExtractOptions, Regime,
};
use crate::graph::{build_graph, BuildOptions, ProductGraph};
use crate::iso::{exact_iso_profile, iso_bound_connected, iso_bound_regular};
use crate::longrange::{diameter, longest_cycle, DiameterMode};
use crate::percolation::{
    default_sprinkle, high_degree_census, sample_percolation, EdgeSample,
};
use crate::rng::Stream;
use crate::view::ComponentView;
use crate::walk::{fr_mixing_bound, mixing_time_exact, phi_profile, MIXING_GUARD};

/// One grid cell replicate.
#[derive(Clone, Copy, Debug)]
struct Task {
    graph_idx: usize,
    /// Absent for operations that do not percolate (gen, iso).
    point_idx: Option<usize>,
    seed: u64,
}

/// Numbers a task contributes to the run summary.
#[derive(Clone, Copy, Debug)]
struct TaskStats {
    fraction: f64,
    second_size: u64,
    giant_edges: u64,
    /// Audit tallies (expand only).
    in_range: u64,
    passes: u64,
}

#[derive(Debug, Default)]
struct TaskOutput {
    rows: Vec<Vec<String>>,
    stats: Option<TaskStats>,
    log: Vec<Value>,
    sample: Option<Vec<u8>>,
}

pub(super) fn columns_for(op: OpKind) -> Vec<&'static str> {
    match op {
        OpKind::Gen => vec![
            "schema",
            "graph",
            "n",
            "dimension",
            "degree",
            "regular",
            "max_base_order",
            "edges",
        ],
        OpKind::Percolate => vec![
            "schema",
            "graph",
            "eps",
            "p",
            "seed",
            "edges_total",
            "retained",
            "share",
        ],
        OpKind::Giant => vec![
            "schema",
            "graph",
            "n",
            "d",
            "eps",
            "p",
            "seed",
            "retained",
            "giant_size",
            "fraction",
            "second_size",
            "giant_edges",
            "excess",
        ],
        OpKind::Iso => vec![
            "schema",
            "graph",
            "n",
            "k",
            "min_boundary",
            "i_k",
            "bound_regular",
            "bound_connected",
            "witness_mask",
        ],
        OpKind::Expand => vec![
            "schema",
            "graph",
            "eps",
            "p",
            "seed",
            "k",
            "connected",
            "boundary",
            "neighborhood",
            "threshold",
            "pass",
            "regime",
            "in_range",
        ],
        OpKind::Extract => vec![
            "schema",
            "graph",
            "eps",
            "p",
            "seed",
            "l1",
            "survivors",
            "kept_fraction",
            "removals",
            "certified_probes",
            "achieved",
        ],
        OpKind::Diameter | OpKind::Cycle => vec![
            "schema",
            "graph",
            "eps",
            "p",
            "seed",
            "l1",
            "diameter",
            "exact",
            "best_cycle",
            "budget",
        ],
        OpKind::Mixing => vec![
            "schema", "graph", "eps", "p", "seed", "l1", "t_mix", "fr_bound",
            "phi_levels",
        ],
        OpKind::Sprinkle => vec![
            "schema",
            "graph",
            "eps",
            "p",
            "seed",
            "p1",
            "p2",
            "l1_base",
            "l1_merged",
            "attached_max",
            "attached_mean",
            "census",
            "census_bound",
        ],
        OpKind::Selftest => vec!["schema", "check", "status", "detail"],
    }
}

fn schema_tag(op: OpKind) -> &'static str {
    match op {
        OpKind::Gen => "gen_v1",
        OpKind::Percolate => "percolate_v1",
        OpKind::Giant => "giant_v1",
        OpKind::Iso => "iso_v1",
        OpKind::Expand => "expand_v1",
        OpKind::Extract => "extract_v1",
        OpKind::Diameter | OpKind::Cycle => "longrange_v1",
        OpKind::Mixing => "mixing_v1",
        OpKind::Sprinkle => "sprinkle_v1",
        OpKind::Selftest => "selftest_v1",
    }
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn bool_str(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}

fn regime_name(regime: Regime) -> &'static str {
    match regime {
        Regime::ConnectedSmall => "connected-small",
        Regime::ConnectedMedium => "connected-medium",
        Regime::Arbitrary => "arbitrary",
        Regime::OutOfRange => "out-of-range",
    }
}

/// Runs the whole experiment. Returns the table (holding every row
/// produced before the first failure), the summary (successful runs
/// only), and the outcome.
pub(super) fn execute(
    cfg: &ExperimentConfig,
) -> (Table, Option<Value>, Result<()>) {
    if cfg.op == OpKind::Selftest {
        return selftest::run_battery();
    }
    let mut table = Table::new(columns_for(cfg.op));

    let opts = BuildOptions::default();
    let mut graphs: Vec<Arc<ProductGraph>> = Vec::new();
    for expr in &cfg.graphs {
        match build_graph(expr, &opts) {
            Ok(g) => graphs.push(Arc::new(g)),
            Err(e) => return (table, None, Err(e)),
        }
    }

    let tasks = task_grid(cfg);
    if let Err(e) = validate_side_outputs(cfg, tasks.len()) {
        return (table, None, Err(e));
    }

    let outputs: Vec<Result<TaskOutput>> = tasks
        .par_iter()
        .map(|task| run_task(cfg, &graphs, task))
        .collect();

    let mut failure: Option<Error> = None;
    let mut stats: Vec<(Task, TaskStats)> = Vec::new();
    let mut log_lines: Vec<Value> = Vec::new();
    let mut sample_bytes: Option<Vec<u8>> = None;
    for (task, output) in tasks.iter().zip(outputs) {
        match output {
            Ok(out) => {
                table.append_rows(out.rows);
                if let Some(s) = out.stats {
                    stats.push((*task, s));
                }
                log_lines.extend(out.log);
                if out.sample.is_some() {
                    sample_bytes = out.sample;
                }
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }

    if let Err(e) = write_side_outputs(cfg, &graphs, log_lines, sample_bytes) {
        failure.get_or_insert(e);
    }

    let summary = if failure.is_none() {
        build_summary(cfg, &graphs, &stats)
    } else {
        None
    };
    (table, summary, failure.map_or(Ok(()), Err))
}

fn task_grid(cfg: &ExperimentConfig) -> Vec<Task> {
    let mut tasks = Vec::new();
    for graph_idx in 0..cfg.graphs.len() {
        if cfg.points.is_empty() {
            tasks.push(Task {
                graph_idx,
                point_idx: None,
                seed: cfg.seed_base,
            });
        } else {
            for point_idx in 0..cfg.points.len() {
                for s in 0..cfg.seeds {
                    tasks.push(Task {
                        graph_idx,
                        point_idx: Some(point_idx),
                        seed: cfg.seed_base + s as u64,
                    });
                }
            }
        }
    }
    tasks
}

fn validate_side_outputs(cfg: &ExperimentConfig, task_count: usize) -> Result<()> {
    if cfg.params.sample_out.is_some() && task_count != 1 {
        return Err(Error::Config(format!(
            "sample-out holds a single sample but the grid has {task_count} cells"
        )));
    }
    if cfg.params.edges_out.is_some() && cfg.graphs.len() != 1 {
        return Err(Error::Config(
            "edges-out holds a single edge list; give exactly one graph".into(),
        ));
    }
    Ok(())
}

fn write_side_outputs(
    cfg: &ExperimentConfig,
    graphs: &[Arc<ProductGraph>],
    log_lines: Vec<Value>,
    sample_bytes: Option<Vec<u8>>,
) -> Result<()> {
    if let Some(path) = cfg.params.edges_out.as_deref() {
        // Same shape as base-graph files ("n m" then one edge per line),
        // so emitted products feed straight back into file(...) atoms.
        let g = &graphs[0];
        let mut text = format!("{} {}\n", g.n(), g.edge_count());
        g.for_each_edge(|_, u, v| {
            text.push_str(&format!("{u} {v}\n"));
        });
        std::fs::write(path, text)?;
    }
    if let Some(path) = cfg.params.log_out.as_deref() {
        let mut text = String::new();
        for line in &log_lines {
            text.push_str(&serde_json::to_string(line).expect("plain data"));
            text.push('\n');
        }
        std::fs::write(path, text)?;
    }
    if let (Some(path), Some(bytes)) = (cfg.params.sample_out.as_deref(), sample_bytes)
    {
        std::fs::write(path, bytes)?;
    }
    Ok(())
}

fn run_task(
    cfg: &ExperimentConfig,
    graphs: &[Arc<ProductGraph>],
    task: &Task,
) -> Result<TaskOutput> {
    let graph = &graphs[task.graph_idx];
    let expr = &cfg.graphs[task.graph_idx];
    match cfg.op {
        OpKind::Gen => run_gen(cfg, graph, expr),
        OpKind::Iso => run_iso(cfg, graph, expr),
        _ => {
            let point = cfg.points[task.point_idx.expect("percolating op")];
            let (p, eps) = resolve_point(point, graph)?;
            match cfg.op {
                OpKind::Percolate => run_percolate(cfg, graph, expr, p, eps, task.seed),
                OpKind::Giant => run_giant(cfg, graph, expr, p, eps, task.seed),
                OpKind::Expand => run_expand(cfg, graph, expr, p, eps, task.seed),
                OpKind::Extract => run_extract(cfg, graph, expr, p, eps, task.seed),
                OpKind::Diameter | OpKind::Cycle => {
                    run_longrange(cfg, graph, expr, p, eps, task.seed)
                }
                OpKind::Mixing => run_mixing(cfg, graph, expr, p, eps, task.seed),
                OpKind::Sprinkle => run_sprinkle(cfg, graph, expr, eps, task.seed),
                OpKind::Gen | OpKind::Iso | OpKind::Selftest => unreachable!(),
            }
        }
    }
}

/// Demands the ε the operation's thresholds are phrased in.
fn require_eps(op: OpKind, eps: Option<f64>) -> Result<f64> {
    eps.ok_or_else(|| {
        Error::Config(format!(
            "operation {} needs eps (give eps=..., or p on a regular product)",
            op.name()
        ))
    })
}

fn percolate_and_label(
    graph: &Arc<ProductGraph>,
    p: f64,
    seed: u64,
) -> Result<(EdgeSample, crate::components::ComponentLabeling)> {
    let sample = sample_percolation(graph, p, seed)?;
    let labeling = label_components(&sample)?;
    Ok((sample, labeling))
}

fn run_gen(
    _cfg: &ExperimentConfig,
    graph: &Arc<ProductGraph>,
    expr: &str,
) -> Result<TaskOutput> {
    let row = vec![
        schema_tag(OpKind::Gen).to_string(),
        expr.to_string(),
        graph.n().to_string(),
        graph.dimension().to_string(),
        fmt_opt(graph.regular_degree()),
        bool_str(graph.regular_degree().is_some()),
        graph.max_base_order().to_string(),
        graph.edge_count().to_string(),
    ];
    Ok(TaskOutput {
        rows: vec![row],
        ..TaskOutput::default()
    })
}

fn run_iso(
    cfg: &ExperimentConfig,
    graph: &Arc<ProductGraph>,
    expr: &str,
) -> Result<TaskOutput> {
    let k_max = cfg.params.k_max.unwrap_or(graph.n()).min(graph.n());
    let profile = exact_iso_profile(graph, k_max)?;
    let mut rows = Vec::new();
    for k in 1..=profile.k_max() {
        rows.push(vec![
            schema_tag(OpKind::Iso).to_string(),
            expr.to_string(),
            graph.n().to_string(),
            k.to_string(),
            profile.min_boundary[k as usize - 1].to_string(),
            profile.i_k(k).to_string(),
            fmt_opt(iso_bound_regular(graph, k).ok()),
            iso_bound_connected(graph, k)?.to_string(),
            format!("{:x}", profile.witness[k as usize - 1]),
        ]);
    }
    Ok(TaskOutput {
        rows,
        ..TaskOutput::default()
    })
}

fn run_percolate(
    cfg: &ExperimentConfig,
    graph: &Arc<ProductGraph>,
    expr: &str,
    p: f64,
    eps: Option<f64>,
    seed: u64,
) -> Result<TaskOutput> {
    let sample = sample_percolation(graph, p, seed)?;
    let total = graph.edge_count();
    let retained = sample.retained_count();
    let row = vec![
        schema_tag(OpKind::Percolate).to_string(),
        expr.to_string(),
        fmt_opt(eps),
        p.to_string(),
        seed.to_string(),
        total.to_string(),
        retained.to_string(),
        (retained as f64 / total as f64).to_string(),
    ];
    let sample_bytes = if cfg.params.sample_out.is_some() {
        let mut buf = Vec::new();
        sample.write_binary(&mut buf)?;
        Some(buf)
    } else {
        None
    };
    Ok(TaskOutput {
        rows: vec![row],
        sample: sample_bytes,
        ..TaskOutput::default()
    })
}

fn run_giant(
    _cfg: &ExperimentConfig,
    graph: &Arc<ProductGraph>,
    expr: &str,
    p: f64,
    eps: Option<f64>,
    seed: u64,
) -> Result<TaskOutput> {
    let (sample, labeling) = percolate_and_label(graph, p, seed)?;
    let stats = giant_stats(&labeling);
    let row = vec![
        schema_tag(OpKind::Giant).to_string(),
        expr.to_string(),
        stats.n.to_string(),
        fmt_opt(graph.regular_degree()),
        fmt_opt(eps),
        p.to_string(),
        seed.to_string(),
        sample.retained_count().to_string(),
        stats.giant_size.to_string(),
        stats.fraction.to_string(),
        stats.second_size.to_string(),
        stats.giant_edges.to_string(),
        stats.excess.to_string(),
    ];
    Ok(TaskOutput {
        rows: vec![row],
        stats: Some(TaskStats {
            fraction: stats.fraction,
            second_size: stats.second_size,
            giant_edges: stats.giant_edges,
            in_range: 0,
            passes: 0,
        }),
        ..TaskOutput::default()
    })
}

fn run_expand(
    cfg: &ExperimentConfig,
    graph: &Arc<ProductGraph>,
    expr: &str,
    p: f64,
    eps: Option<f64>,
    seed: u64,
) -> Result<TaskOutput> {
    let eps = require_eps(OpKind::Expand, eps)?;
    let d = graph.regular_degree().ok_or_else(|| {
        Error::Config("expansion thresholds need a regular product".into())
    })?;
    let (sample, labeling) = percolate_and_label(graph, p, seed)?;
    let view = ComponentView::giant(&sample, &labeling)?;
    let params = AuditParams {
        eps,
        c: cfg.params.c,
        sizes: cfg.params.sizes.clone(),
        draws: cfg.params.draws,
        mode: cfg.params.audit_mode,
        seed,
        small_lower_cutoff: cfg.params.small_cutoff,
    };
    let report = audit_expansion(&view, graph.n(), d, graph.max_base_order(), &params)?;
    let rows = report
        .rows
        .iter()
        .map(|r| {
            vec![
                schema_tag(OpKind::Expand).to_string(),
                expr.to_string(),
                eps.to_string(),
                p.to_string(),
                seed.to_string(),
                r.k.to_string(),
                bool_str(r.connected),
                r.boundary.to_string(),
                r.neighborhood.to_string(),
                r.threshold.to_string(),
                bool_str(r.pass),
                regime_name(r.regime).to_string(),
                bool_str(r.in_range),
            ]
        })
        .collect();
    Ok(TaskOutput {
        rows,
        stats: Some(TaskStats {
            fraction: 0.0,
            second_size: 0,
            giant_edges: 0,
            in_range: report.in_range,
            passes: report.passes,
        }),
        ..TaskOutput::default()
    })
}

fn run_extract(
    cfg: &ExperimentConfig,
    graph: &Arc<ProductGraph>,
    expr: &str,
    p: f64,
    eps: Option<f64>,
    seed: u64,
) -> Result<TaskOutput> {
    let eps = require_eps(OpKind::Extract, eps)?;
    let d = graph.regular_degree().ok_or_else(|| {
        Error::Config("expander extraction needs a regular product".into())
    })?;
    let (sample, labeling) = percolate_and_label(graph, p, seed)?;
    let view = ComponentView::giant(&sample, &labeling)?;
    let l1 = view.n();
    let mut opts = ExtractOptions::new(cfg.params.c_target, eps, seed);
    opts.connected_probes = cfg.params.probes;
    opts.sweeps_per_round = cfg.params.sweeps;
    let mut log = Vec::new();
    let row = match extract_expander(&view, graph.n(), d, &opts) {
        Ok(result) => {
            let survivors = result.members.len() as u64;
            for event in &result.log {
                log.push(serde_json::to_value(event).expect("plain data"));
            }
            vec![
                schema_tag(OpKind::Extract).to_string(),
                expr.to_string(),
                eps.to_string(),
                p.to_string(),
                seed.to_string(),
                l1.to_string(),
                survivors.to_string(),
                (survivors as f64 / l1 as f64).to_string(),
                result.log.len().to_string(),
                result.certified_probes.to_string(),
                bool_str(true),
            ]
        }
        Err(Error::Unsatisfiable(_)) => vec![
            schema_tag(OpKind::Extract).to_string(),
            expr.to_string(),
            eps.to_string(),
            p.to_string(),
            seed.to_string(),
            l1.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            bool_str(false),
        ],
        Err(other) => return Err(other),
    };
    Ok(TaskOutput {
        rows: vec![row],
        log,
        ..TaskOutput::default()
    })
}

fn run_longrange(
    cfg: &ExperimentConfig,
    graph: &Arc<ProductGraph>,
    expr: &str,
    p: f64,
    eps: Option<f64>,
    seed: u64,
) -> Result<TaskOutput> {
    let (sample, labeling) = percolate_and_label(graph, p, seed)?;
    let view = ComponentView::giant(&sample, &labeling)?;
    let l1 = view.n();
    let (diam_cell, exact_cell, cycle_cell, budget_cell) = match cfg.op {
        OpKind::Diameter => {
            let mode = match cfg.params.diameter_mode {
                DiameterChoice::Exact => DiameterMode::Exact,
                DiameterChoice::Sampled => DiameterMode::Sampled(cfg.params.sweeps),
                DiameterChoice::Auto => {
                    if exact_diameter_applies(l1) {
                        DiameterMode::Exact
                    } else {
                        DiameterMode::Sampled(cfg.params.sweeps)
                    }
                }
            };
            let result = diameter(&view, mode, seed)?;
            (
                result.value.to_string(),
                bool_str(result.exact),
                String::new(),
                String::new(),
            )
        }
        OpKind::Cycle => {
            let best = longest_cycle(&view, cfg.params.budget, seed);
            (
                String::new(),
                String::new(),
                best.to_string(),
                cfg.params.budget.to_string(),
            )
        }
        _ => unreachable!(),
    };
    let row = vec![
        schema_tag(cfg.op).to_string(),
        expr.to_string(),
        fmt_opt(eps),
        p.to_string(),
        seed.to_string(),
        l1.to_string(),
        diam_cell,
        exact_cell,
        cycle_cell,
        budget_cell,
    ];
    Ok(TaskOutput {
        rows: vec![row],
        ..TaskOutput::default()
    })
}

fn run_mixing(
    cfg: &ExperimentConfig,
    graph: &Arc<ProductGraph>,
    expr: &str,
    p: f64,
    eps: Option<f64>,
    seed: u64,
) -> Result<TaskOutput> {
    let (sample, labeling) = percolate_and_label(graph, p, seed)?;
    let view = ComponentView::giant(&sample, &labeling)?;
    let l1 = view.n();
    let t_mix = if l1 > MIXING_GUARD {
        -1
    } else {
        mixing_time_exact(&view, cfg.params.cap)? as i64
    };
    let report = phi_profile(&view, cfg.params.probes, seed)?;
    let bound = fr_mixing_bound(&report, cfg.params.k_const)?;
    let levels: Vec<Value> = report
        .levels
        .iter()
        .map(|l| {
            json!({
                "level": l.level,
                "rho": l.rho,
                "phi": l.phi,
                "probed": l.probed,
            })
        })
        .collect();
    let row = vec![
        schema_tag(OpKind::Mixing).to_string(),
        expr.to_string(),
        fmt_opt(eps),
        p.to_string(),
        seed.to_string(),
        l1.to_string(),
        t_mix.to_string(),
        bound.to_string(),
        serde_json::to_string(&levels).expect("plain data"),
    ];
    Ok(TaskOutput {
        rows: vec![row],
        ..TaskOutput::default()
    })
}

fn run_sprinkle(
    _cfg: &ExperimentConfig,
    graph: &Arc<ProductGraph>,
    expr: &str,
    eps: Option<f64>,
    seed: u64,
) -> Result<TaskOutput> {
    let eps = require_eps(OpKind::Sprinkle, eps)?;
    let d = graph.regular_degree().ok_or_else(|| {
        Error::Config("the two-round experiment needs a regular product".into())
    })?;
    let pair = default_sprinkle(eps, d)?;
    let base = sample_percolation(graph, pair.p1, seed)?;
    let extra_seed = Stream::new(seed).child(1).next_u64();
    let extra = sample_percolation(graph, pair.p2, extra_seed)?;
    let merged = base.merge(&extra)?;
    let base_lab = label_components(&base)?;
    let merged_lab = label_components(&merged)?;
    let l1_base = base_lab.size_of(base_lab.giant_id());
    let merged_stats = giant_stats(&merged_lab);
    let decorations = attached_decorations(&base, &merged)?;
    let mean = if decorations.sizes.is_empty() {
        0.0
    } else {
        decorations.sizes.iter().sum::<u64>() as f64 / decorations.sizes.len() as f64
    };
    let census = high_degree_census(&merged, None)?;
    let census_bound = graph.n() as f64 / (d as f64).powi(4);
    let row = vec![
        schema_tag(OpKind::Sprinkle).to_string(),
        expr.to_string(),
        eps.to_string(),
        pair.p.to_string(),
        seed.to_string(),
        pair.p1.to_string(),
        pair.p2.to_string(),
        l1_base.to_string(),
        merged_stats.giant_size.to_string(),
        decorations.max.to_string(),
        mean.to_string(),
        census.to_string(),
        census_bound.to_string(),
    ];
    Ok(TaskOutput {
        rows: vec![row],
        stats: Some(TaskStats {
            fraction: merged_stats.fraction,
            second_size: merged_stats.second_size,
            giant_edges: merged_stats.giant_edges,
            in_range: 0,
            passes: 0,
        }),
        ..TaskOutput::default()
    })
}

/// Per-cell aggregates for the operations whose headline numbers are
/// means over seeds; audit runs get a pooled pass rate instead.
fn build_summary(
    cfg: &ExperimentConfig,
    graphs: &[Arc<ProductGraph>],
    stats: &[(Task, TaskStats)],
) -> Option<Value> {
    match cfg.op {
        OpKind::Giant | OpKind::Sprinkle => {
            let mut cells = Vec::new();
            for graph_idx in 0..cfg.graphs.len() {
                for point_idx in 0..cfg.points.len() {
                    let cell: Vec<&TaskStats> = stats
                        .iter()
                        .filter(|(t, _)| {
                            t.graph_idx == graph_idx && t.point_idx == Some(point_idx)
                        })
                        .map(|(_, s)| s)
                        .collect();
                    if cell.is_empty() {
                        continue;
                    }
                    let graph = &graphs[graph_idx];
                    let (p, eps) =
                        match resolve_point(cfg.points[point_idx], graph) {
                            Ok(x) => x,
                            Err(_) => continue,
                        };
                    let m = cell.len() as f64;
                    let mean =
                        cell.iter().map(|s| s.fraction).sum::<f64>() / m;
                    let var = cell
                        .iter()
                        .map(|s| (s.fraction - mean).powi(2))
                        .sum::<f64>()
                        / m;
                    let stderr = if cell.len() > 1 {
                        (var / (m - 1.0)).sqrt()
                    } else {
                        0.0
                    };
                    let max_second =
                        cell.iter().map(|s| s.second_size).max().unwrap_or(0);
                    let target = eps.and_then(|e| survival_fraction(e).ok());
                    let edge_bound_pass = eps.map(|e| {
                        let limit = 3.0 * e * graph.n() as f64;
                        cell.iter()
                            .filter(|s| (s.giant_edges as f64) < limit)
                            .count() as f64
                            / m
                    });
                    cells.push(json!({
                        "graph": cfg.graphs[graph_idx],
                        "eps": eps,
                        "p": p,
                        "seeds": cell.len(),
                        "mean_fraction": mean,
                        "stderr_fraction": stderr,
                        "survival_target": target,
                        "max_second_size": max_second,
                        "edge_bound_pass_rate": edge_bound_pass,
                    }));
                }
            }
            Some(json!({ "op": cfg.op.name(), "cells": cells }))
        }
        OpKind::Expand => {
            let in_range: u64 = stats.iter().map(|(_, s)| s.in_range).sum();
            let passes: u64 = stats.iter().map(|(_, s)| s.passes).sum();
            let rate = if in_range == 0 {
                1.0
            } else {
                passes as f64 / in_range as f64
            };
            Some(json!({
                "op": "expand",
                "in_range": in_range,
                "passes": passes,
                "pass_rate": rate,
            }))
        }
        _ => None,
    }
}
