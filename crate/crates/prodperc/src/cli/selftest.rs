//! Deterministic self-check battery. Every check uses fixed seeds, so
//! two runs of `prodperc selftest` emit byte-identical reports; any
//! failing check turns the overall outcome into an error.

use serde_json::{json, Value};

use super::ops::columns_for;
use super::{OpKind, Table};
use crate::components::{
    attached_decorations, bfs_labels, giant_stats, label_components, survival_fraction,
};
use crate::error::{Error, Result};
use crate::expansion::{
    count_disjoint_short_paths, max_bipartite_matching, sample_connected_subset,
    tree_decompose,
};
use crate::graph::{build_graph, BuildOptions, ProductGraph};
use crate::iso::{
    check_entropy_floor, check_weighted_log_inequality, count_trees, exact_iso_profile,
    is_subcube, iso_bound_connected, iso_bound_regular, tree_count_envelope,
    DistributionOverC,
};
use crate::percolation::{
    default_sprinkle, sample_percolation, EdgeSample,
};
use crate::rng::Stream;
use crate::subset::VertexSubset;
use crate::view::ComponentView;
use crate::walk::{
    conductance, lazy_step, mixing_time_exact, phi_profile, stationary_distribution,
    tv_distance,
};

type Check = std::result::Result<String, String>;

fn build(expr: &str) -> ProductGraph {
    build_graph(expr, &BuildOptions::default()).expect("selftest graph expressions parse")
}

fn fail(reason: impl Into<String>) -> Check {
    Err(reason.into())
}

/// Runs every check and reports one row each. The summary counts
/// passes; a single failure makes the battery's outcome an error.
pub(super) fn run_battery() -> (Table, Option<Value>, Result<()>) {
    let checks: Vec<(&'static str, fn() -> Check)> = vec![
        ("rng-determinism", rng_determinism),
        ("rng-child-streams", rng_child_streams),
        ("graph-codec", graph_codec),
        ("percolation-endpoints", percolation_endpoints),
        ("percolation-nesting", percolation_nesting),
        ("components-agree", components_agree),
        ("survival-monotone", survival_monotone),
        ("iso-profile-cube", iso_profile_cube),
        ("iso-bounds-dominated", iso_bounds_dominated),
        ("entropy-floor-fuzz", entropy_floor_fuzz),
        ("weighted-log-fuzz", weighted_log_fuzz),
        ("tree-counts", tree_counts),
        ("tree-decompose-random", tree_decompose_random),
        ("matching-sanity", matching_sanity),
        ("paths-match-matching", paths_match_matching),
        ("conductance-symmetric", conductance_symmetric),
        ("phi-profile-cycle", phi_profile_cycle),
        ("mixing-two-vertices", mixing_two_vertices),
        ("edge-budget", edge_budget),
        ("giant-edge-count", giant_edge_count),
        ("sprinkle-split", sprinkle_split),
    ];

    let mut table = Table::new(columns_for(OpKind::Selftest));
    let mut failures = 0u32;
    for (name, check) in &checks {
        let (status, detail) = match check() {
            Ok(detail) => ("pass", detail),
            Err(reason) => {
                failures += 1;
                ("fail", reason)
            }
        };
        table.push(vec![
            "selftest_v1".to_string(),
            name.to_string(),
            status.to_string(),
            detail,
        ]);
    }
    let total = checks.len() as u32;
    let summary = json!({
        "op": "selftest",
        "checks": total,
        "passed": total - failures,
        "failed": failures,
    });
    let outcome = if failures == 0 {
        Ok(())
    } else {
        Err(Error::Unsatisfiable(format!(
            "selftest: {failures} of {total} checks failed"
        )))
    };
    (table, Some(summary), outcome)
}

fn rng_determinism() -> Check {
    let mut a = Stream::new(42).child(7);
    let mut b = Stream::new(42).child(7);
    for _ in 0..100 {
        if a.next_u64() != b.next_u64() {
            return fail("identical (seed, tag) streams diverged");
        }
    }
    let mut c = Stream::new(42);
    for _ in 0..100 {
        let x = c.next_u01();
        if !(0.0..1.0).contains(&x) {
            return fail(format!("next_u01 out of [0,1): {x}"));
        }
        let k = c.below(10);
        if k >= 10 {
            return fail(format!("below(10) returned {k}"));
        }
    }
    Ok("100 draws repeat exactly; u01 and below stay in range".into())
}

fn rng_child_streams() -> Check {
    let base = Stream::new(42);
    let mut seen = std::collections::HashSet::new();
    for tag in 0..50 {
        let mut s = base.child(tag);
        if !seen.insert(s.next_u64()) {
            return fail(format!("child({tag}) collides with an earlier child"));
        }
    }
    let mut direct = base.child(3);
    let before = direct.next_u64();
    let _ = base.child(9);
    let mut again = base.child(3);
    if again.next_u64() != before {
        return fail("child() mutated its parent");
    }
    Ok("50 child streams distinct; child() leaves the parent untouched".into())
}

fn graph_codec() -> Check {
    let q4 = build("Q4");
    let mut last = None;
    let mut count = 0u64;
    let mut bad = None;
    q4.for_each_edge(|id, u, v| {
        if let Some(prev) = last {
            if id != prev + 1 {
                bad = Some(format!("edge ids not consecutive: {prev} then {id}"));
            }
        } else if id != 0 {
            bad = Some(format!("first edge id is {id}"));
        }
        if q4.edge_id(u, v) != Some(id) || q4.edge_id(v, u) != Some(id) {
            bad = Some(format!("edge_id({u},{v}) does not round-trip to {id}"));
        }
        last = Some(id);
        count += 1;
    });
    if let Some(reason) = bad {
        return fail(reason);
    }
    if count != q4.edge_count() || count != 32 {
        return fail(format!("Q4 edge walk saw {count} edges, expected 32"));
    }
    let mixed = build("K3xC5");
    if mixed.n() != 15 || mixed.regular_degree() != Some(4) {
        return fail(format!(
            "K3xC5 has n={}, degree={:?}; expected 15 and 4",
            mixed.n(),
            mixed.regular_degree()
        ));
    }
    for v in 0..mixed.n() {
        let nbrs = mixed.neighbors(v);
        if nbrs.len() != 4 || nbrs.iter().any(|&u| mixed.edge_id(v, u).is_none()) {
            return fail(format!("vertex {v} has inconsistent adjacency"));
        }
        for u in nbrs {
            if mixed.coords(v).iter().zip(mixed.coords(u).iter()).filter(|(a, b)| a != b).count() != 1 {
                return fail(format!("neighbors {v},{u} differ in more than one coordinate"));
            }
        }
    }
    Ok("Q4 ids consecutive and round-trip; K3xC5 adjacency consistent".into())
}

fn percolation_endpoints() -> Check {
    let g = std::sync::Arc::new(build("Q6"));
    let none = sample_percolation(&g, 0.0, 5).map_err(|e| e.to_string())?;
    if none.retained_count() != 0 {
        return fail(format!("p=0 retained {} edges", none.retained_count()));
    }
    let all = sample_percolation(&g, 1.0, 5).map_err(|e| e.to_string())?;
    if all.retained_count() != g.edge_count() {
        return fail(format!(
            "p=1 retained {} of {} edges",
            all.retained_count(),
            g.edge_count()
        ));
    }
    Ok(format!("p=0 keeps nothing, p=1 keeps all {} edges", g.edge_count()))
}

fn percolation_nesting() -> Check {
    let g = std::sync::Arc::new(build("Q8"));
    for seed in 0..5u64 {
        let sparse = sample_percolation(&g, 0.3, seed).map_err(|e| e.to_string())?;
        let dense = sample_percolation(&g, 0.6, seed).map_err(|e| e.to_string())?;
        if !sparse.subset_of(&dense) {
            return fail(format!("p=0.3 sample escapes the p=0.6 sample at seed {seed}"));
        }
        if sparse.retained_count() >= dense.retained_count() {
            return fail(format!("retention counts not increasing at seed {seed}"));
        }
    }
    Ok("same-seed samples nest as p grows (5 seeds)".into())
}

fn components_agree() -> Check {
    let g = std::sync::Arc::new(build("Q8"));
    for seed in 0..3u64 {
        let sample = sample_percolation(&g, 0.2, seed).map_err(|e| e.to_string())?;
        let lab = label_components(&sample).map_err(|e| e.to_string())?;
        let via_bfs = bfs_labels(&sample);
        let n = g.n() as usize;
        // Same partition iff both labelings induce the same canonical
        // representative (first member) for every vertex.
        fn canon(labels: &[u32]) -> Vec<u32> {
            let mut first = std::collections::HashMap::new();
            labels
                .iter()
                .enumerate()
                .map(|(v, &l)| *first.entry(l).or_insert(v as u32))
                .collect()
        }
        let union_find: Vec<u32> =
            (0..n).map(|v| lab.component_of(v as u64)).collect();
        let a = canon(&union_find);
        let b = canon(&via_bfs);
        if a != b {
            return fail(format!("union-find and BFS partitions differ at seed {seed}"));
        }
    }
    Ok("union-find labels match BFS labels (3 seeds)".into())
}

fn survival_monotone() -> Check {
    let mut prev = 0.0;
    for i in 1..=20 {
        let eps = i as f64 * 0.05;
        let y = survival_fraction(eps).map_err(|e| e.to_string())?;
        if !(0.0..=1.0).contains(&y) || y <= prev {
            return fail(format!("survival fraction not increasing at eps={eps}: {y}"));
        }
        prev = y;
    }
    Ok("survival fraction strictly increases over eps in [0.05, 1.0]".into())
}

fn iso_profile_cube() -> Check {
    let q3 = build("Q3");
    let profile = exact_iso_profile(&q3, 4).map_err(|e| e.to_string())?;
    let expected = [3u64, 4, 5, 4];
    if profile.min_boundary != expected {
        return fail(format!(
            "Q3 profile {:?} != expected {:?}",
            profile.min_boundary, expected
        ));
    }
    for k in [1usize, 2, 4] {
        if !is_subcube(3, profile.witness[k - 1]) {
            return fail(format!(
                "power-of-two witness {:#b} at k={k} is not a subcube",
                profile.witness[k - 1]
            ));
        }
    }
    Ok("Q3 minima are [3,4,5,4] with subcube witnesses at k=1,2,4".into())
}

fn iso_bounds_dominated() -> Check {
    let g = build("K3xK3");
    let n = g.n();
    let profile = exact_iso_profile(&g, n).map_err(|e| e.to_string())?;
    for k in 1..=n {
        let exact = profile.i_k(k);
        let reg = iso_bound_regular(&g, k).map_err(|e| e.to_string())?;
        let conn = iso_bound_connected(&g, k).map_err(|e| e.to_string())?;
        if reg > exact + 1e-9 {
            return fail(format!("regular bound {reg} exceeds exact {exact} at k={k}"));
        }
        if conn > exact + 1e-9 {
            return fail(format!("connected bound {conn} exceeds exact {exact} at k={k}"));
        }
    }
    Ok("both lower bounds stay below the exact K3xK3 profile for all k".into())
}

fn entropy_floor_fuzz() -> Check {
    let mut rng = Stream::new(2024);
    for trial in 0..1000 {
        let c = 2 + rng.below(5) as usize;
        let mut probs: Vec<f64> = (0..c).map(|_| rng.next_u01() + 1e-9).collect();
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        let dist = DistributionOverC::new(probs).map_err(|e| e.to_string())?;
        let check = check_entropy_floor(&dist).map_err(|e| e.to_string())?;
        if !check.holds {
            return fail(format!(
                "entropy floor violated at trial {trial}: {} > {}",
                check.lhs, check.rhs
            ));
        }
    }
    Ok("entropy floor holds on 1000 random distributions".into())
}

fn weighted_log_fuzz() -> Check {
    let mut rng = Stream::new(2025);
    for trial in 0..1000 {
        let c = 2 + rng.below(5) as usize;
        let classes = 1 + rng.below(c as u64) as usize;
        let sizes: Vec<u64> = (0..classes).map(|_| 1 + rng.below(50)).collect();
        let check = check_weighted_log_inequality(&sizes, c).map_err(|e| e.to_string())?;
        if !check.holds {
            return fail(format!(
                "partition inequality violated at trial {trial} on {sizes:?}: {} > {}",
                check.lhs, check.rhs
            ));
        }
    }
    Ok("partition inequality holds on 1000 random class splits".into())
}

fn tree_counts() -> Check {
    let q3 = build("Q3");
    let n = q3.n();
    let e = q3.edge_count();
    let d = q3.regular_degree().expect("Q3 is regular");
    if count_trees(&q3, 1).map_err(|e| e.to_string())? != n as u128 {
        return fail("1-vertex tree count is not n");
    }
    if count_trees(&q3, 2).map_err(|e| e.to_string())? != e as u128 {
        return fail("2-vertex tree count is not the edge count");
    }
    for k in 1..=5u64 {
        let exact = count_trees(&q3, k).map_err(|e| e.to_string())?;
        let envelope = tree_count_envelope(n, d, k);
        if exact as f64 > envelope {
            return fail(format!("k={k}: {exact} subtrees exceed the envelope {envelope}"));
        }
    }
    Ok("Q3 subtree counts match n and e and stay under the envelope".into())
}

fn tree_decompose_random() -> Check {
    let mut rng = Stream::new(7);
    for trial in 0..100 {
        let n = 2 + rng.below(79) as usize;
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for v in 1..n {
            let parent = rng.below(v as u64) as usize;
            adj[v].push(parent as u32);
            adj[parent].push(v as u32);
        }
        let ell = 1 + rng.below(n as u64 / 2 + 1);
        let decomp = tree_decompose(&adj, ell)
            .map_err(|e| format!("trial {trial} (n={n}, ell={ell}): {e}"))?;
        decomp
            .validate(&adj)
            .map_err(|e| format!("trial {trial} (n={n}, ell={ell}): {e}"))?;
    }
    Ok("100 random trees decompose into valid [ell, 3ell] parts".into())
}

fn matching_sanity() -> Check {
    let complete: Vec<(u32, u32)> =
        (0..5).flat_map(|a| (0..5).map(move |b| (a, b))).collect();
    if max_bipartite_matching(5, 5, &complete).map_err(|e| e.to_string())? != 5 {
        return fail("complete 5x5 bipartite graph should match 5");
    }
    let star: Vec<(u32, u32)> = (0..6).map(|a| (a, 0)).collect();
    if max_bipartite_matching(6, 1, &star).map_err(|e| e.to_string())? != 1 {
        return fail("star into one right vertex should match 1");
    }
    let mut rng = Stream::new(11);
    let mut edges: Vec<(u32, u32)> =
        (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).collect();
    rng.shuffle(&mut edges);
    let mut prev = 0;
    for count in 1..=edges.len() {
        let m = max_bipartite_matching(8, 8, &edges[..count]).map_err(|e| e.to_string())?;
        if m < prev || m > 8 {
            return fail(format!("matching not monotone: {prev} then {m}"));
        }
        prev = m;
    }
    Ok("matching handles complete/star cases and grows monotonically".into())
}

fn paths_match_matching() -> Check {
    let g = std::sync::Arc::new(build("Q4"));
    let a_members: Vec<u64> = (0..4).collect();
    let b_members: Vec<u64> = (8..12).collect();
    for seed in 0..5u64 {
        let sample = sample_percolation(&g, 0.5, seed).map_err(|e| e.to_string())?;
        let a = VertexSubset::from_members(g.n(), &a_members);
        let b = VertexSubset::from_members(g.n(), &b_members);
        let paths =
            count_disjoint_short_paths(&sample, &a, &b, 1).map_err(|e| e.to_string())?;
        let mut edges = Vec::new();
        for (ai, &av) in a_members.iter().enumerate() {
            for u in g.neighbors(av) {
                if let Some(bi) = b_members.iter().position(|&bv| bv == u) {
                    if sample.retained_pair(av, u) {
                        edges.push((ai as u32, bi as u32));
                    }
                }
            }
        }
        let matching = max_bipartite_matching(
            a_members.len() as u32,
            b_members.len() as u32,
            &edges,
        )
        .map_err(|e| e.to_string())?;
        if paths != matching {
            return fail(format!(
                "seed {seed}: {paths} length-1 disjoint paths but matching {matching}"
            ));
        }
    }
    Ok("length-1 disjoint path counts equal bipartite matchings (5 seeds)".into())
}

fn conductance_symmetric() -> Check {
    let g = std::sync::Arc::new(build("Q8"));
    let sample = sample_percolation(&g, 0.3, 9).map_err(|e| e.to_string())?;
    let lab = label_components(&sample).map_err(|e| e.to_string())?;
    let view = ComponentView::giant(&sample, &lab).map_err(|e| e.to_string())?;
    let n = view.n();
    if n < 4 {
        return fail(format!("giant too small for the check: {n}"));
    }
    let mut rng = Stream::new(13);
    for trial in 0..200 {
        let size = 1 + rng.below(n - 1);
        let mut s = VertexSubset::empty(n);
        while s.len() < size {
            s.insert(rng.below(n));
        }
        let here = conductance(&view, &s).map_err(|e| e.to_string())?;
        let there = conductance(&view, &s.complement()).map_err(|e| e.to_string())?;
        if here.phi.to_bits() != there.phi.to_bits() {
            return fail(format!(
                "trial {trial}: phi(S)={} != phi(complement)={}",
                here.phi, there.phi
            ));
        }
        if !(here.phi > 0.0 && here.phi <= 1.0) {
            return fail(format!("trial {trial}: phi out of (0,1]: {}", here.phi));
        }
    }
    Ok("phi(S) equals phi of the complement bit-exactly on 200 subsets".into())
}

fn phi_profile_cycle() -> Check {
    let g = build("C8");
    let view = ComponentView::of_graph(&g);
    let report = phi_profile(&view, 8, 1).map_err(|e| e.to_string())?;
    if !report.exhaustive {
        return fail("an 8-vertex view should be profiled exhaustively");
    }
    for level in &report.levels {
        if !(level.phi > 0.0 && level.phi <= 1.0) {
            return fail(format!("level {} phi out of (0,1]: {}", level.level, level.phi));
        }
    }
    let top = &report.levels[0];
    if top.level != 1 || top.phi != 0.25 {
        return fail(format!(
            "half-mass level of the 8-cycle should reach phi=0.25, got {} at level {}",
            top.phi, top.level
        ));
    }
    Ok("8-cycle profile is exhaustive with the half-arc optimum 0.25".into())
}

fn mixing_two_vertices() -> Check {
    let g = build("K2");
    let view = ComponentView::of_graph(&g);
    let t = mixing_time_exact(&view, 10).map_err(|e| e.to_string())?;
    if t != 1 {
        return fail(format!("single edge should mix in exactly 1 lazy step, got {t}"));
    }
    let q6 = build("Q6");
    let view = ComponentView::of_graph(&q6);
    let pi = stationary_distribution(&view).map_err(|e| e.to_string())?;
    let stepped = lazy_step(&view, &pi);
    let drift = tv_distance(&pi, &stepped).map_err(|e| e.to_string())?;
    if drift > 1e-12 {
        return fail(format!("stationary distribution drifts by {drift}"));
    }
    Ok("K2 mixes in one step; the stationary law is a fixed point".into())
}

fn edge_budget() -> Check {
    let g = std::sync::Arc::new(build("Q10"));
    let d = g.regular_degree().expect("Q10 is regular") as f64;
    let big_c = g.max_base_order() as f64;
    let eps = 0.2;
    let p = (1.0 + eps) / d;
    let sample = sample_percolation(&g, p, 7).map_err(|e| e.to_string())?;
    let lab = label_components(&sample).map_err(|e| e.to_string())?;
    let view = ComponentView::giant(&sample, &lab).map_err(|e| e.to_string())?;
    let mut rng = Stream::new(77);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let size = 2 + rng.below(view.n().min(40) - 1);
        let members = sample_connected_subset(&view, size, &mut rng)
            .map_err(|e| e.to_string())?;
        let mut in_set = vec![false; view.n() as usize];
        for &v in &members {
            in_set[v as usize] = true;
        }
        let mut twice_inside = 0u64;
        let mut cross = 0u64;
        for &v in &members {
            for &u in view.neighbors(v) {
                if in_set[u as usize] {
                    twice_inside += 1;
                } else {
                    cross += 1;
                }
            }
        }
        let touched = (twice_inside / 2 + cross) as f64;
        let budget = (10.0 * members.len() as f64).max(20.0 * big_c.ln() * d);
        if touched > budget {
            return fail(format!(
                "connected set of {} touches {touched} edges, budget {budget}",
                members.len()
            ));
        }
        worst = worst.max(touched / budget);
    }
    Ok(format!(
        "200 grown sets stay inside the edge budget (worst ratio {worst:.3})"
    ))
}

fn giant_edge_count() -> Check {
    let g = std::sync::Arc::new(build("Q10"));
    let d = g.regular_degree().expect("Q10 is regular") as f64;
    let eps = 0.2;
    let p = (1.0 + eps) / d;
    let limit = 3.0 * eps * g.n() as f64;
    for seed in 0..5u64 {
        let sample = sample_percolation(&g, p, seed).map_err(|e| e.to_string())?;
        let lab = label_components(&sample).map_err(|e| e.to_string())?;
        let stats = giant_stats(&lab);
        if (stats.giant_edges as f64) >= limit {
            return fail(format!(
                "seed {seed}: giant holds {} edges, limit {limit}",
                stats.giant_edges
            ));
        }
    }
    Ok(format!("giant edge counts stay under 3*eps*n = {limit} (5 seeds)"))
}

fn sprinkle_split() -> Check {
    for &d in &[10u32, 14, 20] {
        for &eps in &[0.1f64, 0.2, 0.3] {
            let pair = default_sprinkle(eps, d).map_err(|e| e.to_string())?;
            let residual = (1.0 - pair.p1) * (1.0 - pair.p2) - (1.0 - pair.p);
            if residual.abs() > 1e-12 {
                return fail(format!(
                    "split identity off by {residual} at eps={eps}, d={d}"
                ));
            }
        }
    }
    // Hand-checked decoration example on the 4-path 0-1-2-3: the base
    // keeps {01, 12}, the merged sample adds {23}; vertex 2 gains the
    // one-vertex decoration {3}.
    let g = std::sync::Arc::new(build("P4"));
    for (u, v, id) in [(0u64, 1u64, 0u64), (1, 2, 1), (2, 3, 2)] {
        if g.edge_id(u, v) != Some(id) {
            return fail(format!("P4 edge ({u},{v}) is not id {id}"));
        }
    }
    let base = EdgeSample::from_retained_ids(&g, 0.5, &[0, 1]).map_err(|e| e.to_string())?;
    let merged =
        EdgeSample::from_retained_ids(&g, 0.75, &[0, 1, 2]).map_err(|e| e.to_string())?;
    let report = attached_decorations(&base, &merged).map_err(|e| e.to_string())?;
    if report.giant_vertices != vec![0, 1, 2] {
        return fail(format!("base giant should be {{0,1,2}}, got {:?}", report.giant_vertices));
    }
    if report.sizes != vec![0, 0, 1] || report.max != 1 {
        return fail(format!(
            "decoration sizes should be [0,0,1] with max 1, got {:?} max {}",
            report.sizes, report.max
        ));
    }
    Ok("split identity exact on a 3x3 grid; 4-path decorations as computed by hand".into())
}
