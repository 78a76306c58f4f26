//! Acceptance gate: fifteen end-to-end checks, one test per criterion.
//!
//! Exact structural facts are asserted bit-for-bit; statistical checks
//! run at fixed seeds against envelopes whose constants were frozen
//! after one pilot run and are never tuned per seed. Each test prints
//! its measured numbers; the harness pass/fail line is the verdict.
//!
//! Criteria 6 and 8 compare desk-scale measurements against limits that
//! only bind asymptotically; they are expected to fail today and their
//! printouts quantify the gap (see the assert messages for details).

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::process::Command;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;

use prodperc::components::{
    bfs_labels, giant_stats, label_components, survival_fraction, GiantStats,
};
use prodperc::expansion::{
    audit_expansion, extract_expander, tree_decompose, AuditMode, AuditParams, ExtractOptions,
};
use prodperc::graph::{build_graph, BuildOptions, ProductGraph};
use prodperc::iso::{
    check_entropy_floor, check_weighted_log_inequality, count_trees, exact_iso_profile,
    is_subcube, iso_bound_connected, iso_bound_regular, tree_count_envelope, DistributionOverC,
};
use prodperc::longrange::{diameter, longest_cycle, DiameterMode};
use prodperc::percolation::{high_degree_census, sample_percolation, EdgeSample};
use prodperc::rng::Stream;
use prodperc::view::ComponentView;
use prodperc::walk::{
    fr_mixing_bound, lazy_step, mixing_time_exact, phi_profile, stationary_distribution,
    tv_distance, WalkDistribution, EXHAUSTIVE_PROFILE_LIMIT,
};

// Constants frozen after the pilot run; see the decision log outside the
// repository for the measured margins.
const AUDIT_C_CONNECTED: f64 = 0.05;
const AUDIT_C_ARBITRARY: f64 = 10.0;
const EXTRACT_C_TARGET: f64 = 0.5;
const DIAMETER_ENVELOPE_A: f64 = 4.0;
const MIXING_K_FIT: f64 = 2.0;

fn product(expr: &str) -> Arc<ProductGraph> {
    Arc::new(build_graph(expr, &BuildOptions::default()).expect("valid expression"))
}

fn percolated(
    graph: &Arc<ProductGraph>,
    eps: f64,
    seed: u64,
) -> (EdgeSample, prodperc::components::ComponentLabeling) {
    let d = graph.regular_degree().expect("regular product") as f64;
    let sample = sample_percolation(graph, (1.0 + eps) / d, seed).expect("valid p");
    let labeling = label_components(&sample).expect("labeling");
    (sample, labeling)
}

fn giant_view(graph: &Arc<ProductGraph>, eps: f64, seed: u64) -> ComponentView {
    let (sample, labeling) = percolated(graph, eps, seed);
    ComponentView::giant(&sample, &labeling).expect("giant view")
}

// ---------------------------------------------------------------------------
// Shared 20-dimensional cube runs (criteria 6, 7, 8 reuse the same 60).
// ---------------------------------------------------------------------------

struct CubeRun {
    eps: f64,
    stats: GiantStats,
    census: u64,
}

fn q20_runs() -> &'static [CubeRun] {
    static RUNS: OnceLock<Vec<CubeRun>> = OnceLock::new();
    RUNS.get_or_init(|| {
        let g = product("Q20");
        let mut tasks = Vec::new();
        for &eps in &[0.1, 0.2, 0.3] {
            for seed in 0..20u64 {
                tasks.push((eps, seed));
            }
        }
        tasks
            .par_iter()
            .map(|&(eps, seed)| {
                let (sample, labeling) = percolated(&g, eps, seed);
                CubeRun {
                    eps,
                    stats: giant_stats(&labeling),
                    census: high_degree_census(&sample, None).expect("regular product"),
                }
            })
            .collect()
    })
}

fn runs_at(eps: f64) -> Vec<&'static CubeRun> {
    q20_runs().iter().filter(|r| r.eps == eps).collect()
}

// ---------------------------------------------------------------------------
// 1. Exact hypercube boundary profile and subcube witnesses.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_hypercube_profile_is_exact_with_subcube_witnesses() {
    let start = Instant::now();
    for d in [3u32, 4] {
        let g = product(&format!("Q{d}"));
        let profile = exact_iso_profile(&g, g.n()).expect("within guard");
        for j in 0..=d {
            let k = 1u64 << j;
            let expected = (d - j) as u64 * k;
            assert_eq!(
                profile.min_boundary[k as usize - 1],
                expected,
                "Q{d}: min boundary at k=2^{j}"
            );
            let witness = profile.witness[k as usize - 1];
            assert_eq!(u64::from(witness.count_ones()), k, "witness size at k={k}");
            assert!(
                is_subcube(d as usize, witness),
                "Q{d}: witness {witness:#x} at k={k} is not a subcube"
            );
        }
        println!("Q{d}: all {} power-of-two minima match d-j with subcube witnesses", d + 1);
    }
    let elapsed = start.elapsed();
    println!("elapsed: {elapsed:?}");
    assert!(elapsed.as_secs() < 60);
}

// ---------------------------------------------------------------------------
// 2. Closed-form boundary bounds never exceed the exact profile.
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_boundary_bounds_stay_below_the_exact_profile() {
    let start = Instant::now();
    for expr in ["Q4", "K3^2", "K2xK3", "K2^2xK3", "C5xK2"] {
        let g = product(expr);
        let n = g.n();
        let profile = exact_iso_profile(&g, n).expect("within guard");
        for k in 1..=n {
            let exact = profile.i_k(k);
            if g.regular_degree().is_some() {
                let rb = iso_bound_regular(&g, k).expect("regular graph");
                assert!(
                    rb <= exact + 1e-9,
                    "{expr}: regular bound {rb} exceeds exact {exact} at k={k}"
                );
            }
            let rc = iso_bound_connected(&g, k).expect("connected graph");
            assert!(
                rc <= exact + 1e-9,
                "{expr}: connected bound {rc} exceeds exact {exact} at k={k}"
            );
        }
        println!("{expr}: both bounds dominated by the exact profile for all k <= {n}");
    }
    let elapsed = start.elapsed();
    println!("elapsed: {elapsed:?}");
    assert!(elapsed.as_secs() < 600);
}

// ---------------------------------------------------------------------------
// 3. Entropy floor and weighted-log inequality on random inputs.
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_entropy_inequalities_hold_on_random_inputs() {
    let start = Instant::now();
    let mut rng = Stream::new(3);
    for trial in 0..100_000u32 {
        let c = 2 + rng.below(15) as usize; // support size in [2, 16]
        let raw: Vec<f64> = (0..c).map(|_| -rng.next_u01().max(1e-300).ln()).collect();
        let total: f64 = raw.iter().sum();
        let probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let dist = DistributionOverC::new(probs).expect("normalized");
        let floor = check_entropy_floor(&dist).expect("valid support");
        assert!(
            floor.holds,
            "trial {trial}: entropy floor violated, lhs={} rhs={}",
            floor.lhs, floor.rhs
        );
    }
    let mut rng = Stream::new(33);
    for trial in 0..100_000u32 {
        let c = 2 + rng.below(15) as usize;
        let mut sizes: Vec<u64> = (0..c).map(|_| rng.below(50)).collect();
        if sizes.iter().all(|&s| s == 0) {
            sizes[0] = 1;
        }
        let check = check_weighted_log_inequality(&sizes, c).expect("valid classes");
        assert!(
            check.holds,
            "trial {trial}: weighted-log inequality violated, lhs={} rhs={} sizes={sizes:?}",
            check.lhs, check.rhs
        );
    }
    let elapsed = start.elapsed();
    println!("200000 random inequality checks passed; elapsed: {elapsed:?}");
    assert!(elapsed.as_secs() < 60);
}

// ---------------------------------------------------------------------------
// 4. Exact subtree counts stay below the n(ed)^(k-1) envelope.
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_subtree_counts_stay_below_the_envelope() {
    let start = Instant::now();
    for expr in ["Q3", "K3"] {
        let g = product(expr);
        let d = g.regular_degree().expect("regular");
        for k in 1..=5u64 {
            let count = count_trees(&g, k).expect("within guard");
            let envelope = tree_count_envelope(g.n(), d, k);
            assert!(
                (count as f64) <= envelope,
                "{expr}: {count} subtrees on {k} vertices exceed the envelope {envelope}"
            );
            println!("{expr} k={k}: {count} subtrees <= envelope {envelope:.1}");
        }
    }
    let elapsed = start.elapsed();
    println!("elapsed: {elapsed:?}");
    assert!(elapsed.as_secs() < 60);
}

// ---------------------------------------------------------------------------
// 5. Tree partition invariants on random trees.
// ---------------------------------------------------------------------------

/// Uniform random labeled tree (decoded from a random Prüfer sequence).
fn random_tree(n: usize, rng: &mut Stream) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); n];
    let add = |adj: &mut Vec<Vec<u32>>, a: u32, b: u32| {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    };
    if n == 2 {
        add(&mut adj, 0, 1);
        return adj;
    }
    let seq: Vec<u32> = (0..n - 2).map(|_| rng.below(n as u64) as u32).collect();
    let mut degree = vec![1u32; n];
    for &v in &seq {
        degree[v as usize] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<u32>> = (0..n as u32)
        .filter(|&v| degree[v as usize] == 1)
        .map(Reverse)
        .collect();
    for &v in &seq {
        let Reverse(leaf) = leaves.pop().expect("tree has leaves");
        add(&mut adj, leaf, v);
        degree[v as usize] -= 1;
        if degree[v as usize] == 1 {
            leaves.push(Reverse(v));
        }
    }
    let Reverse(a) = leaves.pop().expect("two ends remain");
    let Reverse(b) = leaves.pop().expect("two ends remain");
    add(&mut adj, a, b);
    adj
}

#[test]
fn criterion_05_tree_partition_invariants_hold_on_random_trees() {
    let start = Instant::now();
    let mut rng = Stream::new(5);
    let mut decomposed = 0u32;
    let mut undersized = 0u32;
    for _ in 0..1000 {
        let n = 10f64.powf(1.0 + 3.0 * rng.next_u01()).floor() as usize; // 10..10^4
        let adj = random_tree(n, &mut rng);
        for ell in [5u64, 50] {
            if (n as u64) < ell {
                // A partition into parts of at least `ell` vertices cannot
                // exist; the constructor must refuse rather than emit one.
                assert!(tree_decompose(&adj, ell).is_err(), "n={n} ell={ell}");
                undersized += 1;
                continue;
            }
            let td = tree_decompose(&adj, ell).expect("decomposable");
            td.validate(&adj).expect("all four invariants");
            decomposed += 1;
        }
    }
    let elapsed = start.elapsed();
    println!(
        "{decomposed} partitions validated, {undersized} undersized inputs refused; elapsed: {elapsed:?}"
    );
    assert!(elapsed.as_secs() < 60);
}

// ---------------------------------------------------------------------------
// 6. Giant-component size against the branching-process fixed point.
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_giant_fraction_matches_the_fixed_point_envelope() {
    let d = 20u64;
    let mut lines = Vec::new();
    let mut fraction_ok = true;
    let mut second_ok = true;
    for &eps in &[0.1, 0.2, 0.3] {
        let runs = runs_at(eps);
        let mean: f64 = runs.iter().map(|r| r.stats.fraction).sum::<f64>() / runs.len() as f64;
        let target = survival_fraction(eps).expect("eps > 0");
        let second_rate = runs
            .iter()
            .filter(|r| r.stats.second_size <= 40 * d)
            .count() as f64
            / runs.len() as f64;
        let line = format!(
            "eps={eps}: mean fraction {mean:.4} vs fixed point {target:.4} (diff {:+.4}), \
             second component <= 40d in {:.0}% of {} runs",
            mean - target,
            100.0 * second_rate,
            runs.len()
        );
        println!("{line}");
        lines.push(line);
        fraction_ok &= (mean - target).abs() <= 0.03;
        second_ok &= second_rate >= 0.95;
    }
    assert!(
        fraction_ok && second_ok,
        "desk-scale giants on Q20 miss the d->infinity fixed point: effective per-vertex \
         offspring is (1+eps)(d-1)/d, which at d=20 shrinks the giant well below the limit \
         value.\n{}",
        lines.join("\n")
    );
}

// ---------------------------------------------------------------------------
// 7. Giant edge budget.
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_giant_edge_count_stays_under_budget() {
    let n = 1u64 << 20;
    for run in q20_runs() {
        let budget = 3.0 * run.eps * n as f64;
        assert!(
            (run.stats.giant_edges as f64) < budget,
            "eps={}: e(L1)={} reached the budget {budget}",
            run.eps,
            run.stats.giant_edges
        );
    }
    for &eps in &[0.1, 0.2, 0.3] {
        let worst = runs_at(eps)
            .iter()
            .map(|r| r.stats.giant_edges)
            .max()
            .unwrap_or(0);
        println!(
            "eps={eps}: worst e(L1)={worst} < budget {:.0} in all 20 runs",
            3.0 * eps * n as f64
        );
    }
}

// ---------------------------------------------------------------------------
// 8. High-degree vertex census.
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_high_degree_census_respects_the_polynomial_cap() {
    let n = 1u64 << 20;
    let d = 20f64;
    let cap = n as f64 / d.powi(4); // ~6.55 vertices
    let runs = q20_runs();
    let hits = runs.iter().filter(|r| (r.census as f64) <= cap).count();
    let rate = hits as f64 / runs.len() as f64;
    for &eps in &[0.1, 0.2, 0.3] {
        let at = runs_at(eps);
        let lo = at.iter().map(|r| r.census).min().unwrap_or(0);
        let hi = at.iter().map(|r| r.census).max().unwrap_or(0);
        println!("eps={eps}: census of degree >= ln(20) vertices in [{lo}, {hi}], cap {cap:.2}");
    }
    assert!(
        rate >= 0.95,
        "the cap n/d^4 = {cap:.2} only binds once (e(1+eps)/ln d)^(ln d) <= d^-4, i.e. \
         ln d >= e^5 (1+eps); at d=20 a Bin(20, p) degree is >= ln(20) with probability \
         ~0.1, so ~10^5 of the 2^20 vertices qualify in every run (pass rate {rate})"
    );
}

// ---------------------------------------------------------------------------
// 9. Union-find labeling against a BFS oracle.
// ---------------------------------------------------------------------------

/// Relabels component ids by first appearance so two partitions compare
/// structurally.
fn canonical(labels: &[u32]) -> Vec<u32> {
    let mut map = HashMap::new();
    let mut next = 0u32;
    labels
        .iter()
        .map(|&l| {
            *map.entry(l).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect()
}

#[test]
fn criterion_09_union_find_matches_bfs_on_random_instances() {
    let atoms: [(&str, u64); 15] = [
        ("K2", 2),
        ("K3", 3),
        ("K4", 4),
        ("K5", 5),
        ("C3", 3),
        ("C4", 4),
        ("C5", 5),
        ("C6", 6),
        ("C7", 7),
        ("C8", 8),
        ("P2", 2),
        ("P3", 3),
        ("P4", 4),
        ("P5", 5),
        ("P6", 6),
    ];
    let mut rng = Stream::new(9);
    for case in 0..500u32 {
        let expr = loop {
            let factors = 1 + rng.below(3);
            let picks: Vec<&str> = (0..factors)
                .map(|_| atoms[rng.below(atoms.len() as u64) as usize].0)
                .collect();
            let order: u64 = picks
                .iter()
                .map(|a| atoms.iter().find(|(n, _)| n == a).expect("in pool").1)
                .product();
            if order <= 200 {
                break picks.join("x");
            }
        };
        let g = product(&expr);
        let p = rng.next_u01();
        let seed = rng.next_u64();
        let sample = sample_percolation(&g, p, seed).expect("valid p");
        let union_find = label_components(&sample).expect("labeling");
        assert_eq!(
            canonical(union_find.labels()),
            canonical(&bfs_labels(&sample)),
            "case {case}: partitions differ on {expr} at p={p}"
        );
    }
    println!("500 random instances: union-find and BFS partitions identical");
}

// ---------------------------------------------------------------------------
// 10. Expansion audit at the frozen constants.
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_expansion_audit_passes_at_frozen_constants() {
    let g = product("Q14");
    let eps = 0.3;
    let d = g.regular_degree().expect("regular");
    let view = giant_view(&g, eps, 0);

    let connected = AuditParams {
        eps,
        c: AUDIT_C_CONNECTED,
        sizes: vec![100, 300, 1000],
        draws: 1000,
        mode: AuditMode::Connected,
        seed: 0,
        small_lower_cutoff: None,
    };
    let report =
        audit_expansion(&view, g.n(), d, g.max_base_order(), &connected).expect("audit runs");
    let min_margin = report
        .rows
        .iter()
        .filter(|r| r.in_range)
        .map(|r| r.boundary as f64 / r.threshold)
        .fold(f64::INFINITY, f64::min);
    println!(
        "connected audit: {} of {} draws in range, pass rate {}, min boundary/threshold {min_margin:.2}",
        report.in_range,
        report.rows.len(),
        report.pass_rate()
    );
    assert_eq!(report.in_range, 3000);
    assert_eq!(report.pass_rate(), 1.0, "connected audit found a violation");

    let k = (eps * eps * g.n() as f64).floor() as u64; // linear-size sets
    let arbitrary = AuditParams {
        eps,
        c: AUDIT_C_ARBITRARY,
        sizes: vec![k],
        draws: 1000,
        mode: AuditMode::Arbitrary,
        seed: 0,
        small_lower_cutoff: None,
    };
    let report =
        audit_expansion(&view, g.n(), d, g.max_base_order(), &arbitrary).expect("audit runs");
    let min_margin = report
        .rows
        .iter()
        .filter(|r| r.in_range)
        .map(|r| r.boundary as f64 / r.threshold)
        .fold(f64::INFINITY, f64::min);
    println!(
        "arbitrary audit at k={k}: {} draws in range, pass rate {}, min boundary/threshold {min_margin:.2}",
        report.in_range,
        report.pass_rate()
    );
    assert_eq!(report.in_range, 1000);
    assert_eq!(report.pass_rate(), 1.0, "arbitrary audit found a violation");
}

// ---------------------------------------------------------------------------
// 11. Expander extraction keeps at least 90% of the giant.
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_extraction_keeps_ninety_percent_of_the_giant() {
    let g = product("Q16");
    let eps = 0.2;
    let d = g.regular_degree().expect("regular");
    for seed in 0..5u64 {
        let view = giant_view(&g, eps, seed);
        let l1 = view.n();
        let mut opts = ExtractOptions::new(EXTRACT_C_TARGET, eps, seed);
        opts.sweeps_per_round = 8;
        let result = extract_expander(&view, g.n(), d, &opts).expect("extraction certifies");
        let kept = result.members.len() as u64;
        for event in &result.log {
            assert!(
                (event.neighborhood as f64) < event.threshold,
                "seed {seed}: removal at iteration {} lacks a violation certificate",
                event.iteration
            );
            assert!(event.removed >= 1);
        }
        println!(
            "seed {seed}: kept {kept}/{l1} ({:.3}), {} removals, {} certified probes",
            kept as f64 / l1 as f64,
            result.log.len(),
            result.certified_probes
        );
        assert!(
            kept as f64 >= 0.9 * l1 as f64,
            "seed {seed}: kept {kept} of {l1}"
        );
    }
}

// ---------------------------------------------------------------------------
// 12. Diameter of the giant inside the frozen envelope.
// ---------------------------------------------------------------------------

#[test]
fn criterion_12_giant_diameter_fits_the_frozen_envelope() {
    let eps = 0.2;
    let mut worst_ratio = 0f64;
    for d in [12u32, 14, 16] {
        let g = product(&format!("Q{d}"));
        let upper = DIAMETER_ENVELOPE_A * d as f64 * (d as f64).ln().powi(2);
        let mut values = Vec::new();
        for seed in 0..10u64 {
            let view = giant_view(&g, eps, seed);
            let result = diameter(&view, DiameterMode::Exact, 0).expect("within guard");
            assert!(result.exact);
            assert!(
                result.value >= d as u64,
                "Q{d} seed {seed}: diameter {} below the dimension",
                result.value
            );
            assert!(
                (result.value as f64) <= upper,
                "Q{d} seed {seed}: diameter {} above the envelope {upper:.1}",
                result.value
            );
            worst_ratio = worst_ratio.max(result.value as f64 / (d as f64 * (d as f64).ln().powi(2)));
            values.push(result.value);
        }
        println!(
            "Q{d}: exact diameters {values:?} inside [{d}, {upper:.1}]"
        );
    }
    println!(
        "worst diameter / (d ln^2 d) = {worst_ratio:.3} against the frozen A = {DIAMETER_ENVELOPE_A}"
    );
}

// ---------------------------------------------------------------------------
// 13. Mixing times against the dyadic conductance bound.
// ---------------------------------------------------------------------------

#[test]
fn criterion_13_mixing_times_stay_under_the_conductance_bound() {
    let start = Instant::now();
    let mut components = 0u32;
    let mut exhaustive = 0u32;
    let mut probed = 0u32;
    let mut worst_ratio = 0f64;
    for d in [8u32, 9, 10] {
        let g = product(&format!("Q{d}"));
        for &eps in &[0.2, 0.3] {
            for seed in 0..3u64 {
                let (sample, labeling) = percolated(&g, eps, seed);
                for comp in 0..labeling.component_count() as u32 {
                    let size = labeling.size_of(comp);
                    if !(2..=2000).contains(&size) {
                        continue;
                    }
                    let view = ComponentView::extract(&sample, &labeling, comp).expect("component");
                    let t_mix = mixing_time_exact(&view, 100_000).expect("mixes");
                    let report = phi_profile(&view, 64, 0).expect("has edges");
                    assert_eq!(report.exhaustive, view.n() <= EXHAUSTIVE_PROFILE_LIMIT);
                    if report.exhaustive {
                        exhaustive += 1;
                    } else {
                        probed += 1;
                    }
                    let dyadic_sum = fr_mixing_bound(&report, 1.0).expect("nonempty profile");
                    let ratio = t_mix as f64 / dyadic_sum;
                    worst_ratio = worst_ratio.max(ratio);
                    assert!(
                        t_mix as f64 <= MIXING_K_FIT * dyadic_sum,
                        "Q{d} eps={eps} seed={seed} component of {size}: t_mix={t_mix} \
                         exceeds {MIXING_K_FIT} * {dyadic_sum:.3}"
                    );

                    // Chain invariants: stationarity, mass conservation,
                    // and monotone distance to stationarity, all at 1e-12.
                    // (mixing_time_exact itself asserts monotonicity from
                    // every start; the walk below re-checks it from one.)
                    let pi = stationary_distribution(&view).expect("connected");
                    let stepped = lazy_step(&view, &pi);
                    let drift = tv_distance(&pi, &stepped).expect("same support");
                    assert!(drift <= 5e-13, "stationarity drift {drift}");
                    let mut cur = WalkDistribution::point_mass(view.n(), 0);
                    let mut prev = f64::INFINITY;
                    for _ in 0..=(t_mix + 5).min(200) {
                        let mass: f64 = cur.probs().iter().sum();
                        assert!((mass - 1.0).abs() <= 1e-12, "mass drifted to {mass}");
                        let dist = tv_distance(&cur, &pi).expect("same support");
                        assert!(dist <= prev + 1e-12, "d(t) grew from {prev} to {dist}");
                        prev = dist;
                        cur = lazy_step(&view, &cur);
                    }
                    components += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "{components} components ({exhaustive} exhaustive, {probed} probed): worst \
         t_mix / dyadic sum = {worst_ratio:.3} against K = {MIXING_K_FIT}; elapsed: {elapsed:?}"
    );
    assert!(components >= 100, "corpus too small: {components}");
    assert!(exhaustive > 0 && probed > 0, "corpus must span both profile modes");
}

// ---------------------------------------------------------------------------
// 14. Long verified cycles in the giant.
// ---------------------------------------------------------------------------

#[test]
fn criterion_14_long_cycles_found_in_most_seeds() {
    let g = product("Q16");
    let eps = 0.2;
    let n = g.n() as f64;
    let d = g.regular_degree().expect("regular") as f64;
    let bound = n / (100.0 * d * d.ln());
    let mut hits = 0;
    for seed in 0..10u64 {
        let view = giant_view(&g, eps, seed);
        let best = longest_cycle(&view, 50, seed);
        let ok = best as f64 >= bound;
        hits += ok as u32;
        println!(
            "seed {seed}: verified cycle of {best} (target {bound:.1}) -> {}",
            if ok { "hit" } else { "miss" }
        );
    }
    assert!(hits >= 8, "only {hits} of 10 seeds reached {bound:.1}");
}

// ---------------------------------------------------------------------------
// 15. Byte-identical reruns.
// ---------------------------------------------------------------------------

#[test]
fn criterion_15_reruns_are_byte_identical() {
    let bin = env!("CARGO_BIN_EXE_prodperc");
    let run = |args: &[&str]| -> Vec<u8> {
        let out = Command::new(bin).args(args).output().expect("binary runs");
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    assert_eq!(run(&["selftest"]), run(&["selftest"]), "selftest rerun differs");

    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(&cfg, "op=giant\ngraph=Q10\neps=0.1,0.2,0.3\nseeds=3\n").expect("write");
    let sweep = ["sweep", "--config", cfg.to_str().expect("utf-8 path")];
    assert_eq!(run(&sweep), run(&sweep), "sweep rerun differs");
    println!("selftest and sweep reruns byte-identical");
}
