//! Long-range structure of a component: diameter and circumference.
//!
//! Diameter is exact (all-pairs BFS) on small components and a certified
//! lower bound (iterated double sweeps) on large ones. Circumference is a
//! heuristic lower bound from randomized DFS growth with rotation
//! extension, restricted to the 2-core; every reported cycle is
//! re-verified edge-by-edge.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::view::ComponentView;

/// Largest component the exact all-pairs sweep will accept.
pub const EXACT_DIAMETER_GUARD: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiameterMode {
    /// BFS from every vertex.
    Exact,
    /// Iterated double sweeps from this many random seeds.
    Sampled(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiameterResult {
    pub value: u64,
    /// True when the value is the exact diameter rather than a lower bound.
    pub exact: bool,
}

/// Diameter of a connected component view.
///
/// Exact mode refuses components above [`EXACT_DIAMETER_GUARD`]. Sampled
/// mode starts each sweep at a random vertex, then repeatedly re-roots at
/// the farthest vertex found until the eccentricity stops growing; the
/// maximum over sweeps is a valid lower bound because every reported
/// value is a realized BFS eccentricity.
pub fn diameter(view: &ComponentView, mode: DiameterMode, seed: u64) -> Result<DiameterResult> {
    if view.n() == 0 {
        return Err(Error::InvalidArgument("diameter of an empty view".into()));
    }
    match mode {
        DiameterMode::Exact => {
            if view.n() > EXACT_DIAMETER_GUARD {
                return Err(Error::Guard(format!(
                    "exact diameter needs at most {EXACT_DIAMETER_GUARD} vertices, got {}",
                    view.n()
                )));
            }
            let best = (0..view.n() as u32)
                .into_par_iter()
                .map(|v| view.eccentricity_sweep(v).1 as u64)
                .max()
                .unwrap_or(0);
            Ok(DiameterResult {
                value: best,
                exact: true,
            })
        }
        DiameterMode::Sampled(k) => {
            if k == 0 {
                return Err(Error::InvalidArgument(
                    "sampled diameter needs at least one seed".into(),
                ));
            }
            let rng = Stream::new(seed);
            let best = (0..k)
                .into_par_iter()
                .map(|i| {
                    let mut r = rng.child(i as u64);
                    let mut at = r.below(view.n()) as u32;
                    let mut ecc = 0u32;
                    loop {
                        let (far, e) = view.eccentricity_sweep(at);
                        if e <= ecc {
                            break;
                        }
                        ecc = e;
                        at = far;
                    }
                    ecc as u64
                })
                .max()
                .unwrap_or(0);
            Ok(DiameterResult {
                value: best,
                exact: false,
            })
        }
    }
}

/// Checks that consecutive path entries are adjacent in the view and that
/// the two ends close a cycle.
fn verify_cycle(view: &ComponentView, cycle: &[u32]) -> bool {
    if cycle.len() < 3 {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    for w in 0..cycle.len() {
        let a = cycle[w];
        let b = cycle[(w + 1) % cycle.len()];
        if !seen.insert(a) {
            return false;
        }
        if !view.neighbors(a).contains(&b) {
            return false;
        }
    }
    true
}

/// Vertices of the 2-core: the maximal subgraph of minimum degree 2,
/// found by iteratively stripping lower-degree vertices. Every cycle
/// lives in the 2-core, and inside it a stuck path endpoint always has a
/// second in-path neighbor, so rotations never die on the pendant trees
/// that dominate percolated giants.
fn two_core(view: &ComponentView) -> Vec<bool> {
    let n = view.n() as usize;
    let mut alive = vec![true; n];
    let mut degree: Vec<u32> = (0..n)
        .map(|v| view.neighbors(v as u32).len() as u32)
        .collect();
    let mut strip: Vec<u32> = (0..n as u32)
        .filter(|&v| degree[v as usize] < 2)
        .collect();
    for &v in &strip {
        alive[v as usize] = false;
    }
    while let Some(v) = strip.pop() {
        for &u in view.neighbors(v) {
            if alive[u as usize] {
                degree[u as usize] -= 1;
                if degree[u as usize] < 2 {
                    alive[u as usize] = false;
                    strip.push(u);
                }
            }
        }
    }
    alive
}

/// One randomized growth attempt inside the 2-core: DFS-extend a path,
/// rotate when stuck, and close the widest chord the finished path
/// admits.
fn grow_once(view: &ComponentView, core: &[u32], alive: &[bool], rng: &mut Stream) -> Vec<u32> {
    let n = view.n() as usize;
    let mut pos = vec![u32::MAX; n]; // index in path, MAX = unused
    let mut path: Vec<u32> = Vec::new();
    let start = core[rng.below(core.len() as u64) as usize];
    path.push(start);
    pos[start as usize] = 0;

    // Two budgets keep a single attempt from spinning forever: one caps
    // the rotation count, the other the total tail-reversal work, since
    // rotations pivoting near the path head are the expensive ones.
    let mut rotations_left = 4 * n as u64 + 64;
    let mut reversal_budget = 32 * n as u64 + 4096;
    loop {
        let end = *path.last().expect("path never empties");
        // Extend with a random unused neighbor when possible.
        let fresh: Vec<u32> = view
            .neighbors(end)
            .iter()
            .copied()
            .filter(|&u| alive[u as usize] && pos[u as usize] == u32::MAX)
            .collect();
        if !fresh.is_empty() {
            let v = fresh[rng.below(fresh.len() as u64) as usize];
            pos[v as usize] = path.len() as u32;
            path.push(v);
            continue;
        }
        // Stuck: rotate. A neighbor at path index i yields a new endpoint
        // path[i+1] after reversing the tail.
        if rotations_left == 0 || reversal_budget == 0 {
            break;
        }
        rotations_left -= 1;
        let pivots: Vec<u32> = view
            .neighbors(end)
            .iter()
            .copied()
            .filter(|&u| {
                let i = pos[u as usize];
                i != u32::MAX && (i as usize) + 2 < path.len()
            })
            .collect();
        if pivots.is_empty() {
            break;
        }
        let pivot = pivots[rng.below(pivots.len() as u64) as usize];
        let i = pos[pivot as usize] as usize;
        reversal_budget = reversal_budget.saturating_sub((path.len() - i - 1) as u64);
        path[i + 1..].reverse();
        for (idx, &v) in path.iter().enumerate().skip(i + 1) {
            pos[v as usize] = idx as u32;
        }
    }

    // Close the widest chord anywhere along the path: the vertices
    // between the chord's endpoints are consecutive path entries, so a
    // chord spanning s path positions closes a cycle of length s + 1.
    let mut best: Option<(usize, usize)> = None;
    for (j, &v) in path.iter().enumerate() {
        for &u in view.neighbors(v) {
            let i = pos[u as usize];
            if i == u32::MAX {
                continue;
            }
            let i = i as usize;
            if i + 2 <= j && best.is_none_or(|(bi, bj)| j - i > bj - bi) {
                best = Some((i, j));
            }
        }
    }
    match best {
        Some((i, j)) => path[i..=j].to_vec(),
        None => Vec::new(),
    }
}

/// Heuristic lower bound on the circumference of a connected view.
///
/// Runs `budget` independent randomized growth attempts inside the
/// 2-core and returns the length of the longest verified cycle found; 0
/// when the view is a tree (equivalently, when its 2-core is empty).
pub fn longest_cycle(view: &ComponentView, budget: u32, seed: u64) -> u64 {
    if view.n() < 3 || view.edge_count() < view.n() {
        // Fewer edges than vertices in a connected graph means a tree.
        return 0;
    }
    let alive = two_core(view);
    let core: Vec<u32> = (0..view.n() as u32)
        .filter(|&v| alive[v as usize])
        .collect();
    if core.len() < 3 {
        return 0;
    }
    let rng = Stream::new(seed);
    (0..budget)
        .into_par_iter()
        .map(|i| {
            let mut r = rng.child(i as u64);
            let cycle = grow_once(view, &core, &alive, &mut r);
            if verify_cycle(view, &cycle) {
                cycle.len() as u64
            } else {
                0
            }
        })
        .max()
        .unwrap_or(0)
}
