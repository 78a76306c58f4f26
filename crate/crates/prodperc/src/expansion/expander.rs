//! Extraction of a well-expanding subgraph from the giant component.
//!
//! Starting from the whole component, the extractor repeatedly hunts for
//! a violating set `B` (at most half the surviving vertices, with
//! `|N_H(B)| < c_target * |B| / (d ln d)`), removes it, and stops when a
//! full round of probes finds nothing. Violators are searched three ways:
//! disconnected pieces are violators outright, sweep cuts over an
//! approximate second eigenvector of the lazy walk catch global
//! bottlenecks, and randomized connected probes catch local ones. The
//! returned certificate is exhaustion of the probe budget, not a proof.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::view::ComponentView;

/// Extraction tuning; defaults are sized for desk-scale runs.
#[derive(Clone, Debug)]
pub struct ExtractOptions {
    pub c_target: f64,
    /// Supercriticality parameter; extraction fails if the survivor set
    /// drops below `eps * n / 2`.
    pub eps: f64,
    pub seed: u64,
    /// Power-iteration steps per sweep vector.
    pub power_iterations: u32,
    /// Eigenvector sweeps per round.
    pub sweeps_per_round: u32,
    /// Randomized connected probes per round.
    pub connected_probes: u32,
    /// Safety valve on removal rounds.
    pub max_rounds: u32,
}

impl ExtractOptions {
    pub fn new(c_target: f64, eps: f64, seed: u64) -> Self {
        ExtractOptions {
            c_target,
            eps,
            seed,
            power_iterations: 40,
            sweeps_per_round: 4,
            connected_probes: 64,
            max_rounds: 10_000,
        }
    }
}

/// One logged removal.
#[derive(Clone, Debug, Serialize)]
pub struct RemovalEvent {
    pub iteration: u32,
    pub method: &'static str,
    pub removed: u64,
    pub neighborhood: u64,
    pub threshold: f64,
    pub alive_after: u64,
}

#[derive(Clone, Debug)]
pub struct ExpanderResult {
    /// Local ids (within the input component) of the surviving subgraph.
    pub members: Vec<u32>,
    pub log: Vec<RemovalEvent>,
    /// Probes evaluated in the final, violator-free round.
    pub certified_probes: u64,
}

struct Hunt<'a> {
    view: &'a ComponentView,
    alive: Vec<bool>,
    alive_count: u64,
    /// threshold(B) = coef * |B|
    coef: f64,
}

impl<'a> Hunt<'a> {
    fn deg_alive(&self, v: u32) -> u32 {
        self.view
            .neighbors(v)
            .iter()
            .filter(|&&u| self.alive[u as usize])
            .count() as u32
    }

    fn neighborhood_of(&self, members: &[u32], in_set: &mut [bool], seen: &mut [bool]) -> u64 {
        for &v in members {
            in_set[v as usize] = true;
        }
        let mut count = 0u64;
        for &v in members {
            for &u in self.view.neighbors(v) {
                if self.alive[u as usize] && !in_set[u as usize] && !seen[u as usize] {
                    seen[u as usize] = true;
                    count += 1;
                }
            }
        }
        for &v in members {
            in_set[v as usize] = false;
            for &u in self.view.neighbors(v) {
                seen[u as usize] = false;
            }
        }
        count
    }

    /// Components of the surviving subgraph, each sorted, largest last.
    fn components(&self) -> Vec<Vec<u32>> {
        let n = self.view.n() as usize;
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n as u32 {
            if !self.alive[start as usize] || seen[start as usize] {
                continue;
            }
            let mut comp = vec![start];
            seen[start as usize] = true;
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for &u in self.view.neighbors(v) {
                    if self.alive[u as usize] && !seen[u as usize] {
                        seen[u as usize] = true;
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by_key(|c| (c.len(), std::cmp::Reverse(c[0])));
        comps
    }

    /// Approximate second eigenvector of the lazy walk on the survivors,
    /// by power iteration with stationary-component deflation.
    fn fiedler_order(&self, iterations: u32, rng: &mut Stream) -> Vec<u32> {
        let ids: Vec<u32> = (0..self.view.n() as u32)
            .filter(|&v| self.alive[v as usize])
            .collect();
        let n = self.view.n() as usize;
        let deg: Vec<f64> = (0..n as u32).map(|v| self.deg_alive(v) as f64).collect();
        let total: f64 = ids.iter().map(|&v| deg[v as usize]).sum();
        if total == 0.0 {
            return ids;
        }
        let mut x = vec![0.0f64; n];
        for &v in &ids {
            x[v as usize] = rng.next_u01() - 0.5;
        }
        let mut y = vec![0.0f64; n];
        for _ in 0..iterations {
            // Deflate the stationary direction (all-ones in walk space).
            let drift: f64 = ids
                .iter()
                .map(|&v| deg[v as usize] / total * x[v as usize])
                .sum();
            for &v in &ids {
                x[v as usize] -= drift;
            }
            // One lazy-walk step.
            for &v in &ids {
                let mut acc = 0.0;
                for &u in self.view.neighbors(v) {
                    if self.alive[u as usize] {
                        acc += x[u as usize];
                    }
                }
                let dv = deg[v as usize];
                y[v as usize] = if dv > 0.0 {
                    0.5 * x[v as usize] + 0.5 * acc / dv
                } else {
                    x[v as usize]
                };
            }
            std::mem::swap(&mut x, &mut y);
            let scale = ids
                .iter()
                .map(|&v| x[v as usize].abs())
                .fold(0.0f64, f64::max);
            if scale <= f64::MIN_POSITIVE {
                break;
            }
            for &v in &ids {
                x[v as usize] /= scale;
            }
        }
        let mut order = ids;
        order.sort_by(|&a, &b| {
            x[b as usize]
                .partial_cmp(&x[a as usize])
                .expect("iteration keeps values finite")
                .then(a.cmp(&b))
        });
        order
    }

    /// Scans prefixes of `order` up to half the survivors, maintaining
    /// `|N_H(prefix)|` incrementally; returns the deepest-margin violator
    /// as (prefix length, neighborhood size).
    fn sweep_violator(&self, order: &[u32]) -> Option<(usize, u64)> {
        let half = (self.alive_count / 2) as usize;
        let n = self.view.n() as usize;
        let mut in_set = vec![false; n];
        let mut adj_in = vec![0u32; n];
        let mut boundary_n = 0u64;
        let mut best: Option<(usize, u64, f64)> = None;
        for (i, &v) in order.iter().enumerate().take(half) {
            if adj_in[v as usize] > 0 {
                boundary_n -= 1;
            }
            in_set[v as usize] = true;
            for &u in self.view.neighbors(v) {
                if self.alive[u as usize] {
                    adj_in[u as usize] += 1;
                    if !in_set[u as usize] && adj_in[u as usize] == 1 {
                        boundary_n += 1;
                    }
                }
            }
            let k = i + 1;
            let threshold = self.coef * k as f64;
            if (boundary_n as f64) < threshold {
                let margin = threshold - boundary_n as f64;
                if best.map_or(true, |(_, _, m)| margin > m) {
                    best = Some((k, boundary_n, margin));
                }
            }
        }
        best.map(|(k, nb, _)| (k, nb))
    }

    /// Connected subset grown inside the survivors.
    fn grown_probe(&self, size: u64, rng: &mut Stream) -> Vec<u32> {
        let ids: Vec<u32> = (0..self.view.n() as u32)
            .filter(|&v| self.alive[v as usize])
            .collect();
        let mut in_set = vec![false; self.view.n() as usize];
        let mut members = Vec::new();
        let mut frontier = vec![ids[rng.below(ids.len() as u64) as usize]];
        while (members.len() as u64) < size && !frontier.is_empty() {
            let i = rng.below(frontier.len() as u64) as usize;
            let v = frontier.swap_remove(i);
            if in_set[v as usize] {
                continue;
            }
            in_set[v as usize] = true;
            members.push(v);
            for &u in self.view.neighbors(v) {
                if self.alive[u as usize] && !in_set[u as usize] {
                    frontier.push(u);
                }
            }
        }
        members.sort_unstable();
        members
    }
}

/// Approximate second-eigenvector ordering of the lazy walk on a whole
/// view; shared with the conductance profile's sweep cuts.
pub(crate) fn spectral_order(
    view: &ComponentView,
    iterations: u32,
    rng: &mut Stream,
) -> Vec<u32> {
    let hunt = Hunt {
        view,
        alive: vec![true; view.n() as usize],
        alive_count: view.n(),
        coef: 0.0,
    };
    hunt.fiedler_order(iterations, rng)
}

/// Extracts a subgraph of the component whose sampled cuts all meet the
/// `c_target / (d ln d)` neighborhood-expansion threshold. `n` and `d`
/// are ambient product-graph quantities.
pub fn extract_expander(
    view: &ComponentView,
    n: u64,
    d: u32,
    opts: &ExtractOptions,
) -> Result<ExpanderResult> {
    if opts.c_target < 0.0 || !opts.c_target.is_finite() {
        return Err(Error::InvalidArgument(
            "c_target must be finite and non-negative".into(),
        ));
    }
    if opts.eps <= 0.0 || !opts.eps.is_finite() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if d < 2 {
        return Err(Error::InvalidArgument(
            "expansion thresholds need degree at least 2".into(),
        ));
    }
    let floor = opts.eps * n as f64 / 2.0;
    let coef = opts.c_target / (d as f64 * (d as f64).ln());
    let mut hunt = Hunt {
        view,
        alive: vec![true; view.n() as usize],
        alive_count: view.n(),
        coef,
    };
    let mut log = Vec::new();
    let rng = Stream::new(opts.seed);
    let mut in_set_buf = vec![false; view.n() as usize];
    let mut seen_buf = vec![false; view.n() as usize];

    for round in 0..opts.max_rounds {
        let round_rng = rng.child(round as u64);
        let mut probes_this_round = 0u64;

        // Disconnected survivors: every non-largest piece violates any
        // positive threshold (its neighborhood in H is empty).
        let comps = hunt.components();
        if comps.len() > 1 && opts.c_target > 0.0 {
            let mut removed_any = false;
            for comp in &comps[..comps.len() - 1] {
                let threshold = hunt.coef * comp.len() as f64;
                if 0.0 < threshold {
                    for &v in comp {
                        hunt.alive[v as usize] = false;
                    }
                    hunt.alive_count -= comp.len() as u64;
                    log.push(RemovalEvent {
                        iteration: round,
                        method: "component",
                        removed: comp.len() as u64,
                        neighborhood: 0,
                        threshold,
                        alive_after: hunt.alive_count,
                    });
                    removed_any = true;
                }
            }
            if (hunt.alive_count as f64) < floor {
                return Err(Error::Unsatisfiable(
                    "target expansion unachievable at this scale".into(),
                ));
            }
            if removed_any {
                continue;
            }
        }

        // Sweep cuts over approximate eigenvector orderings, both ends.
        let mut best: Option<(Vec<u32>, u64, &'static str, f64)> = None;
        if hunt.alive_count >= 2 {
            for s in 0..opts.sweeps_per_round {
                let mut srng = round_rng.child(1 + s as u64);
                let order = hunt.fiedler_order(opts.power_iterations, &mut srng);
                for dir in 0..2 {
                    let ord: Vec<u32> = if dir == 0 {
                        order.clone()
                    } else {
                        order.iter().rev().copied().collect()
                    };
                    probes_this_round += 1;
                    if let Some((k, nb)) = hunt.sweep_violator(&ord) {
                        let threshold = hunt.coef * k as f64;
                        let margin = threshold - nb as f64;
                        if best.as_ref().map_or(true, |&(_, _, _, m)| margin > m) {
                            best = Some((ord[..k].to_vec(), nb, "sweep", margin));
                        }
                    }
                }
            }
            // Randomized connected probes.
            let half = hunt.alive_count / 2;
            if half >= 1 {
                for pidx in 0..opts.connected_probes {
                    let mut prng = round_rng.child(1000 + pidx as u64);
                    let size = 1 + prng.below(half);
                    let members = hunt.grown_probe(size, &mut prng);
                    if (members.len() as u64) > half {
                        continue;
                    }
                    probes_this_round += 1;
                    let nb = hunt.neighborhood_of(&members, &mut in_set_buf, &mut seen_buf);
                    let threshold = hunt.coef * members.len() as f64;
                    if (nb as f64) < threshold {
                        let margin = threshold - nb as f64;
                        if best.as_ref().map_or(true, |&(_, _, _, m)| margin > m) {
                            best = Some((members, nb, "probe", margin));
                        }
                    }
                }
            }
        }

        match best {
            Some((members, nb, method, _)) => {
                let threshold = hunt.coef * members.len() as f64;
                for &v in &members {
                    hunt.alive[v as usize] = false;
                }
                hunt.alive_count -= members.len() as u64;
                log.push(RemovalEvent {
                    iteration: round,
                    method,
                    removed: members.len() as u64,
                    neighborhood: nb,
                    threshold,
                    alive_after: hunt.alive_count,
                });
                if (hunt.alive_count as f64) < floor {
                    return Err(Error::Unsatisfiable(
                        "target expansion unachievable at this scale".into(),
                    ));
                }
            }
            None => {
                let members: Vec<u32> = (0..view.n() as u32)
                    .filter(|&v| hunt.alive[v as usize])
                    .collect();
                return Ok(ExpanderResult {
                    members,
                    log,
                    certified_probes: probes_this_round,
                });
            }
        }
    }
    Err(Error::Guard(
        "expander extraction exceeded its round budget".into(),
    ))
}
