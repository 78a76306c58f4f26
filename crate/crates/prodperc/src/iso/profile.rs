//! Exact isoperimetric profiles by exhaustive subset walk.
//!
//! All `2^n` subsets are visited in Gray-code order so each step flips
//! one vertex and updates the boundary incrementally. Guarded at
//! `n <= 24`; the index space is split into ranges that rayon walks
//! independently (each range re-derives its starting state), and the
//! per-size minima merge deterministically.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ProductGraph;

/// Exact profile: for each size `k`, the minimum boundary `i_k * k` as an
/// integer plus one witness subset (as a bit mask over vertex ids).
#[derive(Clone, Debug)]
pub struct IsoProfile {
    /// `min_boundary[k-1]` is the minimum over subsets of size `k`.
    pub min_boundary: Vec<u64>,
    /// A subset attaining the minimum, lowest mask value among minima.
    pub witness: Vec<u32>,
}

impl IsoProfile {
    /// Profile value `i_k = min_boundary / k`.
    pub fn i_k(&self, k: u64) -> f64 {
        self.min_boundary[k as usize - 1] as f64 / k as f64
    }

    pub fn k_max(&self) -> u64 {
        self.min_boundary.len() as u64
    }
}

const GUARD_N: u64 = 24;

/// Walk one Gray-code index range, folding minima into `best`.
fn walk_range(
    lo: u64,
    hi: u64,
    k_max: usize,
    deg: &[i64],
    nbr: &[u32],
    best: &mut [(u64, u32)],
) {
    // State at subset index lo.
    let mut mask = (lo ^ (lo >> 1)) as u32;
    let mut size = mask.count_ones() as usize;
    let mut boundary: i64 = {
        let mut b = 0i64;
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            b += deg[v] - 2 * (nbr[v] & mask).count_ones() as i64;
            bits &= bits - 1;
        }
        b
    };
    let mut consider = |size: usize, boundary: i64, mask: u32| {
        if size >= 1 && size <= k_max {
            let entry = &mut best[size - 1];
            let cand = (boundary as u64, mask);
            if cand < *entry {
                *entry = cand;
            }
        }
    };
    consider(size, boundary, mask);
    for i in lo..hi.saturating_sub(1) {
        let v = (i + 1).trailing_zeros() as usize;
        let bit = 1u32 << v;
        if mask & bit == 0 {
            boundary += deg[v] - 2 * (nbr[v] & mask).count_ones() as i64;
            mask |= bit;
            size += 1;
        } else {
            mask &= !bit;
            boundary -= deg[v] - 2 * (nbr[v] & mask).count_ones() as i64;
            size -= 1;
        }
        consider(size, boundary, mask);
    }
}

/// Exact profile for sizes `1..=k_max`. Refuses graphs with more than 24
/// vertices (the walk is exponential by construction).
pub fn exact_iso_profile(graph: &ProductGraph, k_max: u64) -> Result<IsoProfile> {
    let n = graph.n();
    if n > GUARD_N {
        return Err(Error::Guard(format!(
            "exact profile is limited to n <= {GUARD_N}, got {n}"
        )));
    }
    if k_max < 1 || k_max > n {
        return Err(Error::InvalidArgument(format!(
            "k_max must be in [1, n], got {k_max}"
        )));
    }
    let k_max = k_max as usize;
    let deg: Vec<i64> = (0..n).map(|v| graph.degree_of(v) as i64).collect();
    let nbr: Vec<u32> = (0..n)
        .map(|v| {
            graph
                .neighbors(v)
                .into_iter()
                .fold(0u32, |m, u| m | (1 << u))
        })
        .collect();

    let total: u64 = 1u64 << n;
    let chunk: u64 = 1 << 16;
    let ranges: Vec<(u64, u64)> = (0..total.div_ceil(chunk))
        .map(|i| (i * chunk, ((i + 1) * chunk).min(total)))
        .collect();
    let best = ranges
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut best = vec![(u64::MAX, u32::MAX); k_max];
            walk_range(lo, hi, k_max, &deg, &nbr, &mut best);
            best
        })
        .reduce(
            || vec![(u64::MAX, u32::MAX); k_max],
            |mut a, b| {
                for (ea, eb) in a.iter_mut().zip(b) {
                    if eb < *ea {
                        *ea = eb;
                    }
                }
                a
            },
        );
    Ok(IsoProfile {
        min_boundary: best.iter().map(|&(b, _)| b).collect(),
        witness: best.iter().map(|&(_, w)| w).collect(),
    })
}

/// True when `mask` is a subcube of the hypercube `Q^t`: all members
/// agree outside a set of free coordinates that they exhaust.
pub fn is_subcube(t: usize, mask: u32) -> bool {
    let size = mask.count_ones();
    if size == 0 {
        return false;
    }
    if !size.is_power_of_two() {
        return false;
    }
    let mut and = u32::MAX;
    let mut or = 0u32;
    let mut bits = mask;
    while bits != 0 {
        let v = bits.trailing_zeros();
        and &= v;
        or |= v;
        bits &= bits - 1;
    }
    let free = or ^ and;
    if free.count_ones() != size.trailing_zeros() {
        return false;
    }
    if free & !((1u32 << t) - 1) != 0 {
        return false;
    }
    // All members share the fixed coordinates; since they are distinct
    // and only `log2 size` coordinates are free, they fill the subcube.
    let fixed = !free;
    let mut bits = mask;
    while bits != 0 {
        let v = bits.trailing_zeros();
        if v & fixed != and & fixed {
            return false;
        }
        bits &= bits - 1;
    }
    true
}
