//! Exact counts of k-vertex subtrees.
//!
//! A subtree on `k` labelled vertices is a spanning tree of some connected
//! induced `k`-subset, so the count factors into two exact pieces:
//! enumerate connected `k`-subsets (the classic extension-set search that
//! visits each subset exactly once), then count spanning trees of each via
//! the matrix-tree theorem with an integer Bareiss elimination.

use crate::error::{Error, Result};
use crate::graph::ProductGraph;

const GUARD_N: u64 = 64;
const GUARD_K: u64 = 6;

/// Spanning trees of the graph induced on `members` (distinct vertex ids),
/// by integer determinant of the reduced Laplacian.
fn spanning_trees(graph: &ProductGraph, members: &[u64]) -> u128 {
    let k = members.len();
    if k == 1 {
        return 1;
    }
    // Reduced Laplacian over the first k-1 members.
    let mut a = vec![vec![0i128; k - 1]; k - 1];
    for i in 0..k {
        for j in (i + 1)..k {
            let adjacent = graph
                .neighbors(members[i])
                .binary_search(&members[j])
                .is_ok();
            if adjacent {
                if i < k - 1 {
                    a[i][i] += 1;
                    if j < k - 1 {
                        a[i][j] -= 1;
                        a[j][i] -= 1;
                    }
                }
                if j < k - 1 {
                    a[j][j] += 1;
                }
            }
        }
    }
    bareiss_determinant(&mut a) as u128
}

/// Fraction-free Gaussian elimination; exact for integer matrices. The
/// entries stay bounded here (order <= 5 minors of small Laplacians).
fn bareiss_determinant(a: &mut [Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for p in 0..n - 1 {
        if a[p][p] == 0 {
            let swap = (p + 1..n).find(|&r| a[r][p] != 0);
            match swap {
                Some(r) => {
                    a.swap(p, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in p + 1..n {
            for j in p + 1..n {
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
            }
            a[i][p] = 0;
        }
        prev = a[p][p];
    }
    sign * a[n - 1][n - 1]
}

/// Enumerates connected k-subsets containing `root` whose other vertices
/// all exceed `root`. `visited` marks the subset plus everything that has
/// ever entered the candidate pool on this branch; only fresh vertices
/// extend the pool, which is what makes each subset appear exactly once.
fn extend(
    graph: &ProductGraph,
    root: u64,
    subset: &mut Vec<u64>,
    ext: &[u64],
    visited: u64,
    k: usize,
    total: &mut u128,
) {
    if subset.len() == k {
        *total += spanning_trees(graph, subset);
        return;
    }
    for (i, &w) in ext.iter().enumerate() {
        // Later iterations exclude w, so every subset splits uniquely by
        // its first pool pick.
        let mut next: Vec<u64> = ext[i + 1..].to_vec();
        let mut vis = visited;
        for &u in &graph.neighbors(w) {
            if u > root && vis >> u & 1 == 0 {
                vis |= 1 << u;
                next.push(u);
            }
        }
        subset.push(w);
        extend(graph, root, subset, &next, vis, k, total);
        subset.pop();
    }
}

/// Counts subtrees on exactly `k` vertices: pairs (S, T) where S is a
/// k-subset of vertices and T a spanning tree of the induced graph on S.
/// Guarded at `n <= 64`, `k <= 6`.
pub fn count_trees(graph: &ProductGraph, k: u64) -> Result<u128> {
    let n = graph.n();
    if n > GUARD_N {
        return Err(Error::Guard(format!(
            "exact subtree count is limited to n <= {GUARD_N}, got {n}"
        )));
    }
    if k < 1 || k > GUARD_K {
        return Err(Error::InvalidArgument(format!(
            "subtree size must be in [1, {GUARD_K}], got {k}"
        )));
    }
    if k > n {
        return Ok(0);
    }
    if k == 1 {
        return Ok(n as u128);
    }
    let k = k as usize;
    let mut total = 0u128;
    for root in 0..n {
        let ext: Vec<u64> = graph
            .neighbors(root)
            .into_iter()
            .filter(|&u| u > root)
            .collect();
        let visited = ext.iter().fold(1u64 << root, |m, &u| m | (1 << u));
        extend(graph, root, &mut vec![root], &ext, visited, k, &mut total);
    }
    Ok(total)
}

/// The crude envelope `t_k <= n * (e * d)^(k-1)` for d-regular graphs.
pub fn tree_count_envelope(n: u64, d: u32, k: u64) -> f64 {
    n as f64 * (std::f64::consts::E * d as f64).powi(k as i32 - 1)
}
