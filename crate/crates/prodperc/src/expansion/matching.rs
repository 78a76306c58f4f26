//! Maximum bipartite matching by augmenting paths.

use crate::error::{Error, Result};

/// Maximum matching size in the bipartite graph with `n_left` and
/// `n_right` vertices and the given (left, right) edges.
pub fn max_bipartite_matching(n_left: u32, n_right: u32, edges: &[(u32, u32)]) -> Result<u64> {
    let mut adj = vec![Vec::new(); n_left as usize];
    for &(l, r) in edges {
        if l >= n_left || r >= n_right {
            return Err(Error::InvalidArgument(format!(
                "edge ({l}, {r}) outside declared sides {n_left} x {n_right}"
            )));
        }
        adj[l as usize].push(r);
    }
    let mut pair_right: Vec<Option<u32>> = vec![None; n_right as usize];
    let mut matched = 0u64;
    let mut visited = vec![u32::MAX; n_right as usize];
    for l in 0..n_left {
        if augment(l, &adj, &mut pair_right, &mut visited, l) {
            matched += 1;
        }
    }
    Ok(matched)
}

/// One augmenting-path search from left vertex `l`; `stamp` marks the
/// per-phase visited set without reallocating.
fn augment(
    l: u32,
    adj: &[Vec<u32>],
    pair_right: &mut [Option<u32>],
    visited: &mut [u32],
    stamp: u32,
) -> bool {
    for &r in &adj[l as usize] {
        if visited[r as usize] == stamp {
            continue;
        }
        visited[r as usize] = stamp;
        match pair_right[r as usize] {
            None => {
                pair_right[r as usize] = Some(l);
                return true;
            }
            Some(other) => {
                if augment(other, adj, pair_right, visited, stamp) {
                    pair_right[r as usize] = Some(l);
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    /// Exhaustive oracle: bitmask dynamic program over used right
    /// vertices (sides stay <= 10, so the state space is tiny).
    fn oracle(n_left: usize, n_right: usize, adj: &[Vec<u32>]) -> u64 {
        let mut memo = vec![vec![-1i8; 1 << n_right]; n_left + 1];
        fn go(l: usize, mask: usize, adj: &[Vec<u32>], memo: &mut [Vec<i8>]) -> i8 {
            if l == adj.len() {
                return 0;
            }
            if memo[l][mask] >= 0 {
                return memo[l][mask];
            }
            let mut best = go(l + 1, mask, adj, memo);
            for &r in &adj[l] {
                if mask >> r & 1 == 0 {
                    best = best.max(1 + go(l + 1, mask | (1 << r), adj, memo));
                }
            }
            memo[l][mask] = best;
            best
        }
        go(0, 0, adj, &mut memo) as u64
    }

    #[test]
    fn identity_edges_give_perfect_matching() {
        for m in 1..=6u32 {
            let edges: Vec<(u32, u32)> = (0..m).map(|i| (i, i)).collect();
            assert_eq!(max_bipartite_matching(m, m, &edges).unwrap(), m as u64);
        }
    }

    #[test]
    fn complete_bipartite_matches_smaller_side() {
        let edges: Vec<(u32, u32)> = (0..4).flat_map(|l| (0..7).map(move |r| (l, r))).collect();
        assert_eq!(max_bipartite_matching(4, 7, &edges).unwrap(), 4);
    }

    #[test]
    fn star_matches_one() {
        let edges: Vec<(u32, u32)> = (0..9).map(|r| (0, r)).collect();
        assert_eq!(max_bipartite_matching(1, 9, &edges).unwrap(), 1);
    }

    #[test]
    fn empty_graph_matches_zero() {
        assert_eq!(max_bipartite_matching(5, 5, &[]).unwrap(), 0);
    }

    #[test]
    fn rejects_out_of_range_endpoints() {
        assert!(max_bipartite_matching(2, 2, &[(2, 0)]).is_err());
        assert!(max_bipartite_matching(2, 2, &[(0, 5)]).is_err());
    }

    #[test]
    fn agrees_with_exhaustive_oracle() {
        let mut rng = Stream::new(0xbead);
        for round in 0..500 {
            let n_left = 1 + rng.below(10) as u32;
            let n_right = 1 + rng.below(10) as u32;
            let mut edges = Vec::new();
            for l in 0..n_left {
                for r in 0..n_right {
                    if rng.next_u01() < 0.3 {
                        edges.push((l, r));
                    }
                }
            }
            let fast = max_bipartite_matching(n_left, n_right, &edges).unwrap();
            let mut adj = vec![Vec::new(); n_left as usize];
            for &(l, r) in &edges {
                adj[l as usize].push(r);
            }
            let slow = oracle(n_left as usize, n_right as usize, &adj);
            assert_eq!(fast, slow, "round {round}: {n_left}x{n_right} {edges:?}");
            assert!(fast <= n_left.min(n_right) as u64);
        }
    }
}
