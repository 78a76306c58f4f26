//! Partitioning a tree into small connected, barely-overlapping parts.
//!
//! Target invariants, for part sizes `ell <= |A_i| <= 3*ell`:
//!   (a) the parts cover all vertices,
//!   (b) each part induces a connected subtree,
//!   (c) each part shares at most one vertex with the union of the others,
//!   (d) the size bounds hold.
//!
//! The construction works bottom-up. Every vertex carries a "pending" set
//! (itself plus undersized child material, always below `ell`). When a
//! vertex's pending material would reach `ell`, the vertex becomes a hub:
//! its child pendings are grouped greedily into batches of combined size
//! at least `ell - 1`, each batch plus the hub is emitted as one part, and
//! nothing flows upward. Hubs are consumed where they flush, so distinct
//! parts can only ever share a hub, which pins the overlap at one vertex.
//! If the root is left holding an undersized remainder, the remainder is
//! handed to an adjacent hub and that hub's batches are regrouped.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::view::ComponentView;

/// A tree partition; see the module docs for the invariants.
#[derive(Clone, Debug)]
pub struct TreeDecomposition {
    /// Sorted vertex lists.
    pub parts: Vec<Vec<u32>>,
    pub ell: u64,
}

impl TreeDecomposition {
    /// Mechanically verifies all four invariants against the tree.
    pub fn validate(&self, adj: &[Vec<u32>]) -> Result<()> {
        let n = adj.len();
        let mut multiplicity = vec![0u32; n];
        for part in &self.parts {
            let size = part.len() as u64;
            if size < self.ell || size > 3 * self.ell {
                return Err(Error::Unsatisfiable(format!(
                    "part size {size} outside [{}, {}]",
                    self.ell,
                    3 * self.ell
                )));
            }
            for &v in part {
                multiplicity[v as usize] += 1;
            }
            if !connected_in(adj, part) {
                return Err(Error::Unsatisfiable(format!(
                    "part {part:?} is not connected in the tree"
                )));
            }
        }
        if multiplicity.iter().any(|&c| c == 0) {
            return Err(Error::Unsatisfiable("parts do not cover the tree".into()));
        }
        for part in &self.parts {
            let shared = part
                .iter()
                .filter(|&&v| multiplicity[v as usize] > 1)
                .count();
            if shared > 1 {
                return Err(Error::Unsatisfiable(format!(
                    "part {part:?} shares {shared} vertices with the rest"
                )));
            }
        }
        Ok(())
    }
}

fn connected_in(adj: &[Vec<u32>], part: &[u32]) -> bool {
    if part.is_empty() {
        return false;
    }
    let inside: HashSet<u32> = part.iter().copied().collect();
    let mut seen = HashSet::new();
    seen.insert(part[0]);
    let mut stack = vec![part[0]];
    while let Some(v) = stack.pop() {
        for &u in &adj[v as usize] {
            if inside.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == part.len()
}

/// Checks that `adj` is a symmetric adjacency of one tree.
fn validate_tree(adj: &[Vec<u32>]) -> Result<()> {
    let n = adj.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty vertex set".into()));
    }
    let mut directed = HashSet::new();
    let mut half_edges = 0u64;
    for (v, list) in adj.iter().enumerate() {
        for &u in list {
            if u as usize >= n || u as usize == v {
                return Err(Error::InvalidArgument(format!(
                    "bad neighbor {u} of vertex {v}"
                )));
            }
            if !directed.insert((v as u32, u)) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge {v}-{u}"
                )));
            }
            half_edges += 1;
        }
    }
    for &(v, u) in &directed {
        if !directed.contains(&(u, v)) {
            return Err(Error::InvalidArgument(format!(
                "asymmetric adjacency at {v}-{u}"
            )));
        }
    }
    if half_edges != 2 * (n as u64 - 1) {
        return Err(Error::InvalidArgument(format!(
            "not a tree: {} edges on {n} vertices",
            half_edges / 2
        )));
    }
    // Connectivity.
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0u32];
    let mut reached = 1usize;
    while let Some(v) = stack.pop() {
        for &u in &adj[v as usize] {
            if !seen[u as usize] {
                seen[u as usize] = true;
                reached += 1;
                stack.push(u);
            }
        }
    }
    if reached != n {
        return Err(Error::InvalidArgument("not a tree: disconnected".into()));
    }
    Ok(())
}

/// Greedy batching of pieces (each of size <= ell-1, total >= ell-1):
/// close a batch as soon as it reaches ell-1; fold the remainder into the
/// last batch. Batch totals land in [ell-1, 3*ell-5].
fn batch_pieces(pieces: Vec<Vec<u32>>, ell: u64) -> Vec<Vec<u32>> {
    let mut batches: Vec<Vec<u32>> = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    for piece in pieces {
        current.extend(piece);
        if current.len() as u64 >= ell.saturating_sub(1) {
            batches.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        batches
            .last_mut()
            .expect("total piece size >= ell-1 closes a batch")
            .extend(current);
    }
    batches
}

/// Decomposes a tree (symmetric adjacency lists) into parts of size
/// between `ell` and `3*ell` satisfying the module invariants.
pub fn tree_decompose(adj: &[Vec<u32>], ell: u64) -> Result<TreeDecomposition> {
    validate_tree(adj)?;
    let n = adj.len() as u64;
    if ell < 1 {
        return Err(Error::InvalidArgument("ell must be at least 1".into()));
    }
    if n < ell {
        return Err(Error::InvalidArgument(format!(
            "tree has {n} vertices, fewer than ell = {ell}"
        )));
    }
    if n <= 3 * ell {
        let everything: Vec<u32> = (0..n as u32).collect();
        return Ok(TreeDecomposition {
            parts: vec![everything],
            ell,
        });
    }

    // Root at vertex 0; BFS order gives parents before children, so the
    // reverse is a valid bottom-up order. Sorted adjacency keeps the
    // whole construction deterministic.
    let n = adj.len();
    let root = 0u32;
    let mut parent = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    parent[0] = root;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let mut nbrs: Vec<u32> = adj[v as usize].clone();
        nbrs.sort_unstable();
        for u in nbrs {
            if parent[u as usize] == u32::MAX && u != root {
                parent[u as usize] = v;
                order.push(u);
            }
        }
    }

    let mut pending: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut hub_pieces: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    let mut is_hub = vec![false; n];
    // Children listed in BFS discovery order.
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &v in order.iter().skip(1) {
        children[parent[v as usize] as usize].push(v);
    }
    for &v in order.iter().rev() {
        let pieces: Vec<Vec<u32>> = children[v as usize]
            .iter()
            .map(|&c| std::mem::take(&mut pending[c as usize]))
            .filter(|p| !p.is_empty())
            .collect();
        let total = 1 + pieces.iter().map(|p| p.len() as u64).sum::<u64>();
        if total <= ell - 1 {
            let mut mine = vec![v];
            for p in pieces {
                mine.extend(p);
            }
            pending[v as usize] = mine;
        } else {
            is_hub[v as usize] = true;
            hub_pieces[v as usize] = pieces;
        }
    }

    // An undersized remainder at the root joins an adjacent hub: some
    // vertex of the remainder has a flushed child (otherwise nothing
    // flushed anywhere and the base case would have applied).
    let remainder = std::mem::take(&mut pending[root as usize]);
    if !remainder.is_empty() {
        let mut sorted = remainder.clone();
        sorted.sort_unstable();
        let hub = sorted
            .iter()
            .flat_map(|&r| {
                let mut nbrs = adj[r as usize].clone();
                nbrs.sort_unstable();
                nbrs
            })
            .find(|&u| is_hub[u as usize])
            .ok_or_else(|| {
                Error::Unsatisfiable("internal: remainder has no adjacent hub".into())
            })?;
        hub_pieces[hub as usize].push(remainder);
    }

    let mut parts = Vec::new();
    for v in 0..n {
        if !is_hub[v] {
            continue;
        }
        let pieces = std::mem::take(&mut hub_pieces[v]);
        if pieces.is_empty() {
            parts.push(vec![v as u32]);
            continue;
        }
        for batch in batch_pieces(pieces, ell) {
            let mut part = vec![v as u32];
            part.extend(batch);
            part.sort_unstable();
            parts.push(part);
        }
    }
    Ok(TreeDecomposition { parts, ell })
}

/// BFS spanning tree of a component, as symmetric adjacency lists over
/// the component's local ids.
pub fn spanning_tree(view: &ComponentView) -> Vec<Vec<u32>> {
    let n = view.n() as usize;
    let mut adj = vec![Vec::new(); n];
    if n == 0 {
        return adj;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0u32]);
    while let Some(v) = queue.pop_front() {
        for &u in view.neighbors(v) {
            if !seen[u as usize] {
                seen[u as usize] = true;
                adj[v as usize].push(u);
                adj[u as usize].push(v);
                queue.push_back(u);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}
