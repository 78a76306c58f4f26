//! Vertex-disjoint short paths between two vertex sets, counted exactly
//! for the layer-monotone notion: paths that advance one BFS layer (from
//! A) per step and end at their first B vertex. This lower-bounds the
//! unrestricted disjoint-path count and is exact when every short path is
//! layer-monotone (always true at maxlen = 1).

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::percolation::EdgeSample;
use crate::subset::VertexSubset;

/// Unit-capacity flow network (Dinic).
struct FlowNet {
    adj: Vec<Vec<FlowEdge>>,
}

#[derive(Clone, Copy)]
struct FlowEdge {
    to: u32,
    rev: u32,
    cap: u32,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, u: u32, v: u32, cap: u32) {
        let rev_u = self.adj[v as usize].len() as u32;
        let rev_v = self.adj[u as usize].len() as u32;
        self.adj[u as usize].push(FlowEdge { to: v, rev: rev_u, cap });
        self.adj[v as usize].push(FlowEdge {
            to: u,
            rev: rev_v,
            cap: 0,
        });
    }

    fn max_flow(&mut self, s: u32, t: u32) -> u64 {
        let mut flow = 0u64;
        loop {
            // Level graph by BFS over positive-capacity edges.
            let mut level = vec![u32::MAX; self.adj.len()];
            level[s as usize] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for e in &self.adj[u as usize] {
                    if e.cap > 0 && level[e.to as usize] == u32::MAX {
                        level[e.to as usize] = level[u as usize] + 1;
                        queue.push_back(e.to);
                    }
                }
            }
            if level[t as usize] == u32::MAX {
                return flow;
            }
            let mut iter = vec![0usize; self.adj.len()];
            while self.blocking_dfs(s, t, &level, &mut iter) {
                flow += 1;
            }
        }
    }

    fn blocking_dfs(&mut self, u: u32, t: u32, level: &[u32], iter: &mut [usize]) -> bool {
        if u == t {
            return true;
        }
        while iter[u as usize] < self.adj[u as usize].len() {
            let e = self.adj[u as usize][iter[u as usize]];
            if e.cap > 0 && level[e.to as usize] == level[u as usize] + 1
                && self.blocking_dfs(e.to, t, level, iter)
            {
                self.adj[u as usize][iter[u as usize]].cap -= 1;
                self.adj[e.to as usize][e.rev as usize].cap += 1;
                return true;
            }
            iter[u as usize] += 1;
        }
        false
    }
}

/// Maximum number of vertex-disjoint layer-monotone A-B paths of length
/// at most `maxlen` in the percolated graph.
pub fn count_disjoint_short_paths(
    sample: &EdgeSample,
    a: &VertexSubset,
    b: &VertexSubset,
    maxlen: u32,
) -> Result<u64> {
    let n = sample.graph().n();
    if a.universe() != n || b.universe() != n {
        return Err(Error::GraphMismatch(
            "subset universe does not match the graph".into(),
        ));
    }
    if !(1..=6).contains(&maxlen) {
        return Err(Error::InvalidArgument(format!(
            "maxlen must be in [1, 6], got {maxlen}"
        )));
    }
    if a.members().iter().any(|&v| b.contains(v)) {
        return Err(Error::InvalidArgument(
            "path endpoint sets A and B overlap".into(),
        ));
    }

    // BFS layers from A over retained edges, truncated at maxlen.
    let mut layer_of: HashMap<u64, u32> = HashMap::new();
    let mut order: Vec<u64> = Vec::new();
    let mut queue = VecDeque::new();
    for v in a.members() {
        layer_of.insert(v, 0);
        order.push(v);
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        let lu = layer_of[&u];
        if lu == maxlen {
            continue;
        }
        for v in sample.retained_neighbors(u) {
            layer_of.entry(v).or_insert_with(|| {
                order.push(v);
                queue.push_back(v);
                lu + 1
            });
        }
    }

    // Vertex-split flow network: node 2i is "in", 2i+1 is "out".
    let index: HashMap<u64, u32> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let r = order.len() as u32;
    let (source, sink) = (2 * r, 2 * r + 1);
    let mut net = FlowNet::new(2 * r as usize + 2);
    for (&v, &i) in &index {
        if b.contains(v) {
            // Paths terminate here: no split, no outgoing arcs.
            net.add_edge(2 * i, sink, 1);
            continue;
        }
        net.add_edge(2 * i, 2 * i + 1, 1);
        if a.contains(v) {
            net.add_edge(source, 2 * i, 1);
        }
        let lv = layer_of[&v];
        if lv < maxlen {
            for u in sample.retained_neighbors(v) {
                if let Some(&j) = index.get(&u) {
                    if layer_of[&u] == lv + 1 {
                        net.add_edge(2 * i + 1, 2 * j, 1);
                    }
                }
            }
        }
    }
    Ok(net.max_flow(source, sink))
}
