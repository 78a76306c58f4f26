//! Compact local views of single percolation components.
//!
//! Downstream measurements (diameter, cycles, random walks, expansion
//! audits) operate on one component at a time. A [`ComponentView`]
//! re-indexes the component's vertices as `0..n_local` and stores its
//! retained edges in CSR form, so those algorithms never touch the
//! global graph again.

use std::collections::VecDeque;

use crate::components::ComponentLabeling;
use crate::error::{Error, Result};
use crate::percolation::EdgeSample;

/// One component of a percolated graph with local contiguous ids.
#[derive(Clone, Debug)]
pub struct ComponentView {
    /// Sorted global ids; `global[i]` is the global id of local vertex `i`.
    global: Vec<u64>,
    offsets: Vec<u64>,
    targets: Vec<u32>,
}

impl ComponentView {
    /// Extracts the component labelled `comp` from a sample.
    pub fn extract(
        sample: &EdgeSample,
        labeling: &ComponentLabeling,
        comp: u32,
    ) -> Result<ComponentView> {
        if comp as usize >= labeling.component_count() {
            return Err(Error::InvalidArgument(format!(
                "component id {comp} out of range ({} components)",
                labeling.component_count()
            )));
        }
        let global = labeling.members(comp);
        Self::from_members(global, |u| sample.retained_neighbors(u))
    }

    /// View induced by an arbitrary vertex set: retained edges with both
    /// endpoints inside are kept, edges leaving the set are dropped. The
    /// induced subgraph must still be connected.
    pub fn induced(sample: &EdgeSample, members: Vec<u64>) -> Result<ComponentView> {
        let mut global = members;
        global.sort_unstable();
        global.dedup();
        if global.is_empty() {
            return Err(Error::InvalidArgument("empty vertex set".into()));
        }
        let view = Self::from_members_lossy(global, |u| sample.retained_neighbors(u));
        let reached = view
            .bfs_distances(0)
            .iter()
            .filter(|&&d| d != u32::MAX)
            .count() as u64;
        if reached != view.n() {
            return Err(Error::InvalidArgument(format!(
                "induced subgraph is disconnected ({reached} of {} reached)",
                view.n()
            )));
        }
        Ok(view)
    }

    /// Extracts the largest component.
    pub fn giant(sample: &EdgeSample, labeling: &ComponentLabeling) -> Result<ComponentView> {
        Self::extract(sample, labeling, labeling.giant_id())
    }

    /// A view of an entire (unpercolated) graph; handy for measuring the
    /// deterministic structures themselves.
    pub fn of_graph(graph: &crate::graph::ProductGraph) -> ComponentView {
        let members: Vec<u64> = (0..graph.n()).collect();
        Self::from_members(members, |u| graph.neighbors(u))
            .expect("whole-graph view cannot fail")
    }

    fn from_members<F>(global: Vec<u64>, neighbors_of: F) -> Result<ComponentView>
    where
        F: Fn(u64) -> Vec<u64>,
    {
        let n = global.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0u64);
        for &u in &global {
            for v in neighbors_of(u) {
                match global.binary_search(&v) {
                    Ok(local) => targets.push(local as u32),
                    Err(_) => {
                        return Err(Error::GraphMismatch(format!(
                            "edge {u}-{v} leaves the member set"
                        )))
                    }
                }
            }
            offsets.push(targets.len() as u64);
        }
        Ok(ComponentView {
            global,
            offsets,
            targets,
        })
    }

    /// Like [`from_members`] but silently drops edges leaving the set.
    fn from_members_lossy<F>(global: Vec<u64>, neighbors_of: F) -> ComponentView
    where
        F: Fn(u64) -> Vec<u64>,
    {
        let n = global.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0u64);
        for &u in &global {
            for v in neighbors_of(u) {
                if let Ok(local) = global.binary_search(&v) {
                    targets.push(local as u32);
                }
            }
            offsets.push(targets.len() as u64);
        }
        ComponentView {
            global,
            offsets,
            targets,
        }
    }

    /// Number of vertices in the component.
    pub fn n(&self) -> u64 {
        self.global.len() as u64
    }

    /// Number of retained edges inside the component.
    pub fn edge_count(&self) -> u64 {
        self.targets.len() as u64 / 2
    }

    pub fn global_of(&self, local: u32) -> u64 {
        self.global[local as usize]
    }

    pub fn local_of(&self, global: u64) -> Option<u32> {
        self.global.binary_search(&global).ok().map(|i| i as u32)
    }

    pub fn global_ids(&self) -> &[u64] {
        &self.global
    }

    pub fn neighbors(&self, local: u32) -> &[u32] {
        let lo = self.offsets[local as usize] as usize;
        let hi = self.offsets[local as usize + 1] as usize;
        &self.targets[lo..hi]
    }

    pub fn degree(&self, local: u32) -> u64 {
        self.offsets[local as usize + 1] - self.offsets[local as usize]
    }

    /// BFS distances from `start` (every vertex of a component is
    /// reachable, which `extract` guarantees by construction).
    pub fn bfs_distances(&self, start: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.global.len()];
        dist[start as usize] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize];
            for &u in self.neighbors(v) {
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = dv + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// The farthest vertex from `start` and its distance (BFS sweep).
    pub fn eccentricity_sweep(&self, start: u32) -> (u32, u32) {
        let dist = self.bfs_distances(start);
        let mut best = (start, 0u32);
        for (v, &d) in dist.iter().enumerate() {
            if d != u32::MAX && d > best.1 {
                best = (v as u32, d);
            }
        }
        best
    }
}
