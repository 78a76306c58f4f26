use crate::error::{Error, Result};

/// One factor of a Cartesian product: a small, simple, connected graph.
///
/// Orders are tiny by design (the product's dimension carries the scale,
/// not the factors), so adjacency is stored as plain sorted neighbor
/// lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseGraph {
    order: u16,
    adj: Vec<Vec<u16>>,
    /// Edges as (u, v) with u < v, lexicographically sorted.
    edges: Vec<(u16, u16)>,
    /// Common degree when the graph is regular.
    regular: Option<u16>,
}

impl BaseGraph {
    /// Complete graph on `k >= 2` vertices.
    pub fn complete(k: u16) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidBase(format!(
                "complete graph needs order >= 2, got {k}"
            )));
        }
        let mut edges = Vec::new();
        for u in 0..k {
            for v in (u + 1)..k {
                edges.push((u, v));
            }
        }
        Self::from_edges(k, edges)
    }

    /// Cycle on `k >= 3` vertices. (A 2-cycle would be a doubled edge,
    /// which is not a simple graph; use `K2` for a single edge.)
    pub fn cycle(k: u16) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidBase(format!(
                "cycle needs order >= 3, got {k}"
            )));
        }
        let mut edges: Vec<(u16, u16)> = (0..k - 1).map(|u| (u, u + 1)).collect();
        edges.push((0, k - 1));
        Self::from_edges(k, edges)
    }

    /// Path on `k >= 2` vertices.
    pub fn path(k: u16) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidBase(format!(
                "path needs order >= 2, got {k}"
            )));
        }
        let edges: Vec<(u16, u16)> = (0..k - 1).map(|u| (u, u + 1)).collect();
        Self::from_edges(k, edges)
    }

    /// Build from an explicit undirected edge list. Rejects anything that
    /// is not a simple connected graph on at least two vertices.
    pub fn from_edges(order: u16, raw: Vec<(u16, u16)>) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidBase(format!(
                "base graph needs order >= 2, got {order}"
            )));
        }
        let mut edges: Vec<(u16, u16)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            if a == b {
                return Err(Error::InvalidBase(format!("self-loop at vertex {a}")));
            }
            if a >= order || b >= order {
                return Err(Error::InvalidBase(format!(
                    "edge ({a}, {b}) out of range for order {order}"
                )));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBase("duplicate edge".into()));
        }
        let mut adj = vec![Vec::new(); order as usize];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        // Connectivity check (BFS from 0).
        let mut seen = vec![false; order as usize];
        let mut queue = vec![0u16];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop() {
            for &v in &adj[u as usize] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    reached += 1;
                    queue.push(v);
                }
            }
        }
        if reached != order {
            return Err(Error::InvalidBase(format!(
                "graph is disconnected ({reached} of {order} vertices reachable)"
            )));
        }
        let d0 = adj[0].len();
        let regular = if adj.iter().all(|l| l.len() == d0) {
            Some(d0 as u16)
        } else {
            None
        };
        Ok(BaseGraph {
            order,
            adj,
            edges,
            regular,
        })
    }

    /// Parse the on-disk edge-list format: a header line `n m` followed by
    /// `m` lines `u v` with 0-based vertex ids.
    pub fn from_edge_list_text(text: &str, origin: &str) -> Result<Self> {
        let bad = |message: String| Error::BadFile {
            path: origin.to_string(),
            message,
        };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
        let mut it = header.split_whitespace();
        let n: u16 = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("header must be `n m`".into()))?;
        let m: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("header must be `n m`".into()))?;
        if it.next().is_some() {
            return Err(bad("header must be exactly `n m`".into()));
        }
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines.enumerate() {
            let mut it = line.split_whitespace();
            let u: u16 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("edge line {} must be `u v`", i + 1)))?;
            let v: u16 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("edge line {} must be `u v`", i + 1)))?;
            if it.next().is_some() {
                return Err(bad(format!("edge line {} must be exactly `u v`", i + 1)));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(bad(format!(
                "header promised {m} edges, found {}",
                edges.len()
            )));
        }
        Self::from_edges(n, edges)
    }

    pub fn order(&self) -> u16 {
        self.order
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u16, u16)] {
        &self.edges
    }

    pub fn neighbors(&self, v: u16) -> &[u16] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u16) -> u16 {
        self.adj[v as usize].len() as u16
    }

    /// `Some(d)` iff every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<u16> {
        self.regular
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_path_cycle_shapes() {
        let k4 = BaseGraph::complete(4).unwrap();
        assert_eq!(k4.order(), 4);
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.regular_degree(), Some(3));

        let c5 = BaseGraph::cycle(5).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert_eq!(c5.regular_degree(), Some(2));
        assert_eq!(c5.neighbors(0), &[1, 4]);

        let p4 = BaseGraph::path(4).unwrap();
        assert_eq!(p4.edge_count(), 3);
        assert_eq!(p4.regular_degree(), None);
        // A two-vertex path is a single edge and is 1-regular.
        assert_eq!(BaseGraph::path(2).unwrap().regular_degree(), Some(1));
    }

    #[test]
    fn degenerate_orders_rejected() {
        assert!(BaseGraph::complete(1).is_err());
        assert!(BaseGraph::cycle(2).is_err());
        assert!(BaseGraph::path(1).is_err());
    }

    #[test]
    fn malformed_edge_lists_rejected() {
        assert!(BaseGraph::from_edges(3, vec![(0, 0)]).is_err(), "self-loop");
        assert!(
            BaseGraph::from_edges(3, vec![(0, 1), (1, 0)]).is_err(),
            "duplicate"
        );
        assert!(
            BaseGraph::from_edges(3, vec![(0, 3)]).is_err(),
            "out of range"
        );
        assert!(
            BaseGraph::from_edges(4, vec![(0, 1), (2, 3)]).is_err(),
            "disconnected"
        );
    }

    #[test]
    fn edge_list_text_roundtrip() {
        let g = BaseGraph::from_edge_list_text("3 3\n0 1\n1 2\n0 2\n", "inline").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.regular_degree(), Some(2));

        assert!(BaseGraph::from_edge_list_text("3 2\n0 1\n", "inline").is_err());
        assert!(BaseGraph::from_edge_list_text("", "inline").is_err());
        assert!(BaseGraph::from_edge_list_text("3 1\n0 1 2\n", "inline").is_err());
    }
}
