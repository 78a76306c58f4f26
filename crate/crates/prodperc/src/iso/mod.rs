//! Edge isoperimetry: boundaries, exact profiles, and the two analytic
//! lower bounds the rest of the crate is built to exercise.
//!
//! For a set `S` of vertices, `boundary(S)` is the number of edges with
//! exactly one endpoint in `S`, and the profile value at size `k` is
//! `i_k = min_{|S| = k} boundary(S) / k`. Products of regular bases of
//! order at most `C` obey `i_k >= d - (C-1) log2 k`; connected bases give
//! `i_k >= log_C(n/k) / (C-1)` with no regularity needed.

mod entropy;
mod profile;
mod trees;

pub use entropy::{check_entropy_floor, check_weighted_log_inequality, DistributionOverC, FloorCheck};
pub use profile::{exact_iso_profile, is_subcube, IsoProfile};
pub use trees::{count_trees, tree_count_envelope};

use crate::error::{Error, Result};
use crate::graph::ProductGraph;
use crate::percolation::EdgeSample;
use crate::subset::VertexSubset;

fn check_subset(graph: &ProductGraph, s: &VertexSubset) -> Result<()> {
    if s.universe() != graph.n() {
        return Err(Error::GraphMismatch(format!(
            "subset over {} vertices, graph has {}",
            s.universe(),
            graph.n()
        )));
    }
    Ok(())
}

/// Edges with exactly one endpoint in `set`, counting only retained
/// edges when a sample is given.
pub fn edge_boundary(
    graph: &ProductGraph,
    sample: Option<&EdgeSample>,
    set: &VertexSubset,
) -> Result<u64> {
    check_subset(graph, set)?;
    let mut count = 0u64;
    for v in set.members() {
        for u in graph.neighbors(v) {
            if !set.contains(u) {
                match sample {
                    None => count += 1,
                    Some(s) => {
                        if s.retained_pair(v, u) {
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Retained (or all) edges with both endpoints in `set`.
pub fn induced_edge_count(
    graph: &ProductGraph,
    sample: Option<&EdgeSample>,
    set: &VertexSubset,
) -> Result<u64> {
    check_subset(graph, set)?;
    let mut twice = 0u64;
    for v in set.members() {
        for u in graph.neighbors(v) {
            if set.contains(u) {
                match sample {
                    None => twice += 1,
                    Some(s) => {
                        if s.retained_pair(v, u) {
                            twice += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(twice / 2)
}

/// Vertices outside `set` reachable within `radius` hops of it
/// (the external `r`-neighborhood size).
pub fn vertex_neighborhood(
    graph: &ProductGraph,
    sample: Option<&EdgeSample>,
    set: &VertexSubset,
    radius: u32,
) -> Result<u64> {
    check_subset(graph, set)?;
    if radius == 0 {
        return Ok(0);
    }
    let mut seen = set.clone();
    let mut frontier = set.members();
    let mut outside = 0u64;
    for _ in 0..radius {
        let mut next = Vec::new();
        for &v in &frontier {
            for u in graph.neighbors(v) {
                let ok = match sample {
                    None => true,
                    Some(s) => s.retained_pair(v, u),
                };
                if ok && !seen.contains(u) {
                    seen.insert(u);
                    outside += 1;
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(outside)
}

/// Lower bound `d - (C-1) log2 k` for regular products (`C` = largest
/// base order). Errors on irregular products.
pub fn iso_bound_regular(graph: &ProductGraph, k: u64) -> Result<f64> {
    if k < 1 || k > graph.n() {
        return Err(Error::InvalidArgument(format!(
            "k must be in [1, n], got {k}"
        )));
    }
    let d = graph.regular_degree().ok_or_else(|| {
        Error::InvalidArgument("regular isoperimetric bound needs a regular product".into())
    })? as f64;
    let c = graph.max_base_order() as f64;
    Ok(d - (c - 1.0) * (k as f64).log2())
}

/// Lower bound `log_C(n/k) / (C-1)`, valid for any connected bases.
pub fn iso_bound_connected(graph: &ProductGraph, k: u64) -> Result<f64> {
    if k < 1 || k > graph.n() {
        return Err(Error::InvalidArgument(format!(
            "k must be in [1, n], got {k}"
        )));
    }
    let c = graph.max_base_order() as f64;
    let ratio = graph.n() as f64 / k as f64;
    Ok(ratio.ln() / (c.ln() * (c - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, BuildOptions};
    use crate::percolation::{sample_percolation, EdgeSample};
    use std::sync::Arc;

    fn build(expr: &str) -> ProductGraph {
        build_graph(expr, &BuildOptions::default()).unwrap()
    }

    #[test]
    fn boundary_basics() {
        let q3 = build("Q3");
        // A facet of the cube: fixing the last coordinate to 0.
        let facet = VertexSubset::from_members(8, &[0, 1, 2, 3]);
        assert_eq!(edge_boundary(&q3, None, &facet).unwrap(), 4);
        assert_eq!(induced_edge_count(&q3, None, &facet).unwrap(), 4);
        // Single vertex: boundary = degree.
        let single = VertexSubset::from_members(8, &[5]);
        assert_eq!(edge_boundary(&q3, None, &single).unwrap(), 3);
        // Whole graph: empty boundary.
        let all = VertexSubset::from_members(8, &(0..8).collect::<Vec<_>>());
        assert_eq!(edge_boundary(&q3, None, &all).unwrap(), 0);
        assert_eq!(induced_edge_count(&q3, None, &all).unwrap(), 12);
    }

    #[test]
    fn boundary_respects_samples() {
        let g = Arc::new(build("Q3"));
        // Keep only edges out of vertex 0.
        let ids: Vec<u64> = [1u64, 2, 4]
            .iter()
            .map(|&v| g.edge_id(0, v).unwrap())
            .collect();
        let s = EdgeSample::from_retained_ids(&g, 0.5, &ids).unwrap();
        let single = VertexSubset::from_members(8, &[0]);
        assert_eq!(edge_boundary(&g, Some(&s), &single).unwrap(), 3);
        let other = VertexSubset::from_members(8, &[7]);
        assert_eq!(edge_boundary(&g, Some(&s), &other).unwrap(), 0);
    }

    #[test]
    fn neighborhood_radii() {
        let q3 = build("Q3");
        let s = VertexSubset::from_members(8, &[0]);
        assert_eq!(vertex_neighborhood(&q3, None, &s, 0).unwrap(), 0);
        assert_eq!(vertex_neighborhood(&q3, None, &s, 1).unwrap(), 3);
        assert_eq!(vertex_neighborhood(&q3, None, &s, 2).unwrap(), 6);
        assert_eq!(vertex_neighborhood(&q3, None, &s, 3).unwrap(), 7);
        assert_eq!(vertex_neighborhood(&q3, None, &s, 9).unwrap(), 7);
    }

    #[test]
    fn regular_bound_reference_values() {
        let q4 = build("Q4");
        assert!((iso_bound_regular(&q4, 4).unwrap() - 2.0).abs() < 1e-12);
        let k33 = build("K3^2");
        let b = iso_bound_regular(&k33, 3).unwrap();
        assert!((b - (4.0 - 2.0 * 3f64.log2())).abs() < 1e-12);
        assert!((b - 0.830).abs() < 1e-3);
        let path = build("P4 x K2");
        assert!(iso_bound_regular(&path, 2).is_err());
        assert!(iso_bound_regular(&q4, 0).is_err());
        assert!(iso_bound_regular(&q4, 17).is_err());
    }

    #[test]
    fn connected_bound_reference_values() {
        let q5 = build("Q5");
        assert!((iso_bound_connected(&q5, 1).unwrap() - 5.0).abs() < 1e-12);
        assert!(iso_bound_connected(&q5, 32).unwrap().abs() < 1e-12);
        let k333 = build("K3^3");
        assert!((iso_bound_connected(&k333, 3).unwrap() - 1.0).abs() < 1e-12);
        // Non-regular products are fine here.
        let path = build("P4 x K2");
        assert!(iso_bound_connected(&path, 2).unwrap() > 0.0);
    }

    #[test]
    fn sampled_boundary_halves_on_average() {
        // Statistical: retained boundary of a fixed set at p=0.5 has mean
        // boundary/2; 20 seeds stay within 6 sigma.
        let g = Arc::new(build("Q6"));
        let set = VertexSubset::from_members(64, &(0..32).collect::<Vec<_>>());
        let full = edge_boundary(&g, None, &set).unwrap() as f64;
        let sd = (full * 0.25).sqrt();
        for seed in 0..20 {
            let s = sample_percolation(&g, 0.5, seed).unwrap();
            let b = edge_boundary(&g, Some(&s), &set).unwrap() as f64;
            assert!((b - full / 2.0).abs() < 6.0 * sd, "seed {seed}");
        }
    }
}
