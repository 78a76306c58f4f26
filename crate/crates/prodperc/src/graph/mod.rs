//! Cartesian product graphs over small base factors.
//!
//! A vertex of the product is a tuple of base-graph vertices, encoded as a
//! single integer in mixed radix: coordinate `j` has stride
//! `strides[j] = prod_{i<j} |V_i|`. An edge changes exactly one coordinate
//! along an edge of that coordinate's base graph. Vertices are never
//! materialized; adjacency is decoded arithmetically (with an optional
//! cached adjacency list for small products).

pub mod base;
mod edges;
pub mod spec;

pub use base::BaseGraph;
pub use spec::{parse_graph_expr, Atom, GraphSpec};

use crate::error::{Error, Result};

/// Caps and thresholds applied when assembling a product.
#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Largest admissible base-graph order (`C`).
    pub max_base_order: u16,
    /// Largest admissible product order (`n`).
    pub max_vertices: u64,
    /// Products with at most this many vertices get an explicit adjacency
    /// cache; larger ones decode neighbors on the fly.
    pub adjacency_cache_threshold: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_base_order: 16,
            max_vertices: 1 << 26,
            adjacency_cache_threshold: 100_000,
        }
    }
}

/// Per-dimension tables for arithmetic adjacency and canonical edge ids.
#[derive(Clone, Debug)]
pub(crate) struct DimTable {
    pub stride: u64,
    pub order: u64,
    /// stride * order; the index period of this coordinate.
    pub period: u64,
    /// Per base vertex: base neighbors strictly greater than it (sorted).
    pub up_adj: Vec<Vec<u16>>,
    /// Per base vertex: number of greater neighbors.
    pub ud: Vec<u64>,
    /// Prefix sums of `ud` (length order + 1); `ud_prefix[order]` is the
    /// base edge count.
    pub ud_prefix: Vec<u64>,
}

#[derive(Clone, Debug)]
struct Csr {
    offsets: Vec<u64>,
    targets: Vec<u32>,
}

/// An assembled Cartesian product graph.
#[derive(Clone, Debug)]
pub struct ProductGraph {
    spec: GraphSpec,
    spec_text: String,
    bases: Vec<BaseGraph>,
    n: u64,
    degree: Option<u32>,
    max_base_order: u16,
    edge_count: u64,
    dims: Vec<DimTable>,
    adj_cache: Option<Csr>,
}

/// Parse and build in one step with the given options.
pub fn build_graph(expr: &str, opts: &BuildOptions) -> Result<ProductGraph> {
    let spec = parse_graph_expr(expr)?;
    build_product(&spec, opts)
}

/// Assemble a product graph from a parsed spec, loading any file atoms.
pub fn build_product(spec: &GraphSpec, opts: &BuildOptions) -> Result<ProductGraph> {
    let mut bases: Vec<BaseGraph> = Vec::new();
    for (atom, power) in &spec.factors {
        let base = match atom {
            Atom::Complete(k) => BaseGraph::complete(*k)?,
            Atom::Cycle(k) => BaseGraph::cycle(*k)?,
            Atom::Path(k) => BaseGraph::path(*k)?,
            Atom::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::BadFile {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                BaseGraph::from_edge_list_text(&text, path)?
            }
        };
        if base.order() > opts.max_base_order {
            return Err(Error::InvalidBase(format!(
                "base order {} exceeds the cap of {}",
                base.order(),
                opts.max_base_order
            )));
        }
        for _ in 0..*power {
            bases.push(base.clone());
        }
    }

    let mut n: u128 = 1;
    for b in &bases {
        n *= b.order() as u128;
        if n > opts.max_vertices as u128 {
            return Err(Error::TooLarge {
                n,
                cap: opts.max_vertices,
            });
        }
    }
    let n = n as u64;

    let degree = if bases.iter().all(|b| b.regular_degree().is_some()) {
        Some(
            bases
                .iter()
                .map(|b| b.regular_degree().unwrap() as u32)
                .sum(),
        )
    } else {
        None
    };
    let max_base_order = bases.iter().map(|b| b.order()).max().unwrap_or(2);

    let mut dims = Vec::with_capacity(bases.len());
    let mut stride: u64 = 1;
    let mut edge_count: u64 = 0;
    for b in &bases {
        let order = b.order() as u64;
        let mut up_adj = Vec::with_capacity(b.order() as usize);
        let mut ud = Vec::with_capacity(b.order() as usize);
        let mut ud_prefix = Vec::with_capacity(b.order() as usize + 1);
        ud_prefix.push(0);
        for x in 0..b.order() {
            let ups: Vec<u16> = b.neighbors(x).iter().copied().filter(|&w| w > x).collect();
            ud.push(ups.len() as u64);
            ud_prefix.push(ud_prefix.last().unwrap() + ups.len() as u64);
            up_adj.push(ups);
        }
        edge_count += (n / order) * b.edge_count() as u64;
        dims.push(DimTable {
            stride,
            order,
            period: stride * order,
            up_adj,
            ud,
            ud_prefix,
        });
        stride *= order;
    }

    let mut g = ProductGraph {
        spec: spec.clone(),
        spec_text: spec.print(),
        bases,
        n,
        degree,
        max_base_order,
        edge_count,
        dims,
        adj_cache: None,
    };
    if n <= opts.adjacency_cache_threshold {
        g.adj_cache = Some(g.build_csr());
    }
    Ok(g)
}

impl ProductGraph {
    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    /// Canonical printed expression; used as the identity key in exports.
    pub fn spec_text(&self) -> &str {
        &self.spec_text
    }

    /// Number of vertices.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of dimensions (expanded factors).
    pub fn dimension(&self) -> usize {
        self.bases.len()
    }

    /// Common degree `d`, present iff every base is regular.
    pub fn regular_degree(&self) -> Option<u32> {
        self.degree
    }

    /// Largest base order (`C`).
    pub fn max_base_order(&self) -> u16 {
        self.max_base_order
    }

    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    pub fn bases(&self) -> &[BaseGraph] {
        &self.bases
    }

    pub(crate) fn dims(&self) -> &[DimTable] {
        &self.dims
    }

    /// Decode a vertex index into its coordinate tuple.
    pub fn coords(&self, v: u64) -> Vec<u16> {
        debug_assert!(v < self.n);
        self.dims
            .iter()
            .map(|d| ((v / d.stride) % d.order) as u16)
            .collect()
    }

    /// Coordinate `j` of vertex `v`.
    #[inline]
    pub fn coord(&self, v: u64, j: usize) -> u16 {
        let d = &self.dims[j];
        ((v / d.stride) % d.order) as u16
    }

    /// Encode a coordinate tuple into a vertex index.
    pub fn index(&self, coords: &[u16]) -> Result<u64> {
        if coords.len() != self.bases.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates, got {}",
                self.bases.len(),
                coords.len()
            )));
        }
        let mut v = 0u64;
        for (j, (&c, d)) in coords.iter().zip(&self.dims).enumerate() {
            if c as u64 >= d.order {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {j} is {c}, order is {}",
                    d.order
                )));
            }
            v += c as u64 * d.stride;
        }
        Ok(v)
    }

    /// Degree of a single vertex (cheap even for irregular products).
    pub fn degree_of(&self, v: u64) -> u32 {
        if let Some(d) = self.degree {
            return d;
        }
        self.bases
            .iter()
            .zip(&self.dims)
            .map(|(b, d)| b.degree(((v / d.stride) % d.order) as u16) as u32)
            .sum()
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: u64) -> Vec<u64> {
        if let Some(csr) = &self.adj_cache {
            let lo = csr.offsets[v as usize] as usize;
            let hi = csr.offsets[v as usize + 1] as usize;
            return csr.targets[lo..hi].iter().map(|&t| t as u64).collect();
        }
        self.neighbors_uncached(v)
    }

    fn neighbors_uncached(&self, v: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.degree.unwrap_or(8) as usize);
        for (b, d) in self.bases.iter().zip(&self.dims) {
            let dig = ((v / d.stride) % d.order) as u16;
            for &w in b.neighbors(dig) {
                let u = if w > dig {
                    v + (w - dig) as u64 * d.stride
                } else {
                    v - (dig - w) as u64 * d.stride
                };
                out.push(u);
            }
        }
        out.sort_unstable();
        out
    }

    fn build_csr(&self) -> Csr {
        let n = self.n as usize;
        let mut offsets = vec![0u64; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + self.degree_of(v as u64) as u64;
        }
        let mut targets = vec![0u32; offsets[n] as usize];
        let mut cursor: Vec<u64> = offsets[..n].to_vec();
        for v in 0..n as u64 {
            for u in self.neighbors_uncached(v) {
                targets[cursor[v as usize] as usize] = u as u32;
                cursor[v as usize] += 1;
            }
        }
        Csr { offsets, targets }
    }

    /// True when two handles denote the same graph (same canonical
    /// expression and shape); used to validate sample merges.
    pub fn same_graph(&self, other: &ProductGraph) -> bool {
        self.spec_text == other.spec_text
            && self.n == other.n
            && self.edge_count == other.edge_count
    }
}
