//! Bond percolation samples.
//!
//! A sample is a bit mask over canonical edge ids: edge `i` is retained
//! iff `counter_u01(seed, i) < p`. The draw for an edge depends only on
//! `(seed, i)`, so a sample is a pure function of `(graph, p, seed)` —
//! thread counts, chunk sizes, and evaluation order cannot change it.
//!
//! Samples support a two-round split (sample at `p1`, sprinkle at `p2`,
//! union) with `(1 - p1)(1 - p2) = 1 - p`, and unions of independent
//! samples in general.

use std::io::{Read, Write};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ProductGraph;
use crate::rng::counter_u01;

/// A percolation outcome: which edges of the product survived.
#[derive(Clone, Debug)]
pub struct EdgeSample {
    graph: Arc<ProductGraph>,
    p: f64,
    seed: u64,
    /// Bit `i` (little-endian within each word) is edge `i`.
    mask: Vec<u64>,
    retained: u64,
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "probability must be in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Draw a sample of `graph` at retention probability `p`.
pub fn sample_percolation(graph: &Arc<ProductGraph>, p: f64, seed: u64) -> Result<EdgeSample> {
    check_probability(p)?;
    let m = graph.edge_count();
    let words = m.div_ceil(64) as usize;
    let mask: Vec<u64> = (0..words)
        .into_par_iter()
        .map(|w| {
            let mut bits = 0u64;
            let lo = w as u64 * 64;
            let hi = (lo + 64).min(m);
            for id in lo..hi {
                if counter_u01(seed, id) < p {
                    bits |= 1 << (id - lo);
                }
            }
            bits
        })
        .collect();
    let retained = mask.iter().map(|w| w.count_ones() as u64).sum();
    Ok(EdgeSample {
        graph: Arc::clone(graph),
        p,
        seed,
        mask,
        retained,
    })
}

impl EdgeSample {
    /// Deterministic sample with an explicit retained-edge set; the
    /// nominal `p` is only metadata here. Intended for fixtures and
    /// format tests.
    pub fn from_retained_ids(graph: &Arc<ProductGraph>, p: f64, ids: &[u64]) -> Result<Self> {
        check_probability(p)?;
        let m = graph.edge_count();
        let mut mask = vec![0u64; m.div_ceil(64) as usize];
        for &id in ids {
            if id >= m {
                return Err(Error::InvalidArgument(format!(
                    "edge id {id} out of range (edge count {m})"
                )));
            }
            mask[(id / 64) as usize] |= 1 << (id % 64);
        }
        let retained = mask.iter().map(|w| w.count_ones() as u64).sum();
        Ok(EdgeSample {
            graph: Arc::clone(graph),
            p,
            seed: 0,
            mask,
            retained,
        })
    }

    pub fn graph(&self) -> &Arc<ProductGraph> {
        &self.graph
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn retained_count(&self) -> u64 {
        self.retained
    }

    /// Is canonical edge `id` retained?
    #[inline]
    pub fn retained(&self, id: u64) -> bool {
        (self.mask[(id / 64) as usize] >> (id % 64)) & 1 == 1
    }

    /// Is `{u, v}` a retained edge? False when they are not even adjacent.
    #[inline]
    pub fn retained_pair(&self, u: u64, v: u64) -> bool {
        match self.graph.edge_id(u, v) {
            Some(id) => self.retained(id),
            None => false,
        }
    }

    /// Visit every retained edge in canonical order.
    pub fn for_each_retained(&self, mut f: impl FnMut(u64, u64, u64)) {
        self.graph.for_each_edge(|id, u, v| {
            if self.retained(id) {
                f(id, u, v);
            }
        });
    }

    /// Retained neighbors of `v`, ascending.
    pub fn retained_neighbors(&self, v: u64) -> Vec<u64> {
        self.graph
            .neighbors(v)
            .into_iter()
            .filter(|&u| self.retained_pair(v, u))
            .collect()
    }

    /// Degree of `v` in the sample.
    pub fn sample_degree(&self, v: u64) -> u32 {
        self.graph
            .neighbors(v)
            .into_iter()
            .filter(|&u| self.retained_pair(v, u))
            .count() as u32
    }

    /// Union with an independent sample of the same graph. Retention
    /// probabilities compose as `1 - (1-p_a)(1-p_b)`.
    pub fn merge(&self, other: &EdgeSample) -> Result<EdgeSample> {
        if !self.graph.same_graph(&other.graph) {
            return Err(Error::GraphMismatch(format!(
                "{} vs {}",
                self.graph.spec_text(),
                other.graph.spec_text()
            )));
        }
        let mask: Vec<u64> = self
            .mask
            .iter()
            .zip(&other.mask)
            .map(|(a, b)| a | b)
            .collect();
        let retained = mask.iter().map(|w| w.count_ones() as u64).sum();
        Ok(EdgeSample {
            graph: Arc::clone(&self.graph),
            p: 1.0 - (1.0 - self.p) * (1.0 - other.p),
            seed: self.seed,
            mask,
            retained,
        })
    }

    /// True when every retained edge of `self` is retained in `other`.
    pub fn subset_of(&self, other: &EdgeSample) -> bool {
        self.graph.same_graph(&other.graph)
            && self
                .mask
                .iter()
                .zip(&other.mask)
                .all(|(a, b)| a & !b == 0)
    }
}

/// Probabilities for a two-round exposure of overall retention `p`:
/// a main round at `p1` and a sprinkle at `p2`, with
/// `(1 - p1)(1 - p2) = 1 - p` exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SprinklePair {
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
}

/// Split `p` into (p1, p2) given the sprinkle probability `p2`.
pub fn two_round_split(p: f64, p2: f64) -> Result<SprinklePair> {
    check_probability(p)?;
    check_probability(p2)?;
    if p >= 1.0 {
        return Err(Error::InvalidArgument(
            "two-round split needs p < 1".into(),
        ));
    }
    if p2 > p {
        return Err(Error::InvalidArgument(format!(
            "sprinkle probability {p2} exceeds total {p}"
        )));
    }
    let p1 = 1.0 - (1.0 - p) / (1.0 - p2);
    Ok(SprinklePair { p, p1, p2 })
}

/// Conventional sprinkle size for a supercritical run at
/// `p = (1 + eps)/d`: the sprinkle takes `delta/d` with `delta = eps^3`,
/// leaving the main round above `(1 + eps - delta)/d`.
pub fn default_sprinkle(eps: f64, d: u32) -> Result<SprinklePair> {
    if eps <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let p = (1.0 + eps) / d as f64;
    check_probability(p)?;
    let delta = eps * eps * eps;
    two_round_split(p, delta / d as f64)
}

/// Number of vertices whose sample degree is at least `threshold`
/// (defaulting to `ln d` when `threshold` is `None`).
pub fn high_degree_census(
    sample: &EdgeSample,
    threshold: Option<f64>,
) -> Result<u64> {
    let g = sample.graph();
    let thr = match threshold {
        Some(t) => t,
        None => {
            let d = g.regular_degree().ok_or_else(|| {
                Error::InvalidArgument(
                    "default census threshold ln d needs a regular graph".into(),
                )
            })?;
            (d as f64).ln()
        }
    };
    if g.n() > u32::MAX as u64 {
        return Err(Error::Guard(format!(
            "census needs n <= 2^32, got {}",
            g.n()
        )));
    }
    let mut deg = vec![0u32; g.n() as usize];
    sample.for_each_retained(|_, u, v| {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    });
    Ok(deg.iter().filter(|&&d| d as f64 >= thr).count() as u64)
}

// ---------------------------------------------------------------------------
// Export formats.
// ---------------------------------------------------------------------------

const MAGIC: &[u8; 4] = b"PPES";
const VERSION: u32 = 1;

impl EdgeSample {
    /// Binary export: magic, version, graph expression, p, seed, edge
    /// count, then the mask bytes (little-endian words, LSB = lowest id).
    pub fn write_binary(&self, w: &mut impl Write) -> Result<()> {
        let spec = self.graph.spec_text().as_bytes();
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(spec.len() as u32).to_le_bytes())?;
        w.write_all(spec)?;
        w.write_all(&self.p.to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        w.write_all(&self.graph.edge_count().to_le_bytes())?;
        let nbytes = self.graph.edge_count().div_ceil(8) as usize;
        let mut bytes = Vec::with_capacity(nbytes);
        for word in &self.mask {
            bytes.extend_from_slice(&word.to_le_bytes());
        }
        bytes.truncate(nbytes);
        w.write_all(&bytes)?;
        Ok(())
    }

    /// Read a binary export back. The graph is rebuilt from the embedded
    /// expression using `opts`; file atoms must still resolve.
    pub fn read_binary(r: &mut impl Read, opts: &crate::graph::BuildOptions) -> Result<EdgeSample> {
        let bad = |m: &str| Error::BadFile {
            path: "<sample>".into(),
            message: m.into(),
        };
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(bad("bad magic"));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        if u32::from_le_bytes(b4) != VERSION {
            return Err(bad("unsupported version"));
        }
        r.read_exact(&mut b4)?;
        let spec_len = u32::from_le_bytes(b4) as usize;
        let mut spec_bytes = vec![0u8; spec_len];
        r.read_exact(&mut spec_bytes)?;
        let spec_text =
            String::from_utf8(spec_bytes).map_err(|_| bad("expression is not UTF-8"))?;
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b8)?;
        let p = f64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let seed = u64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let edge_count = u64::from_le_bytes(b8);

        let graph = Arc::new(crate::graph::build_graph(&spec_text, opts)?);
        if graph.edge_count() != edge_count {
            return Err(bad("edge count does not match the expression"));
        }
        let nbytes = edge_count.div_ceil(8) as usize;
        let mut bytes = vec![0u8; nbytes];
        r.read_exact(&mut bytes)?;
        bytes.resize(edge_count.div_ceil(64) as usize * 8, 0);
        let mask: Vec<u64> = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        // Bits beyond edge_count must be zero.
        if let Some(last) = mask.last() {
            let used = edge_count % 64;
            if used != 0 && last >> used != 0 {
                return Err(bad("mask has bits beyond the edge count"));
            }
        }
        let retained = mask.iter().map(|w| w.count_ones() as u64).sum();
        Ok(EdgeSample {
            graph,
            p,
            seed,
            mask,
            retained,
        })
    }

    /// Portable hex-text form: a header line then the mask bytes in hex.
    pub fn to_hex_text(&self) -> String {
        let mut out = format!(
            "prodperc-sample v{VERSION} graph={} p={} seed={} edges={}\n",
            self.graph.spec_text(),
            self.p,
            self.seed,
            self.graph.edge_count()
        );
        let nbytes = self.graph.edge_count().div_ceil(8) as usize;
        let mut bytes = Vec::with_capacity(nbytes);
        for word in &self.mask {
            bytes.extend_from_slice(&word.to_le_bytes());
        }
        bytes.truncate(nbytes);
        for (i, b) in bytes.iter().enumerate() {
            if i > 0 && i % 32 == 0 {
                out.push('\n');
            }
            out.push_str(&format!("{b:02x}"));
        }
        out.push('\n');
        out
    }
}
