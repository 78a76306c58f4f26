//! Canonical edge indexing.
//!
//! Edges are numbered by (smaller endpoint, dimension, larger endpoint),
//! ascending. The numbering is arithmetic: no edge table is stored, and
//! both directions — id from endpoints and endpoints from id — cost
//! O(dimension). Percolation masks are bit vectors over these ids, which
//! is what makes samples reproducible under any parallel schedule.

use super::ProductGraph;

impl ProductGraph {
    /// Number of canonical edges whose smaller endpoint precedes `u`.
    ///
    /// For each dimension the count of earlier vertices holding a given
    /// coordinate digit has closed form (full periods plus a partial
    /// period), so the sum over digits folds into the precomputed
    /// up-degree prefix tables.
    pub(crate) fn vertex_offset(&self, u: u64) -> u64 {
        let mut total = 0u64;
        for d in self.dims() {
            let full = u / d.period;
            let rem = u % d.period;
            let dig = (rem / d.stride) as usize;
            let r = rem % d.stride;
            let m = d.ud_prefix[d.ud_prefix.len() - 1];
            total += full * d.stride * m + d.stride * d.ud_prefix[dig] + r * d.ud[dig];
        }
        total
    }

    /// Canonical id of the edge `{u, v}`, or `None` if they are not
    /// adjacent.
    pub fn edge_id(&self, u: u64, v: u64) -> Option<u64> {
        if u == v || u >= self.n() || v >= self.n() {
            return None;
        }
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let delta = hi - lo;
        // The dimension is the unique j with stride_j <= delta < period_j;
        // deltas from different coordinates occupy disjoint ranges.
        let mut j = None;
        for (idx, d) in self.dims().iter().enumerate() {
            if d.stride <= delta && delta < d.period {
                j = Some(idx);
                break;
            }
            if d.stride > delta {
                break;
            }
        }
        let j = j?;
        let d = &self.dims()[j];
        if delta % d.stride != 0 {
            return None;
        }
        let step = (delta / d.stride) as u16;
        let dig = ((lo / d.stride) % d.order) as u16;
        let w = dig.checked_add(step)?;
        if w as u64 >= d.order {
            return None;
        }
        let rank = d.up_adj[dig as usize].iter().position(|&x| x == w)? as u64;
        // Edges at `lo` in dimensions before j.
        let mut within = 0u64;
        for dj in &self.dims()[..j] {
            within += dj.ud[((lo / dj.stride) % dj.order) as usize];
        }
        Some(self.vertex_offset(lo) + within + rank)
    }

    /// True when `{u, v}` is an edge of the product.
    pub fn adjacent(&self, u: u64, v: u64) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Endpoints of the canonical edge `id` (smaller endpoint first).
    /// Costs O(dimension * log n); intended for diagnostics and tests,
    /// not bulk scans (use [`ProductGraph::for_each_edge`] for those).
    pub fn edge_endpoints(&self, id: u64) -> Option<(u64, u64)> {
        if id >= self.edge_count() {
            return None;
        }
        // Binary search for the smaller endpoint: the largest u with
        // vertex_offset(u) <= id.
        let mut lo = 0u64;
        let mut hi = self.n() - 1;
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if self.vertex_offset(mid) <= id {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let u = lo;
        let mut rest = id - self.vertex_offset(u);
        for d in self.dims() {
            let dig = ((u / d.stride) % d.order) as usize;
            let ups = &d.up_adj[dig];
            if rest < ups.len() as u64 {
                let w = ups[rest as usize];
                let v = u + (w as u64 - dig as u64) * d.stride;
                return Some((u, v));
            }
            rest -= ups.len() as u64;
        }
        None
    }

    /// Visit every edge in canonical order as `(id, u, v)` with `u < v`.
    pub fn for_each_edge(&self, mut f: impl FnMut(u64, u64, u64)) {
        let t = self.dims().len();
        let mut digits = vec![0u16; t];
        let mut id = 0u64;
        for u in 0..self.n() {
            for (j, d) in self.dims().iter().enumerate() {
                let dig = digits[j];
                for &w in &d.up_adj[dig as usize] {
                    let v = u + (w - dig) as u64 * d.stride;
                    f(id, u, v);
                    id += 1;
                }
            }
            for (dj, digit) in digits.iter_mut().enumerate() {
                *digit += 1;
                if (*digit as u64) < self.dims()[dj].order {
                    break;
                }
                *digit = 0;
            }
        }
        debug_assert_eq!(id, self.edge_count());
    }
}
