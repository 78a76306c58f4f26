//! Expansion measurements on percolated components: constructive lemmas
//! (tree partition, matchings, disjoint short paths) plus statistical
//! audits of boundary and neighborhood expansion in the giant component.

mod expander;
mod matching;
mod paths;
mod tree_decomp;

pub use expander::{extract_expander, ExpanderResult, ExtractOptions, RemovalEvent};
pub(crate) use expander::spectral_order;
pub use matching::max_bipartite_matching;
pub use paths::count_disjoint_short_paths;
pub use tree_decomp::{spanning_tree, tree_decompose, TreeDecomposition};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::view::ComponentView;

/// Grows a connected subset of exactly `size` vertices by seeded random
/// frontier expansion. Every returned set is connected in the component;
/// the distribution over connected sets is *not* uniform (growth favors
/// bushy sets), which is fine for falsification probes but must not be
/// read as uniform sampling.
pub fn sample_connected_subset(
    view: &ComponentView,
    size: u64,
    rng: &mut Stream,
) -> Result<Vec<u32>> {
    let n = view.n();
    if size < 1 || size > n {
        return Err(Error::InvalidArgument(format!(
            "requested connected subset of {size} from a component of {n}"
        )));
    }
    let mut in_set = vec![false; n as usize];
    let mut members = Vec::with_capacity(size as usize);
    let mut frontier = vec![rng.below(n) as u32];
    while (members.len() as u64) < size {
        // The frontier can hold stale or duplicate entries; skipping them
        // on pop keeps the invariant that it covers all of N(S).
        let i = rng.below(frontier.len() as u64) as usize;
        let v = frontier.swap_remove(i);
        if in_set[v as usize] {
            continue;
        }
        in_set[v as usize] = true;
        members.push(v);
        for &u in view.neighbors(v) {
            if !in_set[u as usize] {
                frontier.push(u);
            }
        }
    }
    members.sort_unstable();
    Ok(members)
}

/// `|N(S)|`: vertices outside `S` with a retained neighbor in `S`.
pub fn local_neighborhood_size(view: &ComponentView, members: &[u32]) -> u64 {
    let mut in_set = vec![false; view.n() as usize];
    for &v in members {
        in_set[v as usize] = true;
    }
    let mut seen = vec![false; view.n() as usize];
    let mut count = 0u64;
    for &v in members {
        for &u in view.neighbors(v) {
            if !in_set[u as usize] && !seen[u as usize] {
                seen[u as usize] = true;
                count += 1;
            }
        }
    }
    count
}

/// `|∂S|`: retained edges with exactly one endpoint in `S`.
pub fn local_boundary_size(view: &ComponentView, members: &[u32]) -> u64 {
    let mut in_set = vec![false; view.n() as usize];
    for &v in members {
        in_set[v as usize] = true;
    }
    let mut count = 0u64;
    for &v in members {
        for &u in view.neighbors(v) {
            if !in_set[u as usize] {
                count += 1;
            }
        }
    }
    count
}

/// Whether the induced retained subgraph on `members` is connected.
pub fn locally_connected(view: &ComponentView, members: &[u32]) -> bool {
    if members.is_empty() {
        return false;
    }
    let mut local = vec![u32::MAX; view.n() as usize];
    for (i, &v) in members.iter().enumerate() {
        local[v as usize] = i as u32;
    }
    let mut seen = vec![false; members.len()];
    seen[0] = true;
    let mut stack = vec![members[0]];
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &u in view.neighbors(v) {
            let lu = local[u as usize];
            if lu != u32::MAX && !seen[lu as usize] {
                seen[lu as usize] = true;
                reached += 1;
                stack.push(u);
            }
        }
    }
    reached == members.len()
}

/// Which expansion statement applies to a subset of size `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Connected sets in the linear-expansion window: `|N(S)| >= c|S|`.
    ConnectedSmall,
    /// Connected sets, mid-range: `|∂S| >= c|S| ln(n/|S|) / (d ln d)`.
    ConnectedMedium,
    /// Arbitrary sets up to `3εn/2`: `|∂S| >= c|S| / (d ln d)`, plus the
    /// neighborhood form once `|S| >= ε²n`.
    Arbitrary,
    /// Outside every audited statement's range.
    OutOfRange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditMode {
    Connected,
    Arbitrary,
}

/// Audit configuration. `c` is a frozen pilot-calibrated constant, not a
/// derived quantity; the audit is a falsification probe.
#[derive(Clone, Debug)]
pub struct AuditParams {
    pub eps: f64,
    pub c: f64,
    pub sizes: Vec<u64>,
    pub draws: u64,
    pub mode: AuditMode,
    pub seed: u64,
    /// Lower size cutoff of the connected-small regime. The default is
    /// `9 ln(C) d / ε²`; it is configurable because the statement's
    /// printed cutoff and its proof disagree on `c` vs `C`.
    pub small_lower_cutoff: Option<u64>,
}

/// Default lower cutoff of the connected-small regime.
pub fn default_small_cutoff(max_base_order: u16, d: u32, eps: f64) -> u64 {
    (9.0 * (max_base_order as f64).ln() * d as f64 / (eps * eps)).ceil() as u64
}

/// Regime resolution; a pure function of the audit geometry.
pub fn resolve_regime(
    mode: AuditMode,
    k: u64,
    eps: f64,
    n: u64,
    small_lower_cutoff: u64,
) -> Regime {
    let kf = k as f64;
    let nf = n as f64;
    let upper = 1.5 * eps * nf;
    match mode {
        AuditMode::Arbitrary => {
            if kf <= upper {
                Regime::Arbitrary
            } else {
                Regime::OutOfRange
            }
        }
        AuditMode::Connected => {
            let small_upper = nf.powf(eps.powi(5));
            if k >= small_lower_cutoff && kf <= small_upper {
                Regime::ConnectedSmall
            } else if kf >= small_upper && kf <= upper {
                Regime::ConnectedMedium
            } else {
                Regime::OutOfRange
            }
        }
    }
}

/// The audited threshold for one subset; a pure function of the declared
/// quantities. Returns `None` out of range.
pub fn regime_threshold(regime: Regime, c: f64, k: u64, n: u64, d: u32) -> Option<f64> {
    let kf = k as f64;
    let df = d as f64;
    match regime {
        Regime::ConnectedSmall => Some(c * kf),
        Regime::ConnectedMedium => Some(c * kf * (n as f64 / kf).ln() / (df * df.ln())),
        Regime::Arbitrary => Some(c * kf / (df * df.ln())),
        Regime::OutOfRange => None,
    }
}

/// One audited subset.
#[derive(Clone, Debug)]
pub struct AuditRow {
    pub k: u64,
    pub connected: bool,
    pub boundary: u64,
    pub neighborhood: u64,
    pub regime: Regime,
    /// Threshold the primary statistic is compared against (0 when out
    /// of range).
    pub threshold: f64,
    pub in_range: bool,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ExpansionReport {
    pub rows: Vec<AuditRow>,
    pub in_range: u64,
    pub passes: u64,
}

impl ExpansionReport {
    /// Pass rate over in-range rows (1.0 when nothing was in range).
    pub fn pass_rate(&self) -> f64 {
        if self.in_range == 0 {
            1.0
        } else {
            self.passes as f64 / self.in_range as f64
        }
    }
}

/// Samples subsets of the component and compares their boundary and
/// neighborhood sizes against the declared expansion thresholds. `n`,
/// `d`, and `max_base_order` are ambient product-graph quantities (the
/// statements are phrased in ambient terms, not component-local ones).
pub fn audit_expansion(
    view: &ComponentView,
    n: u64,
    d: u32,
    max_base_order: u16,
    params: &AuditParams,
) -> Result<ExpansionReport> {
    if params.eps <= 0.0 || !params.eps.is_finite() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if params.c <= 0.0 || !params.c.is_finite() {
        return Err(Error::InvalidArgument("audit constant c must be positive".into()));
    }
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    for &k in &params.sizes {
        if k < 1 || k > view.n() {
            return Err(Error::InvalidArgument(format!(
                "subset size {k} exceeds the component ({} vertices)",
                view.n()
            )));
        }
    }
    let cutoff = params
        .small_lower_cutoff
        .unwrap_or_else(|| default_small_cutoff(max_base_order, d, params.eps));
    let base = Stream::new(params.seed);
    let mut tasks = Vec::new();
    for (si, &k) in params.sizes.iter().enumerate() {
        for dr in 0..params.draws {
            tasks.push((si, dr, k));
        }
    }
    let rows: Vec<AuditRow> = tasks
        .into_par_iter()
        .map(|(si, dr, k)| {
            let mut rng = base.child(si as u64).child(dr);
            let (members, connected) = match params.mode {
                AuditMode::Connected => {
                    let m = sample_connected_subset(view, k, &mut rng)
                        .expect("sizes validated against component");
                    (m, true)
                }
                AuditMode::Arbitrary => {
                    let m = sample_arbitrary_subset(view, k, &mut rng);
                    let conn = locally_connected(view, &m);
                    (m, conn)
                }
            };
            let boundary = local_boundary_size(view, &members);
            let neighborhood = local_neighborhood_size(view, &members);
            let regime = resolve_regime(params.mode, k, params.eps, n, cutoff);
            let threshold = regime_threshold(regime, params.c, k, n, d).unwrap_or(0.0);
            let in_range = regime != Regime::OutOfRange;
            let pass = match regime {
                Regime::ConnectedSmall => neighborhood as f64 >= threshold,
                Regime::ConnectedMedium => boundary as f64 >= threshold,
                Regime::Arbitrary => {
                    let linear = k as f64 >= params.eps * params.eps * n as f64;
                    boundary as f64 >= threshold
                        && (!linear || neighborhood as f64 >= threshold)
                }
                Regime::OutOfRange => true,
            };
            AuditRow {
                k,
                connected,
                boundary,
                neighborhood,
                regime,
                threshold,
                in_range,
                pass,
            }
        })
        .collect();
    let in_range = rows.iter().filter(|r| r.in_range).count() as u64;
    let passes = rows.iter().filter(|r| r.in_range && r.pass).count() as u64;
    Ok(ExpansionReport {
        rows,
        in_range,
        passes,
    })
}

/// `k` distinct vertices drawn uniformly from the component.
fn sample_arbitrary_subset(view: &ComponentView, k: u64, rng: &mut Stream) -> Vec<u32> {
    let n = view.n();
    if k * 2 >= n {
        let mut ids: Vec<u32> = (0..n as u32).collect();
        rng.shuffle(&mut ids);
        ids.truncate(k as usize);
        ids.sort_unstable();
        return ids;
    }
    let mut picked = vec![false; n as usize];
    let mut members = Vec::with_capacity(k as usize);
    while (members.len() as u64) < k {
        let v = rng.below(n) as u32;
        if !picked[v as usize] {
            picked[v as usize] = true;
            members.push(v);
        }
    }
    members.sort_unstable();
    members
}
