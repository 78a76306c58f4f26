//! Experiment driver behind the `prodperc` binary.
//!
//! Configuration arrives as a flat `key=value` text file, command-line
//! flags, or both (flags win). Normalization resolves the ε-or-p choice
//! once, the runner executes replicates in parallel with deterministic
//! row order, and output is versioned CSV or a JSON mirror. The binary
//! maps failures to exit codes through [`Error::exit_code`].

mod ops;
mod output;
mod selftest;

pub use output::{OutFormat, Table};

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::expansion::AuditMode;
use crate::longrange::EXACT_DIAMETER_GUARD;

/// Everything the runner can execute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpKind {
    Gen,
    Percolate,
    Giant,
    Iso,
    Expand,
    Extract,
    Diameter,
    Cycle,
    Mixing,
    Sprinkle,
    Selftest,
}

impl OpKind {
    pub fn parse(name: &str) -> Result<OpKind> {
        Ok(match name {
            "gen" => OpKind::Gen,
            "percolate" => OpKind::Percolate,
            "giant" => OpKind::Giant,
            "iso" => OpKind::Iso,
            "expand" => OpKind::Expand,
            "extract" => OpKind::Extract,
            "diameter" => OpKind::Diameter,
            "cycle" => OpKind::Cycle,
            "mixing" => OpKind::Mixing,
            "sprinkle" => OpKind::Sprinkle,
            "selftest" => OpKind::Selftest,
            other => {
                return Err(Error::Config(format!("unknown operation {other:?}")))
            }
        })
    }

    fn name(self) -> &'static str {
        match self {
            OpKind::Gen => "gen",
            OpKind::Percolate => "percolate",
            OpKind::Giant => "giant",
            OpKind::Iso => "iso",
            OpKind::Expand => "expand",
            OpKind::Extract => "extract",
            OpKind::Diameter => "diameter",
            OpKind::Cycle => "cycle",
            OpKind::Mixing => "mixing",
            OpKind::Sprinkle => "sprinkle",
            OpKind::Selftest => "selftest",
        }
    }

    /// Does the operation percolate (and therefore need ε or p)?
    fn needs_points(self) -> bool {
        matches!(
            self,
            OpKind::Percolate
                | OpKind::Giant
                | OpKind::Expand
                | OpKind::Extract
                | OpKind::Diameter
                | OpKind::Cycle
                | OpKind::Mixing
                | OpKind::Sprinkle
        )
    }

    fn needs_graph(self) -> bool {
        self != OpKind::Selftest
    }
}

/// A percolation strength as written in the config; ε converts to
/// p = (1+ε)/d once the (regular) graph's degree is known.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PointSpec {
    Eps(f64),
    Prob(f64),
}

impl PointSpec {
    fn key(self) -> f64 {
        match self {
            PointSpec::Eps(x) | PointSpec::Prob(x) => x,
        }
    }
}

/// How the diameter subcommand measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiameterChoice {
    Exact,
    Sampled,
    /// Exact when the component is within the exact guard, else sampled.
    Auto,
}

/// Operation-specific knobs, with usable defaults; each operation reads
/// only the fields it documents.
#[derive(Clone, Debug)]
pub struct OpParams {
    /// iso: largest subset size profiled (default: n).
    pub k_max: Option<u64>,
    /// expand: audited subset sizes.
    pub sizes: Vec<u64>,
    /// expand: draws per size.
    pub draws: u64,
    /// expand: frozen audit constant.
    pub c: f64,
    /// expand: connected or arbitrary subsets.
    pub audit_mode: AuditMode,
    /// expand: override for the connected-small lower cutoff.
    pub small_cutoff: Option<u64>,
    /// extract: expansion target constant.
    pub c_target: f64,
    /// extract: probes per round; mixing: probes per dyadic level.
    pub probes: u32,
    /// extract: sweep vectors per round; diameter: sampled sweep seeds.
    pub sweeps: u32,
    /// cycle: growth restarts.
    pub budget: u32,
    /// mixing: multiplier on the dyadic conductance sum.
    pub k_const: f64,
    /// mixing: step cap for the exact mixing time.
    pub cap: u32,
    /// diameter: exact, sampled, or auto.
    pub diameter_mode: DiameterChoice,
    /// sweep: refuse grids with more cells than this.
    pub max_cells: u64,
    pub edges_out: Option<PathBuf>,
    pub sample_out: Option<PathBuf>,
    pub summary_out: Option<PathBuf>,
    pub log_out: Option<PathBuf>,
}

impl Default for OpParams {
    fn default() -> Self {
        OpParams {
            k_max: None,
            sizes: vec![100],
            draws: 100,
            c: 0.05,
            audit_mode: AuditMode::Connected,
            small_cutoff: None,
            c_target: 0.5,
            probes: 64,
            sweeps: 8,
            budget: 50,
            k_const: 1.0,
            cap: 100_000,
            diameter_mode: DiameterChoice::Auto,
            max_cells: 10_000,
            edges_out: None,
            sample_out: None,
            summary_out: None,
            log_out: None,
        }
    }
}

/// A fully normalized experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub op: OpKind,
    /// Graph expressions, ascending (part of the deterministic row order).
    pub graphs: Vec<String>,
    /// Percolation strengths, ascending.
    pub points: Vec<PointSpec>,
    /// Replicates per (graph, point); replicate `i` uses seed_base + i.
    pub seeds: u32,
    pub seed_base: u64,
    pub format: OutFormat,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub params: OpParams,
}

/// Parses the flat `key=value` config format: one pair per line, `#`
/// comments, repeated keys accumulate into lists.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, Vec<String>>> {
    let mut map: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "config line {}: expected key=value, got {line:?}",
                lineno + 1
            )));
        };
        map.entry(key.trim().to_string())
            .or_default()
            .push(value.trim().to_string());
    }
    Ok(map)
}

/// Keys every operation accepts.
const GLOBAL_KEYS: &[&str] = &[
    "graph", "eps", "p", "seeds", "seed-base", "out", "format", "threads", "op", "max-cells",
];

fn op_keys(op: OpKind) -> &'static [&'static str] {
    match op {
        OpKind::Gen => &["edges-out"],
        OpKind::Percolate => &["sample-out"],
        OpKind::Giant => &["summary-out"],
        OpKind::Iso => &["k-max"],
        OpKind::Expand => &["sizes", "draws", "c", "mode", "small-cutoff"],
        OpKind::Extract => &["c-target", "probes", "sweeps", "log-out"],
        OpKind::Diameter => &["mode", "sweeps"],
        OpKind::Cycle => &["budget"],
        OpKind::Mixing => &["probes", "k-const", "cap"],
        OpKind::Sprinkle => &["summary-out"],
        OpKind::Selftest => &[],
    }
}

struct KvReader<'a> {
    map: &'a BTreeMap<String, Vec<String>>,
}

impl<'a> KvReader<'a> {
    /// The single value of `key`, if present (repeats are an error).
    fn single(&self, key: &str) -> Result<Option<&'a str>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(values) if values.len() == 1 => Ok(Some(values[0].as_str())),
            Some(values) => Err(Error::Config(format!(
                "key {key:?} given {} times, expected once",
                values.len()
            ))),
        }
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.single(key)? {
            None => Ok(None),
            Some(text) => text.parse::<T>().map(Some).map_err(|_| {
                Error::Config(format!("key {key:?}: cannot parse {text:?}"))
            }),
        }
    }

    /// All values of `key`, with comma-separated entries split.
    fn list(&self, key: &str) -> Vec<String> {
        self.map
            .get(key)
            .map(|values| {
                values
                    .iter()
                    .flat_map(|v| v.split(','))
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default()
    }

    fn float_list(&self, key: &str) -> Result<Vec<f64>> {
        self.list(key)
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::Config(format!("key {key:?}: bad number {s:?}")))
            })
            .collect()
    }
}

/// Builds the normalized config for `op` from an optional config file
/// overlaid with flag-derived entries (flags win key-wise).
pub fn assemble(
    op: OpKind,
    file: Option<&Path>,
    flags: BTreeMap<String, Vec<String>>,
) -> Result<ExperimentConfig> {
    let mut map = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_kv(&text)?
        }
        None => BTreeMap::new(),
    };
    for (k, v) in flags {
        map.insert(k, v);
    }
    config_from_map(op, &map)
}

/// Sweep entry point: the operation comes from the merged map itself.
pub fn assemble_sweep(
    file: Option<&Path>,
    flags: BTreeMap<String, Vec<String>>,
) -> Result<ExperimentConfig> {
    let mut map = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_kv(&text)?
        }
        None => BTreeMap::new(),
    };
    for (k, v) in flags {
        map.insert(k, v);
    }
    let reader = KvReader { map: &map };
    let op = match reader.single("op")? {
        Some(name) => OpKind::parse(name)?,
        None => {
            return Err(Error::Config(
                "sweep needs op=<operation> in the config or --op".into(),
            ))
        }
    };
    if matches!(op, OpKind::Selftest) {
        return Err(Error::Config("sweep cannot wrap selftest".into()));
    }
    let cfg = config_from_map(op, &map)?;
    let cells =
        cfg.graphs.len() as u64 * cfg.points.len().max(1) as u64 * cfg.seeds as u64;
    if cells == 0 {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    if cells > cfg.params.max_cells {
        return Err(Error::Config(format!(
            "sweep grid has {cells} cells, above the cap {}",
            cfg.params.max_cells
        )));
    }
    Ok(cfg)
}

fn config_from_map(
    op: OpKind,
    map: &BTreeMap<String, Vec<String>>,
) -> Result<ExperimentConfig> {
    for key in map.keys() {
        if !GLOBAL_KEYS.contains(&key.as_str()) && !op_keys(op).contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "unknown config key {key:?} for operation {}",
                op.name()
            )));
        }
    }
    let reader = KvReader { map };

    let mut graphs = reader.list("graph");
    graphs.sort();
    graphs.dedup();
    if op.needs_graph() && graphs.is_empty() {
        return Err(Error::Config(format!(
            "operation {} needs at least one graph=<expr>",
            op.name()
        )));
    }

    let eps = reader.float_list("eps")?;
    let p = reader.float_list("p")?;
    let mut points: Vec<PointSpec> = if !eps.is_empty() && !p.is_empty() {
        return Err(Error::Config(
            "give eps or p, not both (they are exclusive)".into(),
        ));
    } else if !eps.is_empty() {
        for &e in &eps {
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::Config(format!("eps must be positive, got {e}")));
            }
        }
        eps.into_iter().map(PointSpec::Eps).collect()
    } else {
        for &x in &p {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Config(format!("p must lie in [0,1], got {x}")));
            }
        }
        p.into_iter().map(PointSpec::Prob).collect()
    };
    points.sort_by(|a, b| a.key().partial_cmp(&b.key()).expect("finite validated"));
    points.dedup_by(|a, b| a == b);
    if op.needs_points() && points.is_empty() {
        return Err(Error::Config(format!(
            "operation {} needs eps=... or p=...",
            op.name()
        )));
    }
    if !op.needs_points() && !points.is_empty() {
        return Err(Error::Config(format!(
            "operation {} takes neither eps nor p",
            op.name()
        )));
    }

    let seeds = reader.parsed::<u32>("seeds")?.unwrap_or(1);
    if seeds == 0 {
        return Err(Error::Config("seeds must be at least 1".into()));
    }
    let seed_base = reader.parsed::<u64>("seed-base")?.unwrap_or(0);
    let format = match reader.single("format")? {
        Some(text) => OutFormat::parse(text)?,
        None => OutFormat::Csv,
    };
    let out = reader.parsed::<PathBuf>("out")?;
    let threads = reader.parsed::<usize>("threads")?;
    if threads == Some(0) {
        return Err(Error::Config("threads must be at least 1".into()));
    }

    let mut params = OpParams::default();
    if let Some(k) = reader.parsed::<u64>("k-max")? {
        params.k_max = Some(k);
    }
    let sizes = reader.list("sizes");
    if !sizes.is_empty() {
        params.sizes = sizes
            .iter()
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| Error::Config(format!("sizes: bad entry {s:?}")))
            })
            .collect::<Result<_>>()?;
    }
    if let Some(d) = reader.parsed::<u64>("draws")? {
        params.draws = d;
    }
    if let Some(c) = reader.parsed::<f64>("c")? {
        params.c = c;
    }
    if op == OpKind::Expand {
        if let Some(mode) = reader.single("mode")? {
            params.audit_mode = match mode {
                "connected" => AuditMode::Connected,
                "arbitrary" => AuditMode::Arbitrary,
                other => {
                    return Err(Error::Config(format!(
                        "mode must be connected or arbitrary, got {other:?}"
                    )))
                }
            };
        }
    }
    if op == OpKind::Diameter {
        if let Some(mode) = reader.single("mode")? {
            params.diameter_mode = match mode {
                "exact" => DiameterChoice::Exact,
                "sampled" => DiameterChoice::Sampled,
                "auto" => DiameterChoice::Auto,
                other => {
                    return Err(Error::Config(format!(
                        "mode must be exact, sampled, or auto, got {other:?}"
                    )))
                }
            };
        }
    }
    if let Some(v) = reader.parsed::<u64>("small-cutoff")? {
        params.small_cutoff = Some(v);
    }
    if let Some(v) = reader.parsed::<f64>("c-target")? {
        params.c_target = v;
    }
    if let Some(v) = reader.parsed::<u32>("probes")? {
        params.probes = v;
    }
    if let Some(v) = reader.parsed::<u32>("sweeps")? {
        params.sweeps = v;
    }
    if let Some(v) = reader.parsed::<u32>("budget")? {
        params.budget = v;
    }
    if let Some(v) = reader.parsed::<f64>("k-const")? {
        params.k_const = v;
    }
    if let Some(v) = reader.parsed::<u32>("cap")? {
        params.cap = v;
    }
    if let Some(v) = reader.parsed::<u64>("max-cells")? {
        params.max_cells = v;
    }
    params.edges_out = reader.parsed::<PathBuf>("edges-out")?;
    params.sample_out = reader.parsed::<PathBuf>("sample-out")?;
    params.summary_out = reader.parsed::<PathBuf>("summary-out")?;
    params.log_out = reader.parsed::<PathBuf>("log-out")?;

    Ok(ExperimentConfig {
        op,
        graphs,
        points,
        seeds,
        seed_base,
        format,
        out,
        threads,
        params,
    })
}

/// Resolves (p, eps) for one graph. Explicit ε needs a regular product;
/// explicit p back-fills ε = p·d − 1 on regular products so downstream
/// thresholds stay available.
pub(crate) fn resolve_point(
    point: PointSpec,
    graph: &crate::graph::ProductGraph,
) -> Result<(f64, Option<f64>)> {
    match point {
        PointSpec::Prob(p) => {
            let eps = graph
                .regular_degree()
                .map(|d| p * d as f64 - 1.0)
                .filter(|&e| e > 0.0);
            Ok((p, eps))
        }
        PointSpec::Eps(eps) => {
            let d = graph.regular_degree().ok_or_else(|| {
                Error::Config(format!(
                    "eps needs a regular product; {} is not regular (give p instead)",
                    graph.spec_text()
                ))
            })?;
            let p = (1.0 + eps) / d as f64;
            if p > 1.0 {
                return Err(Error::Config(format!(
                    "eps {eps} gives p {p} > 1 on degree-{d} product"
                )));
            }
            Ok((p, Some(eps)))
        }
    }
}

/// Sets up the global worker pool. `PRODPERC_THREADS` overrides the
/// configured value; silently keeps the existing pool when one is
/// already installed (tests, repeated calls).
pub fn init_threads(configured: Option<usize>) {
    let from_env = std::env::var("PRODPERC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v > 0);
    if let Some(count) = from_env.or(configured) {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build_global();
    }
}

/// Executes the experiment and writes its artifacts. Rows produced
/// before a mid-run failure are flushed to the output sink first.
pub fn run(cfg: &ExperimentConfig) -> Result<()> {
    let (table, summary, outcome) = ops::execute(cfg);
    let rendered = table.render(cfg.format, summary.as_ref());
    output::write_output(&rendered, cfg.out.as_deref())?;
    if let (Some(path), Some(summary)) = (cfg.params.summary_out.as_deref(), &summary) {
        let mut text = serde_json::to_string_pretty(summary).expect("summary is plain data");
        text.push('\n');
        std::fs::write(path, text)?;
    }
    outcome
}

/// Largest component the diameter auto mode still measures exactly.
pub(crate) fn exact_diameter_applies(l1: u64) -> bool {
    l1 <= EXACT_DIAMETER_GUARD
}
