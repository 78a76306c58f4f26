//! Command-line front end: experiments on percolated product graphs.
//!
//! Every subcommand reads the shared flags plus an optional `--config`
//! file of `key=value` lines; flags override file keys. Exit codes:
//! 0 success, 2 configuration problems, 3 guard violations, 1 other
//! failures.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use prodperc::cli::{self, OpKind};

#[derive(Parser)]
#[command(
    name = "prodperc",
    version,
    about = "Percolation, expansion, and mixing experiments on Cartesian product graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct Common {
    /// Graph expression, e.g. Q14, K4xC9, C5^3, file(edges.txt) (repeatable).
    #[arg(long, value_name = "EXPR", value_delimiter = ',')]
    graph: Vec<String>,
    /// Supercriticality: retention becomes p = (1+eps)/d (repeatable).
    #[arg(long, value_name = "X", value_delimiter = ',')]
    eps: Vec<f64>,
    /// Edge retention probability, exclusive with --eps (repeatable).
    #[arg(long, value_name = "PROB", value_delimiter = ',')]
    p: Vec<f64>,
    /// Replicates per (graph, strength) cell.
    #[arg(long, value_name = "COUNT")]
    seeds: Option<u32>,
    /// Replicate i runs with seed seed-base + i.
    #[arg(long, value_name = "SEED")]
    seed_base: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format: csv or json.
    #[arg(long, value_name = "FMT")]
    format: Option<String>,
    /// Worker threads (PRODPERC_THREADS overrides).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// key=value config file; flags override its keys.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build product graphs and report their shape.
    Gen {
        #[command(flatten)]
        common: Common,
        /// Write the edge list ("n m" header, one "u v" line per edge).
        #[arg(long, value_name = "PATH")]
        edges_out: Option<PathBuf>,
    },
    /// Sample percolation and report retention.
    Percolate {
        #[command(flatten)]
        common: Common,
        /// Write the sample in the binary container (single cell only).
        #[arg(long, value_name = "PATH")]
        sample_out: Option<PathBuf>,
    },
    /// Component structure of percolated samples.
    Giant {
        #[command(flatten)]
        common: Common,
        /// Write the per-cell summary JSON here as well.
        #[arg(long, value_name = "PATH")]
        summary_out: Option<PathBuf>,
    },
    /// Exact isoperimetric profile with lower bounds (small graphs).
    Iso {
        #[command(flatten)]
        common: Common,
        /// Largest subset size to profile (default n).
        #[arg(long, value_name = "K")]
        k_max: Option<u64>,
    },
    /// Audit expansion of sampled subsets of the giant component.
    Expand {
        #[command(flatten)]
        common: Common,
        /// Subset sizes to audit (repeatable / comma-separated).
        #[arg(long, value_name = "K", value_delimiter = ',')]
        sizes: Vec<u64>,
        /// Draws per size.
        #[arg(long, value_name = "COUNT")]
        draws: Option<u64>,
        /// Audited expansion constant.
        #[arg(long, value_name = "C")]
        c: Option<f64>,
        /// Subset family: connected or arbitrary.
        #[arg(long, value_name = "MODE")]
        mode: Option<String>,
        /// Lower size cutoff of the connected-small regime.
        #[arg(long, value_name = "K")]
        small_cutoff: Option<u64>,
    },
    /// Extract a certified expanding subgraph from the giant component.
    Extract {
        #[command(flatten)]
        common: Common,
        /// Expansion target constant.
        #[arg(long, value_name = "C")]
        c_target: Option<f64>,
        /// Connected probes per certification round.
        #[arg(long, value_name = "COUNT")]
        probes: Option<u32>,
        /// Sweep vectors per round.
        #[arg(long, value_name = "COUNT")]
        sweeps: Option<u32>,
        /// Write removal events as JSON lines.
        #[arg(long, value_name = "PATH")]
        log_out: Option<PathBuf>,
    },
    /// Diameter of the giant component.
    Diameter {
        #[command(flatten)]
        common: Common,
        /// exact, sampled, or auto.
        #[arg(long, value_name = "MODE")]
        mode: Option<String>,
        /// Double-sweep starts in sampled mode.
        #[arg(long, value_name = "COUNT")]
        sweeps: Option<u32>,
    },
    /// Longest cycle found in the giant component.
    Cycle {
        #[command(flatten)]
        common: Common,
        /// Rotation-extension restarts.
        #[arg(long, value_name = "COUNT")]
        budget: Option<u32>,
    },
    /// Lazy-walk mixing time and conductance profile of the giant.
    Mixing {
        #[command(flatten)]
        common: Common,
        /// Probe sets per dyadic level.
        #[arg(long, value_name = "COUNT")]
        probes: Option<u32>,
        /// Multiplier for the profile mixing bound.
        #[arg(long, value_name = "K")]
        k_const: Option<f64>,
        /// Step cap for the exact mixing time.
        #[arg(long, value_name = "STEPS")]
        cap: Option<u32>,
    },
    /// Run a config-driven grid (op=... selects the operation).
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Operation to sweep (overrides op= in the config).
        #[arg(long, value_name = "OP")]
        op: Option<String>,
        /// Refuse grids with more cells than this.
        #[arg(long, value_name = "N")]
        max_cells: Option<u64>,
    },
    /// Deterministic self-check battery.
    Selftest {
        #[command(flatten)]
        common: Common,
    },
}

/// Collects explicitly given flags as config entries; absent flags stay
/// absent so file keys show through.
struct FlagMap(BTreeMap<String, Vec<String>>);

impl FlagMap {
    fn new() -> FlagMap {
        FlagMap(BTreeMap::new())
    }

    fn put<T: ToString>(&mut self, key: &str, value: &Option<T>) {
        if let Some(v) = value {
            self.0.insert(key.to_string(), vec![v.to_string()]);
        }
    }

    fn put_list<T: ToString>(&mut self, key: &str, values: &[T]) {
        if !values.is_empty() {
            self.0.insert(
                key.to_string(),
                values.iter().map(|v| v.to_string()).collect(),
            );
        }
    }
}

fn common_flags(common: &Common) -> FlagMap {
    let mut flags = FlagMap::new();
    flags.put_list("graph", &common.graph);
    flags.put_list("eps", &common.eps);
    flags.put_list("p", &common.p);
    flags.put("seeds", &common.seeds);
    flags.put("seed-base", &common.seed_base);
    flags.put("out", &common.out.as_ref().map(|p| p.display().to_string()));
    flags.put("format", &common.format);
    flags.put("threads", &common.threads);
    flags
}

fn path_string(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn dispatch(cmd: Cmd) -> prodperc::Result<()> {
    let (op, common, mut flags, sweep) = match cmd {
        Cmd::Gen { common, edges_out } => {
            let mut flags = common_flags(&common);
            flags.put("edges-out", &path_string(&edges_out));
            (OpKind::Gen, common, flags, false)
        }
        Cmd::Percolate { common, sample_out } => {
            let mut flags = common_flags(&common);
            flags.put("sample-out", &path_string(&sample_out));
            (OpKind::Percolate, common, flags, false)
        }
        Cmd::Giant { common, summary_out } => {
            let mut flags = common_flags(&common);
            flags.put("summary-out", &path_string(&summary_out));
            (OpKind::Giant, common, flags, false)
        }
        Cmd::Iso { common, k_max } => {
            let mut flags = common_flags(&common);
            flags.put("k-max", &k_max);
            (OpKind::Iso, common, flags, false)
        }
        Cmd::Expand {
            common,
            sizes,
            draws,
            c,
            mode,
            small_cutoff,
        } => {
            let mut flags = common_flags(&common);
            flags.put_list("sizes", &sizes);
            flags.put("draws", &draws);
            flags.put("c", &c);
            flags.put("mode", &mode);
            flags.put("small-cutoff", &small_cutoff);
            (OpKind::Expand, common, flags, false)
        }
        Cmd::Extract {
            common,
            c_target,
            probes,
            sweeps,
            log_out,
        } => {
            let mut flags = common_flags(&common);
            flags.put("c-target", &c_target);
            flags.put("probes", &probes);
            flags.put("sweeps", &sweeps);
            flags.put("log-out", &path_string(&log_out));
            (OpKind::Extract, common, flags, false)
        }
        Cmd::Diameter { common, mode, sweeps } => {
            let mut flags = common_flags(&common);
            flags.put("mode", &mode);
            flags.put("sweeps", &sweeps);
            (OpKind::Diameter, common, flags, false)
        }
        Cmd::Cycle { common, budget } => {
            let mut flags = common_flags(&common);
            flags.put("budget", &budget);
            (OpKind::Cycle, common, flags, false)
        }
        Cmd::Mixing {
            common,
            probes,
            k_const,
            cap,
        } => {
            let mut flags = common_flags(&common);
            flags.put("probes", &probes);
            flags.put("k-const", &k_const);
            flags.put("cap", &cap);
            (OpKind::Mixing, common, flags, false)
        }
        Cmd::Sweep {
            common,
            op,
            max_cells,
        } => {
            let mut flags = common_flags(&common);
            flags.put("op", &op);
            flags.put("max-cells", &max_cells);
            (OpKind::Selftest, common, flags, true) // placeholder op; sweep resolves its own
        }
        Cmd::Selftest { common } => {
            let flags = common_flags(&common);
            (OpKind::Selftest, common, flags, false)
        }
    };
    let flags = std::mem::take(&mut flags.0);
    let cfg = if sweep {
        cli::assemble_sweep(common.config.as_deref(), flags)?
    } else {
        cli::assemble(op, common.config.as_deref(), flags)?
    };
    cli::init_threads(cfg.threads);
    cli::run(&cfg)
}
