//! Percolation on high-dimensional Cartesian product graphs.
//!
//! The crate builds products of small base graphs (`K n`, `C n`, `P n`,
//! `Q n`, edge-list files), runs seed-reproducible bond percolation on
//! them, and measures the structure that emerges: component sizes, edge
//! isoperimetry, vertex expansion, expander subgraphs, distances, long
//! cycles, and lazy-walk mixing. A command-line driver (`prodperc`)
//! exposes the same operations as batch experiments with CSV/JSON output.

pub mod error;
pub mod graph;
pub mod rng;

pub mod components;
pub mod expansion;
pub mod iso;
pub mod longrange;
pub mod percolation;
pub mod subset;
pub mod view;
pub mod walk;

pub mod cli;

pub use error::{Error, Result};
pub use graph::{build_graph, build_product, parse_graph_expr, BuildOptions, GraphSpec, ProductGraph};
