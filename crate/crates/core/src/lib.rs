//! Processing-order tools for iterative graph algorithms.
//!
//! An asynchronous sweep updates vertices in place, so every edge whose
//! source comes before its destination in the processing order lets fresh
//! state flow within a single sweep. This crate measures orders by that
//! positive-edge count, builds orders that maximise it, and runs monotone
//! iterative algorithms (PageRank, SSSP, BFS, penalized hitting probability)
//! in synchronous or asynchronous mode to count the sweeps an order costs.

pub mod algos;
pub mod baselines;
pub mod bench;
pub mod engine;
pub mod error;
pub mod generate;
pub mod gograph;
pub mod graph;
pub mod metric;
pub mod order;

pub use algos::{AlgoKind, AlgoParams, AlgorithmSpec};
pub use baselines::{Method, MethodParams};
pub use engine::{run, run_async, run_sync, EngineConfig, Mode, RunReport};
pub use error::{Error, Result};
pub use gograph::{gograph_order, reorder, GoGraphConfig};
pub use graph::{parse_edge_list, Graph, ParseOptions};
pub use metric::{evaluate_m, MetricReport};
pub use order::Ordering;
