//! Dynamic graph spanners with low recourse, maintained by reduction to a
//! path-reporting all-pairs shortest-path oracle.
//!
//! * [`graph`]: undirected dynamic graphs with bounded BFS.
//! * [`oracle`]: the APSP oracle interface and two reference oracles.
//! * [`engine`]: the oracle-driven dynamic spanner.
//! * [`baseline`]: static greedy and low-recourse reference spanners.
//! * [`verify`]: brute-force audits of every maintained bound.
//! * [`trace`] and [`harness`]: update traces, generators, and replay.

pub mod baseline;
pub mod engine;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod oracle;
pub mod trace;
pub mod verify;

pub use engine::{DeleteOutcome, EngineError, EngineParams, InsertOutcome, SpannerEngine, SpannerSnapshot};
pub use graph::{Distance, DynamicGraph, Edge, GraphError, VertexId};
pub use metrics::RunMetrics;
pub use oracle::{ApspOracle, BoundedBfsOracle, NaiveRecomputeOracle, OracleConfig, OracleError};
