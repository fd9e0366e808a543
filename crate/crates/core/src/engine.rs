//! Dynamic spanner maintained through an APSP oracle.
//!
//! The engine keeps three nested graphs over the same vertex set:
//!
//! * `G`, the input graph receiving edge insertions and deletions;
//! * `H ⊆ G`, the spanner;
//! * `Ĥ ⊆ H`, the edges of `H` whose congestion is still below the cap `τ`.
//!
//! Every edge of `G` carries an embedding path in `H` of at most
//! `L = 2γ⌈log₂ n⌉` edges; spanner edges embed onto themselves. A new edge is
//! embedded along an oracle path in `Ĥ` when one of length at most `L` exists,
//! and otherwise joins `H`. An edge of `Ĥ` used by `τ = ⌈m/n⌉` embedding paths
//! is evicted from `Ĥ` (and from the oracle) for good. Deleting a spanner edge
//! re-inserts exactly the edges whose embedding used it.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::Instant;

use thiserror::Error;

use crate::graph::{ceil_log2, trace_path, Distance, DynamicGraph, Edge, GraphError};
use crate::metrics::RunMetrics;
use crate::oracle::{ApspOracle, BoundedBfsOracle, OracleConfig, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid budget: need n >= 1 and m >= n, got n={n}, m={m}")]
    InvalidBudget { n: usize, m: usize },
    #[error("invalid approximation factor gamma={0}")]
    InvalidGamma(u32),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("oracle contract violated while inserting {edge}: {reason}")]
    OracleContractViolation { edge: Edge, reason: String },
}

/// Fixed parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineParams {
    pub n: usize,
    /// Declared budget of external insertions.
    pub m: usize,
    pub gamma: u32,
    /// Embedding length threshold `L = 2γ⌈log₂ n⌉`.
    pub threshold: u32,
    /// Congestion cap `τ = ⌈m/n⌉`.
    pub congestion_cap: u32,
}

impl EngineParams {
    pub fn new(n: usize, m: usize, gamma: u32) -> Result<Self, EngineError> {
        if n < 1 || m < n {
            return Err(EngineError::InvalidBudget { n, m });
        }
        if gamma < 1 {
            return Err(EngineError::InvalidGamma(gamma));
        }
        Ok(EngineParams {
            n,
            m,
            gamma,
            threshold: 2 * gamma * ceil_log2(n),
            congestion_cap: m.div_ceil(n) as u32,
        })
    }

    /// Configuration for an oracle serving this engine: depth cutoff `L`.
    pub fn oracle_config(&self) -> OracleConfig {
        OracleConfig::new(self.n, self.gamma, Some(self.threshold.max(1)))
            .expect("gamma validated above")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The edge was embedded along this path of `Ĥ`.
    Embedded(Vec<Edge>),
    AddedToSpanner,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeleteOutcome {
    pub was_spanner_edge: bool,
    /// Edges whose embedding broke, in re-insertion order.
    pub reinserted: Vec<Edge>,
    /// The subset of `reinserted` that joined the spanner.
    pub promoted: Vec<Edge>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SpannerSnapshot {
    pub spanner: BTreeSet<Edge>,
    pub uncongested: BTreeSet<Edge>,
}

#[derive(Debug, Clone)]
pub struct SpannerEngine<O = BoundedBfsOracle> {
    params: EngineParams,
    graph: DynamicGraph,
    spanner: DynamicGraph,
    uncongested: DynamicGraph,
    embedding: HashMap<Edge, Vec<Edge>>,
    congestion: HashMap<Edge, u32>,
    // Reverse index of `embedding`: spanner edge -> G-edges routed through it.
    carriers: HashMap<Edge, BTreeSet<Edge>>,
    evicted: HashSet<Edge>,
    oracle: O,
    metrics: RunMetrics,
}

impl SpannerEngine<BoundedBfsOracle> {
    /// Engine over the exact bounded-BFS oracle.
    pub fn new(n: usize, m: usize, gamma: u32) -> Result<Self, EngineError> {
        let params = EngineParams::new(n, m, gamma)?;
        Self::with_oracle(params, BoundedBfsOracle::new(params.oracle_config()))
    }
}

impl<O: ApspOracle> SpannerEngine<O> {
    /// Engine over a caller-supplied oracle, which must start empty.
    pub fn with_oracle(params: EngineParams, oracle: O) -> Result<Self, EngineError> {
        let config = oracle.config();
        if config.n() != params.n {
            return Err(OracleError::InvalidConfig("oracle vertex count differs from engine").into());
        }
        if config.gamma() > params.gamma {
            return Err(OracleError::InvalidConfig("oracle is coarser than the engine's gamma").into());
        }
        if !oracle.graph().is_empty() {
            return Err(OracleError::InvalidConfig("oracle must start empty").into());
        }
        let n = params.n;
        Ok(SpannerEngine {
            params,
            graph: DynamicGraph::new(n),
            spanner: DynamicGraph::new(n),
            uncongested: DynamicGraph::new(n),
            embedding: HashMap::new(),
            congestion: HashMap::new(),
            carriers: HashMap::new(),
            evicted: HashSet::new(),
            oracle,
            metrics: RunMetrics {
                uncongested_edges: Some(0),
                ..RunMetrics::default()
            },
        })
    }

    pub fn params(&self) -> &EngineParams {
        &self.params
    }

    /// The input graph `G`.
    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    /// The spanner `H`.
    pub fn spanner(&self) -> &DynamicGraph {
        &self.spanner
    }

    /// The uncongested subgraph `Ĥ`.
    pub fn uncongested(&self) -> &DynamicGraph {
        &self.uncongested
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn embedding(&self, e: Edge) -> Option<&[Edge]> {
        self.embedding.get(&e).map(Vec::as_slice)
    }

    /// All `(edge, embedding path)` pairs, in no particular order.
    pub fn embeddings(&self) -> impl Iterator<Item = (Edge, &[Edge])> + '_ {
        self.embedding.iter().map(|(&e, p)| (e, p.as_slice()))
    }

    /// Incrementally maintained congestion of `f`.
    pub fn congestion(&self, f: Edge) -> u32 {
        self.congestion.get(&f).copied().unwrap_or(0)
    }

    /// All non-zero congestion counters, in no particular order.
    pub fn congestion_counters(&self) -> impl Iterator<Item = (Edge, u32)> + '_ {
        self.congestion.iter().map(|(&f, &c)| (f, c))
    }

    /// Whether `f` was evicted from `Ĥ` since it last joined `H`.
    pub fn is_evicted(&self, f: Edge) -> bool {
        self.evicted.contains(&f)
    }

    pub fn snapshot(&self) -> SpannerSnapshot {
        SpannerSnapshot {
            spanner: self.spanner.edges().collect(),
            uncongested: self.uncongested.edges().collect(),
        }
    }

    pub fn metrics(&self) -> RunMetrics {
        RunMetrics {
            spanner_edges: self.spanner.edge_count(),
            uncongested_edges: Some(self.uncongested.edge_count()),
            ..self.metrics.clone()
        }
    }

    /// Processes an external insertion of `e` into `G`.
    pub fn insert_edge(&mut self, e: Edge) -> Result<InsertOutcome, EngineError> {
        self.graph.check_vertex(e.u())?;
        self.graph.check_vertex(e.v())?;
        if self.graph.contains(e) {
            return Err(GraphError::DuplicateEdge(e).into());
        }
        let outcome = self.insert(e)?;
        self.metrics.external_insertions += 1;
        if self.metrics.external_insertions > self.params.m as u64 {
            self.metrics.budget_exceeded = true;
        }
        Ok(outcome)
    }

    /// Processes an external deletion of `e` from `G`.
    pub fn delete_edge(&mut self, e: Edge) -> Result<DeleteOutcome, EngineError> {
        self.graph.remove_edge(e)?;
        self.metrics.deletions += 1;
        if self.metrics.deletions > self.params.n as u64 {
            self.metrics.budget_exceeded = true;
        }

        if !self.spanner.contains(e) {
            // F is empty: embedding paths only use spanner edges.
            self.clear_embedding(e);
            return Ok(DeleteOutcome::default());
        }

        self.metrics.spanner_deletions += 1;
        self.spanner.remove_edge(e)?;
        self.metrics.recourse_removals += 1;
        if self.uncongested.contains(e) {
            self.uncongested.remove_edge(e)?;
            self.oracle_remove(e)?;
        }
        self.evicted.remove(&e);
        self.clear_embedding(e);

        let broken: Vec<Edge> = self
            .carriers
            .get(&e)
            .map(|set| set.iter().copied().collect())
            .unwrap_or_default();
        for &f in &broken {
            self.graph.remove_edge(f)?;
            self.clear_embedding(f);
        }
        debug_assert!(!self.carriers.contains_key(&e));

        let mut promoted = Vec::new();
        for &f in &broken {
            if self.insert(f)? == InsertOutcome::AddedToSpanner {
                promoted.push(f);
            }
        }
        Ok(DeleteOutcome {
            was_spanner_edge: true,
            reinserted: broken,
            promoted,
        })
    }

    fn insert(&mut self, e: Edge) -> Result<InsertOutcome, EngineError> {
        let (u, v) = e.endpoints();
        self.graph.add_edge(e)?;
        self.metrics.insert_calls += 1;

        let threshold = self.params.threshold;
        let estimate = self.oracle_query(|o| o.dist(u, v))?;
        if estimate.within(threshold) {
            let path = self.oracle_query(|o| o.path(u, v))?;
            if let Err(reason) = self.check_oracle_path(e, &path, estimate) {
                self.graph.remove_edge(e)?;
                self.metrics.insert_calls -= 1;
                return Err(EngineError::OracleContractViolation { edge: e, reason });
            }
            self.embed(e, path.clone());
            let cap = self.params.congestion_cap;
            for &f in &path {
                if self.congestion(f) >= cap && self.uncongested.contains(f) {
                    self.evict(f)?;
                }
            }
            Ok(InsertOutcome::Embedded(path))
        } else {
            self.spanner.add_edge(e)?;
            self.metrics.recourse_additions += 1;
            self.embed(e, vec![e]);
            // Only reachable with τ = 1: the self-embedding already saturates e.
            if self.congestion(e) >= self.params.congestion_cap {
                self.evicted.insert(e);
            } else {
                self.uncongested.add_edge(e)?;
                self.oracle_add(e)?;
            }
            Ok(InsertOutcome::AddedToSpanner)
        }
    }

    fn check_oracle_path(&self, e: Edge, path: &[Edge], estimate: Distance) -> Result<(), String> {
        let (u, v) = e.endpoints();
        if path.len() as u32 > self.params.threshold {
            return Err(format!(
                "path of length {} exceeds threshold {}",
                path.len(),
                self.params.threshold
            ));
        }
        if let Distance::Finite(d) = estimate {
            if path.len() as u32 > d {
                return Err(format!("path of length {} exceeds estimate {d}", path.len()));
            }
        }
        if trace_path(path, u, v).is_none() {
            return Err("path is not a simple walk between the endpoints".to_string());
        }
        if let Some(f) = path.iter().find(|&&f| !self.uncongested.contains(f)) {
            return Err(format!("path uses {f}, which is not in the uncongested subgraph"));
        }
        Ok(())
    }

    fn embed(&mut self, e: Edge, path: Vec<Edge>) {
        for &f in &path {
            let c = self.congestion.entry(f).or_insert(0);
            *c += 1;
            self.metrics.max_congestion = self.metrics.max_congestion.max(*c);
            self.carriers.entry(f).or_default().insert(e);
        }
        let previous = self.embedding.insert(e, path);
        debug_assert!(previous.is_none(), "edge {e} embedded twice");
    }

    fn clear_embedding(&mut self, e: Edge) {
        let Some(path) = self.embedding.remove(&e) else {
            return;
        };
        for f in path {
            if let Some(c) = self.congestion.get_mut(&f) {
                *c -= 1;
                if *c == 0 {
                    self.congestion.remove(&f);
                }
            }
            if let Some(set) = self.carriers.get_mut(&f) {
                set.remove(&e);
                if set.is_empty() {
                    self.carriers.remove(&f);
                }
            }
        }
    }

    fn evict(&mut self, f: Edge) -> Result<(), EngineError> {
        self.uncongested.remove_edge(f)?;
        self.oracle_remove(f)?;
        self.evicted.insert(f);
        Ok(())
    }

    fn oracle_query<T>(
        &mut self,
        query: impl FnOnce(&O) -> Result<T, OracleError>,
    ) -> Result<T, EngineError> {
        let start = Instant::now();
        let result = query(&self.oracle);
        self.metrics.oracle.query_time += start.elapsed();
        self.metrics.oracle.queries += 1;
        Ok(result?)
    }

    fn oracle_add(&mut self, e: Edge) -> Result<(), EngineError> {
        let start = Instant::now();
        let result = self.oracle.add_edge(e);
        self.metrics.oracle.update_time += start.elapsed();
        self.metrics.oracle.updates += 1;
        Ok(result?)
    }

    fn oracle_remove(&mut self, e: Edge) -> Result<(), EngineError> {
        let start = Instant::now();
        let result = self.oracle.remove_edge(e);
        self.metrics.oracle.update_time += start.elapsed();
        self.metrics.oracle.updates += 1;
        Ok(result?)
    }

    /// Overwrites a congestion counter. Exists only to exercise the auditor.
    #[doc(hidden)]
    pub fn inject_congestion_fault(&mut self, f: Edge, value: u32) {
        self.congestion.insert(f, value);
    }
}
