//! Path-reporting approximate all-pairs shortest-path oracles over an
//! edge-dynamic graph.
//!
//! An oracle with approximation factor `gamma` answers `dist(u, v)` with an
//! estimate `d` such that `true ≤ d ≤ gamma · true`, and `path(u, v)` with a
//! simple path of at most `dist(u, v)` edges. An oracle may be configured with
//! a depth cutoff, beyond which it only promises to report
//! [`Distance::ExceedsCutoff`] or [`Distance::Unreachable`].

use thiserror::Error;

use crate::graph::{DynamicGraph, Distance, Edge, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no path between {u} and {v} within the oracle's cutoff")]
    NoPathWithinCutoff { u: VertexId, v: VertexId },
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    n: usize,
    gamma: u32,
    cutoff: Option<u32>,
}

impl OracleConfig {
    pub fn new(n: usize, gamma: u32, cutoff: Option<u32>) -> Result<Self, OracleError> {
        if gamma < 1 {
            return Err(OracleError::InvalidConfig("gamma must be at least 1"));
        }
        if cutoff == Some(0) {
            return Err(OracleError::InvalidConfig("cutoff must be at least 1"));
        }
        Ok(OracleConfig { n, gamma, cutoff })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn cutoff(&self) -> Option<u32> {
        self.cutoff
    }
}

/// A dynamic path-reporting APSP structure.
pub trait ApspOracle: Send {
    fn config(&self) -> &OracleConfig;

    fn add_edge(&mut self, e: Edge) -> Result<(), OracleError>;

    fn remove_edge(&mut self, e: Edge) -> Result<(), OracleError>;

    fn dist(&self, u: VertexId, v: VertexId) -> Result<Distance, OracleError>;

    /// A simple `u`-`v` path of length at most `dist(u, v)`.
    ///
    /// Fails with [`OracleError::NoPathWithinCutoff`] when `dist(u, v)` is not finite.
    fn path(&self, u: VertexId, v: VertexId) -> Result<Vec<Edge>, OracleError>;

    /// The oracle's current graph.
    fn graph(&self) -> &DynamicGraph;
}

/// Exact oracle (`gamma`-approximate for any `gamma ≥ 1`) answering each
/// query with a fresh depth-bounded BFS. No state beyond the graph.
#[derive(Debug, Clone)]
pub struct BoundedBfsOracle {
    config: OracleConfig,
    graph: DynamicGraph,
}

impl BoundedBfsOracle {
    pub fn new(config: OracleConfig) -> Self {
        BoundedBfsOracle {
            graph: DynamicGraph::new(config.n),
            config,
        }
    }
}

impl ApspOracle for BoundedBfsOracle {
    fn config(&self) -> &OracleConfig {
        &self.config
    }

    fn add_edge(&mut self, e: Edge) -> Result<(), OracleError> {
        Ok(self.graph.add_edge(e)?)
    }

    fn remove_edge(&mut self, e: Edge) -> Result<(), OracleError> {
        Ok(self.graph.remove_edge(e)?)
    }

    fn dist(&self, u: VertexId, v: VertexId) -> Result<Distance, OracleError> {
        Ok(self.graph.bfs_distance(u, v, self.config.cutoff)?)
    }

    fn path(&self, u: VertexId, v: VertexId) -> Result<Vec<Edge>, OracleError> {
        self.graph
            .bfs_path(u, v, self.config.cutoff)?
            .ok_or(OracleError::NoPathWithinCutoff { u, v })
    }

    fn graph(&self) -> &DynamicGraph {
        &self.graph
    }
}

const INF: u32 = u32::MAX;

/// Reference oracle that recomputes a full distance and next-hop table with
/// Floyd–Warshall after every update. `O(n³)` per update; meant for
/// differential testing on small graphs only.
#[derive(Debug, Clone)]
pub struct NaiveRecomputeOracle {
    config: OracleConfig,
    graph: DynamicGraph,
    dist: Vec<u32>,
    next: Vec<VertexId>,
}

impl NaiveRecomputeOracle {
    pub fn new(config: OracleConfig) -> Self {
        let mut oracle = NaiveRecomputeOracle {
            graph: DynamicGraph::new(config.n),
            dist: Vec::new(),
            next: Vec::new(),
            config,
        };
        oracle.recompute();
        oracle
    }

    fn recompute(&mut self) {
        let n = self.config.n;
        self.dist = vec![INF; n * n];
        self.next = vec![VertexId::MAX; n * n];
        for x in 0..n {
            self.dist[x * n + x] = 0;
            self.next[x * n + x] = x as VertexId;
        }
        for e in self.graph.edges() {
            let (a, b) = (e.u() as usize, e.v() as usize);
            self.dist[a * n + b] = 1;
            self.dist[b * n + a] = 1;
            self.next[a * n + b] = b as VertexId;
            self.next[b * n + a] = a as VertexId;
        }
        for k in 0..n {
            for i in 0..n {
                let dik = self.dist[i * n + k];
                if dik == INF {
                    continue;
                }
                for j in 0..n {
                    let dkj = self.dist[k * n + j];
                    if dkj == INF {
                        continue;
                    }
                    if dik + dkj < self.dist[i * n + j] {
                        self.dist[i * n + j] = dik + dkj;
                        self.next[i * n + j] = self.next[i * n + k];
                    }
                }
            }
        }
    }

    fn exact(&self, u: VertexId, v: VertexId) -> Result<Option<u32>, OracleError> {
        self.graph.check_vertex(u)?;
        self.graph.check_vertex(v)?;
        let d = self.dist[u as usize * self.config.n + v as usize];
        Ok((d != INF).then_some(d))
    }
}

impl ApspOracle for NaiveRecomputeOracle {
    fn config(&self) -> &OracleConfig {
        &self.config
    }

    fn add_edge(&mut self, e: Edge) -> Result<(), OracleError> {
        self.graph.add_edge(e)?;
        self.recompute();
        Ok(())
    }

    fn remove_edge(&mut self, e: Edge) -> Result<(), OracleError> {
        self.graph.remove_edge(e)?;
        self.recompute();
        Ok(())
    }

    fn dist(&self, u: VertexId, v: VertexId) -> Result<Distance, OracleError> {
        Ok(match (self.exact(u, v)?, self.config.cutoff) {
            (None, _) => Distance::Unreachable,
            (Some(d), Some(l)) if d > l => Distance::ExceedsCutoff(l),
            (Some(d), _) => Distance::Finite(d),
        })
    }

    fn path(&self, u: VertexId, v: VertexId) -> Result<Vec<Edge>, OracleError> {
        if self.dist(u, v)?.finite().is_none() {
            return Err(OracleError::NoPathWithinCutoff { u, v });
        }
        let n = self.config.n;
        let mut path = Vec::new();
        let mut at = u;
        while at != v {
            let hop = self.next[at as usize * n + v as usize];
            path.push(Edge::new(at, hop).expect("next-hop table never loops"));
            at = hop;
        }
        Ok(path)
    }

    fn graph(&self) -> &DynamicGraph {
        &self.graph
    }
}

/// One mutation forwarded to a wrapped oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleCall {
    Add(Edge),
    Remove(Edge),
}

/// Decorator that logs every successful mutation of the wrapped oracle.
#[derive(Debug, Clone)]
pub struct RecordingOracle<O> {
    inner: O,
    log: Vec<OracleCall>,
}

impl<O: ApspOracle> RecordingOracle<O> {
    pub fn new(inner: O) -> Self {
        RecordingOracle {
            inner,
            log: Vec::new(),
        }
    }

    pub fn log(&self) -> &[OracleCall] {
        &self.log
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: ApspOracle> ApspOracle for RecordingOracle<O> {
    fn config(&self) -> &OracleConfig {
        self.inner.config()
    }

    fn add_edge(&mut self, e: Edge) -> Result<(), OracleError> {
        self.inner.add_edge(e)?;
        self.log.push(OracleCall::Add(e));
        Ok(())
    }

    fn remove_edge(&mut self, e: Edge) -> Result<(), OracleError> {
        self.inner.remove_edge(e)?;
        self.log.push(OracleCall::Remove(e));
        Ok(())
    }

    fn dist(&self, u: VertexId, v: VertexId) -> Result<Distance, OracleError> {
        self.inner.dist(u, v)
    }

    fn path(&self, u: VertexId, v: VertexId) -> Result<Vec<Edge>, OracleError> {
        self.inner.path(u, v)
    }

    fn graph(&self) -> &DynamicGraph {
        self.inner.graph()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::trace_path;

    fn e(a: VertexId, b: VertexId) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn both(n: usize, cutoff: Option<u32>) -> (BoundedBfsOracle, NaiveRecomputeOracle) {
        let config = OracleConfig::new(n, 1, cutoff).unwrap();
        (BoundedBfsOracle::new(config), NaiveRecomputeOracle::new(config))
    }

    fn each(n: usize, cutoff: Option<u32>, f: impl Fn(&mut dyn ApspOracle)) {
        let (mut a, mut b) = both(n, cutoff);
        f(&mut a);
        f(&mut b);
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::new(4, 0, None).is_err());
        assert!(OracleConfig::new(4, 1, Some(0)).is_err());
        assert!(OracleConfig::new(4, 3, Some(6)).is_ok());
    }

    #[test]
    fn add_edge_examples() {
        each(4, None, |o| {
            o.add_edge(e(0, 1)).unwrap();
            assert_eq!(o.dist(0, 1).unwrap(), Distance::Finite(1));
            o.add_edge(e(1, 2)).unwrap();
            assert_eq!(o.dist(0, 2).unwrap(), Distance::Finite(2));
            assert_eq!(
                o.add_edge(e(1, 0)),
                Err(OracleError::Graph(GraphError::DuplicateEdge(e(0, 1))))
            );
        });
    }

    #[test]
    fn remove_edge_examples() {
        each(4, None, |o| {
            o.add_edge(e(0, 1)).unwrap();
            o.remove_edge(e(0, 1)).unwrap();
            assert_eq!(o.dist(0, 1).unwrap(), Distance::Unreachable);
            assert_eq!(
                o.remove_edge(e(0, 1)),
                Err(OracleError::Graph(GraphError::MissingEdge(e(0, 1))))
            );
            for x in [e(0, 1), e(1, 2), e(2, 3), e(0, 3)] {
                o.add_edge(x).unwrap();
            }
            o.remove_edge(e(0, 3)).unwrap();
            assert_eq!(o.dist(0, 3).unwrap(), Distance::Finite(3));
        });
    }

    #[test]
    fn dist_examples() {
        each(9, Some(6), |o| {
            assert_eq!(o.dist(3, 3).unwrap(), Distance::Finite(0));
            assert_eq!(o.dist(0, 5).unwrap(), Distance::Unreachable);
            for i in 0..8 {
                o.add_edge(e(i, i + 1)).unwrap();
            }
            assert_eq!(o.dist(0, 8).unwrap(), Distance::ExceedsCutoff(6));
            assert!(matches!(
                o.dist(0, 9),
                Err(OracleError::Graph(GraphError::VertexOutOfRange { .. }))
            ));
        });
    }

    #[test]
    fn path_examples() {
        each(9, Some(6), |o| {
            o.add_edge(e(0, 1)).unwrap();
            assert_eq!(o.path(0, 1).unwrap(), vec![e(0, 1)]);
            o.add_edge(e(1, 2)).unwrap();
            assert_eq!(o.path(0, 2).unwrap(), vec![e(0, 1), e(1, 2)]);
            for i in 2..8 {
                o.add_edge(e(i, i + 1)).unwrap();
            }
            assert_eq!(
                o.path(0, 8),
                Err(OracleError::NoPathWithinCutoff { u: 0, v: 8 })
            );
            let p = o.path(1, 7).unwrap();
            assert_eq!(p.len(), 6);
            assert!(trace_path(&p, 1, 7).is_some());
        });
    }

    #[test]
    fn recording_oracle_logs_mutations() {
        let config = OracleConfig::new(4, 1, None).unwrap();
        let mut o = RecordingOracle::new(BoundedBfsOracle::new(config));
        o.add_edge(e(0, 1)).unwrap();
        assert!(o.add_edge(e(0, 1)).is_err());
        o.remove_edge(e(0, 1)).unwrap();
        assert_eq!(o.log(), &[OracleCall::Add(e(0, 1)), OracleCall::Remove(e(0, 1))]);
    }
}
