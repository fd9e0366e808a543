//! Reference spanners: the static greedy construction and the simple
//! low-recourse dynamic maintainer that re-scans every non-spanner edge after
//! a spanner edge is deleted. Both use exact BFS distances and are meant as
//! correctness baselines, not for speed.

use num_bigint::BigUint;

use crate::graph::{ceil_log2, DynamicGraph, Edge, GraphError};
use crate::metrics::RunMetrics;

/// Greedy `2δ`-spanner: scan `edges` in order, keeping an edge iff its
/// endpoints are more than `2δ` apart in the spanner built so far.
pub fn static_greedy(edges: &[Edge], n: usize, delta: u32) -> Result<DynamicGraph, GraphError> {
    assert!(delta >= 1, "greedy threshold parameter must be at least 1");
    let mut seen = DynamicGraph::new(n);
    let mut spanner = DynamicGraph::new(n);
    for &e in edges {
        seen.add_edge(e)?;
        if !spanner.bfs_distance(e.u(), e.v(), Some(2 * delta))?.within(2 * delta) {
            spanner.add_edge(e)?;
        }
    }
    Ok(spanner)
}

/// True iff `g` has no cycle shorter than `k`.
pub fn girth_at_least(g: &DynamicGraph, k: u32) -> bool {
    if k <= 3 {
        return true;
    }
    // A cycle of length < k through e = (u,v) is a u-v path of length <= k-2 avoiding e.
    g.edges().all(|e| {
        !g.bfs_distance_avoiding(e.u(), e.v(), Some(k - 2), e)
            .expect("edge endpoints are in range")
            .within(k - 2)
    })
}

/// `⌈2 · n^(1 + 1/δ)⌉`, computed exactly.
pub fn sparsity_bound(n: usize, delta: u32) -> u64 {
    assert!(n >= 1 && delta >= 1);
    let estimate = 2.0 * (n as f64).powf(1.0 + 1.0 / f64::from(delta));
    // k >= 2 n^(1+1/δ)  <=>  k^δ >= 2^δ n^(δ+1)
    let target = BigUint::from(2u32).pow(delta) * BigUint::from(n).pow(delta + 1);
    let covers = |k: u64| BigUint::from(k).pow(delta) >= target;
    let mut k = estimate.ceil() as u64;
    while !covers(k) {
        k += 1;
    }
    while k > 0 && covers(k - 1) {
        k -= 1;
    }
    k
}

/// Dynamic greedy spanner with low recourse but no efficiency guarantees.
///
/// An inserted edge joins `H` iff the exact `H`-distance between its endpoints
/// exceeds `2⌈log₂ n⌉`. After a spanner edge is deleted, every edge of
/// `G \ H` is pushed through the same rule again in ascending order, so `H`
/// only ever loses edges to external deletions.
#[derive(Debug, Clone)]
pub struct LowRecourseSpanner {
    threshold: u32,
    graph: DynamicGraph,
    spanner: DynamicGraph,
    metrics: RunMetrics,
}

impl LowRecourseSpanner {
    pub fn new(n: usize) -> Self {
        LowRecourseSpanner {
            threshold: 2 * ceil_log2(n),
            graph: DynamicGraph::new(n),
            spanner: DynamicGraph::new(n),
            metrics: RunMetrics::default(),
        }
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn spanner(&self) -> &DynamicGraph {
        &self.spanner
    }

    pub fn metrics(&self) -> RunMetrics {
        RunMetrics {
            spanner_edges: self.spanner.edge_count(),
            ..self.metrics.clone()
        }
    }

    /// Returns whether `e` joined the spanner.
    pub fn insert(&mut self, e: Edge) -> Result<bool, GraphError> {
        self.graph.add_edge(e)?;
        self.metrics.external_insertions += 1;
        self.process(e)
    }

    pub fn delete(&mut self, e: Edge) -> Result<(), GraphError> {
        self.graph.remove_edge(e)?;
        self.metrics.deletions += 1;
        if !self.spanner.contains(e) {
            // H is unchanged, so every non-spanner edge still has its detour.
            return Ok(());
        }
        self.spanner.remove_edge(e)?;
        self.metrics.spanner_deletions += 1;
        self.metrics.recourse_removals += 1;
        let pending: Vec<Edge> = self
            .graph
            .edges()
            .filter(|&f| !self.spanner.contains(f))
            .collect();
        for f in pending {
            self.process(f)?;
        }
        Ok(())
    }

    fn process(&mut self, e: Edge) -> Result<bool, GraphError> {
        self.metrics.insert_calls += 1;
        let d = self.spanner.bfs_distance(e.u(), e.v(), Some(self.threshold))?;
        if d.within(self.threshold) {
            return Ok(false);
        }
        self.spanner.add_edge(e)?;
        self.metrics.recourse_additions += 1;
        Ok(true)
    }
}
