//! Brute-force audits of spanner states and finished runs.
//!
//! Every audit is read-only. Large graphs (more than
//! [`AuditOptions::sample_above`] vertices) are audited on a deterministic
//! sample of BFS sources and edges instead of exhaustively.

use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::baseline::{sparsity_bound, LowRecourseSpanner};
use crate::engine::SpannerEngine;
use crate::graph::{ceil_log2, trace_path, DynamicGraph, Edge, VertexId};
use crate::metrics::RunMetrics;
use crate::oracle::ApspOracle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("spanner edge {0} is not in the input graph")]
    NotSubgraph(Edge),
    #[error(
        "run exceeded its declared budget ({insertions} insertions for m={m}, {deletions} deletions for n={n})"
    )]
    BudgetExceeded {
        insertions: u64,
        deletions: u64,
        m: usize,
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Within the enforced bound but above a tighter advisory one.
    Flag,
    /// Not applicable to this run.
    Skip,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Flag => "FLAG",
            CheckStatus::Skip => "SKIP",
        })
    }
}

/// Concrete evidence attached to a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A vertex pair whose spanner distance is too large (`None` = unreachable).
    Pair {
        u: VertexId,
        v: VertexId,
        graph_dist: u32,
        spanner_dist: Option<u32>,
    },
    Edge(Edge),
    Counter {
        edge: Edge,
        stored: u32,
        recomputed: u32,
    },
    /// A cycle of the given length through this edge.
    Cycle { edge: Edge, length: u32 },
    Quantity { measured: u64, bound: u64 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair {
                u,
                v,
                graph_dist,
                spanner_dist,
            } => {
                let sd = spanner_dist.map_or_else(|| "inf".to_string(), |d| d.to_string());
                write!(f, "pair({u},{v}) dist_G={graph_dist} dist_H={sd}")
            }
            Witness::Edge(e) => write!(f, "edge{e}"),
            Witness::Counter {
                edge,
                stored,
                recomputed,
            } => write!(f, "counter{edge} stored={stored} recomputed={recomputed}"),
            Witness::Cycle { edge, length } => write!(f, "cycle through {edge} of length {length}"),
            Witness::Quantity { measured, bound } => write!(f, "{measured}>{bound}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub measured: String,
    pub bound: String,
    pub witness: Option<Witness>,
}

impl Check {
    fn new(name: &str, measured: impl ToString, bound: impl ToString, witness: Option<Witness>) -> Self {
        Check {
            name: name.to_string(),
            status: if witness.is_some() {
                CheckStatus::Fail
            } else {
                CheckStatus::Pass
            },
            measured: measured.to_string(),
            bound: bound.to_string(),
            witness,
        }
    }

    fn with_status(mut self, status: CheckStatus) -> Self {
        self.status = status;
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} measured={} bound={}",
            self.name, self.status, self.measured, self.bound
        )?;
        if let Some(w) = &self.witness {
            write!(f, " witness={w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditReport {
    pub checks: Vec<Check>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn flagged(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Flag)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: AuditReport) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditOptions {
    /// Graphs with more vertices than this are audited on a sample.
    pub sample_above: usize,
    /// Number of BFS sources (and cycle-check edges / 4) in a sampled audit.
    pub sample_sources: usize,
    pub seed: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            sample_above: 512,
            sample_sources: 32,
            seed: 0x5eed,
        }
    }
}

impl AuditOptions {
    fn sources(&self, n: usize, salt: u64) -> Vec<VertexId> {
        if n <= self.sample_above || n <= self.sample_sources {
            return (0..n as VertexId).collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt);
        let mut picked: Vec<VertexId> = sample(&mut rng, n, self.sample_sources)
            .into_iter()
            .map(|x| x as VertexId)
            .collect();
        picked.sort_unstable();
        picked
    }

    fn edges(&self, g: &DynamicGraph, salt: u64) -> Vec<Edge> {
        let all = g.edge_vec();
        let budget = self.sample_sources * 4;
        if g.vertex_count() <= self.sample_above || all.len() <= budget {
            return all;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt);
        let mut idx = sample(&mut rng, all.len(), budget).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| all[i]).collect()
    }
}

/// Maximum size of a spanner on `n` vertices with approximation `gamma`:
/// `4γn⌈log₂ n⌉ + ⌈2n^(1+1/⌈log₂ n⌉)⌉`.
pub fn spanner_size_bound(n: usize, gamma: u32) -> u64 {
    let log = ceil_log2(n);
    4 * u64::from(gamma) * n as u64 * u64::from(log) + sparsity_bound(n.max(1), log.max(1))
}

/// Smallest cycle length the uncongested subgraph (or the low-recourse
/// spanner) must respect: `2⌈log₂ n⌉ + 1`.
pub fn required_girth(n: usize) -> u32 {
    2 * ceil_log2(n) + 1
}

/// Checks `dist_H(u,v) <= bound · dist_G(u,v)` for every connected pair.
pub fn audit_stretch(
    g: &DynamicGraph,
    h: &DynamicGraph,
    bound: u32,
    options: &AuditOptions,
) -> Result<AuditReport, AuditError> {
    if let Some(e) = h.edges().find(|&e| !g.contains(e)) {
        return Err(AuditError::NotSubgraph(e));
    }
    let sources = options.sources(g.vertex_count(), 1);
    let per_source: Vec<(f64, Option<Witness>)> = sources
        .par_iter()
        .map(|&s| {
            let dg = g.bfs_all(s);
            let dh = h.bfs_all(s);
            let mut worst = 1.0f64;
            let mut witness = None;
            for (t, (&a, &b)) in dg.iter().zip(&dh).enumerate() {
                let Some(a) = a.filter(|&a| a > 0) else {
                    continue;
                };
                match b {
                    Some(b) => {
                        worst = worst.max(f64::from(b) / f64::from(a));
                        if b > bound.saturating_mul(a) && witness.is_none() {
                            witness = Some(Witness::Pair {
                                u: s,
                                v: t as VertexId,
                                graph_dist: a,
                                spanner_dist: Some(b),
                            });
                        }
                    }
                    None => {
                        worst = f64::INFINITY;
                        witness.get_or_insert(Witness::Pair {
                            u: s,
                            v: t as VertexId,
                            graph_dist: a,
                            spanner_dist: None,
                        });
                    }
                }
            }
            (worst, witness)
        })
        .collect();
    let worst = per_source.iter().map(|r| r.0).fold(1.0, f64::max);
    let witness = per_source.into_iter().find_map(|r| r.1);
    let measured = if worst.is_finite() {
        format!("{worst:.3}")
    } else {
        "inf".to_string()
    };
    Ok(AuditReport {
        checks: vec![Check::new("stretch", measured, bound, witness)],
    })
}

/// Audits the embedding table, the congestion counters, and the nesting of
/// `G`, `H`, `Ĥ` and the oracle's graph.
pub fn audit_embedding<O: ApspOracle>(s: &SpannerEngine<O>) -> AuditReport {
    let params = s.params();
    let (g, h, hh) = (s.graph(), s.spanner(), s.uncongested());
    let mut checks = Vec::new();

    let stray = h
        .edges()
        .find(|&e| !g.contains(e))
        .or_else(|| hh.edges().find(|&e| !h.contains(e)));
    checks.push(Check::new(
        "nesting",
        format!("|G|={} |H|={} |Ĥ|={}", g.edge_count(), h.edge_count(), hh.edge_count()),
        "Ĥ⊆H⊆G",
        stray.map(Witness::Edge),
    ));

    let mirror = s
        .oracle()
        .graph()
        .edges()
        .find(|&e| !hh.contains(e))
        .or_else(|| hh.edges().find(|&e| !s.oracle().graph().contains(e)));
    checks.push(Check::new(
        "oracle_mirror",
        s.oracle().graph().edge_count(),
        hh.edge_count(),
        mirror.map(Witness::Edge),
    ));

    let uncovered = g
        .edges()
        .find(|&e| s.embedding(e).is_none())
        .or_else(|| s.embeddings().map(|(e, _)| e).filter(|&e| !g.contains(e)).min());
    checks.push(Check::new(
        "embedding_coverage",
        s.embeddings().count(),
        g.edge_count(),
        uncovered.map(Witness::Edge),
    ));

    let mut longest = 0usize;
    let mut bad_path = None;
    let mut recomputed = std::collections::HashMap::<Edge, u32>::new();
    let mut ordered: Vec<(Edge, &[Edge])> = s.embeddings().collect();
    ordered.sort_unstable_by_key(|p| p.0);
    for (e, path) in &ordered {
        longest = longest.max(path.len());
        let valid = trace_path(path, e.u(), e.v()).is_some()
            && path.iter().all(|&f| h.contains(f))
            && (path.len() as u32 <= params.threshold || path == &[*e]);
        if !valid && bad_path.is_none() {
            bad_path = Some(*e);
        }
        for &f in path.iter() {
            *recomputed.entry(f).or_insert(0) += 1;
        }
    }
    checks.push(Check::new(
        "embedding_paths",
        longest,
        params.threshold,
        bad_path.map(Witness::Edge),
    ));

    let not_self = h.edges().find(|&e| s.embedding(e) != Some(&[e][..]));
    checks.push(Check::new(
        "self_embedding",
        h.edge_count(),
        "Π(e)=[e] for e∈H",
        not_self.map(Witness::Edge),
    ));

    let mut mismatch: Option<Witness> = None;
    let mut keys: Vec<Edge> = recomputed
        .keys()
        .copied()
        .chain(s.congestion_counters().map(|(f, _)| f))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    for f in keys {
        let stored = s.congestion(f);
        let exact = recomputed.get(&f).copied().unwrap_or(0);
        if stored != exact {
            mismatch = Some(Witness::Counter {
                edge: f,
                stored,
                recomputed: exact,
            });
            break;
        }
    }
    checks.push(Check::new(
        "congestion_counters",
        recomputed.len(),
        "recomputed=stored",
        mismatch,
    ));

    let cap = params.congestion_cap;
    let max_cong = recomputed.values().copied().max().unwrap_or(0);
    let over_cap = h
        .edges()
        .map(|f| (f, recomputed.get(&f).copied().unwrap_or(0)))
        .find(|&(_, c)| c > cap);
    checks.push(Check::new(
        "congestion_cap",
        max_cong,
        cap,
        over_cap.map(|(edge, c)| Witness::Counter {
            edge,
            stored: s.congestion(edge),
            recomputed: c,
        }),
    ));

    let saturated = hh
        .edges()
        .find(|&f| recomputed.get(&f).copied().unwrap_or(0) >= cap || s.is_evicted(f));
    checks.push(Check::new(
        "uncongested_below_cap",
        hh.edge_count(),
        format!("econg<{cap}"),
        saturated.map(Witness::Edge),
    ));

    AuditReport { checks }
}

/// Checks the amortized budgets on a run that stayed within `m` insertions
/// and `n` deletions.
pub fn audit_budgets(
    metrics: &RunMetrics,
    n: usize,
    m: usize,
    gamma: u32,
) -> Result<AuditReport, AuditError> {
    if metrics.budget_exceeded
        || metrics.external_insertions > m as u64
        || metrics.deletions > n as u64
    {
        return Err(AuditError::BudgetExceeded {
            insertions: metrics.external_insertions,
            deletions: metrics.deletions,
            m,
            n,
        });
    }
    let mut checks = Vec::new();
    let quantity = |measured: u64, bound: u64| {
        (measured > bound).then_some(Witness::Quantity { measured, bound })
    };

    let calls_bound = 2 * m as u64;
    checks.push(Check::new(
        "insert_calls",
        metrics.insert_calls,
        calls_bound,
        quantity(metrics.insert_calls, calls_bound),
    ));

    let size = metrics.spanner_edges as u64;
    let size_bound = spanner_size_bound(n, gamma);
    checks.push(Check::new("spanner_size", size, size_bound, quantity(size, size_bound)));

    checks.push(Check::new(
        "recourse_removals",
        metrics.recourse_removals,
        metrics.deletions,
        quantity(metrics.recourse_removals, metrics.deletions),
    ));

    let cap = m.div_ceil(n) as u64;
    checks.push(Check::new(
        "max_congestion",
        metrics.max_congestion,
        cap,
        quantity(u64::from(metrics.max_congestion), cap),
    ));

    // Advisory: the two halves of the size bound with the uncongested part
    // split out and an exact logarithm. Exceeding these only flags the run.
    if let Some(uncongested) = metrics.uncongested_edges {
        let log = (n.max(2) as f64).log2();
        let evicted = size.saturating_sub(uncongested as u64);
        let evicted_bound = (4.0 * f64::from(gamma) * n as f64 * log).floor() as u64;
        let check = Check::new("evicted_size_tight", evicted, evicted_bound, None);
        checks.push(if evicted > evicted_bound {
            check.with_status(CheckStatus::Flag)
        } else {
            check
        });
        let hh_bound = sparsity_bound(n.max(1), ceil_log2(n).max(1));
        let check = Check::new("uncongested_size_tight", uncongested, hh_bound, None);
        checks.push(if uncongested as u64 > hh_bound {
            check.with_status(CheckStatus::Flag)
        } else {
            check
        });
    }
    Ok(AuditReport { checks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Cycle(u32),
    Acyclic,
}

/// Exact girth: the minimum over edges `(u,v)` of one plus the shortest
/// `u`-`v` path avoiding that edge.
pub fn shortest_cycle(g: &DynamicGraph) -> Girth {
    shortest_cycle_over(g, g.edges()).0
}

fn shortest_cycle_over(g: &DynamicGraph, edges: impl Iterator<Item = Edge>) -> (Girth, Option<Edge>) {
    let mut best: Option<(u32, Edge)> = None;
    for e in edges {
        // Only a strictly shorter cycle matters, so search to depth best - 2.
        let cutoff = best.map(|(len, _)| len.saturating_sub(2));
        if cutoff == Some(0) {
            break;
        }
        let d = g
            .bfs_distance_avoiding(e.u(), e.v(), cutoff, e)
            .expect("edge endpoints are in range");
        if let Some(d) = d.finite() {
            best = Some((d + 1, e));
        }
    }
    match best {
        Some((len, e)) => (Girth::Cycle(len), Some(e)),
        None => (Girth::Acyclic, None),
    }
}

/// Checks that `g` has no cycle shorter than `min_girth`.
pub fn audit_girth(name: &str, g: &DynamicGraph, min_girth: u32, options: &AuditOptions) -> AuditReport {
    let edges = options.edges(g, 2);
    let (girth, through) = shortest_cycle_over(g, edges.into_iter());
    let (measured, witness) = match girth {
        Girth::Acyclic => ("acyclic".to_string(), None),
        Girth::Cycle(len) => (
            len.to_string(),
            (len < min_girth).then(|| Witness::Cycle {
                edge: through.expect("cycle has an edge"),
                length: len,
            }),
        ),
    };
    AuditReport {
        checks: vec![Check::new(name, measured, min_girth, witness)],
    }
}

/// Full audit of a quiescent engine state: stretch, embedding, girth of `Ĥ`,
/// and, if the run is within budget, the amortized budgets.
pub fn audit_engine<O: ApspOracle>(s: &SpannerEngine<O>, options: &AuditOptions) -> AuditReport {
    let p = s.params();
    let mut report = stretch_or_witness(s.graph(), s.spanner(), p.threshold, options);
    report.extend(audit_embedding(s));
    report.extend(audit_girth("uncongested_girth", s.uncongested(), required_girth(p.n), options));
    report.extend(budget_checks(&s.metrics(), p.n, p.m, p.gamma));
    report
}

/// Audit of the low-recourse baseline: stretch `2⌈log₂ n⌉`, girth of `H`,
/// and removals caused only by deletions of spanner edges.
pub fn audit_low_recourse(s: &LowRecourseSpanner, options: &AuditOptions) -> AuditReport {
    let n = s.graph().vertex_count();
    let mut report = stretch_or_witness(s.graph(), s.spanner(), s.threshold(), options);
    report.extend(audit_girth("spanner_girth", s.spanner(), required_girth(n), options));
    let m = s.metrics();
    report.checks.push(Check::new(
        "removals_from_deletions",
        m.recourse_removals,
        m.spanner_deletions,
        (m.recourse_removals != m.spanner_deletions).then_some(Witness::Quantity {
            measured: m.recourse_removals,
            bound: m.spanner_deletions,
        }),
    ));
    report
}

fn stretch_or_witness(
    g: &DynamicGraph,
    h: &DynamicGraph,
    bound: u32,
    options: &AuditOptions,
) -> AuditReport {
    match audit_stretch(g, h, bound, options) {
        Ok(r) => r,
        Err(e) => {
            let witness = match e {
                AuditError::NotSubgraph(edge) => Witness::Edge(edge),
                AuditError::BudgetExceeded { .. } => unreachable!("stretch audit has no budget"),
            };
            AuditReport {
                checks: vec![Check::new("stretch", "-", bound, Some(witness))],
            }
        }
    }
}

fn budget_checks(metrics: &RunMetrics, n: usize, m: usize, gamma: u32) -> AuditReport {
    match audit_budgets(metrics, n, m, gamma) {
        Ok(r) => r,
        Err(e) => AuditReport {
            checks: vec![Check::new("budgets", e.to_string(), "within budget", None)
                .with_status(CheckStatus::Skip)],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: VertexId, b: VertexId) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn graph(n: usize, edges: &[(VertexId, VertexId)]) -> DynamicGraph {
        DynamicGraph::from_edges(n, edges.iter().map(|&(a, b)| e(a, b))).unwrap()
    }

    /// Exhaustive simple-cycle search by DFS over increasing vertex lists.
    fn girth_by_enumeration(g: &DynamicGraph) -> Girth {
        fn dfs(g: &DynamicGraph, start: VertexId, at: VertexId, len: u32, seen: &mut Vec<bool>, best: &mut u32) {
            for &y in g.neighbors(at) {
                if y == start && len >= 2 {
                    *best = (*best).min(len + 1);
                } else if y > start && !seen[y as usize] {
                    seen[y as usize] = true;
                    dfs(g, start, y, len + 1, seen, best);
                    seen[y as usize] = false;
                }
            }
        }
        let mut best = u32::MAX;
        for s in 0..g.vertex_count() as VertexId {
            let mut seen = vec![false; g.vertex_count()];
            seen[s as usize] = true;
            dfs(g, s, s, 0, &mut seen, &mut best);
        }
        if best == u32::MAX {
            Girth::Acyclic
        } else {
            Girth::Cycle(best)
        }
    }

    #[test]
    fn stretch_examples() {
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let opts = AuditOptions::default();
        let r = audit_stretch(&c4, &c4, 6, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks[0].measured, "1.000");

        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let r = audit_stretch(&c4, &path, 6, &opts).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks[0].measured, "3.000");
        let r = audit_stretch(&c4, &path, 2, &opts).unwrap();
        assert!(!r.passed());
        assert_eq!(
            r.checks[0].witness,
            Some(Witness::Pair { u: 0, v: 3, graph_dist: 1, spanner_dist: Some(3) })
        );

        let single = graph(2, &[(0, 1)]);
        let r = audit_stretch(&single, &DynamicGraph::new(2), 6, &opts).unwrap();
        assert!(!r.passed());
        assert_eq!(
            r.checks[0].witness,
            Some(Witness::Pair { u: 0, v: 1, graph_dist: 1, spanner_dist: None })
        );
        assert_eq!(
            audit_stretch(&DynamicGraph::new(2), &single, 6, &opts),
            Err(AuditError::NotSubgraph(e(0, 1)))
        );
    }

    #[test]
    fn shortest_cycle_examples() {
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        assert_eq!(shortest_cycle(&c5), Girth::Cycle(5));
        let tree = graph(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]);
        assert_eq!(shortest_cycle(&tree), Girth::Acyclic);
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(shortest_cycle(&k4), Girth::Cycle(3));
        assert_eq!(girth_by_enumeration(&k4), Girth::Cycle(3));
        assert_eq!(girth_by_enumeration(&c5), Girth::Cycle(5));
        assert_eq!(girth_by_enumeration(&tree), Girth::Acyclic);
    }

    #[test]
    fn girth_audit_reports_witness() {
        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let r = audit_girth("g", &k4, 5, &AuditOptions::default());
        assert!(!r.passed());
        assert!(matches!(r.checks[0].witness, Some(Witness::Cycle { length: 3, .. })));
        assert!(audit_girth("g", &k4, 3, &AuditOptions::default()).passed());
    }

    #[test]
    fn embedding_audit_examples() {
        let s = SpannerEngine::new(8, 24, 1).unwrap();
        assert!(audit_embedding(&s).passed());

        let mut s = SpannerEngine::new(8, 24, 1).unwrap();
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            s.insert_edge(e(a, b)).unwrap();
        }
        let r = audit_embedding(&s);
        assert!(r.passed(), "{r}");
        assert_eq!(r.check("congestion_cap").unwrap().measured, "2");

        s.inject_congestion_fault(e(1, 2), 7);
        let r = audit_embedding(&s);
        assert!(!r.passed());
        assert_eq!(
            r.check("congestion_counters").unwrap().witness,
            Some(Witness::Counter { edge: e(1, 2), stored: 7, recomputed: 2 })
        );
    }

    #[test]
    fn audits_do_not_mutate() {
        let mut s = SpannerEngine::new(8, 24, 1).unwrap();
        for (a, b) in [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)] {
            s.insert_edge(e(a, b)).unwrap();
        }
        let before = (s.snapshot(), s.graph().clone(), s.metrics());
        let r = audit_engine(&s, &AuditOptions::default());
        assert!(r.passed(), "{r}");
        assert_eq!(before, (s.snapshot(), s.graph().clone(), s.metrics()));
    }

    #[test]
    fn budget_audit_examples() {
        let metrics = RunMetrics {
            external_insertions: 10,
            insert_calls: 10,
            spanner_edges: 6,
            uncongested_edges: Some(6),
            max_congestion: 2,
            ..Default::default()
        };
        let r = audit_budgets(&metrics, 8, 24, 1).unwrap();
        assert!(r.passed(), "{r}");
        assert!(!r.flagged());

        let over = RunMetrics {
            deletions: 13,
            ..metrics.clone()
        };
        assert!(matches!(
            audit_budgets(&over, 8, 24, 1),
            Err(AuditError::BudgetExceeded { deletions: 13, .. })
        ));

        let bad = RunMetrics {
            insert_calls: 49,
            ..metrics
        };
        let r = audit_budgets(&bad, 8, 24, 1).unwrap();
        assert!(!r.passed());
        assert_eq!(
            r.check("insert_calls").unwrap().witness,
            Some(Witness::Quantity { measured: 49, bound: 48 })
        );
    }

    #[test]
    fn tight_size_bound_only_flags() {
        // n = 8, γ = 1: hard bound 4·8·3 + 128 = 224; evicted advisory bound 96.
        assert_eq!(spanner_size_bound(8, 1), 4 * 8 * 3 + sparsity_bound(8, 3));
        let metrics = RunMetrics {
            spanner_edges: 120,
            uncongested_edges: Some(10),
            ..Default::default()
        };
        let r = audit_budgets(&metrics, 8, 200, 1).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.flagged());
        assert_eq!(r.check("evicted_size_tight").unwrap().status, CheckStatus::Flag);
    }

    #[test]
    fn report_renders_one_line_per_check() {
        let c4 = graph(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let r = audit_girth("uncongested_girth", &c4, 7, &AuditOptions::default());
        let text = r.to_string();
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with("uncongested_girth FAIL measured=4 bound=7 witness=cycle"));
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn shortest_cycle_matches_enumeration(
            n in 2usize..=10,
            raw in proptest::collection::vec((0u32..10, 0u32..10), 0..30),
        ) {
            let mut g = DynamicGraph::new(n);
            for (a, b) in raw {
                let (a, b) = (a % n as u32, b % n as u32);
                if let Ok(edge) = Edge::new(a, b) {
                    let _ = g.add_edge(edge);
                }
            }
            prop_assert_eq!(shortest_cycle(&g), girth_by_enumeration(&g));
        }
    }
}
