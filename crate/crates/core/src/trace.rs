//! Update traces: a line-based text format, validation, and generators.
//!
//! ```text
//! spanner-trace v1
//! n 4 m 8 gamma 1
//! # comment
//! + 0 1
//! - 0 1
//! ```

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::{EngineError, SpannerEngine};
use crate::graph::{DynamicGraph, Edge, GraphError, VertexId};

pub const MAGIC: &str = "spanner-trace v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: invalid update: {source}")]
    Validation { line: usize, source: GraphError },
    #[error("missing trace header (expected `{MAGIC}` followed by `n <int> m <int> gamma <int>`)")]
    HeaderMissing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceOp {
    Insert(Edge),
    Delete(Edge),
}

impl TraceOp {
    pub fn edge(self) -> Edge {
        match self {
            TraceOp::Insert(e) | TraceOp::Delete(e) => e,
        }
    }
}

impl fmt::Display for TraceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceOp::Insert(e) => write!(f, "+ {} {}", e.u(), e.v()),
            TraceOp::Delete(e) => write!(f, "- {} {}", e.u(), e.v()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateTrace {
    pub n: usize,
    /// Declared insertion budget.
    pub m: usize,
    pub gamma: u32,
    pub ops: Vec<TraceOp>,
}

impl UpdateTrace {
    /// Builds a trace, checking that every update is applicable in order.
    pub fn new(n: usize, m: usize, gamma: u32, ops: Vec<TraceOp>) -> Result<Self, TraceError> {
        let trace = UpdateTrace { n, m, gamma, ops };
        trace.validate()?;
        Ok(trace)
    }

    /// Replays the trace on a plain graph; `line` in errors is the op index + 1.
    pub fn validate(&self) -> Result<(), TraceError> {
        let mut g = DynamicGraph::new(self.n);
        for (i, op) in self.ops.iter().enumerate() {
            apply(&mut g, *op).map_err(|source| TraceError::Validation { line: i + 1, source })?;
        }
        Ok(())
    }

    pub fn insertions(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, TraceOp::Insert(_))).count()
    }

    pub fn deletions(&self) -> usize {
        self.ops.len() - self.insertions()
    }

    /// More than `m` insertions or more than `n` deletions.
    pub fn over_budget(&self) -> bool {
        self.insertions() > self.m || self.deletions() > self.n
    }

    pub fn parse(text: &str) -> Result<Self, TraceError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        match lines.next() {
            Some((_, MAGIC)) => {}
            _ => return Err(TraceError::HeaderMissing),
        }
        let (header_line, header) = lines.next().ok_or(TraceError::HeaderMissing)?;
        let (n, m, gamma) = parse_header(header).ok_or(TraceError::HeaderMissing)?;
        if gamma < 1 {
            return Err(TraceError::Syntax {
                line: header_line,
                message: "gamma must be at least 1".to_string(),
            });
        }

        let mut graph = DynamicGraph::new(n);
        let mut ops = Vec::new();
        for (line, body) in lines {
            let syntax = |message: &str| TraceError::Syntax {
                line,
                message: format!("{message}: `{body}`"),
            };
            let fields: Vec<&str> = body.split_whitespace().collect();
            let [sign, a, b] = fields[..] else {
                return Err(syntax("expected `+ <u> <v>` or `- <u> <v>`"));
            };
            let a: VertexId = a.parse().map_err(|_| syntax("bad vertex"))?;
            let b: VertexId = b.parse().map_err(|_| syntax("bad vertex"))?;
            let invalid = |source| TraceError::Validation { line, source };
            let edge = Edge::new(a, b).map_err(invalid)?;
            let op = match sign {
                "+" => TraceOp::Insert(edge),
                "-" => TraceOp::Delete(edge),
                _ => return Err(syntax("unknown operation")),
            };
            apply(&mut graph, op).map_err(invalid)?;
            ops.push(op);
        }
        Ok(UpdateTrace { n, m, gamma, ops })
    }
}

fn parse_header(line: &str) -> Option<(usize, usize, u32)> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields[..] {
        ["n", n, "m", m, "gamma", gamma] => {
            Some((n.parse().ok()?, m.parse().ok()?, gamma.parse().ok()?))
        }
        _ => None,
    }
}

fn apply(g: &mut DynamicGraph, op: TraceOp) -> Result<(), GraphError> {
    match op {
        TraceOp::Insert(e) => g.add_edge(e),
        TraceOp::Delete(e) => g.remove_edge(e),
    }
}

impl fmt::Display for UpdateTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{MAGIC}")?;
        writeln!(f, "n {} m {} gamma {}", self.n, self.m, self.gamma)?;
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// Uniform insertions interleaved with uniform deletions.
    Random,
    /// Deletions always hit a current spanner edge; insertions favour pairs
    /// that are close in the spanner, loading congestion.
    Adversarial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid budget: need m >= n >= 2, deletions <= n and m <= n(n-1)/2 + deletions (n={n}, m={m}, deletions={deletions})")]
    InvalidBudget { n: usize, m: usize, deletions: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Generates a valid trace with exactly `m` insertions and `deletions`
/// deletions, deterministically from `seed`.
pub fn generate_trace(
    n: usize,
    m: usize,
    deletions: usize,
    pattern: Pattern,
    seed: u64,
) -> Result<UpdateTrace, GenerateError> {
    let slots = n * n.saturating_sub(1) / 2;
    if n < 2 || m < n || deletions > n || m > slots + deletions {
        return Err(GenerateError::InvalidBudget { n, m, deletions });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = DynamicGraph::new(n);
    let mut engine = match pattern {
        Pattern::Adversarial => Some(SpannerEngine::new(n, m, 1)?),
        Pattern::Random => None,
    };
    let mut ops = Vec::with_capacity(m + deletions);
    let (mut ins_left, mut del_left) = (m, deletions);

    while ins_left + del_left > 0 {
        // A complete graph forces a deletion; the budget check guarantees one is left.
        let delete = graph.edge_count() == slots
            || (del_left > 0
                && !graph.is_empty()
                && (ins_left == 0 || rng.gen_range(0..ins_left + del_left) < del_left));
        let op = if delete {
            del_left -= 1;
            let pool = match &engine {
                Some(s) if !s.spanner().is_empty() => s.spanner().edge_vec(),
                _ => graph.edge_vec(),
            };
            TraceOp::Delete(*pool.choose(&mut rng).expect("graph is non-empty"))
        } else {
            ins_left -= 1;
            let close = match &engine {
                Some(s) if rng.gen_bool(0.5) => close_pair(s, &graph, &mut rng),
                _ => None,
            };
            TraceOp::Insert(close.unwrap_or_else(|| uniform_absent(&graph, &mut rng)))
        };
        apply(&mut graph, op).expect("generator emits applicable updates");
        if let Some(s) = engine.as_mut() {
            match op {
                TraceOp::Insert(e) => s.insert_edge(e).map(|_| ())?,
                TraceOp::Delete(e) => s.delete_edge(e).map(|_| ())?,
            }
        }
        ops.push(op);
    }
    Ok(UpdateTrace { n, m, gamma: 1, ops })
}

fn uniform_absent(g: &DynamicGraph, rng: &mut ChaCha8Rng) -> Edge {
    let n = g.vertex_count() as VertexId;
    for _ in 0..64 {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if let Ok(e) = Edge::new(a, b) {
            if !g.contains(e) {
                return e;
            }
        }
    }
    let absent: Vec<Edge> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| Edge::new(a, b).unwrap()))
        .filter(|&e| !g.contains(e))
        .collect();
    *absent.choose(rng).expect("budget check leaves room for every insertion")
}

/// A non-adjacent pair at spanner distance 2..=L from a random vertex.
fn close_pair(s: &SpannerEngine, g: &DynamicGraph, rng: &mut ChaCha8Rng) -> Option<Edge> {
    let n = g.vertex_count() as VertexId;
    let root = rng.gen_range(0..n);
    let threshold = s.params().threshold;
    let candidates: Vec<Edge> = s
        .uncongested()
        .bfs_all(root)
        .into_iter()
        .enumerate()
        .filter(|(_, d)| d.is_some_and(|d| d >= 2 && d <= threshold))
        .filter_map(|(x, _)| Edge::new(root, x as VertexId).ok())
        .filter(|&e| !g.contains(e))
        .collect();
    candidates.choose(rng).copied()
}
