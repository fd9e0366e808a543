//! Trace replay with periodic audits.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::baseline::LowRecourseSpanner;
use crate::engine::{EngineError, SpannerEngine};
use crate::graph::{Edge, GraphError};
use crate::metrics::RunMetrics;
use crate::trace::{TraceOp, UpdateTrace};
use crate::verify::{audit_engine, audit_low_recourse, AuditOptions, AuditReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// The oracle-driven spanner engine.
    Engine,
    /// The exact-BFS low-recourse baseline.
    LowRecourse,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `1` for graphs with at most 64 vertices, `32` above.
pub fn default_audit_every(n: usize) -> usize {
    if n <= 64 {
        1
    } else {
        32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Audit after every `k` external updates; `Some(0)` audits only at the end,
    /// `None` uses [`default_audit_every`].
    pub audit_every: Option<usize>,
    pub audit: AuditOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algorithm: Algorithm::Engine,
            audit_every: None,
            audit: AuditOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditPoint {
    /// Number of external updates applied before this audit.
    pub step: usize,
    pub report: AuditReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub metrics: RunMetrics,
    pub audits: Vec<AuditPoint>,
    pub final_spanner: BTreeSet<Edge>,
}

impl RunOutcome {
    pub fn audits_passed(&self) -> bool {
        self.audits.iter().all(|a| a.report.passed())
    }

    pub fn first_failure(&self) -> Option<&AuditPoint> {
        self.audits.iter().find(|a| !a.report.passed())
    }

    /// `0` iff every audit passed and the run stayed within budget, else `1`.
    pub fn exit_code(&self) -> i32 {
        if self.audits_passed() && !self.metrics.budget_exceeded {
            0
        } else {
            1
        }
    }
}

enum Runner {
    Engine(Box<SpannerEngine>),
    LowRecourse(Box<LowRecourseSpanner>),
}

impl Runner {
    fn apply(&mut self, op: TraceOp) -> Result<(), HarnessError> {
        match (self, op) {
            (Runner::Engine(s), TraceOp::Insert(e)) => s.insert_edge(e).map(|_| ())?,
            (Runner::Engine(s), TraceOp::Delete(e)) => s.delete_edge(e).map(|_| ())?,
            (Runner::LowRecourse(s), TraceOp::Insert(e)) => s.insert(e).map(|_| ())?,
            (Runner::LowRecourse(s), TraceOp::Delete(e)) => s.delete(e)?,
        }
        Ok(())
    }

    fn audit(&self, options: &AuditOptions) -> AuditReport {
        match self {
            Runner::Engine(s) => audit_engine(s, options),
            Runner::LowRecourse(s) => audit_low_recourse(s, options),
        }
    }

    fn metrics(&self) -> RunMetrics {
        match self {
            Runner::Engine(s) => s.metrics(),
            Runner::LowRecourse(s) => s.metrics(),
        }
    }

    fn spanner_edges(&self) -> BTreeSet<Edge> {
        match self {
            Runner::Engine(s) => s.spanner().edges().collect(),
            Runner::LowRecourse(s) => s.spanner().edges().collect(),
        }
    }
}

/// Replays `trace`, auditing at the configured cadence and once at the end.
pub fn run(trace: &UpdateTrace, config: &RunConfig) -> Result<RunOutcome, HarnessError> {
    let mut runner = match config.algorithm {
        Algorithm::Engine => Runner::Engine(Box::new(SpannerEngine::new(trace.n, trace.m, trace.gamma)?)),
        Algorithm::LowRecourse => Runner::LowRecourse(Box::new(LowRecourseSpanner::new(trace.n))),
    };
    let every = config.audit_every.unwrap_or_else(|| default_audit_every(trace.n));
    let mut audits = Vec::new();
    let mut wall = Duration::ZERO;
    for (i, &op) in trace.ops.iter().enumerate() {
        let start = Instant::now();
        runner.apply(op)?;
        wall += start.elapsed();
        let step = i + 1;
        if every > 0 && step % every == 0 && step != trace.ops.len() {
            audits.push(AuditPoint {
                step,
                report: runner.audit(&config.audit),
            });
        }
    }
    audits.push(AuditPoint {
        step: trace.ops.len(),
        report: runner.audit(&config.audit),
    });

    let mut metrics = runner.metrics();
    metrics.wall_time = wall;
    if trace.over_budget() {
        metrics.budget_exceeded = true;
    }
    Ok(RunOutcome {
        metrics,
        audits,
        final_spanner: runner.spanner_edges(),
    })
}
