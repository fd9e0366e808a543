//! Run counters for the amortized bounds, plus measured oracle costs.

use std::fmt;
use std::time::Duration;

/// Measured cost of the oracle calls made during a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleCosts {
    pub updates: u64,
    pub update_time: Duration,
    pub queries: u64,
    pub query_time: Duration,
}

impl OracleCosts {
    /// Empirical amortized time per update, in nanoseconds.
    pub fn amortized_update_ns(&self) -> f64 {
        per_call_ns(self.update_time, self.updates)
    }

    /// Empirical amortized time per query, in nanoseconds.
    pub fn amortized_query_ns(&self) -> f64 {
        per_call_ns(self.query_time, self.queries)
    }
}

fn per_call_ns(total: Duration, calls: u64) -> f64 {
    if calls == 0 {
        0.0
    } else {
        total.as_nanos() as f64 / calls as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMetrics {
    pub external_insertions: u64,
    pub deletions: u64,
    /// External deletions whose edge was in the spanner at the time.
    pub spanner_deletions: u64,
    pub insert_calls: u64,
    pub recourse_additions: u64,
    pub recourse_removals: u64,
    pub spanner_edges: usize,
    /// `|E(Ĥ)|`; `None` for algorithms without an uncongested subgraph.
    pub uncongested_edges: Option<usize>,
    pub max_congestion: u32,
    pub budget_exceeded: bool,
    pub wall_time: Duration,
    pub oracle: OracleCosts,
}

impl RunMetrics {
    pub fn recourse(&self) -> u64 {
        self.recourse_additions + self.recourse_removals
    }

    /// Equality on every deterministic counter (timings excluded).
    pub fn same_counters(&self, other: &RunMetrics) -> bool {
        self.counter_fields() == other.counter_fields()
    }

    #[allow(clippy::type_complexity)]
    fn counter_fields(&self) -> (u64, u64, u64, u64, u64, u64, usize, Option<usize>, u32, bool, u64, u64) {
        (
            self.external_insertions,
            self.deletions,
            self.spanner_deletions,
            self.insert_calls,
            self.recourse_additions,
            self.recourse_removals,
            self.spanner_edges,
            self.uncongested_edges,
            self.max_congestion,
            self.budget_exceeded,
            self.oracle.updates,
            self.oracle.queries,
        )
    }

    /// Machine-readable single-line form.
    pub fn summary_line(&self) -> String {
        self.pairs()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("external_insertions", self.external_insertions.to_string()),
            ("deletions", self.deletions.to_string()),
            ("spanner_deletions", self.spanner_deletions.to_string()),
            ("insert_calls", self.insert_calls.to_string()),
            ("recourse_additions", self.recourse_additions.to_string()),
            ("recourse_removals", self.recourse_removals.to_string()),
            ("spanner_edges", self.spanner_edges.to_string()),
            (
                "uncongested_edges",
                self.uncongested_edges
                    .map_or_else(|| "-".to_string(), |x| x.to_string()),
            ),
            ("max_congestion", self.max_congestion.to_string()),
            ("budget_exceeded", self.budget_exceeded.to_string()),
            ("oracle_updates", self.oracle.updates.to_string()),
            ("oracle_queries", self.oracle.queries.to_string()),
            (
                "oracle_update_ns",
                format!("{:.1}", self.oracle.amortized_update_ns()),
            ),
            (
                "oracle_query_ns",
                format!("{:.1}", self.oracle.amortized_query_ns()),
            ),
            ("wall_time_ms", format!("{:.3}", self.wall_time.as_secs_f64() * 1e3)),
        ]
    }
}

impl fmt::Display for RunMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.pairs() {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timings_do_not_affect_counter_equality() {
        let a = RunMetrics {
            insert_calls: 3,
            wall_time: Duration::from_millis(5),
            ..Default::default()
        };
        let mut b = a.clone();
        b.wall_time = Duration::from_millis(9);
        b.oracle.query_time = Duration::from_micros(1);
        assert!(a.same_counters(&b));
        b.insert_calls = 4;
        assert!(!a.same_counters(&b));
    }

    #[test]
    fn summary_line_is_single_line() {
        let m = RunMetrics::default();
        let line = m.summary_line();
        assert!(!line.contains('\n'));
        assert!(line.contains("insert_calls=0"));
        assert!(line.contains("uncongested_edges=-"));
        assert_eq!(per_call_ns(Duration::from_nanos(10), 0), 0.0);
    }
}
