//! Oracle, trace tooling, differential runner and the Dijkstra workload.

pub mod diff;
pub mod dijkstra;
pub mod oracle;
pub mod trace;

use thiserror::Error;

use crate::stats::StatsReport;
use oracle::Entry;

pub use diff::{
    fuzz_campaign, run_differential, run_differential_with_hook, CampaignRun, RunSummary,
};
pub use dijkstra::{dijkstra_bench, BenchReport, Graph};
pub use oracle::OracleHeap;
pub use trace::{
    format_trace, generate_trace, generate_trace_prefilled, parse_trace, Mix, TraceOp,
};

#[derive(Error, Debug)]
pub enum HarnessError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid operation mix: {0}")]
    BadMix(String),
    #[error("reference {reference} is not a live element")]
    InvalidRef { reference: usize },
    #[error("decrease of reference {reference} does not lower its key")]
    KeyNotSmaller { reference: usize },
    #[error("op {op_index}: {source}")]
    InvalidOp {
        op_index: usize,
        #[source]
        source: Box<HarnessError>,
    },
    #[error("op {op_index}: heap rejected the operation: {reason}")]
    Heap { op_index: usize, reason: String },
    #[error("op {op_index}: expected {expected:?}, heap returned {actual:?}")]
    Mismatch {
        op_index: usize,
        expected: Option<Entry>,
        actual: Option<Entry>,
    },
    #[error("op {op_index}: audit finding: {finding}")]
    Audit { op_index: usize, finding: String },
    #[error("op {op_index}: potential check `{check}` failed (dA={delta_a}, dL={delta_l})")]
    Potential {
        op_index: usize,
        check: &'static str,
        delta_a: i64,
        delta_l: i64,
    },
    #[error("vertex {vertex}: reference distance {expected:?}, heap distance {actual:?}")]
    Distance {
        vertex: usize,
        expected: Option<u64>,
        actual: Option<u64>,
    },
}

/// One `key=value` line per counter, in a fixed order.
pub fn emit_stats(report: &StatsReport) -> String {
    report.to_string()
}
