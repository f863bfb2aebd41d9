//! Differential replay of traces against the oracle.

use std::collections::HashMap;

use rayon::prelude::*;

use super::oracle::{Entry, OracleHeap};
use super::trace::{generate_trace, Mix, TraceOp};
use super::HarnessError;
use crate::audit;
use crate::heap::{Context, Heap, HeapConfig, Strategy};
use crate::stats::StatsReport;
use crate::store::Handle;

/// Per-run measurements.
#[derive(Clone, Debug, Default)]
pub struct RunSummary {
    pub ops: usize,
    /// Every delete-min result, in order.
    pub extracted: Vec<Entry>,
    pub max_insert_ca: u32,
    pub max_insert_cl: u32,
    pub max_decrease_cl: u32,
    pub max_decrease_ca: u32,
    pub max_delete_min: u32,
    /// Largest `reductions - (6 R(n) + 7)` over delete-mins; never positive
    /// on a healthy run.
    pub delete_min_slack: i64,
    pub reductions_checked: u64,
    pub max_rank_observed: u32,
    pub stats: StatsReport,
}

/// Replays `trace` on a fresh heap and on the oracle, comparing every
/// delete-min and find-min result.
pub fn run_differential(trace: &[TraceOp], config: HeapConfig) -> Result<RunSummary, HarnessError> {
    run_differential_with_hook(trace, config, |_, _, _| {})
}

/// Like [`run_differential`], calling `hook(op_index, heap, handles)` after
/// every op (before that op's findings are inspected by the next boundary).
pub fn run_differential_with_hook<F>(
    trace: &[TraceOp],
    config: HeapConfig,
    mut hook: F,
) -> Result<RunSummary, HarnessError>
where
    F: FnMut(usize, &mut Heap<i64>, &[Handle]),
{
    let mut heap: Heap<i64> = Heap::with_config(config);
    let mut oracle = OracleHeap::new();
    let mut handles: Vec<Handle> = Vec::new();
    let mut refs: HashMap<Handle, usize> = HashMap::new();
    let mut summary = RunSummary {
        delete_min_slack: i64::MIN,
        ..RunSummary::default()
    };
    let entry_of = |heap: &Heap<i64>, refs: &HashMap<Handle, usize>, h: Handle| Entry {
        key: *heap.key(h).expect("live handle"),
        reference: refs[&h],
    };

    for (i, op) in trace.iter().enumerate() {
        let expected = oracle.apply(op).map_err(|e| HarnessError::InvalidOp {
            op_index: i,
            source: Box::new(e),
        })?;
        let n_before = heap.len();
        let actual = match *op {
            TraceOp::Insert(k) => {
                let h = heap.insert(k);
                refs.insert(h, handles.len());
                handles.push(h);
                None
            }
            TraceOp::Decrease { reference, key } => {
                heap.decrease_key(handles[reference], key)
                    .map_err(|e| HarnessError::Heap {
                        op_index: i,
                        reason: e.to_string(),
                    })?;
                None
            }
            TraceOp::DeleteMin => heap.delete_min().map(|(key, h)| Entry {
                key,
                reference: refs.remove(&h).expect("extracted handle was issued"),
            }),
            TraceOp::FindMin => heap.find_min().map(|h| entry_of(&heap, &refs, h)),
        };
        if actual != expected {
            return Err(HarnessError::Mismatch {
                op_index: i,
                expected,
                actual,
            });
        }
        if let (TraceOp::DeleteMin, Some(e)) = (op, actual) {
            summary.extracted.push(e);
        }

        let cost = heap.last_op_cost();
        match cost.context {
            Context::Insert => {
                summary.max_insert_ca = summary.max_insert_ca.max(cost.ca);
                summary.max_insert_cl = summary.max_insert_cl.max(cost.cl);
            }
            Context::DecreaseKey => {
                summary.max_decrease_cl = summary.max_decrease_cl.max(cost.cl);
                summary.max_decrease_ca = summary.max_decrease_ca.max(cost.ca);
            }
            Context::DeleteMin if n_before > 0 => {
                let total = cost.cl + cost.ca;
                summary.max_delete_min = summary.max_delete_min.max(total);
                let bound = 6 * audit::max_rank(n_before) + 7;
                summary.delete_min_slack = summary
                    .delete_min_slack
                    .max(i64::from(total) - bound as i64);
            }
            _ => {}
        }

        hook(i, &mut heap, &handles);

        if let Some((_, f)) = heap.findings().first() {
            return Err(HarnessError::Audit {
                op_index: i,
                finding: f.to_string(),
            });
        }
        if let Some(v) = heap.paranoid_log().violations.first() {
            return Err(HarnessError::Potential {
                op_index: v.op as usize,
                check: v.check,
                delta_a: v.delta_a,
                delta_l: v.delta_l,
            });
        }
    }

    // Hook-injected faults surface here at the latest.
    if config.audit > crate::heap::AuditLevel::Off && !trace.is_empty() {
        let report = audit::check_structure(&heap);
        if let Some(f) = report.violations_found.first() {
            return Err(HarnessError::Audit {
                op_index: trace.len() - 1,
                finding: f.to_string(),
            });
        }
        summary.max_rank_observed = report.max_rank_observed;
    }
    summary.ops = trace.len();
    summary.reductions_checked = heap.paranoid_log().reductions_checked;
    summary.stats = heap.stats();
    Ok(summary)
}

/// Outcome of one (seed, strategy) pair in a campaign.
#[derive(Debug)]
pub struct CampaignRun {
    pub seed: u64,
    pub strategy: Strategy,
    pub result: Result<RunSummary, HarnessError>,
}

/// Runs generated traces for every seed under every strategy, in parallel.
pub fn fuzz_campaign(
    seeds: &[u64],
    n_ops: usize,
    mix: &Mix,
    strategies: &[Strategy],
    base: HeapConfig,
) -> Vec<CampaignRun> {
    seeds
        .par_iter()
        .flat_map_iter(|&seed| {
            let trace = generate_trace(seed, n_ops, mix);
            strategies
                .iter()
                .map(|&strategy| CampaignRun {
                    seed,
                    strategy,
                    result: run_differential(&trace, HeapConfig { strategy, ..base }),
                })
                .collect::<Vec<_>>()
        })
        .collect()
}
