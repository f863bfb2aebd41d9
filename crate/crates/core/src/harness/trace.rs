//! Trace operations, the line-oriented trace format and the seeded
//! generator.
//!
//! ```text
//! # comment
//! I 42        insert key 42
//! K 0 7       decrease the element from insert #0 to key 7
//! D           delete-min
//! F           find-min
//! ```

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::OracleHeap;
use super::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceOp {
    Insert(i64),
    /// `reference` is the 0-based ordinal of the insert that created the
    /// element.
    Decrease {
        reference: usize,
        key: i64,
    },
    DeleteMin,
    FindMin,
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceOp>, HarnessError> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |reason: String| HarnessError::Parse { line, reason };
        let mut parts = content.split_whitespace();
        let tag = parts.next().expect("nonempty line");
        let mut int = |what: &str| -> Result<i64, HarnessError> {
            let tok = parts.next().ok_or_else(|| err(format!("missing {what}")))?;
            tok.parse::<i64>()
                .map_err(|e| err(format!("bad {what} `{tok}`: {e}")))
        };
        let op = match tag {
            "I" => TraceOp::Insert(int("key")?),
            "K" => {
                let r = int("ref")?;
                let reference = usize::try_from(r).map_err(|_| err(format!("negative ref {r}")))?;
                TraceOp::Decrease {
                    reference,
                    key: int("key")?,
                }
            }
            "D" => TraceOp::DeleteMin,
            "F" => TraceOp::FindMin,
            other => return Err(err(format!("unknown op `{other}`"))),
        };
        if let Some(extra) = parts.next() {
            return Err(err(format!("trailing token `{extra}`")));
        }
        ops.push(op);
    }
    Ok(ops)
}

pub fn format_trace(ops: &[TraceOp]) -> String {
    let mut s = String::new();
    for op in ops {
        match op {
            TraceOp::Insert(k) => writeln!(s, "I {k}"),
            TraceOp::Decrease { reference, key } => writeln!(s, "K {reference} {key}"),
            TraceOp::DeleteMin => writeln!(s, "D"),
            TraceOp::FindMin => writeln!(s, "F"),
        }
        .expect("writing to a String");
    }
    s
}

/// Relative frequencies of the four operation kinds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mix {
    pub insert: f64,
    pub decrease: f64,
    pub delete_min: f64,
    pub find_min: f64,
}

impl Mix {
    pub fn new(
        insert: f64,
        decrease: f64,
        delete_min: f64,
        find_min: f64,
    ) -> Result<Self, HarnessError> {
        let parts = [insert, decrease, delete_min, find_min];
        if parts.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(HarnessError::BadMix("ratios must be nonnegative".into()));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(HarnessError::BadMix(format!("ratios sum to {sum}, not 1")));
        }
        Ok(Mix {
            insert,
            decrease,
            delete_min,
            find_min,
        })
    }

    pub fn insert_only() -> Self {
        Mix {
            insert: 1.0,
            decrease: 0.0,
            delete_min: 0.0,
            find_min: 0.0,
        }
    }
}

impl Default for Mix {
    /// Half inserts, a quarter each of decrease-key and delete-min.
    fn default() -> Self {
        Mix {
            insert: 0.5,
            decrease: 0.25,
            delete_min: 0.25,
            find_min: 0.0,
        }
    }
}

const KEY_RANGE: i64 = 1_000_000;
const MAX_DECREASE: i64 = 10_000;

/// Deterministic valid trace of `n_ops` operations. Operations that need a
/// nonempty heap become inserts when the heap is empty.
pub fn generate_trace(seed: u64, n_ops: usize, mix: &Mix) -> Vec<TraceOp> {
    generate_trace_prefilled(seed, 0, n_ops, mix)
}

/// Like [`generate_trace`], but starts with `prefill` inserts so the mixed
/// part runs on a heap of roughly that size.
pub fn generate_trace_prefilled(
    seed: u64,
    prefill: usize,
    n_ops: usize,
    mix: &Mix,
) -> Vec<TraceOp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut oracle = OracleHeap::new();
    // Live references with O(1) uniform choice and removal.
    let mut live: Vec<usize> = Vec::new();
    let mut pos: Vec<usize> = Vec::new();
    let mut ops = Vec::with_capacity(prefill + n_ops);

    for i in 0..prefill + n_ops {
        let u: f64 = rng.gen();
        let mut op = if i < prefill || u < mix.insert {
            TraceOp::Insert(0)
        } else if u < mix.insert + mix.decrease {
            TraceOp::Decrease {
                reference: 0,
                key: 0,
            }
        } else if u < mix.insert + mix.decrease + mix.delete_min {
            TraceOp::DeleteMin
        } else {
            TraceOp::FindMin
        };
        if live.is_empty() {
            op = TraceOp::Insert(0);
        }
        op = match op {
            TraceOp::Insert(_) => TraceOp::Insert(rng.gen_range(0..KEY_RANGE)),
            TraceOp::Decrease { .. } => {
                let reference = live[rng.gen_range(0..live.len())];
                let cur = oracle.current_key(reference).expect("live ref");
                TraceOp::Decrease {
                    reference,
                    key: cur - rng.gen_range(1..=MAX_DECREASE),
                }
            }
            other => other,
        };
        match oracle.apply(&op).expect("generator emits valid ops") {
            Some(entry) if op == TraceOp::DeleteMin => {
                let i = pos[entry.reference];
                let last = *live.last().expect("nonempty");
                live.swap_remove(i);
                if last != entry.reference {
                    pos[last] = i;
                }
            }
            _ => {}
        }
        if let TraceOp::Insert(_) = op {
            pos.push(live.len());
            live.push(pos.len() - 1);
        }
        ops.push(op);
    }
    ops
}
