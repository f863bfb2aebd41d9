mod common;

use dkheap::harness::{generate_trace, run_differential, Mix, OracleHeap, TraceOp};
use dkheap::{AuditLevel, HeapConfig, Strategy};
use proptest::prelude::*;

/// Turns raw draws into a valid trace by consulting the oracle.
fn to_trace(raw: &[(u8, u32, u32)]) -> Vec<TraceOp> {
    let mut oracle = OracleHeap::new();
    let mut live: Vec<usize> = Vec::new();
    let mut inserted = 0usize;
    let mut out = Vec::new();
    for &(kind, a, b) in raw {
        let op = match kind % 8 {
            _ if live.is_empty() => TraceOp::Insert(i64::from(a % 64)),
            0..=3 => TraceOp::Insert(i64::from(a % 64)),
            4 | 5 => {
                let reference = live[a as usize % live.len()];
                let cur = oracle.current_key(reference).unwrap();
                TraceOp::Decrease {
                    reference,
                    key: cur - 1 - i64::from(b % 8),
                }
            }
            6 => TraceOp::DeleteMin,
            _ => TraceOp::FindMin,
        };
        if let Some(e) = oracle.apply(&op).unwrap() {
            if op == TraceOp::DeleteMin {
                live.retain(|&r| r != e.reference);
            }
        }
        if let TraceOp::Insert(_) = op {
            live.push(inserted);
            inserted += 1;
        }
        out.push(op);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn every_strategy_matches_the_oracle(raw in prop::collection::vec((any::<u8>(), any::<u32>(), any::<u32>()), 1..400)) {
        let trace = to_trace(&raw);
        let mut extracted = Vec::new();
        for s in Strategy::ALL {
            let config = HeapConfig::with_strategy(s).audit(AuditLevel::Paranoid);
            let summary = run_differential(&trace, config).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
            prop_assert!(summary.delete_min_slack <= 0);
            extracted.push(summary.extracted);
        }
        prop_assert_eq!(&extracted[0], &extracted[1]);
        prop_assert_eq!(&extracted[0], &extracted[2]);
    }

    #[test]
    fn phase1_off_still_correct(raw in prop::collection::vec((any::<u8>(), any::<u32>(), any::<u32>()), 1..300)) {
        let trace = to_trace(&raw);
        for s in Strategy::ALL {
            let config = HeapConfig { phase1: false, ..HeapConfig::with_strategy(s).audit(AuditLevel::Boundary) };
            run_differential(&trace, config).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
        }
    }
}

#[test]
fn loss_counters_do_not_steer_control_flow() {
    // WC1 stops on the loss-weighted potential, so only the strategies whose
    // decisions depend on subtypes alone are compared.
    for s in [Strategy::Amortized, Strategy::Wc2] {
        for seed in 0..8 {
            let trace = generate_trace(seed, 4000, &Mix::new(0.4, 0.35, 0.2, 0.05).unwrap());
            let logs: Vec<_> = [true, false]
                .into_iter()
                .map(|track_loss| {
                    let config = HeapConfig {
                        track_loss,
                        record_decisions: true,
                        ..HeapConfig::with_strategy(s)
                    };
                    common::replay(&trace, config).decisions().to_vec()
                })
                .collect();
            assert!(!logs[0].is_empty());
            assert!(logs[0] == logs[1], "{s} seed {seed}: decision logs differ");
        }
    }
}

#[test]
fn phase1_reductions_save_comparisons_on_inserts() {
    for s in [Strategy::Amortized, Strategy::Wc1] {
        for seed in 0..4 {
            let trace = generate_trace(seed, 10_000, &Mix::insert_only());
            let count = |phase1| {
                let config = HeapConfig {
                    phase1,
                    ..HeapConfig::with_strategy(s)
                };
                common::replay(&trace, config).stats().comparisons
            };
            let (on, off) = (count(true), count(false));
            assert!(
                on < off,
                "{s} seed {seed}: {on} comparisons with phase 1, {off} without"
            );
        }
    }
}

#[test]
fn wc2_without_phase1_defers_work() {
    // The fixed plan only pays for the stack growth of a call when phase 1
    // runs; without it the backlog grows with every insert, so comparison
    // counts of the two configurations are not comparable.
    let trace = generate_trace(0, 10_000, &Mix::insert_only());
    let run = |phase1| {
        let config = HeapConfig {
            phase1,
            ..HeapConfig::with_strategy(Strategy::Wc2)
        };
        common::replay(&trace, config).stats().phi_a
    };
    assert!(run(true) < 64);
    assert!(run(false) > 5_000);
}

#[test]
fn generated_traces_replay_under_all_strategies() {
    let mix = Mix::new(0.45, 0.3, 0.2, 0.05).unwrap();
    for seed in 100..104 {
        let trace = generate_trace(seed, 5000, &mix);
        for s in Strategy::ALL {
            let config = HeapConfig::with_strategy(s).audit(AuditLevel::Paranoid);
            let summary = run_differential(&trace, config).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert!(summary.reductions_checked > 0);
        }
    }
}
