//! A heap with worst-case constant-time `insert`, `find_min` and
//! `decrease_key`, and logarithmic `delete_min`.
//!
//! Trees are built from rank edges (linking equal ranks) where possible.
//! Nonrank roots and nodes that lost rank children are tracked as
//! violations in rank-indexed arrays and pending stacks; pairs of equal-rank
//! violations are removed by linking. How much stack work each call does is
//! chosen by a [`Strategy`]: drain everything, or bounded worst-case plans.
//!
//! ```
//! use dkheap::{Heap, Strategy};
//!
//! let mut heap = Heap::with_strategy(Strategy::Wc2);
//! let a = heap.insert(10);
//! heap.insert(4);
//! heap.decrease_key(a, 1).unwrap();
//! assert_eq!(heap.delete_min().map(|(k, _)| k), Some(1));
//! assert_eq!(heap.delete_min().map(|(k, _)| k), Some(4));
//! assert!(heap.delete_min().is_none());
//! ```
//!
//! The [`audit`] module verifies a heap from scratch and [`harness`] holds
//! the oracle-based differential runner used by the tests and the CLI.

pub mod audit;
pub mod harness;
pub mod heap;
pub mod registry;
pub mod stats;
pub mod store;

pub use heap::{
    AuditLevel, Context, Heap, HeapConfig, HeapError, OpCost, ReduceOutcome, Strategy,
    StrategyBudget,
};
pub use stats::StatsReport;
pub use store::{Handle, Subtype};
