//! The heap: private restructuring methods, violation reductions, stack
//! reduction strategies and the public interface.
//!
//! Between public calls the heap is a single heap-ordered tree. Every public
//! method ends in a find-min pass which
//!
//! 0. turns every root into a nonrank root (subtype `A`),
//! 1. runs stack reductions according to the active [`Strategy`],
//! 2. links neighbouring roots in a leftward sweep until one tree remains,
//! 3. runs stack reductions again to pay for the links of step 2.
//!
//! `delete_min` always drains both stacks completely.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::audit::{self, Finding};
use crate::registry::{type_of, Kind, Registry, ViolationType};
use crate::stats::StatsReport;
use crate::store::{Handle, Location, NodeId, NodeStore, StoreError, Subtype};

/// How many stack reductions a method performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Empty both stacks every time.
    Amortized,
    /// Reduce while the potential grew since the method started.
    Wc1,
    /// Execute a fixed reduction plan per invoking method.
    Wc2,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Amortized, Strategy::Wc1, Strategy::Wc2];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Amortized => "amortized",
            Strategy::Wc1 => "wc1",
            Strategy::Wc2 => "wc2",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "amortized" => Ok(Strategy::Amortized),
            "wc1" => Ok(Strategy::Wc1),
            "wc2" => Ok(Strategy::Wc2),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

/// Amount of checking done while the heap runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuditLevel {
    Off,
    /// Full structural audit after each public call.
    Boundary,
    /// Boundary audits plus potential-delta assertions on every private
    /// method call and every reduction step.
    Paranoid,
}

impl FromStr for AuditLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(AuditLevel::Off),
            "boundary" => Ok(AuditLevel::Boundary),
            "paranoid" => Ok(AuditLevel::Paranoid),
            other => Err(format!("unknown audit level `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeapConfig {
    pub strategy: Strategy,
    pub audit: AuditLevel,
    /// Maintain per-node loss counters. Control flow never reads them.
    pub track_loss: bool,
    /// Run reductions before the linking sweep of find-min.
    pub phase1: bool,
    /// Keep a log of every reduction outcome and link.
    pub record_decisions: bool,
}

impl Default for HeapConfig {
    fn default() -> Self {
        HeapConfig {
            strategy: Strategy::Amortized,
            audit: AuditLevel::Off,
            track_loss: true,
            phase1: true,
            record_decisions: false,
        }
    }
}

impl HeapConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        HeapConfig {
            strategy,
            ..Self::default()
        }
    }

    pub fn audit(mut self, level: AuditLevel) -> Self {
        self.audit = level;
        self
    }
}

/// The public method a find-min pass runs on behalf of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    Insert,
    DecreaseKey,
    FindMin,
    DeleteMin,
}

/// Reduction plan of the planned worst-case strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyBudget {
    pub cl_phase1: u32,
    pub ca_phase1: u32,
    pub ca_phase3: u32,
}

impl StrategyBudget {
    pub const DECREASE_KEY: StrategyBudget = StrategyBudget {
        cl_phase1: 5,
        ca_phase1: 18,
        ca_phase3: 1,
    };
    pub const INSERT: StrategyBudget = StrategyBudget {
        cl_phase1: 0,
        ca_phase1: 2,
        ca_phase3: 1,
    };

    /// Plan for a context; `None` means drain the stacks.
    pub fn planned(ctx: Context) -> Option<StrategyBudget> {
        match ctx {
            Context::DecreaseKey => Some(Self::DECREASE_KEY),
            Context::Insert | Context::FindMin => Some(Self::INSERT),
            Context::DeleteMin => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReduceOutcome {
    StackEmpty,
    DiscardedStale,
    DiscardedDuplicate,
    Parked,
    Linked,
    LossReducedL2,
}

/// One control-flow decision, for comparing runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Reduce {
        kind: Kind,
        outcome: ReduceOutcome,
        seq: u64,
    },
    Link {
        winner: u64,
        loser: u64,
    },
}

/// Reductions executed by the most recent public call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpCost {
    pub context: Context,
    pub cl: u32,
    pub ca: u32,
}

/// A potential change outside its allowed range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiViolation {
    pub op: u64,
    pub check: &'static str,
    pub delta_a: i64,
    pub delta_l: i64,
}

#[derive(Clone, Debug, Default)]
pub struct ParanoidLog {
    /// Number of private calls and reduction steps checked.
    pub checks: u64,
    /// Number of reduction steps checked.
    pub reductions_checked: u64,
    pub violations: Vec<PhiViolation>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum HeapError {
    #[error("handle {0} does not refer to a live element")]
    DeadHandle(Handle),
    #[error("new key for {0} is not strictly smaller than the current key")]
    KeyNotSmaller(Handle),
}

impl From<StoreError> for HeapError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::DeadHandle(h) => HeapError::DeadHandle(h),
            other => panic!("store contract violated: {other}"),
        }
    }
}

/// Deliberate corruptions used to exercise the auditor.
#[doc(hidden)]
#[derive(Clone, Copy, Debug)]
pub enum Fault {
    BumpRank(Handle),
    SwapKeyWithParent(Handle),
    BreakLeftLink(Handle),
    SetSubtype(Handle, Subtype),
}

#[derive(Clone, Debug, Default)]
struct Counters {
    comparisons: u64,
    reductions_ca: u64,
    reductions_cl: u64,
    discards: u64,
    parks: u64,
    links: u64,
    loss_reductions: u64,
    structural: u64,
    max_rank: u64,
}

/// Heap with worst-case O(1) `insert`, `find_min`, `decrease_key` and
/// O(log n) `delete_min`.
#[derive(Clone, Debug)]
pub struct Heap<K> {
    pub(crate) store: NodeStore<K>,
    pub(crate) registry: Registry,
    pub(crate) roots: Option<NodeId>,
    config: HeapConfig,
    counters: Counters,
    op_cost: OpCost,
    op_index: u64,
    entry_phi: (u64, u64),
    decisions: Vec<Decision>,
    paranoid: ParanoidLog,
    findings: Vec<(u64, Finding)>,
}

impl<K: Ord> Default for Heap<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord> Heap<K> {
    pub fn new() -> Self {
        Self::with_config(HeapConfig::default())
    }

    pub fn with_strategy(strategy: Strategy) -> Self {
        Self::with_config(HeapConfig::with_strategy(strategy))
    }

    pub fn with_config(config: HeapConfig) -> Self {
        Heap {
            store: NodeStore::new(),
            registry: Registry::new(config.track_loss),
            roots: None,
            config,
            counters: Counters::default(),
            op_cost: OpCost {
                context: Context::FindMin,
                cl: 0,
                ca: 0,
            },
            op_index: 0,
            entry_phi: (0, 0),
            decisions: Vec::new(),
            paranoid: ParanoidLog::default(),
            findings: Vec::new(),
        }
    }

    pub fn config(&self) -> &HeapConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.is_empty()
    }

    pub fn contains(&self, h: Handle) -> bool {
        self.store.is_live(h)
    }

    pub fn key(&self, h: Handle) -> Option<&K> {
        self.store.get(h).map(|n| &n.key)
    }

    /// Rank of a live element.
    pub fn rank(&self, h: Handle) -> Option<u32> {
        self.store.get(h).map(|n| n.rank)
    }

    pub fn subtype(&self, h: Handle) -> Option<Subtype> {
        self.store.get(h).map(|n| n.subtype)
    }

    /// Current minimum without running a find-min pass.
    pub fn peek(&self) -> Option<(&K, Handle)> {
        let r = self.roots?;
        Some((&self.store.node(r).key, self.store.handle_of(r)))
    }

    pub fn stats(&self) -> StatsReport {
        let c = &self.counters;
        StatsReport {
            n: self.len() as u64,
            max_rank: c.max_rank,
            phi_a: self.registry.phi_a(),
            phi_l: self.registry.phi_l(),
            comparisons: c.comparisons,
            reductions_ca: c.reductions_ca,
            reductions_cl: c.reductions_cl,
            discards: c.discards,
            parks: c.parks,
            links: c.links,
            loss_reductions: c.loss_reductions,
            structural_mutations: c.structural,
            registry_mutations: self.registry.mutations(),
        }
    }

    pub fn last_op_cost(&self) -> OpCost {
        self.op_cost
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    pub fn paranoid_log(&self) -> &ParanoidLog {
        &self.paranoid
    }

    /// Boundary-audit findings accumulated so far, tagged by op index.
    pub fn findings(&self) -> &[(u64, Finding)] {
        &self.findings
    }

    pub fn take_findings(&mut self) -> Vec<(u64, Finding)> {
        std::mem::take(&mut self.findings)
    }

    /// Number of public calls made so far.
    pub fn op_count(&self) -> u64 {
        self.op_index
    }

    // ---------------------------------------------------------------
    // Public methods
    // ---------------------------------------------------------------

    /// Adds an element and returns its handle.
    ///
    /// Panics if the node store runs out of 32-bit slot indices.
    pub fn insert(&mut self, key: K) -> Handle {
        self.begin_op(Context::Insert);
        let h = self.store.allocate(key).expect("node store exhausted");
        let x = h.id();
        self.list_push_root(x);
        self.find_min_pass(Context::Insert);
        self.end_op(None);
        h
    }

    /// Consolidates the forest and returns the minimum element.
    pub fn find_min(&mut self) -> Option<Handle> {
        self.begin_op(Context::FindMin);
        let r = self.find_min_pass(Context::FindMin);
        self.end_op(None);
        r.map(|r| self.store.handle_of(r))
    }

    /// Removes the minimum element, returning its key and its (now dead)
    /// handle.
    pub fn delete_min(&mut self) -> Option<(K, Handle)> {
        self.begin_op(Context::DeleteMin);
        let Some(rho) = self.roots else {
            self.end_op(None);
            return None;
        };
        let n_before = self.len();
        debug_assert!(self.store.node(rho).right.is_none(), "more than one tree");
        let mut head = self.roots;
        self.store
            .list_remove(&mut head, rho)
            .expect("root is linked");
        self.roots = self.store.node(rho).child_head;
        self.store.node_mut(rho).child_head = None;
        self.counters.structural += 1;
        self.set_subtype(rho, Subtype::N);
        self.find_min_pass(Context::DeleteMin);
        let handle = self.store.handle_of(rho);
        let key = self.store.free(rho);
        self.end_op(Some(n_before));
        Some((key, handle))
    }

    /// Lowers the key of `h` to `key`, which must be strictly smaller.
    pub fn decrease_key(&mut self, h: Handle, key: K) -> Result<(), HeapError> {
        let x = self.store.resolve(h)?;
        if key.cmp(&self.store.node(x).key) != Ordering::Less {
            return Err(HeapError::KeyNotSmaller(h));
        }
        self.begin_op(Context::DecreaseKey);
        self.cut_from_parent(x);
        self.list_push_root(x);
        self.store.node_mut(x).key = key;
        self.find_min_pass(Context::DecreaseKey);
        self.end_op(None);
        Ok(())
    }

    fn begin_op(&mut self, context: Context) {
        self.op_cost = OpCost {
            context,
            cl: 0,
            ca: 0,
        };
        self.entry_phi = (self.registry.phi_a(), self.registry.phi_l());
    }

    fn end_op(&mut self, deleted_from: Option<usize>) {
        if self.config.audit >= AuditLevel::Boundary {
            let op = self.op_index;
            let report = audit::check_structure(self);
            self.findings
                .extend(report.violations_found.into_iter().map(|f| (op, f)));
            if let Some(n_before) = deleted_from {
                let cost = self.op_cost;
                let extra = audit::check_delete_min(self, n_before, cost.cl + cost.ca);
                self.findings.extend(extra.into_iter().map(|f| (op, f)));
            }
        }
        self.op_index += 1;
    }

    // ---------------------------------------------------------------
    // find-min
    // ---------------------------------------------------------------

    fn find_min_pass(&mut self, ctx: Context) -> Option<NodeId> {
        // Phase 0.
        let mut cur = self.roots;
        while let Some(r) = cur {
            let n = self.store.node_mut(r);
            cur = n.right;
            n.parent = None;
            if n.subtype != Subtype::A {
                self.set_subtype(r, Subtype::A);
            }
        }

        if self.config.phase1 {
            self.run_reductions(1, ctx);
        }

        // Phase 2: leftward sweep over the circular root list.
        if let Some(mut cur) = self.roots {
            while self
                .roots
                .is_some_and(|h| self.store.node(h).right.is_some())
            {
                let left = self.store.node(cur).left;
                let s = self.link(cur, left, true);
                cur = self.store.node(s).left;
            }
        }

        self.run_reductions(3, ctx);
        self.roots
    }

    /// Runs the strategy's reductions for one phase; returns `(cl, ca)`.
    pub(crate) fn run_reductions(&mut self, phase: u8, ctx: Context) -> (u32, u32) {
        let strategy = if ctx == Context::DeleteMin {
            Strategy::Amortized
        } else {
            self.config.strategy
        };
        let (mut cl, mut ca) = (0u32, 0u32);
        match strategy {
            Strategy::Amortized => {
                while self.reduce_cl_once() != ReduceOutcome::StackEmpty {
                    cl += 1;
                }
                while self.reduce_ca_once() != ReduceOutcome::StackEmpty {
                    ca += 1;
                }
            }
            Strategy::Wc1 => {
                let (a0, l0) = self.entry_phi;
                while self.registry.phi_l() > l0 && !self.registry.stack_is_empty(Kind::L) {
                    self.reduce_cl_once();
                    cl += 1;
                }
                while self.registry.phi_a() > a0 && !self.registry.stack_is_empty(Kind::A) {
                    self.reduce_ca_once();
                    ca += 1;
                }
            }
            Strategy::Wc2 => {
                let plan = StrategyBudget::planned(ctx).unwrap_or(StrategyBudget::INSERT);
                let (cl_plan, ca_plan) = if phase == 1 {
                    (plan.cl_phase1, plan.ca_phase1)
                } else {
                    (0, plan.ca_phase3)
                };
                for _ in 0..cl_plan {
                    if self.reduce_cl_once() == ReduceOutcome::StackEmpty {
                        break;
                    }
                    cl += 1;
                }
                for _ in 0..ca_plan {
                    if self.reduce_ca_once() == ReduceOutcome::StackEmpty {
                        break;
                    }
                    ca += 1;
                }
            }
        }
        self.op_cost.cl += cl;
        self.op_cost.ca += ca;
        (cl, ca)
    }

    // ---------------------------------------------------------------
    // Reductions
    // ---------------------------------------------------------------

    /// One `C_A` reduction step.
    pub(crate) fn reduce_ca_once(&mut self) -> ReduceOutcome {
        let before = self.phi_snapshot();
        let Some(x) = self.registry.stack_pop(&mut self.store, Kind::A) else {
            return ReduceOutcome::StackEmpty;
        };
        let outcome = if type_of(self.store.node(x).subtype) != ViolationType::A {
            ReduceOutcome::DiscardedStale
        } else if self.store.node(x).location == Location::InArray {
            ReduceOutcome::DiscardedDuplicate
        } else {
            let r = self.store.node(x).rank as usize;
            match self.registry.take_slot(&mut self.store, Kind::A, r) {
                None => {
                    self.registry.park(&mut self.store, Kind::A, x);
                    ReduceOutcome::Parked
                }
                Some(y) => {
                    self.link(x, y, false);
                    ReduceOutcome::Linked
                }
            }
        };
        self.counters.reductions_ca += 1;
        self.tally(Kind::A, x, outcome);
        if self.paranoid() {
            let (da, dl) = self.phi_delta(before);
            let ok = da + dl <= -1 && dl == 0;
            self.record_check("reduce_ca", ok, da, dl, true);
        }
        outcome
    }

    /// One `C_L` reduction step.
    pub(crate) fn reduce_cl_once(&mut self) -> ReduceOutcome {
        let before = self.phi_snapshot();
        let Some(x) = self.registry.stack_pop(&mut self.store, Kind::L) else {
            return ReduceOutcome::StackEmpty;
        };
        let node = self.store.node(x);
        let outcome = if type_of(node.subtype) != ViolationType::L {
            ReduceOutcome::DiscardedStale
        } else if node.location == Location::InArray {
            ReduceOutcome::DiscardedDuplicate
        } else if node.subtype == Subtype::L2 {
            let p = node.parent.expect("loss violation without a parent");
            self.set_subtype(x, Subtype::A);
            self.decrement_rank(p);
            ReduceOutcome::LossReducedL2
        } else {
            let r = node.rank as usize;
            match self.registry.take_slot(&mut self.store, Kind::L, r) {
                None => {
                    self.registry.park(&mut self.store, Kind::L, x);
                    ReduceOutcome::Parked
                }
                Some(y) => {
                    self.link(x, y, false);
                    ReduceOutcome::Linked
                }
            }
        };
        self.counters.reductions_cl += 1;
        self.tally(Kind::L, x, outcome);
        if self.paranoid() {
            let (da, dl) = self.phi_delta(before);
            let ok = da + dl <= -1 && dl <= -1 && da <= 3;
            self.record_check("reduce_cl", ok, da, dl, true);
        }
        outcome
    }

    fn tally(&mut self, kind: Kind, x: NodeId, outcome: ReduceOutcome) {
        match outcome {
            ReduceOutcome::DiscardedStale | ReduceOutcome::DiscardedDuplicate => {
                self.counters.discards += 1
            }
            ReduceOutcome::Parked => self.counters.parks += 1,
            ReduceOutcome::LossReducedL2 => self.counters.loss_reductions += 1,
            ReduceOutcome::Linked | ReduceOutcome::StackEmpty => {}
        }
        if self.config.record_decisions {
            let seq = self.store.node(x).seq;
            self.decisions.push(Decision::Reduce { kind, outcome, seq });
        }
    }

    // ---------------------------------------------------------------
    // Private methods
    // ---------------------------------------------------------------

    pub(crate) fn set_subtype(&mut self, x: NodeId, s: Subtype) {
        let before = self.phi_snapshot();
        self.registry.set_violation_subtype(&mut self.store, x, s);
        if self.paranoid() {
            let (da, dl) = self.phi_delta(before);
            let (ma, ml, mt) = match s {
                Subtype::A => (2, 0, 2),
                Subtype::L1 => (0, 4, 4),
                Subtype::L2 => (0, 5, 5),
                Subtype::N => (0, 0, 0),
            };
            let ok = da <= ma && dl <= ml && da + dl <= mt;
            self.record_check("set_violation_subtype", ok, da, dl, false);
        }
    }

    pub(crate) fn decrement_rank(&mut self, x: NodeId) {
        let before = self.phi_snapshot();
        let n = self.store.node(x);
        assert!(n.rank >= 1, "rank underflow on {x:?}");
        match n.subtype {
            Subtype::L2 => self.registry.bump_loss(&mut self.store, x),
            Subtype::A => self.set_subtype(x, Subtype::A),
            Subtype::N => self.set_subtype(x, Subtype::L1),
            Subtype::L1 => self.set_subtype(x, Subtype::L2),
        }
        self.store.node_mut(x).rank -= 1;
        if self.paranoid() {
            let (da, dl) = self.phi_delta(before);
            let ok = da <= 1 && dl <= 5 && da + dl <= 5;
            self.record_check("decrement_rank", ok, da, dl, false);
        }
    }

    /// Detaches `c` from its parent (or from the root list). The caller must
    /// put `c` into another list.
    pub(crate) fn cut_from_parent(&mut self, c: NodeId) {
        let before = self.phi_snapshot();
        match self.store.node(c).parent {
            Some(p) => {
                if self.store.node(c).subtype != Subtype::A {
                    self.decrement_rank(p);
                }
                let mut head = self.store.node(p).child_head;
                self.store
                    .list_remove(&mut head, c)
                    .expect("child is linked under its parent");
                self.store.node_mut(p).child_head = head;
                self.store.node_mut(c).parent = None;
            }
            None => {
                let mut head = self.roots;
                self.store
                    .list_remove(&mut head, c)
                    .expect("root is linked");
                self.roots = head;
            }
        }
        self.counters.structural += 1;
        if self.paranoid() {
            let (da, dl) = self.phi_delta(before);
            let ok = da <= 1 && dl <= 5 && da + dl <= 5;
            self.record_check("cut_from_parent", ok, da, dl, false);
        }
    }

    /// Compares `x` and `y` and hangs the larger under the smaller; returns
    /// the surviving parent.
    ///
    /// `registered` says both operands are filed in the registry (root
    /// sweep) rather than freshly taken out of it by a reduction.
    pub(crate) fn link(&mut self, x: NodeId, y: NodeId, registered: bool) -> NodeId {
        debug_assert_ne!(x, y);
        let before = self.phi_snapshot();
        let (s, h) = if self.less(x, y) { (x, y) } else { (y, x) };
        self.counters.links += 1;
        if self.config.record_decisions {
            let (winner, loser) = (self.store.node(s).seq, self.store.node(h).seq);
            self.decisions.push(Decision::Link { winner, loser });
        }
        let hs = self.store.node(h);
        debug_assert_eq!(hs.subtype, self.store.node(s).subtype);
        if hs.subtype == Subtype::L1 && hs.parent == Some(s) {
            // Re-creating the edge to the same parent: h's loss resets, s
            // would drop and regain the same rank and keeps its loss.
            self.set_subtype(h, Subtype::N);
            self.registry.refile(&mut self.store, s);
        } else {
            self.cut_from_parent(h);
            let mut head = self.store.node(s).child_head;
            self.store
                .list_insert_leftmost(&mut head, h)
                .expect("cut node is unlinked");
            self.store.node_mut(s).child_head = head;
            self.store.node_mut(h).parent = Some(s);
            self.counters.structural += 1;

            let rank_edge = self.store.node(s).rank <= self.store.node(h).rank;
            let target = if rank_edge { Subtype::N } else { Subtype::A };
            if self.store.node(h).subtype != target {
                self.set_subtype(h, target);
            }
            if rank_edge {
                let ss = match self.store.node(s).subtype {
                    Subtype::A => Subtype::A,
                    Subtype::L1 => Subtype::N,
                    other => panic!("link winner has subtype {other:?}"),
                };
                self.set_subtype(s, ss);
                let n = self.store.node_mut(s);
                n.rank += 1;
                let r = u64::from(n.rank);
                if r > self.counters.max_rank {
                    self.counters.max_rank = r;
                }
            }
        }
        if self.paranoid() {
            let (da, dl) = self.phi_delta(before);
            let max_a = if registered { 1 } else { 2 };
            let ok = da <= max_a && dl <= 5 && da + dl <= 5;
            self.record_check("link", ok, da, dl, false);
        }
        s
    }

    fn list_push_root(&mut self, x: NodeId) {
        let mut head = self.roots;
        self.store
            .list_insert_leftmost(&mut head, x)
            .expect("new root is unlinked");
        self.roots = head;
        self.counters.structural += 1;
    }

    #[inline]
    fn less(&mut self, a: NodeId, b: NodeId) -> bool {
        self.counters.comparisons += 1;
        self.store.node(a).cmp_order(self.store.node(b)) == Ordering::Less
    }

    // ---------------------------------------------------------------
    // Paranoid bookkeeping
    // ---------------------------------------------------------------

    #[inline]
    fn paranoid(&self) -> bool {
        self.config.audit == AuditLevel::Paranoid
    }

    #[inline]
    fn phi_snapshot(&self) -> (u64, u64) {
        (self.registry.phi_a(), self.registry.phi_l())
    }

    #[inline]
    fn phi_delta(&self, before: (u64, u64)) -> (i64, i64) {
        (
            self.registry.phi_a() as i64 - before.0 as i64,
            self.registry.phi_l() as i64 - before.1 as i64,
        )
    }

    fn record_check(&mut self, check: &'static str, ok: bool, da: i64, dl: i64, reduction: bool) {
        self.paranoid.checks += 1;
        if reduction {
            self.paranoid.reductions_checked += 1;
        }
        if !ok {
            self.paranoid.violations.push(PhiViolation {
                op: self.op_index,
                check,
                delta_a: da,
                delta_l: dl,
            });
        }
    }

    // ---------------------------------------------------------------
    // Fault injection
    // ---------------------------------------------------------------

    #[doc(hidden)]
    pub fn inject_fault(&mut self, fault: Fault) -> Result<(), HeapError> {
        match fault {
            Fault::BumpRank(h) => {
                let x = self.store.resolve(h)?;
                self.store.node_mut(x).rank += 1;
            }
            Fault::SwapKeyWithParent(h) => {
                let x = self.store.resolve(h)?;
                if let Some(p) = self.store.node(x).parent {
                    self.store.swap_keys(x, p);
                }
            }
            Fault::BreakLeftLink(h) => {
                let x = self.store.resolve(h)?;
                self.store.node_mut(x).left = x;
            }
            Fault::SetSubtype(h, s) => {
                let x = self.store.resolve(h)?;
                self.store.node_mut(x).subtype = s;
            }
        }
        Ok(())
    }

    /// Handles of the children of `h`, leftmost first.
    pub fn children(&self, h: Handle) -> Vec<Handle> {
        match self.store.get(h) {
            Some(n) => self
                .store
                .list_members(n.child_head)
                .map(|c| self.store.handle_of(c))
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn parent(&self, h: Handle) -> Option<Handle> {
        let n = self.store.get(h)?;
        n.parent.map(|p| self.store.handle_of(p))
    }
}
