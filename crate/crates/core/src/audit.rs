//! Read-only verification of a quiescent heap.
//!
//! [`check_structure`] walks every tree and every registry container and
//! reports what it finds instead of panicking, so fault-injection tests can
//! count findings. The rank bound and the minimal-tree-size certificate live
//! here as well.

use std::fmt;

use thiserror::Error;

use crate::heap::Heap;
use crate::registry::{type_of, Kind, ViolationType};
use crate::store::{Handle, Location, NodeId, NodeStore, Subtype};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Invariant {
    HeapOrder,
    SiblingShape,
    RankCount,
    SubtypeLoss,
    RootSubtype,
    RootCount,
    Reachability,
    Registry,
    Location,
    Phi,
    RankBound,
    DeleteMinBudget,
    ViolationBudget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub invariant: Invariant,
    pub node: Option<Handle>,
    pub detail: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(h) => write!(f, "{:?} at {h}: {}", self.invariant, self.detail),
            None => write!(f, "{:?}: {}", self.invariant, self.detail),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub violations_found: Vec<Finding>,
    pub max_rank_observed: u32,
    pub phi_recomputed: (u64, u64),
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations_found.is_empty()
    }

    pub fn count(&self, inv: Invariant) -> usize {
        self.violations_found
            .iter()
            .filter(|f| f.invariant == inv)
            .count()
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("rank {0} exceeds 62; tree size does not fit in 64 bits")]
    Overflow(u32),
}

/// Real-valued rank bound `4 + 1.2 log2 n`; every rank must stay below it.
pub fn rank_bound(n: usize) -> f64 {
    4.0 + 1.2 * (n as f64).log2()
}

/// `R(n) = floor(4 + 1.2 log2 n)`, for `n >= 1`.
pub fn max_rank(n: usize) -> u64 {
    rank_bound(n.max(1)).floor() as u64
}

struct Auditor<'a, K> {
    store: &'a NodeStore<K>,
    out: Vec<Finding>,
}

impl<K: Ord> Auditor<'_, K> {
    fn report(&mut self, invariant: Invariant, node: Option<NodeId>, detail: String) {
        let node = node.map(|id| self.store.handle_of(id));
        self.out.push(Finding {
            invariant,
            node,
            detail,
        });
    }

    /// Walks a sibling list checking its link shape; returns its members.
    fn walk_list(&mut self, head: Option<NodeId>, owner: Option<NodeId>) -> Vec<NodeId> {
        let mut members = Vec::new();
        let Some(head) = head else {
            return members;
        };
        let limit = self.store.capacity() + 1;
        let mut prev: Option<NodeId> = None;
        let mut cur = Some(head);
        while let Some(x) = cur {
            if members.len() >= limit {
                self.report(
                    Invariant::SiblingShape,
                    Some(head),
                    "cycle in right links".into(),
                );
                break;
            }
            let Some(n) = self.store.try_node(x) else {
                self.report(
                    Invariant::SiblingShape,
                    prev,
                    format!("link to freed slot {x:?}"),
                );
                break;
            };
            if let Some(p) = prev {
                if n.left != p {
                    self.report(
                        Invariant::SiblingShape,
                        Some(x),
                        "left.right != self".into(),
                    );
                }
            }
            if !n.linked {
                self.report(
                    Invariant::SiblingShape,
                    Some(x),
                    "member not flagged linked".into(),
                );
            }
            if n.parent != owner {
                self.report(
                    Invariant::SiblingShape,
                    Some(x),
                    format!("parent {:?} but listed under {:?}", n.parent, owner),
                );
            }
            members.push(x);
            prev = Some(x);
            cur = n.right;
        }
        let last = *members.last().expect("nonempty");
        if self.store.node(head).left != last {
            self.report(
                Invariant::SiblingShape,
                Some(head),
                "head.left is not the rightmost member".into(),
            );
        }
        members
    }
}

/// Full structural audit of a heap at a public-call boundary.
pub fn check_structure<K: Ord>(heap: &Heap<K>) -> AuditReport {
    let store = &heap.store;
    let reg = &heap.registry;
    let mut a = Auditor {
        store,
        out: Vec::new(),
    };
    let n = store.len();
    let cap = store.capacity();
    let mut visited = vec![false; cap];
    let mut max_rank_seen = 0u32;

    let roots = a.walk_list(heap.roots, None);
    if n > 0 && roots.len() != 1 {
        a.report(
            Invariant::RootCount,
            None,
            format!("{} roots for {n} nodes", roots.len()),
        );
    }
    if n == 0 && !roots.is_empty() {
        a.report(Invariant::RootCount, None, "roots in an empty heap".into());
    }
    let mut stack = Vec::new();
    for &r in &roots {
        if store.node(r).subtype != Subtype::A {
            a.report(
                Invariant::RootSubtype,
                Some(r),
                format!("{:?}", store.node(r).subtype),
            );
        }
        if !visited[r.index()] {
            visited[r.index()] = true;
            stack.push(r);
        }
    }
    let mut reached = stack.len();
    while let Some(x) = stack.pop() {
        let node = store.node(x);
        max_rank_seen = max_rank_seen.max(node.rank);
        let children = a.walk_list(node.child_head, Some(x));
        let mut rank_children = 0u32;
        for c in children {
            let child = store.node(c);
            if node.cmp_order(child).is_ge() {
                a.report(
                    Invariant::HeapOrder,
                    Some(c),
                    "child does not exceed parent".into(),
                );
            }
            if child.subtype != Subtype::A {
                rank_children += 1;
            }
            if visited[c.index()] {
                a.report(
                    Invariant::Reachability,
                    Some(c),
                    "node reached twice".into(),
                );
            } else {
                visited[c.index()] = true;
                reached += 1;
                stack.push(c);
            }
        }
        if rank_children != node.rank {
            a.report(
                Invariant::RankCount,
                Some(x),
                format!("rank {} but {rank_children} rank children", node.rank),
            );
        }
    }
    if reached != n {
        a.report(
            Invariant::Reachability,
            None,
            format!("{reached} of {n} nodes reachable"),
        );
    }

    let track_loss = reg.track_loss();
    for (id, node) in store.iter() {
        if track_loss {
            let ok = match node.subtype {
                Subtype::N | Subtype::A => node.loss == 0,
                Subtype::L1 => node.loss == 1,
                Subtype::L2 => node.loss >= 2,
            };
            if !ok {
                a.report(
                    Invariant::SubtypeLoss,
                    Some(id),
                    format!("{:?} with loss {}", node.subtype, node.loss),
                );
            }
        }
        match type_of(node.subtype).container() {
            None => {
                if node.location != Location::None {
                    a.report(
                        Invariant::Location,
                        Some(id),
                        format!("N node marked {:?}", node.location),
                    );
                }
            }
            Some(k) => {
                let kind = if k == 0 { Kind::A } else { Kind::L };
                match node.location {
                    Location::InArray => {
                        if reg.slot(kind, node.rank as usize) != Some(id) {
                            a.report(
                                Invariant::Location,
                                Some(id),
                                "marked in array but slot differs".into(),
                            );
                        }
                    }
                    Location::OnStack => {
                        if !node.stacked[k] {
                            a.report(
                                Invariant::Location,
                                Some(id),
                                "marked on stack without an entry".into(),
                            );
                        }
                    }
                    Location::None => {
                        a.report(
                            Invariant::Location,
                            Some(id),
                            "violation not registered".into(),
                        );
                    }
                }
            }
        }
    }

    for kind in [Kind::A, Kind::L] {
        for (r, slot) in reg.array(kind).iter().enumerate() {
            let Some(x) = *slot else { continue };
            match store.try_node(x) {
                None => a.report(
                    Invariant::Registry,
                    None,
                    format!("slot {kind:?}[{r}] holds freed node"),
                ),
                Some(node) => {
                    let expected = kind.violation_type();
                    let subtype_ok = match kind {
                        Kind::A => node.subtype == Subtype::A,
                        Kind::L => node.subtype == Subtype::L1,
                    };
                    if type_of(node.subtype) != expected || !subtype_ok || node.rank as usize != r {
                        a.report(
                            Invariant::Registry,
                            Some(x),
                            format!(
                                "slot {kind:?}[{r}] holds {:?} of rank {}",
                                node.subtype, node.rank
                            ),
                        );
                    }
                    if node.location != Location::InArray {
                        a.report(
                            Invariant::Location,
                            Some(x),
                            format!("in slot {kind:?}[{r}] but marked {:?}", node.location),
                        );
                    }
                }
            }
        }
        let mut seen = vec![false; cap];
        for &x in reg.stack(kind) {
            match store.try_node(x) {
                None => a.report(
                    Invariant::Registry,
                    None,
                    format!("{kind:?} stack holds freed node"),
                ),
                Some(node) => {
                    if seen[x.index()] {
                        a.report(Invariant::Registry, Some(x), "duplicate stack entry".into());
                    }
                    seen[x.index()] = true;
                    if !node.stacked[kind.idx()] {
                        a.report(
                            Invariant::Registry,
                            Some(x),
                            "entry without stacked flag".into(),
                        );
                    }
                }
            }
        }
        for (id, node) in store.iter() {
            if node.stacked[kind.idx()] && !seen[id.index()] {
                a.report(
                    Invariant::Registry,
                    Some(id),
                    "stacked flag without entry".into(),
                );
            }
        }
    }

    let phi = reg.recompute_phi(store);
    if phi != (reg.phi_a(), reg.phi_l()) {
        a.report(
            Invariant::Phi,
            None,
            format!(
                "recomputed {phi:?}, counters ({}, {})",
                reg.phi_a(),
                reg.phi_l()
            ),
        );
    }

    if n > 0 {
        let bound = rank_bound(n);
        for (id, node) in store.iter() {
            if f64::from(node.rank) >= bound {
                a.report(
                    Invariant::RankBound,
                    Some(id),
                    format!("rank {} >= {bound:.3}", node.rank),
                );
            }
        }
    }

    AuditReport {
        violations_found: a.out,
        max_rank_observed: max_rank_seen,
        phi_recomputed: phi,
    }
}

/// From-scratch potentials of the heap's registry.
pub fn recompute_phi<K>(heap: &Heap<K>) -> (u64, u64) {
    heap.registry.recompute_phi(&heap.store)
}

/// `true` iff every live rank is below `4 + 1.2 log2 n`. Empty heaps pass.
pub fn check_rank_bound<K>(heap: &Heap<K>) -> bool {
    let n = heap.store.len();
    if n == 0 {
        return true;
    }
    let bound = rank_bound(n);
    heap.store
        .iter()
        .all(|(_, node)| f64::from(node.rank) < bound)
}

/// Post-conditions of `delete_min`: reduction budget, empty stacks and the
/// bound on remaining violations.
pub fn check_delete_min<K>(heap: &Heap<K>, n_before: usize, reductions: u32) -> Vec<Finding> {
    let mut out = Vec::new();
    let r_before = max_rank(n_before);
    if u64::from(reductions) > 6 * r_before + 7 {
        out.push(Finding {
            invariant: Invariant::DeleteMinBudget,
            node: None,
            detail: format!("{reductions} reductions > 6*{r_before}+7"),
        });
    }
    let reg = &heap.registry;
    if !reg.stack_is_empty(Kind::A) || !reg.stack_is_empty(Kind::L) {
        out.push(Finding {
            invariant: Invariant::ViolationBudget,
            node: None,
            detail: "stacks not empty after delete_min".into(),
        });
    }
    let n = heap.store.len();
    if n > 0 {
        let limit = max_rank(n) + 1;
        let (mut a_count, mut loss) = (0u64, 0u64);
        for (_, node) in heap.store.iter() {
            if node.subtype == Subtype::A {
                a_count += 1;
            }
            loss += u64::from(node.loss);
        }
        if a_count > limit {
            out.push(Finding {
                invariant: Invariant::ViolationBudget,
                node: None,
                detail: format!("{a_count} A nodes > {limit}"),
            });
        }
        if reg.track_loss() && loss > limit {
            out.push(Finding {
                invariant: Invariant::ViolationBudget,
                node: None,
                detail: format!("total loss {loss} > {limit}"),
            });
        }
    }
    out
}

/// Counts subtype-`A` nodes and total loss, for reporting.
pub fn violation_totals<K>(heap: &Heap<K>) -> (u64, u64) {
    heap.store.iter().fold((0, 0), |(a, l), (_, node)| {
        (
            a + u64::from(type_of(node.subtype) == ViolationType::A),
            l + u64::from(node.loss),
        )
    })
}

/// Smallest node count of a rank-`rank` binomial tree after `cuts` cuts
/// that keep the rank: the largest grandchild subtrees go first. A rank-`R`
/// binomial tree has `k` grandchildren of rank `R - 1 - k`.
pub fn minimal_tree_size(rank: u32, cuts: u64) -> Result<u64, AuditError> {
    if rank > 62 {
        return Err(AuditError::Overflow(rank));
    }
    let mut size = 1u64 << rank;
    let mut left = cuts;
    for k in 1..rank {
        if left == 0 {
            break;
        }
        let g = rank - 1 - k;
        let take = left.min(u64::from(k));
        size -= take << g;
        left -= take;
    }
    Ok(size)
}

/// Checks `2^((R-4)/1.2) <= minimal_tree_size(R, R+1)` for every `R` in
/// `1..=max_rank`.
pub fn rank_bound_certificate(max_rank: u32) -> Result<bool, AuditError> {
    for r in 1..=max_rank {
        let size = minimal_tree_size(r, u64::from(r) + 1)?;
        let lower = 2f64.powf((f64::from(r) - 4.0) / 1.2);
        if lower > size as f64 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Grandchild ranks of a rank-`r` binomial tree, enumerated child by child.
    fn grandchild_sizes(r: u32) -> Vec<u64> {
        let mut v = Vec::new();
        for child_rank in 0..r {
            for g in 0..child_rank {
                v.push(1u64 << g);
            }
        }
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    fn brute(r: u32, cuts: usize) -> u64 {
        let g = grandchild_sizes(r);
        (1u64 << r) - g.iter().take(cuts).sum::<u64>()
    }

    #[test]
    fn no_cuts_is_full_tree() {
        for r in 0..=20 {
            assert_eq!(minimal_tree_size(r, 0).unwrap(), 1 << r);
        }
    }

    #[test]
    fn small_values_match_enumeration() {
        assert_eq!(brute(3, 1), 6);
        assert_eq!(minimal_tree_size(3, 1).unwrap(), 6);
        // Frozen from the enumeration above: 32 - (8 + 4 + 4 + 2 + 2 + 2).
        assert_eq!(brute(5, 6), 10);
        assert_eq!(minimal_tree_size(5, 6).unwrap(), 10);
        for r in 0..=12 {
            for c in 0..=(r * r) as usize {
                assert_eq!(
                    minimal_tree_size(r, c as u64).unwrap(),
                    brute(r, c),
                    "r={r} c={c}"
                );
            }
        }
    }

    #[test]
    fn too_many_cuts_stop_at_grandchildren() {
        // Rank 4: children 0..3, grandchildren 0+1+2 = 3+... all cut leaves root + 4 children.
        assert_eq!(minimal_tree_size(4, 100).unwrap(), 5);
        assert_eq!(minimal_tree_size(1, 2).unwrap(), 2);
    }

    #[test]
    fn overflow_is_rejected() {
        assert_eq!(minimal_tree_size(63, 0), Err(AuditError::Overflow(63)));
        assert!(minimal_tree_size(62, 0).is_ok());
    }

    #[test]
    fn certificate_holds() {
        assert_eq!(rank_bound_certificate(1), Ok(true));
        assert_eq!(rank_bound_certificate(60), Ok(true));
        assert_eq!(rank_bound_certificate(62), Ok(true));
    }

    #[test]
    fn rank_bound_values() {
        assert_eq!(rank_bound(1), 4.0);
        assert!((rank_bound(1024) - 16.0).abs() < 1e-12);
        assert_eq!(max_rank(8), 7);
        assert_eq!(max_rank(64), 11);
    }
}
