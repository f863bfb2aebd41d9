//! Violation containers and the incrementally maintained potentials.
//!
//! Two rank-indexed arrays (`R_A`, `R_L`) pair up equal-rank violations and
//! two stacks (`C_A`, `C_L`) hold pending ones. The potentials are
//!
//! ```text
//! phi_A = |R_A| + 2|C_A|
//! phi_L = 3|R_L| + 4|C_L|
//! ```
//!
//! where `|C_L|` is weighted: an entry whose node currently has subtype `L2`
//! weighs that node's loss, every other entry (stale ones included) weighs 1.
//!
//! A node has at most one physical entry per stack (`Node::stacked`). When a
//! node regains the type of a stack it already sits on, the old entry is
//! revived instead of pushing a second one.

use crate::store::{Location, NodeId, NodeStore, Subtype};

/// Initial number of rank slots in each array.
pub const INITIAL_RANK_CAPACITY: usize = 32;

/// Violation type derived from a [`Subtype`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ViolationType {
    A,
    L,
    N,
}

impl ViolationType {
    /// Index of the array/stack pair holding this type, `None` for `N`.
    #[inline]
    pub fn container(self) -> Option<usize> {
        match self {
            ViolationType::A => Some(0),
            ViolationType::L => Some(1),
            ViolationType::N => None,
        }
    }
}

/// Container family: `A` or `L`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Kind {
    A,
    L,
}

impl Kind {
    #[inline]
    pub(crate) fn idx(self) -> usize {
        match self {
            Kind::A => 0,
            Kind::L => 1,
        }
    }

    pub fn violation_type(self) -> ViolationType {
        match self {
            Kind::A => ViolationType::A,
            Kind::L => ViolationType::L,
        }
    }

    fn of(t: ViolationType) -> Option<Kind> {
        match t {
            ViolationType::A => Some(Kind::A),
            ViolationType::L => Some(Kind::L),
            ViolationType::N => None,
        }
    }
}

/// `A -> A`, `N -> N`, `L1 -> L`, `L2 -> L`.
#[inline]
pub fn type_of(s: Subtype) -> ViolationType {
    match s {
        Subtype::A => ViolationType::A,
        Subtype::N => ViolationType::N,
        Subtype::L1 | Subtype::L2 => ViolationType::L,
    }
}

#[derive(Clone, Debug)]
pub struct Registry {
    arrays: [Vec<Option<NodeId>>; 2],
    occupied: [usize; 2],
    stacks: [Vec<NodeId>; 2],
    phi_a: u64,
    phi_l: u64,
    track_loss: bool,
    mutations: u64,
}

impl Default for Registry {
    fn default() -> Self {
        Self::new(true)
    }
}

impl Registry {
    pub fn new(track_loss: bool) -> Self {
        Registry {
            arrays: [
                vec![None; INITIAL_RANK_CAPACITY],
                vec![None; INITIAL_RANK_CAPACITY],
            ],
            occupied: [0; 2],
            stacks: [Vec::new(), Vec::new()],
            phi_a: 0,
            phi_l: 0,
            track_loss,
            mutations: 0,
        }
    }

    pub fn phi_a(&self) -> u64 {
        self.phi_a
    }

    pub fn phi_l(&self) -> u64 {
        self.phi_l
    }

    pub fn phi(&self) -> u64 {
        self.phi_a + self.phi_l
    }

    pub fn track_loss(&self) -> bool {
        self.track_loss
    }

    /// Count of array writes, clears, pushes and pops so far.
    pub fn mutations(&self) -> u64 {
        self.mutations
    }

    pub fn rank_capacity(&self) -> usize {
        self.arrays[0].len()
    }

    pub fn array(&self, kind: Kind) -> &[Option<NodeId>] {
        &self.arrays[kind.idx()]
    }

    pub fn occupied(&self, kind: Kind) -> usize {
        self.occupied[kind.idx()]
    }

    /// Stack contents, bottom first.
    pub fn stack(&self, kind: Kind) -> &[NodeId] {
        &self.stacks[kind.idx()]
    }

    /// Stack pointer index `P[X]`.
    pub fn stack_top(&self, kind: Kind) -> usize {
        self.stacks[kind.idx()].len()
    }

    pub fn stack_is_empty(&self, kind: Kind) -> bool {
        self.stacks[kind.idx()].is_empty()
    }

    /// Makes both arrays addressable at `rank`, doubling as needed.
    pub fn ensure_capacity(&mut self, rank: usize) {
        let mut cap = self.arrays[0].len().max(1);
        if rank < cap {
            return;
        }
        while cap <= rank {
            cap *= 2;
        }
        for a in &mut self.arrays {
            a.resize(cap, None);
        }
    }

    /// `C_L` weight of a node's entry: its loss when `L2`, otherwise 1.
    #[inline]
    pub fn cl_weight<K>(&self, node: &crate::store::Node<K>) -> u64 {
        if node.subtype == Subtype::L2 {
            if self.track_loss {
                u64::from(node.loss)
            } else {
                2
            }
        } else {
            1
        }
    }

    #[inline]
    fn cl_contrib<K>(&self, node: &crate::store::Node<K>) -> u64 {
        if node.stacked[1] {
            self.cl_weight(node)
        } else {
            0
        }
    }

    #[inline]
    fn settle_cl(&mut self, before: u64, after: u64) {
        self.phi_l = self.phi_l + 4 * after - 4 * before;
    }

    /// Pushes `x` onto `C[kind]` unless it already has an entry there.
    pub fn stack_push<K>(&mut self, store: &mut NodeStore<K>, kind: Kind, x: NodeId) {
        let before = self.cl_contrib(store.node(x));
        let n = store.node_mut(x);
        if n.stacked[kind.idx()] {
            return;
        }
        n.stacked[kind.idx()] = true;
        self.stacks[kind.idx()].push(x);
        self.mutations += 1;
        if kind == Kind::A {
            self.phi_a += 2;
        }
        let after = self.cl_contrib(store.node(x));
        self.settle_cl(before, after);
    }

    /// Pops the top of `C[kind]`. The returned node may be stale.
    ///
    /// If the entry is the node's live registration, its location becomes
    /// `None` until the caller files it somewhere else.
    pub fn stack_pop<K>(&mut self, store: &mut NodeStore<K>, kind: Kind) -> Option<NodeId> {
        let x = self.stacks[kind.idx()].pop()?;
        self.mutations += 1;
        let before = self.cl_contrib(store.node(x));
        let n = store.node_mut(x);
        n.stacked[kind.idx()] = false;
        if type_of(n.subtype) == kind.violation_type() && n.location == Location::OnStack {
            n.location = Location::None;
        }
        if kind == Kind::A {
            self.phi_a -= 2;
        }
        let after = self.cl_contrib(store.node(x));
        self.settle_cl(before, after);
        Some(x)
    }

    /// Stores `x` at `R[kind][rank(x)]`; the slot must be empty.
    pub fn park<K>(&mut self, store: &mut NodeStore<K>, kind: Kind, x: NodeId) {
        let r = store.node(x).rank as usize;
        self.ensure_capacity(r);
        let slot = &mut self.arrays[kind.idx()][r];
        assert!(slot.is_none(), "rank slot {r} already occupied");
        *slot = Some(x);
        self.occupied[kind.idx()] += 1;
        self.mutations += 1;
        match kind {
            Kind::A => self.phi_a += 1,
            Kind::L => self.phi_l += 3,
        }
        store.node_mut(x).location = Location::InArray;
    }

    /// Reads `R[kind][rank]` without modifying it.
    pub fn slot(&self, kind: Kind, rank: usize) -> Option<NodeId> {
        self.arrays[kind.idx()].get(rank).copied().flatten()
    }

    /// Empties `R[kind][rank]`, returning the former occupant.
    pub fn take_slot<K>(
        &mut self,
        store: &mut NodeStore<K>,
        kind: Kind,
        rank: usize,
    ) -> Option<NodeId> {
        let y = self.arrays[kind.idx()].get_mut(rank)?.take()?;
        self.occupied[kind.idx()] -= 1;
        self.mutations += 1;
        match kind {
            Kind::A => self.phi_a -= 1,
            Kind::L => self.phi_l -= 3,
        }
        store.node_mut(y).location = Location::None;
        Some(y)
    }

    /// Changes the subtype of `x` to `s` and keeps containers and potentials
    /// consistent: leaves the array of the old type, gains a stack entry for
    /// the new type unless `s` is `N` or an entry already exists.
    pub fn set_violation_subtype<K>(&mut self, store: &mut NodeStore<K>, x: NodeId, s: Subtype) {
        let before = self.cl_contrib(store.node(x));
        let (old, location, rank) = {
            let n = store.node(x);
            (n.subtype, n.location, n.rank as usize)
        };
        if let Some(kind) = Kind::of(type_of(old)) {
            if location == Location::InArray {
                let taken = self.take_slot(store, kind, rank);
                debug_assert_eq!(taken, Some(x));
            }
            // Otherwise the live entry stays on C[type(old)].
        }
        let track = self.track_loss;
        let n = store.node_mut(x);
        n.subtype = s;
        if track {
            n.loss = match s {
                Subtype::N | Subtype::A => 0,
                Subtype::L1 => 1,
                Subtype::L2 => n.loss + 1,
            };
        }
        match Kind::of(type_of(s)) {
            None => n.location = Location::None,
            Some(kind) => {
                n.location = Location::OnStack;
                if !n.stacked[kind.idx()] {
                    n.stacked[kind.idx()] = true;
                    self.stacks[kind.idx()].push(x);
                    self.mutations += 1;
                    if kind == Kind::A {
                        self.phi_a += 2;
                    }
                }
            }
        }
        let after = self.cl_contrib(store.node(x));
        self.settle_cl(before, after);
    }

    /// Re-files a node whose live entry was popped but whose subtype is
    /// unchanged (it goes back on its stack).
    pub fn refile<K>(&mut self, store: &mut NodeStore<K>, x: NodeId) {
        let n = store.node(x);
        debug_assert_eq!(n.location, Location::None);
        if let Some(kind) = Kind::of(type_of(n.subtype)) {
            self.stack_push(store, kind, x);
            store.node_mut(x).location = Location::OnStack;
        }
    }

    /// Loss increment of an `L2` node (its rank dropped again).
    pub fn bump_loss<K>(&mut self, store: &mut NodeStore<K>, x: NodeId) {
        debug_assert_eq!(store.node(x).subtype, Subtype::L2);
        if !self.track_loss {
            return;
        }
        let before = self.cl_contrib(store.node(x));
        store.node_mut(x).loss += 1;
        let after = self.cl_contrib(store.node(x));
        self.settle_cl(before, after);
    }

    /// From-scratch potentials using the same weighting rules.
    pub fn recompute_phi<K>(&self, store: &NodeStore<K>) -> (u64, u64) {
        let phi_a = self.occupied_scan(Kind::A) + 2 * self.stacks[0].len() as u64;
        let weighted: u64 = self.stacks[1]
            .iter()
            .map(|&x| self.cl_weight(store.node(x)))
            .sum();
        let phi_l = 3 * self.occupied_scan(Kind::L) + 4 * weighted;
        (phi_a, phi_l)
    }

    fn occupied_scan(&self, kind: Kind) -> u64 {
        self.arrays[kind.idx()]
            .iter()
            .filter(|s| s.is_some())
            .count() as u64
    }
}
