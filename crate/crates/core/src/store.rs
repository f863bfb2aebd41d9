//! Generational node slab and the sibling-list primitive.
//!
//! Every heap element lives in a [`NodeStore`] slot. Internally the heap links
//! nodes by raw slot index ([`NodeId`]); callers hold [`Handle`]s which also
//! carry the slot generation, so a handle to an extracted element is rejected
//! instead of silently pointing at whatever reused the slot.
//!
//! Sibling lists keep `left` links cyclic (the leftmost member's `left` is the
//! rightmost member) and `right` links acyclic (the rightmost member has no
//! `right`). Both ends are therefore reachable from the head in O(1).

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Raw slot index used for intra-heap links.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    #[inline]
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

/// Stable reference to a heap element returned by `insert`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Handle {
    index: u32,
    generation: u32,
}

impl Handle {
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn generation(self) -> u32 {
        self.generation
    }

    pub(crate) fn id(self) -> NodeId {
        NodeId(self.index)
    }
}

impl fmt::Display for Handle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}v{}", self.index, self.generation)
    }
}

/// Violation subtype of a node.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Subtype {
    /// Nonrank root (tree root or child attached by a nonrank edge).
    A,
    /// Rank child with loss exactly one.
    L1,
    /// Rank child with loss at least two.
    L2,
    /// Rank child without loss.
    N,
}

/// Where a violation node is currently registered for its own type.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Location {
    None,
    InArray,
    OnStack,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum StoreError {
    #[error("handle {0} is not live")]
    DeadHandle(Handle),
    #[error("node {0:?} is already a member of a sibling list")]
    AlreadyLinked(NodeId),
    #[error("node {0:?} is not a member of a sibling list")]
    NotLinked(NodeId),
    #[error("node store exhausted its index space")]
    Exhausted,
}

/// One heap element together with its tree and registry bookkeeping.
#[derive(Clone, Debug)]
pub struct Node<K> {
    pub(crate) key: K,
    pub(crate) seq: u64,
    pub(crate) rank: u32,
    pub(crate) subtype: Subtype,
    /// Instrumentation only; the algorithm branches on `subtype`.
    pub(crate) loss: u32,
    pub(crate) parent: Option<NodeId>,
    pub(crate) left: NodeId,
    pub(crate) right: Option<NodeId>,
    pub(crate) child_head: Option<NodeId>,
    pub(crate) location: Location,
    /// Physical presence of an entry on `C_A` / `C_L`, possibly stale.
    pub(crate) stacked: [bool; 2],
    pub(crate) linked: bool,
}

impl<K: Ord> Node<K> {
    /// Lexicographic order on `(key, seq)`; never `Equal` for distinct nodes.
    #[inline]
    pub fn cmp_order(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key).then(self.seq.cmp(&other.seq))
    }
}

impl<K> Node<K> {
    pub fn key(&self) -> &K {
        &self.key
    }

    pub fn seq(&self) -> u64 {
        self.seq
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn subtype(&self) -> Subtype {
        self.subtype
    }

    pub fn loss(&self) -> u32 {
        self.loss
    }

    pub fn location(&self) -> Location {
        self.location
    }
}

#[derive(Clone, Debug)]
enum Slot<K> {
    Occupied(Node<K>),
    Vacant { next_free: Option<u32> },
}

/// Generational slab of [`Node`]s.
#[derive(Clone, Debug)]
pub struct NodeStore<K> {
    slots: Vec<Slot<K>>,
    generations: Vec<u32>,
    free_head: Option<u32>,
    next_seq: u64,
    live: usize,
}

impl<K> Default for NodeStore<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K> NodeStore<K> {
    pub fn new() -> Self {
        NodeStore {
            slots: Vec::new(),
            generations: Vec::new(),
            free_head: None,
            next_seq: 0,
            live: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    /// Number of slots ever created (live or vacant).
    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    /// Creates a rank-0 `N` node forming a singleton sibling shape.
    pub fn allocate(&mut self, key: K) -> Result<Handle, StoreError> {
        let seq = self.next_seq;
        let index = match self.free_head {
            Some(i) => {
                self.free_head = match self.slots[i as usize] {
                    Slot::Vacant { next_free } => next_free,
                    Slot::Occupied(_) => unreachable!("free list points at occupied slot"),
                };
                i
            }
            None => {
                let i = u32::try_from(self.slots.len()).map_err(|_| StoreError::Exhausted)?;
                if i == u32::MAX {
                    return Err(StoreError::Exhausted);
                }
                self.slots.push(Slot::Vacant { next_free: None });
                self.generations.push(0);
                i
            }
        };
        let id = NodeId(index);
        self.slots[index as usize] = Slot::Occupied(Node {
            key,
            seq,
            rank: 0,
            subtype: Subtype::N,
            loss: 0,
            parent: None,
            left: id,
            right: None,
            child_head: None,
            location: Location::None,
            stacked: [false; 2],
            linked: false,
        });
        self.next_seq += 1;
        self.live += 1;
        Ok(Handle {
            index,
            generation: self.generations[index as usize],
        })
    }

    /// Releases a node and bumps its slot generation, returning the key.
    pub fn free(&mut self, id: NodeId) -> K {
        let i = id.index();
        let old = std::mem::replace(
            &mut self.slots[i],
            Slot::Vacant {
                next_free: self.free_head,
            },
        );
        let Slot::Occupied(node) = old else {
            panic!("double free of node {id:?}");
        };
        self.generations[i] = self.generations[i].wrapping_add(1);
        self.free_head = Some(id.0);
        self.live -= 1;
        node.key
    }

    pub fn is_live(&self, h: Handle) -> bool {
        let i = h.index as usize;
        i < self.slots.len()
            && self.generations[i] == h.generation
            && matches!(self.slots[i], Slot::Occupied(_))
    }

    pub fn resolve(&self, h: Handle) -> Result<NodeId, StoreError> {
        if self.is_live(h) {
            Ok(h.id())
        } else {
            Err(StoreError::DeadHandle(h))
        }
    }

    pub fn handle_of(&self, id: NodeId) -> Handle {
        Handle {
            index: id.0,
            generation: self.generations[id.index()],
        }
    }

    pub fn get(&self, h: Handle) -> Option<&Node<K>> {
        if self.is_live(h) {
            Some(self.node(h.id()))
        } else {
            None
        }
    }

    #[inline]
    pub(crate) fn node(&self, id: NodeId) -> &Node<K> {
        match &self.slots[id.index()] {
            Slot::Occupied(n) => n,
            Slot::Vacant { .. } => panic!("dangling node id {id:?}"),
        }
    }

    #[inline]
    pub(crate) fn node_mut(&mut self, id: NodeId) -> &mut Node<K> {
        match &mut self.slots[id.index()] {
            Slot::Occupied(n) => n,
            Slot::Vacant { .. } => panic!("dangling node id {id:?}"),
        }
    }

    /// Node at `id` if that slot is occupied.
    pub(crate) fn try_node(&self, id: NodeId) -> Option<&Node<K>> {
        match self.slots.get(id.index())? {
            Slot::Occupied(n) => Some(n),
            Slot::Vacant { .. } => None,
        }
    }

    pub(crate) fn swap_keys(&mut self, a: NodeId, b: NodeId) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (left, right) = self.slots.split_at_mut(hi.index());
        if let (Slot::Occupied(x), Slot::Occupied(y)) = (&mut left[lo.index()], &mut right[0]) {
            std::mem::swap(&mut x.key, &mut y.key);
        }
    }

    /// Live nodes in slot order.
    pub(crate) fn iter(&self) -> impl Iterator<Item = (NodeId, &Node<K>)> {
        self.slots.iter().enumerate().filter_map(|(i, s)| match s {
            Slot::Occupied(n) => Some((NodeId(i as u32), n)),
            Slot::Vacant { .. } => None,
        })
    }

    /// Makes `x` the leftmost member of the list whose head is `*head`.
    pub fn list_insert_leftmost(
        &mut self,
        head: &mut Option<NodeId>,
        x: NodeId,
    ) -> Result<(), StoreError> {
        if self.node(x).linked {
            return Err(StoreError::AlreadyLinked(x));
        }
        match *head {
            None => {
                let n = self.node_mut(x);
                n.left = x;
                n.right = None;
            }
            Some(old) => {
                let last = self.node(old).left;
                let n = self.node_mut(x);
                n.left = last;
                n.right = Some(old);
                self.node_mut(old).left = x;
            }
        }
        self.node_mut(x).linked = true;
        *head = Some(x);
        Ok(())
    }

    /// Unlinks `x` from the list whose head is `*head`; `x` becomes a singleton.
    pub fn list_remove(&mut self, head: &mut Option<NodeId>, x: NodeId) -> Result<(), StoreError> {
        if !self.node(x).linked {
            return Err(StoreError::NotLinked(x));
        }
        let (left, right) = {
            let n = self.node(x);
            (n.left, n.right)
        };
        if *head == Some(x) {
            *head = right;
            if let Some(r) = right {
                // `left` of the old head is the rightmost member.
                self.node_mut(r).left = left;
            }
        } else {
            self.node_mut(left).right = right;
            match right {
                Some(r) => self.node_mut(r).left = left,
                None => {
                    // x was rightmost; the head's cyclic link moves to x's left.
                    let h = head.ok_or(StoreError::NotLinked(x))?;
                    self.node_mut(h).left = left;
                }
            }
        }
        let n = self.node_mut(x);
        n.left = x;
        n.right = None;
        n.linked = false;
        Ok(())
    }

    /// Members of the list starting at `head`, following `right` links.
    pub fn list_members(&self, head: Option<NodeId>) -> ListIter<'_, K> {
        ListIter {
            store: self,
            next: head,
        }
    }
}

pub struct ListIter<'a, K> {
    store: &'a NodeStore<K>,
    next: Option<NodeId>,
}

impl<K> Iterator for ListIter<'_, K> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let cur = self.next?;
        self.next = self.store.node(cur).right;
        Some(cur)
    }
}
