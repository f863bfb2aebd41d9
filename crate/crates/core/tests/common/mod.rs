//! Helpers shared by the integration tests.

#![allow(dead_code)]

use dkheap::harness::TraceOp;
use dkheap::{Handle, Heap, HeapConfig};

/// Replays a valid trace without an oracle and returns the final heap.
pub fn replay(trace: &[TraceOp], config: HeapConfig) -> Heap<i64> {
    let mut heap = Heap::with_config(config);
    let mut handles: Vec<Handle> = Vec::new();
    for op in trace {
        match *op {
            TraceOp::Insert(k) => handles.push(heap.insert(k)),
            TraceOp::Decrease { reference, key } => {
                heap.decrease_key(handles[reference], key).unwrap();
            }
            TraceOp::DeleteMin => {
                heap.delete_min();
            }
            TraceOp::FindMin => {
                heap.find_min();
            }
        }
    }
    heap
}

/// Explicit binomial tree of rank `r` as (parent index, subtree size) per
/// node, root first.
fn binomial_nodes(r: u32) -> Vec<(Option<usize>, u64, u32)> {
    fn build(r: u32, parent: Option<usize>, depth: u32, out: &mut Vec<(Option<usize>, u64, u32)>) {
        let me = out.len();
        out.push((parent, 1u64 << r, depth));
        for c in 0..r {
            build(c, Some(me), depth + 1, out);
        }
    }
    let mut out = Vec::new();
    build(r, None, 0, &mut out);
    out
}

/// Subtree-size list of the grandchildren of the root of a rank-`r`
/// binomial tree, found by walking an explicit tree.
pub fn grandchild_sizes(r: u32) -> Vec<u64> {
    binomial_nodes(r)
        .into_iter()
        .filter(|&(_, _, depth)| depth == 2)
        .map(|(_, size, _)| size)
        .collect()
}

/// Smallest remaining size after cutting `cuts` grandchild subtrees,
/// trying every subset of grandchildren.
pub fn min_size_over_grandchild_subsets(r: u32, cuts: u64) -> u64 {
    let sizes = grandchild_sizes(r);
    let k = (cuts as usize).min(sizes.len());
    let mut best = u64::MAX;
    for mask in 0u64..(1u64 << sizes.len()) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let removed: u64 = (0..sizes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| sizes[i])
            .sum();
        best = best.min((1u64 << r) - removed);
    }
    best
}

/// Smallest remaining size after cutting up to `cuts` subtrees rooted
/// anywhere below the root's children, trying every such cut set.
pub fn min_size_over_all_deep_cut_sets(r: u32, cuts: u64) -> u64 {
    let nodes = binomial_nodes(r);
    assert!(nodes.len() <= 64);
    // Bitmask of each node's subtree.
    let mut masks = vec![0u64; nodes.len()];
    for i in (0..nodes.len()).rev() {
        masks[i] |= 1 << i;
        if let Some(p) = nodes[i].0 {
            let m = masks[i];
            masks[p] |= m;
        }
    }
    let deep: Vec<u64> = (0..nodes.len())
        .filter(|&i| nodes[i].2 >= 2)
        .map(|i| masks[i])
        .collect();
    let mut best = 1u64 << r;
    let mut chosen = Vec::new();
    search(&deep, 0, cuts as usize, 0, &mut chosen, &mut best, r);
    best
}

fn search(
    deep: &[u64],
    from: usize,
    left: usize,
    removed: u64,
    chosen: &mut Vec<usize>,
    best: &mut u64,
    r: u32,
) {
    let size = (1u64 << r) - u64::from(removed.count_ones());
    *best = (*best).min(size);
    if left == 0 {
        return;
    }
    for i in from..deep.len() {
        chosen.push(i);
        search(deep, i + 1, left - 1, removed | deep[i], chosen, best, r);
        chosen.pop();
    }
}
