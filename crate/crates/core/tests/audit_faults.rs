use dkheap::audit::{self, Invariant};
use dkheap::heap::Fault;
use dkheap::{AuditLevel, Handle, Heap, HeapConfig, Strategy, Subtype};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_heap(seed: u64, n: usize) -> (Heap<i64>, Vec<Handle>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut heap = Heap::with_config(HeapConfig::default().audit(AuditLevel::Boundary));
    let handles = (0..n)
        .map(|_| heap.insert(rng.gen_range(0..1_000_000)))
        .collect();
    (heap, handles)
}

#[test]
fn random_inserts_audit_clean() {
    for s in Strategy::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut heap = Heap::with_strategy(s);
        for _ in 0..100 {
            heap.insert(rng.gen_range(0..1000i64));
        }
        let report = audit::check_structure(&heap);
        assert!(report.is_clean(), "{s}: {:?}", report.violations_found);
        assert_eq!(
            report.phi_recomputed,
            (heap.registry().phi_a(), heap.registry().phi_l())
        );
    }
}

#[test]
fn recompute_phi_examples() {
    let heap: Heap<i64> = Heap::new();
    assert_eq!(audit::recompute_phi(&heap), (0, 0));
    let mut heap = Heap::new();
    heap.insert(1);
    // The lone root is parked in R_A with both stacks empty.
    assert_eq!(audit::recompute_phi(&heap), (1, 0));
}

#[test]
fn bumped_rank_gives_one_rank_finding() {
    let (mut heap, handles) = random_heap(1, 200);
    let victim = *handles
        .iter()
        .find(|&&h| heap.subtype(h) == Some(Subtype::N))
        .unwrap();
    heap.inject_fault(Fault::BumpRank(victim)).unwrap();
    let report = audit::check_structure(&heap);
    assert_eq!(
        report.count(Invariant::RankCount),
        1,
        "{:?}",
        report.violations_found
    );
    assert_eq!(
        report.violations_found.len(),
        1,
        "{:?}",
        report.violations_found
    );
    assert_eq!(report.violations_found[0].node, Some(victim));
}

#[test]
fn swapped_keys_give_one_heap_order_finding() {
    let (mut heap, _) = random_heap(2, 200);
    let root = heap.find_min().unwrap();
    let min_child = heap
        .children(root)
        .into_iter()
        .min_by_key(|&c| *heap.key(c).unwrap())
        .unwrap();
    heap.inject_fault(Fault::SwapKeyWithParent(min_child))
        .unwrap();
    let report = audit::check_structure(&heap);
    assert_eq!(
        report.count(Invariant::HeapOrder),
        1,
        "{:?}",
        report.violations_found
    );
    assert_eq!(
        report.violations_found.len(),
        1,
        "{:?}",
        report.violations_found
    );
}

#[test]
fn broken_sibling_link_is_detected() {
    let (mut heap, _) = random_heap(3, 200);
    let root = heap.find_min().unwrap();
    let kids = heap.children(root);
    heap.inject_fault(Fault::BreakLeftLink(kids[1])).unwrap();
    let report = audit::check_structure(&heap);
    assert!(
        report.count(Invariant::SiblingShape) >= 1,
        "{:?}",
        report.violations_found
    );
}

#[test]
fn wrong_subtype_is_detected() {
    let (mut heap, handles) = random_heap(4, 200);
    let victim = *handles
        .iter()
        .find(|&&h| heap.subtype(h) == Some(Subtype::N))
        .unwrap();
    heap.inject_fault(Fault::SetSubtype(victim, Subtype::L2))
        .unwrap();
    let report = audit::check_structure(&heap);
    assert!(!report.is_clean());
    assert!(
        report.count(Invariant::SubtypeLoss) >= 1,
        "{:?}",
        report.violations_found
    );
}

#[test]
fn boundary_audit_reports_fault_on_next_operation() {
    let (mut heap, handles) = random_heap(5, 50);
    assert!(heap.findings().is_empty());
    let victim = *handles
        .iter()
        .find(|&&h| heap.subtype(h) == Some(Subtype::N))
        .unwrap();
    heap.inject_fault(Fault::BumpRank(victim)).unwrap();
    heap.find_min();
    assert!(heap
        .findings()
        .iter()
        .any(|(_, f)| f.invariant == Invariant::RankCount));
}

#[test]
fn rank_bound_examples() {
    let mut heap = Heap::new();
    let only = heap.insert(0i64);
    assert!(audit::check_rank_bound(&heap));
    assert_eq!(heap.rank(only), Some(0));

    let (mut heap, handles) = random_heap(6, 1024);
    assert!(audit::check_rank_bound(&heap));
    assert!(handles.iter().all(|&h| heap.rank(h).unwrap() < 16));
    let root = heap.find_min().unwrap();
    for _ in 0..50 - heap.rank(root).unwrap() {
        heap.inject_fault(Fault::BumpRank(root)).unwrap();
    }
    assert_eq!(heap.rank(root), Some(50));
    assert!(!audit::check_rank_bound(&heap));
    assert!(audit::check_structure(&heap).count(Invariant::RankBound) >= 1);
}
