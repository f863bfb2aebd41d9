//! Single-source shortest paths as a decrease-key workload.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::heap::{Heap, HeapConfig};
use crate::stats::StatsReport;
use crate::store::Handle;

/// Undirected graph with nonnegative integer weights.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    adj: Vec<Vec<(usize, u64)>>,
    edges: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: 0,
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: u64) {
        self.adj[u].push((v, w));
        self.adj[v].push((u, w));
        self.edges += 1;
    }

    pub fn vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, u64)] {
        &self.adj[u]
    }

    /// Connected graph: a random spanning tree plus random extra edges,
    /// `m` edges in total (at least `n - 1`).
    pub fn random_connected(seed: u64, n: usize, m: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Graph::new(n);
        for v in 1..n {
            let u = rng.gen_range(0..v);
            g.add_edge(u, v, rng.gen_range(1..=1000));
        }
        while g.edges < m && n > 1 {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                g.add_edge(u, v, rng.gen_range(1..=1000));
            }
        }
        g
    }

    /// Vertex 0 joined to vertex `i + 1` by an edge of weight `weights[i]`.
    pub fn star(weights: &[u64]) -> Self {
        let mut g = Graph::new(weights.len() + 1);
        for (i, &w) in weights.iter().enumerate() {
            g.add_edge(0, i + 1, w);
        }
        g
    }
}

/// Dijkstra driven by the heap; `None` marks unreachable vertices.
pub fn dijkstra_heap(
    g: &Graph,
    source: usize,
    config: HeapConfig,
) -> (Vec<Option<u64>>, StatsReport) {
    let n = g.vertices();
    let mut dist: Vec<Option<u64>> = vec![None; n];
    let mut handle: Vec<Option<Handle>> = vec![None; n];
    let mut done = vec![false; n];
    // Live handle slot index -> vertex.
    let mut vertex_at: Vec<usize> = Vec::new();
    let mut heap: Heap<u64> = Heap::with_config(config);

    let enqueue = |heap: &mut Heap<u64>, vertex_at: &mut Vec<usize>, v: usize, d: u64| {
        let h = heap.insert(d);
        let i = h.index() as usize;
        if vertex_at.len() <= i {
            vertex_at.resize(i + 1, usize::MAX);
        }
        vertex_at[i] = v;
        h
    };

    dist[source] = Some(0);
    handle[source] = Some(enqueue(&mut heap, &mut vertex_at, source, 0));
    while let Some((d, h)) = heap.delete_min() {
        let u = vertex_at[h.index() as usize];
        done[u] = true;
        for &(v, w) in g.neighbors(u) {
            if done[v] {
                continue;
            }
            let nd = d + w;
            match dist[v] {
                None => {
                    dist[v] = Some(nd);
                    handle[v] = Some(enqueue(&mut heap, &mut vertex_at, v, nd));
                }
                Some(old) if nd < old => {
                    dist[v] = Some(nd);
                    heap.decrease_key(handle[v].expect("queued vertex"), nd)
                        .expect("strictly smaller key for a live handle");
                }
                Some(_) => {}
            }
        }
    }
    (dist, heap.stats())
}

/// O(n^2) Dijkstra with a linear scan for the closest unsettled vertex.
pub fn dijkstra_quadratic(g: &Graph, source: usize) -> Vec<Option<u64>> {
    let n = g.vertices();
    let mut dist: Vec<Option<u64>> = vec![None; n];
    let mut done = vec![false; n];
    dist[source] = Some(0);
    loop {
        let mut best: Option<(u64, usize)> = None;
        for v in 0..n {
            if let (false, Some(d)) = (done[v], dist[v]) {
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, v));
                }
            }
        }
        let Some((d, u)) = best else { break };
        done[u] = true;
        for &(v, w) in g.neighbors(u) {
            let nd = d + w;
            if dist[v].is_none_or(|old| nd < old) {
                dist[v] = Some(nd);
            }
        }
    }
    dist
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub vertices: usize,
    pub edges: usize,
    pub stats: StatsReport,
}

/// Runs both Dijkstra variants from vertex 0 and compares all distances.
pub fn dijkstra_bench(
    graph_seed: u64,
    n_vertices: usize,
    n_edges: usize,
    config: HeapConfig,
) -> Result<BenchReport, HarnessError> {
    let g = Graph::random_connected(graph_seed, n_vertices, n_edges);
    compare_on(&g, config)
}

pub fn compare_on(g: &Graph, config: HeapConfig) -> Result<BenchReport, HarnessError> {
    if g.vertices() == 0 {
        return Ok(BenchReport {
            vertices: 0,
            edges: 0,
            stats: StatsReport::default(),
        });
    }
    let (got, stats) = dijkstra_heap(g, 0, config);
    let want = dijkstra_quadratic(g, 0);
    if let Some(v) = (0..g.vertices()).find(|&v| got[v] != want[v]) {
        return Err(HarnessError::Distance {
            vertex: v,
            expected: want[v],
            actual: got[v],
        });
    }
    Ok(BenchReport {
        vertices: g.vertices(),
        edges: g.edges(),
        stats,
    })
}
