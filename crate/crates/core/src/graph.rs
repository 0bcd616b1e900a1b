//! Threshold (compatibility) graphs, their complements, FPF ordering and
//! greedy independent sets.

use std::ops::Deref;

use crate::bitset::BitSet;
use crate::model::DissimilarityMatrix;

/// Simple undirected graph stored both as bitset rows and sorted neighbor lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BitSet>,
    neighbors: Vec<Vec<usize>>,
}

/// Edge {i, j} iff d(i, j) <= T: adjacent vertices are compatible.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdGraph {
    graph: Graph,
    threshold: f64,
}

impl ThresholdGraph {
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

impl Deref for ThresholdGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}

/// Edge {i, j} iff the pair is incompatible in the source threshold graph.
pub type ComplementGraph = Graph;

impl Graph {
    fn from_adj(adj: Vec<BitSet>) -> Self {
        let neighbors = adj.iter().map(BitSet::to_vec).collect();
        Graph { adj, neighbors }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![BitSet::new(n); n];
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range");
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        Graph::from_adj(adj)
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
    }

    pub fn edgeless(n: usize) -> Self {
        Graph::from_edges(n, [])
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    #[inline]
    pub fn adjacency(&self, v: usize) -> &BitSet {
        &self.adj[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }
}

pub fn build_threshold_graph(d: &DissimilarityMatrix, threshold: f64) -> ThresholdGraph {
    let n = d.len();
    let mut adj = vec![BitSet::new(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if d.get(i, j) <= threshold {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }
    ThresholdGraph {
        graph: Graph::from_adj(adj),
        threshold,
    }
}

pub fn complement(g: &Graph) -> ComplementGraph {
    let n = g.len();
    let adj = (0..n)
        .map(|v| {
            let mut row = BitSet::full(n);
            row.difference_with(g.adjacency(v));
            row.remove(v);
            row
        })
        .collect();
    Graph::from_adj(adj)
}

/// Furthest-Point-First ordering.
///
/// The first element maximizes the sum of its dissimilarities; each next one
/// maximizes its distance to the already placed set (min over placed points).
/// Ties go to the lowest index.
pub fn fpf_order(d: &DissimilarityMatrix) -> Vec<usize> {
    let n = d.len();
    if n == 0 {
        return Vec::new();
    }
    let mut order = Vec::with_capacity(n);
    let mut first = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        let s: f64 = d.row(i).iter().sum();
        if s > best {
            best = s;
            first = i;
        }
    }
    let mut placed = vec![false; n];
    let mut to_set: Vec<f64> = d.row(first).to_vec();
    placed[first] = true;
    order.push(first);
    while order.len() < n {
        let mut next = usize::MAX;
        let mut far = f64::NEG_INFINITY;
        for i in (0..n).filter(|&i| !placed[i]) {
            if to_set[i] > far {
                far = to_set[i];
                next = i;
            }
        }
        placed[next] = true;
        order.push(next);
        for (i, v) in to_set.iter_mut().enumerate() {
            *v = v.min(d.get(next, i));
        }
    }
    order
}

/// Scans `order` and keeps each vertex non-adjacent to every vertex kept so far.
/// Returned in scan order. Its size is a lower bound on the number of
/// diameter clusters at the graph's threshold.
pub fn greedy_independent_set(g: &Graph, order: &[usize]) -> Vec<usize> {
    let mut blocked = BitSet::new(g.len());
    let mut out = Vec::new();
    for &v in order {
        if !blocked.contains(v) {
            out.push(v);
            blocked.insert(v);
            blocked.union_with(g.adjacency(v));
        }
    }
    out
}

/// Greedy clique over `order`: each vertex is kept if adjacent to all kept ones.
pub(crate) fn greedy_clique(g: &Graph, order: &[usize]) -> Vec<usize> {
    let mut cand = BitSet::full(g.len());
    let mut out = Vec::new();
    for &v in order {
        if cand.contains(v) {
            out.push(v);
            cand.intersect_with(g.adjacency(v));
        }
    }
    out
}
