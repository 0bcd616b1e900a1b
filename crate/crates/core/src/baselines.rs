//! Comparison algorithms: complete-link agglomerative clustering with a
//! distance cutoff, DSATUR colouring (heuristic and exact) of the
//! incompatibility graph, and CLUSTERGRAPH.
//!
//! A proper colouring of the complement of the threshold graph is a
//! partition into diameter-homogeneous clusters, one per colour.

use std::time::{Duration, Instant};

use crate::assign::relabel_compact;
use crate::error::{Error, Result};
use crate::graph::{build_threshold_graph, complement, fpf_order, greedy_clique, ComplementGraph, Graph};
use crate::model::{diameter, DissimilarityMatrix, Partition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
    k: usize,
}

impl Coloring {
    /// Wraps a colour vector, renumbering colours compactly.
    pub fn new(colors: &[usize]) -> Self {
        let colors = relabel_compact(colors);
        let k = colors.iter().max().map_or(0, |&m| m + 1);
        Coloring { colors, k }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        g.edges().all(|(a, b)| self.colors[a] != self.colors[b])
    }
}

#[derive(Clone, Debug)]
pub struct ColoringSolution {
    pub coloring: Coloring,
    /// False when the time limit interrupted the search.
    pub proven: bool,
    pub nodes: u64,
}

/// One agglomeration step; clusters are named by their lowest member.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dendrogram {
    pub merges: Vec<Merge>,
}

/// Complete-link agglomeration, stopping once the closest pair of clusters
/// is farther apart than `cutoff` (or never, with `f64::INFINITY`).
///
/// Ties go to the lexicographically smallest pair of cluster names.
pub fn complete_link_dendrogram(d: &DissimilarityMatrix, cutoff: f64) -> Dendrogram {
    let n = d.len();
    // Lance-Williams update for complete link: d(a ∪ b, x) = max(d(a, x), d(b, x))
    let mut dist: Vec<f64> = (0..n).flat_map(|i| d.row(i).to_vec()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut merges = Vec::new();
    while active.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for (x, &a) in active.iter().enumerate() {
            for &b in &active[x + 1..] {
                let v = dist[a * n + b];
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, a, b));
                }
            }
        }
        let (v, a, b) = best.expect("two active clusters");
        if v > cutoff {
            break;
        }
        for &x in &active {
            let m = dist[a * n + x].max(dist[b * n + x]);
            dist[a * n + x] = m;
            dist[x * n + a] = m;
        }
        dist[a * n + a] = 0.0;
        active.retain(|&x| x != b);
        merges.push(Merge { a, b, distance: v });
    }
    Dendrogram { merges }
}

/// Flat clustering from complete-link merges at distance `<= threshold`.
/// Diameter-homogeneous by construction; the cluster count is not minimized.
pub fn hac_complete_link(d: &DissimilarityMatrix, threshold: f64) -> Partition {
    let dendro = complete_link_dendrogram(d, threshold);
    let mut parent: Vec<usize> = (0..d.len()).collect();
    for m in &dendro.merges {
        parent[m.b] = m.a;
    }
    let root = |mut i: usize| {
        while parent[i] != i {
            i = parent[i];
        }
        i
    };
    let raw: Vec<usize> = (0..d.len()).map(root).collect();
    Partition::new(relabel_compact(&raw), None).expect("compact labels")
}

/// Vertex with the highest saturation, then highest degree, then lowest index.
fn pick_vertex(g: &Graph, colors: &[usize], sat: &[usize]) -> Option<usize> {
    (0..g.len())
        .filter(|&v| colors[v] == UNCOLORED)
        .max_by_key(|&v| (sat[v], g.degree(v), std::cmp::Reverse(v)))
}

const UNCOLORED: usize = usize::MAX;

/// Greedy DSATUR colouring with the smallest feasible colour.
pub fn dsatur_heuristic(g: &Graph) -> Coloring {
    let n = g.len();
    let mut st = ColorState::new(n);
    while let Some(v) = pick_vertex(g, &st.colors, &st.sat) {
        let c = (0..).find(|&c| st.count(v, c) == 0).expect("some colour is free");
        st.assign(g, v, c);
    }
    Coloring::new(&st.colors)
}

/// Per-vertex counts of neighbours holding each colour.
struct ColorState {
    n: usize,
    colors: Vec<usize>,
    sat: Vec<usize>,
    counts: Vec<u32>,
}

impl ColorState {
    fn new(n: usize) -> Self {
        ColorState {
            n,
            colors: vec![UNCOLORED; n],
            sat: vec![0; n],
            counts: vec![0; n * n.max(1)],
        }
    }

    #[inline]
    fn count(&self, v: usize, c: usize) -> u32 {
        if c >= self.n {
            0
        } else {
            self.counts[v * self.n + c]
        }
    }

    fn assign(&mut self, g: &Graph, v: usize, c: usize) {
        self.colors[v] = c;
        for &u in g.neighbors(v) {
            let slot = &mut self.counts[u * self.n + c];
            if *slot == 0 {
                self.sat[u] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, g: &Graph, v: usize) {
        let c = self.colors[v];
        self.colors[v] = UNCOLORED;
        for &u in g.neighbors(v) {
            let slot = &mut self.counts[u * self.n + c];
            *slot -= 1;
            if *slot == 0 {
                self.sat[u] -= 1;
            }
        }
    }
}

struct ColorSearch<'a> {
    g: &'a Graph,
    st: ColorState,
    /// colourings must use fewer than this many colours to be recorded
    limit: usize,
    /// stop once a colouring with at most this many colours is recorded
    target: usize,
    best: Option<Vec<usize>>,
    deadline: Option<Instant>,
    timed_out: bool,
    nodes: u64,
}

impl ColorSearch<'_> {
    fn done(&self) -> bool {
        self.timed_out || self.limit <= self.target
    }

    fn dfs(&mut self, colored: usize, used: usize) {
        self.nodes += 1;
        if self.nodes % 1024 == 1 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.timed_out = true;
        }
        if self.done() {
            return;
        }
        if colored == self.g.len() {
            self.best = Some(self.st.colors.clone());
            self.limit = used;
            return;
        }
        let v = pick_vertex(self.g, &self.st.colors, &self.st.sat).expect("uncoloured vertex");
        for c in 0..used {
            if self.st.count(v, c) == 0 {
                self.st.assign(self.g, v, c);
                self.dfs(colored + 1, used);
                self.st.unassign(self.g, v);
                if self.done() {
                    return;
                }
            }
        }
        if used + 1 < self.limit {
            self.st.assign(self.g, v, used);
            self.dfs(colored + 1, used + 1);
            self.st.unassign(self.g, v);
        }
    }
}

/// Largest of several greedy cliques: one over `order`, and one seeded at
/// each vertex followed by decreasing degree.
fn clique_lower_bound(g: &Graph, order: Option<&[usize]>) -> Vec<usize> {
    let n = g.len();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut best = order.map(|o| greedy_clique(g, o)).unwrap_or_default();
    let mut seeded = Vec::with_capacity(n);
    for &start in &by_degree {
        seeded.clear();
        seeded.push(start);
        seeded.extend(by_degree.iter().copied().filter(|&v| v != start));
        let c = greedy_clique(g, &seeded);
        if c.len() > best.len() {
            best = c;
        }
    }
    best
}

/// Searches for a colouring with fewer than `limit` colours, stopping early
/// at `target`. Returns the best colouring found and whether the search ran
/// to completion.
fn color_search(
    g: &Graph,
    clique: &[usize],
    limit: usize,
    target: usize,
    time_limit: Duration,
) -> (Option<Vec<usize>>, bool, u64) {
    let n = g.len();
    let mut s = ColorSearch {
        g,
        st: ColorState::new(n),
        limit,
        target,
        best: None,
        deadline: Instant::now().checked_add(time_limit),
        timed_out: time_limit.is_zero(),
        nodes: 0,
    };
    if clique.len() >= limit {
        return (None, true, 0);
    }
    // clique vertices get distinct colours up front (symmetry breaking)
    for (c, &v) in clique.iter().enumerate() {
        s.st.assign(g, v, c);
    }
    if !s.timed_out {
        s.dfs(clique.len(), clique.len());
    }
    (s.best, !s.timed_out, s.nodes)
}

/// Minimum colouring by DSATUR branch-and-bound, bounded below by a greedy
/// clique. Returns the incumbent flagged unproven if the time limit hits.
pub fn exact_coloring(g: &ComplementGraph, time_limit: Duration) -> ColoringSolution {
    exact_coloring_with_order(g, None, time_limit)
}

/// As [`exact_coloring`], also trying a greedy clique over `order` (for
/// example an FPF order of the underlying elements).
pub fn exact_coloring_with_order(
    g: &ComplementGraph,
    order: Option<&[usize]>,
    time_limit: Duration,
) -> ColoringSolution {
    let heuristic = dsatur_heuristic(g);
    let clique = clique_lower_bound(g, order);
    if clique.len() >= heuristic.k() {
        return ColoringSolution {
            coloring: heuristic,
            proven: true,
            nodes: 0,
        };
    }
    let (found, complete, nodes) = color_search(g, &clique, heuristic.k(), clique.len(), time_limit);
    ColoringSolution {
        coloring: found.map(|c| Coloring::new(&c)).unwrap_or(heuristic),
        proven: complete,
        nodes,
    }
}

/// Outcome of asking whether `g` admits a colouring with at most `k` colours.
enum Colorable {
    Yes(Coloring),
    No,
    Unknown,
}

fn colorable(g: &Graph, k: usize, time_limit: Duration) -> Colorable {
    let heuristic = dsatur_heuristic(g);
    if heuristic.k() <= k {
        return Colorable::Yes(heuristic);
    }
    let clique = clique_lower_bound(g, None);
    if clique.len() > k {
        return Colorable::No;
    }
    match color_search(g, &clique, k + 1, k, time_limit) {
        (Some(c), _, _) => Colorable::Yes(Coloring::new(&c)),
        (None, true, _) => Colorable::No,
        (None, false, _) => Colorable::Unknown,
    }
}

/// Labels are the colours.
pub fn coloring_to_partition(col: &Coloring) -> Partition {
    Partition::new(col.colors().to_vec(), None).expect("colourings are compact")
}

#[derive(Clone, Debug)]
pub struct ClusterGraphResult {
    pub partition: Partition,
    pub achieved_diameter: f64,
    /// Threshold at which the final colouring was computed.
    pub threshold: f64,
    pub proven: bool,
}

/// Minimum number of clusters at `d_max`, then the smallest realized
/// dissimilarity threshold at which that many clusters still suffice.
pub fn clustergraph(d: &DissimilarityMatrix, d_max: f64, time_limit: Duration) -> Result<ClusterGraphResult> {
    if d_max.is_nan() || d_max < 0.0 {
        return Err(Error::Config(format!("threshold must be nonnegative, got {d_max}")));
    }
    let start = Instant::now();
    let remaining = || time_limit.saturating_sub(start.elapsed());
    let order = fpf_order(d);
    let top = complement(&build_threshold_graph(d, d_max));
    let first = exact_coloring_with_order(&top, Some(&order), time_limit);
    let k = first.coloring.k();
    let mut proven = first.proven;

    let mut candidates = vec![0.0];
    candidates.extend(d.distinct_values().into_iter().filter(|&v| v > 0.0 && v <= d_max));
    // the largest candidate yields the same graph as d_max, so it is k-colourable
    let mut best = first.coloring;
    let mut best_threshold = candidates.last().copied().unwrap_or(0.0);
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        let g = complement(&build_threshold_graph(d, candidates[mid]));
        match colorable(&g, k, remaining()) {
            Colorable::Yes(c) => {
                best = c;
                best_threshold = candidates[mid];
                hi = mid;
            }
            Colorable::No => lo = mid + 1,
            Colorable::Unknown => {
                proven = false;
                lo = mid + 1;
            }
        }
    }
    let partition = coloring_to_partition(&best);
    let achieved_diameter = partition
        .clusters()
        .iter()
        .map(|c| diameter(c, d).unwrap_or(0.0))
        .fold(0.0, f64::max);
    Ok(ClusterGraphResult {
        partition,
        achieved_diameter,
        threshold: best_threshold,
        proven,
    })
}
