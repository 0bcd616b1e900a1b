//! Brute-force oracles and random instances for integration tests.
//!
//! Everything here works on raw values and bitmasks over at most ~12
//! elements, independently of the library's solvers.

#![allow(dead_code)]

use equiwide::DissimilarityMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn line6() -> DissimilarityMatrix {
    DissimilarityMatrix::from_line(&[0., 1., 2., 10., 11., 20.]).unwrap()
}

/// A small random instance with a threshold drawn from its own values.
pub struct Instance {
    pub d: DissimilarityMatrix,
    pub threshold: f64,
    pub label: String,
}

/// Deterministic mix of metric, non-metric, tie-heavy and continuous
/// matrices with 1 <= n <= max_n.
pub fn random_instances(count: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(1..=max_n);
            let (d, family) = match i % 4 {
                0 => {
                    let pts: Vec<(i32, i32)> = (0..n).map(|_| (rng.gen_range(0..7), rng.gen_range(0..7))).collect();
                    let d = DissimilarityMatrix::from_fn(n, |a, b| {
                        let (dx, dy) = ((pts[a].0 - pts[b].0) as f64, (pts[a].1 - pts[b].1) as f64);
                        (dx * dx + dy * dy).sqrt()
                    });
                    (d, "grid-euclidean")
                }
                1 => {
                    let vals: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0..10) as f64).collect();
                    (
                        DissimilarityMatrix::from_fn(n, |a, b| vals[a * n + b]),
                        "integer-nonmetric",
                    )
                }
                2 => {
                    let vals: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>()).collect();
                    (
                        DissimilarityMatrix::from_fn(n, |a, b| vals[a * n + b]),
                        "uniform-nonmetric",
                    )
                }
                _ => {
                    let pts: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
                    (DissimilarityMatrix::from_line(&pts), "line")
                }
            };
            let d = d.unwrap();
            let distinct = d.distinct_values();
            let threshold = if distinct.is_empty() || rng.gen_bool(0.2) {
                rng.gen_range(0.0..=d.max_value().max(1.0))
            } else {
                distinct[rng.gen_range(0..distinct.len())]
            };
            Instance {
                d,
                threshold,
                label: format!("#{i} {family} n={n} T={threshold:.4}"),
            }
        })
        .collect()
}

fn members(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

pub fn mask_diameter(mask: u32, d: &DissimilarityMatrix) -> f64 {
    let m: Vec<usize> = members(mask).collect();
    let mut best = 0.0f64;
    for &a in &m {
        for &b in &m {
            best = best.max(d.get(a, b));
        }
    }
    best
}

pub fn mask_radius(mask: u32, d: &DissimilarityMatrix) -> f64 {
    let m: Vec<usize> = members(mask).collect();
    m.iter()
        .map(|&a| m.iter().map(|&b| d.get(a, b)).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Sets (as sorted index lists) that satisfy `homogeneous` and have no
/// homogeneous strict superset.
fn maximal_family(n: usize, homogeneous: impl Fn(u32) -> bool) -> Vec<Vec<usize>> {
    let hom: Vec<u32> = (1u32..1 << n).filter(|&m| homogeneous(m)).collect();
    let mut out: Vec<Vec<usize>> = hom
        .iter()
        .filter(|&&m| !hom.iter().any(|&o| o != m && o & m == m))
        .map(|&m| members(m).collect())
        .collect();
    out.sort();
    out
}

pub fn maximal_diameter_sets(d: &DissimilarityMatrix, t: f64) -> Vec<Vec<usize>> {
    maximal_family(d.len(), |m| mask_diameter(m, d) <= t)
}

pub fn maximal_radius_sets(d: &DissimilarityMatrix, t: f64) -> Vec<Vec<usize>> {
    maximal_family(d.len(), |m| mask_radius(m, d) <= t)
}

/// Fewest clusters with every pair inside a cluster at dissimilarity <= t,
/// by exhaustive search over set partitions (grow clusters element by element).
pub fn min_diameter_partition(d: &DissimilarityMatrix, t: f64) -> usize {
    fn go(i: usize, d: &DissimilarityMatrix, t: f64, clusters: &mut Vec<Vec<usize>>, best: &mut usize) {
        if clusters.len() >= *best {
            return;
        }
        if i == d.len() {
            *best = clusters.len();
            return;
        }
        for c in 0..clusters.len() {
            if clusters[c].iter().all(|&m| d.get(i, m) <= t) {
                clusters[c].push(i);
                go(i + 1, d, t, clusters, best);
                clusters[c].pop();
            }
        }
        clusters.push(vec![i]);
        go(i + 1, d, t, clusters, best);
        clusters.pop();
    }
    let mut best = d.len() + 1;
    go(0, d, t, &mut Vec::new(), &mut best);
    best.min(d.len())
}

/// Smallest dominating set of the graph with edges d(i, j) <= t.
pub fn min_dominating_set(d: &DissimilarityMatrix, t: f64) -> usize {
    let n = d.len();
    let closed: Vec<u32> = (0..n)
        .map(|i| (0..n).filter(|&j| d.get(i, j) <= t).fold(0u32, |m, j| m | 1 << j))
        .collect();
    let all = (1u32 << n) - 1;
    (0u32..=all)
        .filter(|&m| members(m).fold(0, |acc, i| acc | closed[i]) == all)
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Chromatic number by exhaustive search over colour-class partitions.
pub fn chromatic_number(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> usize {
    fn go(i: usize, n: usize, adj: &dyn Fn(usize, usize) -> bool, classes: &mut Vec<Vec<usize>>, best: &mut usize) {
        if classes.len() >= *best {
            return;
        }
        if i == n {
            *best = classes.len();
            return;
        }
        for c in 0..classes.len() {
            if classes[c].iter().all(|&m| !adj(i, m)) {
                classes[c].push(i);
                go(i + 1, n, adj, classes, best);
                classes[c].pop();
            }
        }
        classes.push(vec![i]);
        go(i + 1, n, adj, classes, best);
        classes.pop();
    }
    let mut best = n + 1;
    go(0, n, &adjacent, &mut Vec::new(), &mut best);
    best.min(n)
}

/// Minimum number of sets from `sets` (bitmasks) whose union is `0..n`, or
/// None when no selection covers.
pub fn min_cover_bruteforce(n: usize, sets: &[u32]) -> Option<usize> {
    assert!(sets.len() <= 20);
    let all = (1u32 << n) - 1;
    (0u32..1 << sets.len())
        .filter(|&sel| members(sel).fold(0, |acc, i| acc | sets[i]) == all)
        .map(|sel| sel.count_ones() as usize)
        .min()
}

/// Every set partition of 0..n as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max + 1 {
            cur.push(l);
            go(i + 1, n, cur, max.max(l), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return vec![vec![]];
    }
    let mut cur = vec![0];
    go(1, n, &mut cur, 0, &mut out);
    out
}

/// Lexicographically smallest (cluster count, max diameter) over partitions
/// whose clusters all have diameter <= t.
pub fn lexmin_count_then_diameter(d: &DissimilarityMatrix, t: f64) -> (usize, f64) {
    let n = d.len();
    let mut best = (usize::MAX, f64::INFINITY);
    for labels in set_partitions(n) {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a + 1..n {
                if labels[a] == labels[b] {
                    worst = worst.max(d.get(a, b));
                }
            }
        }
        if worst <= t && (k < best.0 || (k == best.0 && worst < best.1)) {
            best = (k, worst);
        }
    }
    best
}

/// Independent homogeneity check of a labelling (any n).
pub fn labels_homogeneous(labels: &[usize], d: &DissimilarityMatrix, radius: bool, t: f64) -> bool {
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut clusters = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        clusters[l].push(i);
    }
    clusters.iter().all(|m| {
        let ecc = |a: usize| m.iter().map(|&b| d.get(a, b)).fold(0.0, f64::max);
        !m.is_empty()
            && if radius {
                m.iter().map(|&a| ecc(a)).fold(f64::INFINITY, f64::min) <= t
            } else {
                m.iter().map(|&a| ecc(a)).fold(0.0, f64::max) <= t
            }
    })
}

/// Harmonic number H_n.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}
