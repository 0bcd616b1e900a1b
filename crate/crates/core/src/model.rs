//! Domain types and width computations shared by every solver.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense symmetric dissimilarity matrix with zero diagonal.
///
/// Element `i` of the population is simply the index `i` in `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DissimilarityMatrix {
    /// Builds a matrix from row-major values, checking every invariant.
    ///
    /// Symmetry is checked with exact equality.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::Matrix(format!(
                "expected {} values for n = {n}, got {}",
                n * n,
                values.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if !v.is_finite() {
                    return Err(Error::Matrix(format!("entry ({i}, {j}) is not finite")));
                }
                if v < 0.0 {
                    return Err(Error::Matrix(format!("entry ({i}, {j}) = {v} is negative")));
                }
                if i == j && v != 0.0 {
                    return Err(Error::Matrix(format!("diagonal entry ({i}, {i}) = {v} is not zero")));
                }
                if j > i && v != values[j * n + i] {
                    return Err(Error::Matrix(format!(
                        "entry ({i}, {j}) = {v} differs from ({j}, {i}) = {}",
                        values[j * n + i]
                    )));
                }
            }
        }
        Ok(DissimilarityMatrix { n, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Matrix(format!("row {i} has {} entries, expected {n}", r.len())));
        }
        DissimilarityMatrix::new(n, rows.concat())
    }

    /// Fills the upper triangle with `f(i, j)` (i < j) and mirrors it.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Matrix(format!(
                        "entry ({i}, {j}) = {v} is not a finite nonnegative value"
                    )));
                }
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Ok(DissimilarityMatrix { n, values })
    }

    /// 1-D points with absolute difference as dissimilarity.
    pub fn from_line(points: &[f64]) -> Result<Self> {
        Self::from_fn(points.len(), |i, j| (points[i] - points[j]).abs())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Largest entry, 0 for n <= 1.
    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Sorted distinct off-diagonal values.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// Matrix seen through a relabelling: new element `p` is old element `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length mismatch");
        let n = self.n;
        let mut values = vec![0.0; n * n];
        for (p, &i) in perm.iter().enumerate() {
            for (q, &j) in perm.iter().enumerate() {
                values[p * n + q] = self.values[i * n + j];
            }
        }
        DissimilarityMatrix { n, values }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WidthKind {
    Diameter,
    Radius,
}

impl fmt::Display for WidthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WidthKind::Diameter => "diameter",
            WidthKind::Radius => "radius",
        })
    }
}

impl FromStr for WidthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diameter" => Ok(WidthKind::Diameter),
            "radius" => Ok(WidthKind::Radius),
            other => Err(Error::Config(format!("unknown constraint kind {other:?}"))),
        }
    }
}

/// Width kind plus the threshold T (D_max or R_max).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WidthConstraint {
    pub kind: WidthKind,
    pub threshold: f64,
}

impl WidthConstraint {
    pub fn new(kind: WidthKind, threshold: f64) -> Result<Self> {
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::Config(format!(
                "threshold must be a finite nonnegative number, got {threshold}"
            )));
        }
        Ok(WidthConstraint { kind, threshold })
    }

    pub fn diameter(threshold: f64) -> Result<Self> {
        Self::new(WidthKind::Diameter, threshold)
    }

    pub fn radius(threshold: f64) -> Result<Self> {
        Self::new(WidthKind::Radius, threshold)
    }
}

/// Candidate cluster material: a sorted index set, with a center when built
/// under a radius constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomogeneousSet {
    pub members: Vec<usize>,
    pub center: Option<usize>,
}

impl HomogeneousSet {
    pub fn new(mut members: Vec<usize>, center: Option<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        debug_assert!(!members.is_empty());
        debug_assert!(center.is_none_or(|c| members.binary_search(&c).is_ok()));
        HomogeneousSet { members, center }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// Width of the set under `kind`: its diameter, or for radius sets the
    /// eccentricity of the declared center (the set's radius if none).
    pub fn width(&self, d: &DissimilarityMatrix, kind: WidthKind) -> f64 {
        match (kind, self.center) {
            (WidthKind::Diameter, _) => diameter(&self.members, d).unwrap_or(0.0),
            (WidthKind::Radius, Some(c)) => eccentricity(c, &self.members, d),
            (WidthKind::Radius, None) => radius(&self.members, d).map(|r| r.0).unwrap_or(0.0),
        }
    }
}

/// Disjoint cluster assignment: `labels[i]` is the cluster of element `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
    centers: Option<Vec<usize>>,
}

impl Partition {
    /// Checks that labels use exactly the ids `0..k` and that each center, if
    /// given, belongs to its cluster.
    pub fn new(labels: Vec<usize>, centers: Option<Vec<usize>>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; k];
        for &l in &labels {
            used[l] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::Domain(format!("cluster id {missing} is unused")));
        }
        if let Some(c) = &centers {
            if c.len() != k {
                return Err(Error::Domain(format!("{} centers for {k} clusters", c.len())));
            }
            for (cluster, &center) in c.iter().enumerate() {
                if labels.get(center) != Some(&cluster) {
                    return Err(Error::Domain(format!(
                        "center {center} is not a member of cluster {cluster}"
                    )));
                }
            }
        }
        Ok(Partition { labels, k, centers })
    }

    /// Builds a partition from explicit clusters; the universe is `0..n`.
    pub fn from_clusters(n: usize, clusters: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            for &m in members {
                if m >= n || labels[m] != usize::MAX {
                    return Err(Error::Domain(format!("element {m} is out of range or assigned twice")));
                }
                labels[m] = c;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Domain(format!("element {i} has no cluster")));
        }
        Partition::new(labels, None)
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            labels: (0..n).collect(),
            k: n,
            centers: None,
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn centers(&self) -> Option<&[usize]> {
        self.centers.as_deref()
    }

    pub fn into_parts(self) -> (Vec<usize>, Option<Vec<usize>>) {
        (self.labels, self.centers)
    }

    /// Members of each cluster, in increasing element order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &l in &self.labels {
            out[l] += 1;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionMetrics {
    pub max_width: f64,
    /// Unordered-pair sum; the ordered-pair convention is exactly twice this.
    pub wcsd: f64,
    pub size_variance_objective: u64,
    pub per_cluster_width: Vec<f64>,
}

fn check_members(members: &[usize], d: &DissimilarityMatrix) -> Result<()> {
    if members.is_empty() {
        return Err(Error::Domain("width of an empty set is undefined".into()));
    }
    if let Some(&m) = members.iter().find(|&&m| m >= d.len()) {
        return Err(Error::Domain(format!("index {m} out of range for n = {}", d.len())));
    }
    Ok(())
}

pub(crate) fn eccentricity(a: usize, members: &[usize], d: &DissimilarityMatrix) -> f64 {
    members.iter().map(|&b| d.get(a, b)).fold(0.0, f64::max)
}

/// Largest pairwise dissimilarity within `members`.
pub fn diameter(members: &[usize], d: &DissimilarityMatrix) -> Result<f64> {
    check_members(members, d)?;
    let mut best = 0.0f64;
    for (x, &a) in members.iter().enumerate() {
        for &b in &members[x + 1..] {
            best = best.max(d.get(a, b));
        }
    }
    Ok(best)
}

/// Minimum eccentricity within `members`, with the element realizing it.
/// Ties go to the lowest element index.
pub fn radius(members: &[usize], d: &DissimilarityMatrix) -> Result<(f64, usize)> {
    check_members(members, d)?;
    let mut best: Option<(f64, usize)> = None;
    for &a in members {
        let e = eccentricity(a, members, d);
        best = match best {
            Some((be, bc)) if be < e || (be == e && bc < a) => Some((be, bc)),
            _ => Some((e, a)),
        };
    }
    Ok(best.expect("members is nonempty"))
}

/// Width of `members` under `kind`.
pub fn width(members: &[usize], d: &DissimilarityMatrix, kind: WidthKind) -> Result<f64> {
    match kind {
        WidthKind::Diameter => diameter(members, d),
        WidthKind::Radius => radius(members, d).map(|(r, _)| r),
    }
}

/// Midpoint of the furthest pair of points (Euclidean). Only defined when
/// coordinates are available.
pub fn center_diameter(members: &[usize], coords: Option<&[Vec<f64>]>) -> Result<Vec<f64>> {
    let coords = coords.ok_or_else(|| {
        Error::Unsupported("diameter center requires coordinates; only a dissimilarity matrix is available".into())
    })?;
    if members.is_empty() {
        return Err(Error::Domain("center of an empty set is undefined".into()));
    }
    if let Some(&m) = members.iter().find(|&&m| m >= coords.len()) {
        return Err(Error::Domain(format!(
            "index {m} out of range for {} points",
            coords.len()
        )));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    let dist2 = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let (mut pa, mut pb, mut best) = (sorted[0], sorted[0], 0.0f64);
    for (x, &a) in sorted.iter().enumerate() {
        for &b in &sorted[x + 1..] {
            let v = dist2(&coords[a], &coords[b]);
            if v > best {
                (pa, pb, best) = (a, b, v);
            }
        }
    }
    Ok(coords[pa].iter().zip(&coords[pb]).map(|(x, y)| (x + y) / 2.0).collect())
}

/// Within-cluster sum of dissimilarities over unordered pairs.
pub fn wcsd(p: &Partition, d: &DissimilarityMatrix) -> f64 {
    p.clusters().iter().map(|c| pair_sum(c, d)).sum()
}

pub(crate) fn pair_sum(members: &[usize], d: &DissimilarityMatrix) -> f64 {
    let mut s = 0.0;
    for (x, &a) in members.iter().enumerate() {
        for &b in &members[x + 1..] {
            s += d.get(a, b);
        }
    }
    s
}

/// Sum of squared cluster sizes.
pub fn size_variance_objective(p: &Partition) -> u64 {
    p.sizes().iter().map(|&s| (s * s) as u64).sum()
}

/// Checks that every cluster is homogeneous under `c` and returns the metrics.
pub fn validate_partition(p: &Partition, d: &DissimilarityMatrix, c: &WidthConstraint) -> Result<PartitionMetrics> {
    if p.len() != d.len() {
        return Err(Error::Domain(format!(
            "partition covers {} elements, matrix has {}",
            p.len(),
            d.len()
        )));
    }
    let clusters = p.clusters();
    let mut per_cluster_width = Vec::with_capacity(clusters.len());
    for (i, members) in clusters.iter().enumerate() {
        let w = width(members, d, c.kind)?;
        if w > c.threshold {
            return Err(Error::Validation {
                cluster: i,
                width: w,
                threshold: c.threshold,
            });
        }
        if let Some(centers) = p.centers() {
            let e = eccentricity(centers[i], members, d);
            if e > c.threshold {
                return Err(Error::InvalidCenter {
                    cluster: i,
                    center: centers[i],
                    eccentricity: e,
                    threshold: c.threshold,
                });
            }
        }
        per_cluster_width.push(w);
    }
    Ok(PartitionMetrics {
        max_width: per_cluster_width.iter().copied().fold(0.0, f64::max),
        wcsd: clusters.iter().map(|m| pair_sum(m, d)).sum(),
        size_variance_objective: size_variance_objective(p),
        per_cluster_width,
    })
}
