//! Turning an overlapping cover into a partition.
//!
//! Elements covered by exactly one chosen set are *decided*; the others
//! (undecided) are resolved by an [`AssignmentStrategy`]. Under a radius
//! constraint the center of every chosen ball is pinned to its own cluster,
//! which keeps each cluster inside the ball around its center.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cover::{Cover, SubObjective};
use crate::error::{Error, Result};
use crate::model::{radius, DissimilarityMatrix, Partition, WidthConstraint, WidthKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssignmentStrategy {
    /// Nearest provisional center, computed on the decided cores.
    ClosestCenter,
    /// Clusters with the largest decided cores absorb undecided elements first.
    LargestFirst,
}

impl AssignmentStrategy {
    /// Strategy matching a sub-objective: size variance favours growing
    /// large clusters, everything else favours compactness.
    pub fn for_subobjective(sub: SubObjective) -> Self {
        match sub {
            SubObjective::SizeVariance => AssignmentStrategy::LargestFirst,
            _ => AssignmentStrategy::ClosestCenter,
        }
    }
}

impl fmt::Display for AssignmentStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AssignmentStrategy::ClosestCenter => "closest-center",
            AssignmentStrategy::LargestFirst => "largest-first",
        })
    }
}

impl FromStr for AssignmentStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closest-center" => Ok(AssignmentStrategy::ClosestCenter),
            "largest-first" => Ok(AssignmentStrategy::LargestFirst),
            other => Err(Error::Config(format!("unknown assignment strategy {other:?}"))),
        }
    }
}

/// Renumbers labels to `0..k'` in order of first occurrence.
pub fn relabel_compact(labels: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

pub fn assign_unique(
    cover: &Cover,
    d: &DissimilarityMatrix,
    c: &WidthConstraint,
    strategy: AssignmentStrategy,
) -> Result<Partition> {
    let n = cover.universe_size;
    if n != d.len() {
        return Err(Error::CoverInconsistency(format!(
            "cover universe has {n} elements, matrix has {}",
            d.len()
        )));
    }
    let k = cover.len();
    if let Some(j) = cover.chosen.iter().position(|s| s.is_empty()) {
        return Err(Error::CoverInconsistency(format!("chosen set {j} is empty")));
    }
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, s) in cover.chosen.iter().enumerate() {
        for &m in &s.members {
            owners[m].push(j);
        }
    }
    if let Some(e) = owners.iter().position(Vec::is_empty) {
        return Err(Error::Uncovered(e));
    }

    let mut label: Vec<Option<usize>> = owners
        .iter()
        .map(|o| if o.len() == 1 { Some(o[0]) } else { None })
        .collect();
    let pin_centers = c.kind == WidthKind::Radius;
    if pin_centers {
        for (j, s) in cover.chosen.iter().enumerate() {
            let center = s
                .center
                .ok_or_else(|| Error::CoverInconsistency(format!("radius set {j} has no center")))?;
            if !s.contains(center) {
                return Err(Error::CoverInconsistency(format!("center {center} is outside set {j}")));
            }
            match label[center] {
                Some(other) if other != j && owners[center].len() > 1 => {
                    return Err(Error::CoverInconsistency(format!(
                        "element {center} is the center of sets {other} and {j}"
                    )))
                }
                _ => label[center] = Some(j),
            }
        }
    }

    let mut core: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (e, l) in label.iter().enumerate() {
        if let Some(j) = *l {
            core[j].push(e);
        }
    }
    let undecided: Vec<usize> = (0..n).filter(|&e| label[e].is_none()).collect();
    let mut size: Vec<usize> = core.iter().map(Vec::len).collect();

    match strategy {
        AssignmentStrategy::ClosestCenter => {
            let centers: Vec<Option<usize>> = (0..k)
                .map(|j| {
                    if pin_centers {
                        cover.chosen[j].center
                    } else if core[j].is_empty() {
                        None
                    } else {
                        radius(&core[j], d).ok().map(|(_, ctr)| ctr)
                    }
                })
                .collect();
            for &e in &undecided {
                let nearest = owners[e]
                    .iter()
                    .filter_map(|&j| centers[j].map(|ctr| (d.get(e, ctr), j)))
                    .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                let j = match nearest {
                    Some((_, j)) => j,
                    // every candidate core is empty
                    None => *owners[e]
                        .iter()
                        .max_by_key(|&&j| (size[j], std::cmp::Reverse(j)))
                        .expect("element has owners"),
                };
                label[e] = Some(j);
                size[j] += 1;
            }
        }
        AssignmentStrategy::LargestFirst => {
            let mut order: Vec<usize> = (0..k).collect();
            order.sort_by_key(|&j| (std::cmp::Reverse(core[j].len()), j));
            for j in order {
                for &e in &cover.chosen[j].members {
                    if label[e].is_none() {
                        label[e] = Some(j);
                    }
                }
            }
        }
    }

    let raw: Vec<usize> = label.into_iter().map(|l| l.expect("every element assigned")).collect();
    let labels = relabel_compact(&raw);
    let centers = if pin_centers {
        let k2 = labels.iter().max().map_or(0, |&m| m + 1);
        let mut out = vec![usize::MAX; k2];
        for (e, (&old, &new)) in raw.iter().zip(&labels).enumerate() {
            if cover.chosen[old].center == Some(e) {
                out[new] = e;
            }
        }
        Some(out)
    } else {
        None
    };
    Partition::new(labels, centers)
}
