//! Enumeration of maximal homogeneous sets: radius balls for radius
//! constraints, maximal cliques of the threshold graph for diameter ones.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::graph::{Graph, ThresholdGraph};
use crate::model::{DissimilarityMatrix, HomogeneousSet, WidthConstraint};

/// Default upper bound on the number of maximal cliques materialized.
pub const DEFAULT_CLIQUE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousSetCollection {
    pub sets: Vec<HomogeneousSet>,
    pub constraint: WidthConstraint,
    /// Set when clique enumeration stopped at its cap.
    pub truncated: bool,
    /// Size of the population the sets are drawn from.
    pub universe: usize,
}

impl HomogeneousSetCollection {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn bitsets(&self) -> Vec<BitSet> {
        self.sets
            .iter()
            .map(|s| BitSet::from_indices(self.universe, s.members.iter().copied()))
            .collect()
    }
}

/// One ball per element: `S_i = { e | d(i, e) <= r_max }`, centered on `i`.
pub fn radius_balls(d: &DissimilarityMatrix, r_max: f64) -> HomogeneousSetCollection {
    let n = d.len();
    let sets = (0..n)
        .map(|i| {
            let members = (0..n).filter(|&e| d.get(i, e) <= r_max).collect();
            HomogeneousSet::new(members, Some(i))
        })
        .collect();
    HomogeneousSetCollection {
        sets,
        constraint: WidthConstraint {
            kind: crate::model::WidthKind::Radius,
            threshold: r_max,
        },
        truncated: false,
        universe: n,
    }
}

/// All maximal cliques of `g`, sorted lexicographically.
///
/// Pivoting Bron-Kerbosch with a degeneracy-ordered outer loop. Stops after
/// `cap` cliques and flags the collection as truncated if more exist.
pub fn maximal_cliques(g: &ThresholdGraph, cap: usize) -> HomogeneousSetCollection {
    let cap = cap.max(1);
    let mut e = CliqueEnumerator {
        g: g.graph(),
        out: Vec::new(),
        cap,
        truncated: false,
        stack: Vec::new(),
    };
    let n = g.len();
    let order = degeneracy_order(g);
    let mut position = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    for &v in &order {
        if e.truncated {
            break;
        }
        let mut later = BitSet::new(n);
        let mut earlier = BitSet::new(n);
        for &u in g.neighbors(v) {
            if position[u] > position[v] {
                later.insert(u);
            } else {
                earlier.insert(u);
            }
        }
        e.stack.push(v);
        e.expand(later, earlier);
        e.stack.pop();
    }
    let mut sets = e.out;
    sets.sort_unstable();
    HomogeneousSetCollection {
        sets: sets
            .into_iter()
            .map(|m| HomogeneousSet {
                members: m,
                center: None,
            })
            .collect(),
        constraint: WidthConstraint {
            kind: crate::model::WidthKind::Diameter,
            threshold: g.threshold(),
        },
        truncated: e.truncated,
        universe: n,
    }
}

struct CliqueEnumerator<'a> {
    g: &'a Graph,
    out: Vec<Vec<usize>>,
    cap: usize,
    truncated: bool,
    stack: Vec<usize>,
}

impl CliqueEnumerator<'_> {
    fn expand(&mut self, mut cand: BitSet, mut excl: BitSet) {
        if self.truncated {
            return;
        }
        if cand.is_empty() {
            if excl.is_empty() {
                if self.out.len() == self.cap {
                    self.truncated = true;
                    return;
                }
                let mut c = self.stack.clone();
                c.sort_unstable();
                self.out.push(c);
            }
            return;
        }
        // pivot maximizing |cand ∩ N(u)| over cand ∪ excl
        let pivot = cand
            .iter()
            .chain(excl.iter())
            .max_by_key(|&u| (cand.intersection_count(self.g.adjacency(u)), std::cmp::Reverse(u)))
            .expect("cand is nonempty");
        let branch = cand.difference(self.g.adjacency(pivot));
        for v in branch.iter() {
            let nv = self.g.adjacency(v);
            self.stack.push(v);
            self.expand(cand.intersection(nv), excl.intersection(nv));
            self.stack.pop();
            if self.truncated {
                return;
            }
            cand.remove(v);
            excl.insert(v);
        }
    }
}

/// Repeatedly removes a minimum-degree vertex (lowest index on ties).
fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.len();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("a vertex remains");
        removed[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    order
}

/// Drops every set that is a strict subset of another. Among equal sets the
/// one with the lowest center survives. Survivors keep their input order.
pub fn prune_dominated(c: &HomogeneousSetCollection) -> HomogeneousSetCollection {
    let bits = c.bitsets();
    let mut by_size: Vec<usize> = (0..c.sets.len()).collect();
    // larger first, then lower center, then input order
    by_size.sort_by_key(|&i| (std::cmp::Reverse(c.sets[i].len()), c.sets[i].center, i));
    let mut kept: Vec<usize> = Vec::new();
    for &i in &by_size {
        if !kept.iter().any(|&j| bits[i].is_subset(&bits[j])) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    HomogeneousSetCollection {
        sets: kept.into_iter().map(|i| c.sets[i].clone()).collect(),
        constraint: c.constraint,
        truncated: c.truncated,
        universe: c.universe,
    }
}
