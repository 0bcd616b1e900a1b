//! Minimum-cardinality set cover of the population by homogeneous sets.
//!
//! Three solvers share one instance representation:
//! - [`greedy_cover`]: largest-uncovered-first, within H_n of the optimum;
//! - [`exact_min_cover`]: depth-first branch-and-bound seeded by greedy;
//! - [`enumerate_min_covers`]: the same search continued past the first
//!   optimum to list every minimum cover.
//!
//! Branching always picks the uncovered element contained in the fewest
//! remaining sets. Sibling branches exclude the sets tried before them, so
//! the subtrees are disjoint and each cover is reached at most once.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::homoset::HomogeneousSetCollection;
use crate::model::{pair_sum, DissimilarityMatrix, HomogeneousSet, WidthKind};

/// Default cap on the number of minimum covers listed.
pub const DEFAULT_ENUM_LIMIT: usize = 100_000;

/// A selection of homogeneous sets whose union is `0..universe_size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub chosen: Vec<HomogeneousSet>,
    pub universe_size: usize,
    /// Positions of the chosen sets in the source collection, increasing.
    pub set_indices: Vec<usize>,
}

impl Cover {
    fn from_indices(c: &HomogeneousSetCollection, mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        Cover {
            chosen: idx.iter().map(|&i| c.sets[i].clone()).collect(),
            universe_size: c.universe,
            set_indices: idx,
        }
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    pub fn is_cover(&self) -> bool {
        let mut seen = BitSet::new(self.universe_size);
        for s in &self.chosen {
            for &m in &s.members {
                seen.insert(m);
            }
        }
        seen.count() == self.universe_size
    }

    /// True when dropping any single chosen set leaves some element uncovered.
    pub fn is_irredundant(&self) -> bool {
        let mut count = vec![0usize; self.universe_size];
        for s in &self.chosen {
            for &m in &s.members {
                count[m] += 1;
            }
        }
        self.chosen.iter().all(|s| s.members.iter().any(|&m| count[m] == 1))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubObjective {
    #[default]
    None,
    MaxWidth,
    Wcsd,
    #[serde(rename = "variance")]
    SizeVariance,
}

impl fmt::Display for SubObjective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubObjective::None => "none",
            SubObjective::MaxWidth => "max-width",
            SubObjective::Wcsd => "wcsd",
            SubObjective::SizeVariance => "variance",
        })
    }
}

impl FromStr for SubObjective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SubObjective::None),
            "max-width" => Ok(SubObjective::MaxWidth),
            "wcsd" => Ok(SubObjective::Wcsd),
            "variance" => Ok(SubObjective::SizeVariance),
            other => Err(Error::Config(format!("unknown sub-objective {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CoverSolution {
    pub cover: Cover,
    /// False when the time limit stopped the search before optimality was shown.
    pub proven: bool,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct CoverEnumeration {
    /// Distinct minimum covers in canonical order.
    pub covers: Vec<Cover>,
    /// Cardinality of the covers listed (the optimum when `proven`).
    pub cardinality: usize,
    pub proven: bool,
    /// The time budget ran out before the listing finished.
    pub timed_out: bool,
    /// More minimum covers exist than the limit allowed.
    pub limit_hit: bool,
}

impl CoverEnumeration {
    pub fn complete(&self) -> bool {
        self.proven && !self.timed_out && !self.limit_hit
    }
}

struct Instance {
    n: usize,
    sets: Vec<BitSet>,
    /// element -> ids of the sets containing it
    containing: Vec<Vec<usize>>,
}

impl Instance {
    fn new(c: &HomogeneousSetCollection) -> Result<Self> {
        let sets = c.bitsets();
        let mut containing = vec![Vec::new(); c.universe];
        for (i, s) in sets.iter().enumerate() {
            for e in s.iter() {
                containing[e].push(i);
            }
        }
        if let Some(e) = containing.iter().position(Vec::is_empty) {
            return Err(Error::Uncovered(e));
        }
        Ok(Instance {
            n: c.universe,
            sets,
            containing,
        })
    }
}

/// Picks the set covering the most uncovered elements until everything is
/// covered. Ties go to the set with the lowest smallest member, then to the
/// lower collection position.
pub fn greedy_cover(c: &HomogeneousSetCollection) -> Result<Cover> {
    let inst = Instance::new(c)?;
    Ok(Cover::from_indices(c, greedy_indices(&inst)))
}

fn greedy_indices(inst: &Instance) -> Vec<usize> {
    let mut uncovered = BitSet::full(inst.n);
    let mut chosen = Vec::new();
    let first: Vec<usize> = inst.sets.iter().map(|s| s.first().unwrap_or(usize::MAX)).collect();
    while !uncovered.is_empty() {
        let best = (0..inst.sets.len())
            .max_by_key(|&i| {
                (
                    inst.sets[i].intersection_count(&uncovered),
                    std::cmp::Reverse(first[i]),
                    std::cmp::Reverse(i),
                )
            })
            .expect("instance has sets");
        uncovered.difference_with(&inst.sets[best]);
        chosen.push(best);
    }
    chosen
}

struct Search<'a> {
    inst: &'a Instance,
    deadline: Option<Instant>,
    timed_out: bool,
    nodes: u64,
    chosen: Vec<usize>,
    mode: Mode,
}

enum Mode {
    Optimize {
        best: Vec<usize>,
    },
    Enumerate {
        target: usize,
        limit: usize,
        found: Vec<Vec<usize>>,
        hit_limit: bool,
    },
}

impl Search<'_> {
    fn stopped(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        if let Mode::Enumerate { hit_limit: true, .. } = self.mode {
            return true;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(256) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    /// Lower bound on the sets still needed: elements chosen so that no
    /// available set contains two of them each need their own set.
    fn lower_bound(&self, uncovered: &BitSet, available: &BitSet) -> usize {
        let mut elems: Vec<(usize, usize)> = uncovered
            .iter()
            .map(|e| {
                let k = self.inst.containing[e]
                    .iter()
                    .filter(|&&s| available.contains(s))
                    .count();
                (k, e)
            })
            .collect();
        if elems.iter().any(|&(k, _)| k == 0) {
            return usize::MAX / 2;
        }
        elems.sort_unstable();
        let mut used = BitSet::new(self.inst.sets.len());
        let mut bound = 0;
        for &(_, e) in &elems {
            let sets = self.inst.containing[e].iter().filter(|&&s| available.contains(s));
            if sets.clone().all(|&s| !used.contains(s)) {
                bound += 1;
                for &s in sets {
                    used.insert(s);
                }
            }
        }
        bound
    }

    fn budget(&self) -> usize {
        match &self.mode {
            // strictly better than the incumbent
            Mode::Optimize { best } => best.len().saturating_sub(1),
            Mode::Enumerate { target, .. } => *target,
        }
    }

    fn dfs(&mut self, uncovered: &BitSet, available: &BitSet) {
        if self.stopped() {
            return;
        }
        if uncovered.is_empty() {
            match &mut self.mode {
                Mode::Optimize { best } => *best = self.chosen.clone(),
                Mode::Enumerate {
                    limit,
                    found,
                    hit_limit,
                    ..
                } => {
                    if found.len() == *limit {
                        *hit_limit = true;
                    } else {
                        found.push(self.chosen.clone());
                    }
                }
            }
            return;
        }
        let budget = self.budget();
        if self.chosen.len() >= budget {
            return;
        }
        let lb = self.lower_bound(uncovered, available);
        if self.chosen.len() + lb > budget {
            return;
        }
        // fail-first: element with the fewest available sets
        let branch_elem = uncovered
            .iter()
            .min_by_key(|&e| {
                self.inst.containing[e]
                    .iter()
                    .filter(|&&s| available.contains(s))
                    .count()
            })
            .expect("uncovered is nonempty");
        let mut options: Vec<(usize, usize)> = self.inst.containing[branch_elem]
            .iter()
            .filter(|&&s| available.contains(s))
            .map(|&s| (self.inst.sets[s].intersection_count(uncovered), s))
            .collect();
        options.sort_unstable_by_key(|&(gain, s)| (std::cmp::Reverse(gain), s));

        let mut avail = available.clone();
        for (_, s) in options {
            avail.remove(s);
            let next = uncovered.difference(&self.inst.sets[s]);
            self.chosen.push(s);
            self.dfs(&next, &avail);
            self.chosen.pop();
            if self.timed_out || self.chosen.len() + 1 > self.budget() {
                break;
            }
            if let Mode::Enumerate { hit_limit: true, .. } = self.mode {
                break;
            }
        }
    }
}

fn deadline(limit: Duration) -> Option<Instant> {
    Instant::now().checked_add(limit)
}

fn optimize(inst: &Instance, time_limit: Duration) -> (Vec<usize>, bool, u64) {
    let mut s = Search {
        inst,
        deadline: deadline(time_limit),
        timed_out: false,
        nodes: 0,
        chosen: Vec::new(),
        mode: Mode::Optimize {
            best: greedy_indices(inst),
        },
    };
    if time_limit.is_zero() {
        s.timed_out = true;
    }
    let uncovered = BitSet::full(inst.n);
    let available = BitSet::full(inst.sets.len());
    // greedy may already meet the root bound
    let root_lb = s.lower_bound(&uncovered, &available);
    let greedy_len = s.budget() + 1;
    if root_lb < greedy_len {
        s.dfs(&uncovered, &available);
    }
    let proven = !s.timed_out || root_lb >= greedy_len;
    let Mode::Optimize { best } = s.mode else {
        unreachable!()
    };
    (best, proven, s.nodes)
}

/// Cover of provably minimum cardinality, or the best incumbent found within
/// `time_limit` (flagged unproven). Refuses truncated collections.
pub fn exact_min_cover(c: &HomogeneousSetCollection, time_limit: Duration) -> Result<CoverSolution> {
    if c.truncated {
        return Err(Error::Truncated { cap: c.sets.len() });
    }
    let inst = Instance::new(c)?;
    let (best, proven, nodes) = optimize(&inst, time_limit);
    Ok(CoverSolution {
        cover: Cover::from_indices(c, best),
        proven,
        nodes,
    })
}

/// Every minimum-cardinality cover, up to `limit`, in canonical order (by
/// sorted set positions). The time budget is shared with the optimality proof.
pub fn enumerate_min_covers(
    c: &HomogeneousSetCollection,
    limit: usize,
    time_limit: Duration,
) -> Result<CoverEnumeration> {
    if c.truncated {
        return Err(Error::Truncated { cap: c.sets.len() });
    }
    let inst = Instance::new(c)?;
    let start = Instant::now();
    let (best, proven, _) = optimize(&inst, time_limit);
    if !proven {
        return Ok(CoverEnumeration {
            cardinality: best.len(),
            covers: vec![Cover::from_indices(c, best)],
            proven: false,
            timed_out: true,
            limit_hit: false,
        });
    }
    let target = best.len();
    let mut s = Search {
        inst: &inst,
        deadline: deadline(time_limit.saturating_sub(start.elapsed())),
        timed_out: false,
        nodes: 0,
        chosen: Vec::new(),
        mode: Mode::Enumerate {
            target,
            limit: limit.max(1),
            found: Vec::new(),
            hit_limit: false,
        },
    };
    s.dfs(&BitSet::full(inst.n), &BitSet::full(inst.sets.len()));
    let timed_out = s.timed_out;
    let Mode::Enumerate { found, hit_limit, .. } = s.mode else {
        unreachable!()
    };
    let mut covers: Vec<Cover> = found.into_iter().map(|f| Cover::from_indices(c, f)).collect();
    if covers.is_empty() {
        // the time budget ran out before the first cover was reached again
        covers.push(Cover::from_indices(c, best));
    }
    covers.sort_by(|a, b| a.set_indices.cmp(&b.set_indices));
    covers.dedup_by(|a, b| a.set_indices == b.set_indices);
    Ok(CoverEnumeration {
        covers,
        cardinality: target,
        proven: true,
        timed_out,
        limit_hit: hit_limit,
    })
}

fn set_kind(s: &HomogeneousSet) -> WidthKind {
    if s.center.is_some() {
        WidthKind::Radius
    } else {
        WidthKind::Diameter
    }
}

/// Sum of dissimilarities to the center for radius sets, pairwise sum otherwise.
fn set_dispersion(s: &HomogeneousSet, d: &DissimilarityMatrix) -> f64 {
    match s.center {
        Some(c) => s.members.iter().map(|&m| d.get(c, m)).sum(),
        None => pair_sum(&s.members, d),
    }
}

/// Picks the cover that is best under `sub`; ties keep the earliest one.
pub fn select_cover<'a>(covers: &'a [Cover], d: &DissimilarityMatrix, sub: SubObjective) -> Result<&'a Cover> {
    if covers.is_empty() {
        return Err(Error::Domain("cannot select from an empty list of covers".into()));
    }
    // lower is better for every score
    let score = |c: &Cover| -> f64 {
        match sub {
            SubObjective::None => 0.0,
            SubObjective::MaxWidth => c.chosen.iter().map(|s| s.width(d, set_kind(s))).fold(0.0, f64::max),
            SubObjective::Wcsd => c.chosen.iter().map(|s| set_dispersion(s, d)).sum(),
            SubObjective::SizeVariance => -(c.chosen.iter().map(|s| (s.len() * s.len()) as f64).sum::<f64>()),
        }
    };
    let mut best = &covers[0];
    let mut best_score = score(best);
    for c in &covers[1..] {
        let sc = score(c);
        if sc < best_score {
            best = c;
            best_score = sc;
        }
    }
    Ok(best)
}
