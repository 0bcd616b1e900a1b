//! End-to-end runs: ingest, build the dissimilarity matrix, solve, validate
//! and report. Also the multi-seed benchmark table.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::assign::{assign_unique, relabel_compact, AssignmentStrategy};
use crate::baselines::{
    clustergraph, coloring_to_partition, dsatur_heuristic, exact_coloring_with_order, hac_complete_link,
};
use crate::cover::{
    enumerate_min_covers, exact_min_cover, greedy_cover, select_cover, SubObjective, DEFAULT_ENUM_LIMIT,
};
use crate::dissim::{dtw_matrix, euclidean_matrix, PointDataset, SeriesDataset};
use crate::error::{Error, Result};
use crate::graph::{build_threshold_graph, complement, fpf_order};
use crate::homoset::{maximal_cliques, prune_dominated, radius_balls, HomogeneousSetCollection, DEFAULT_CLIQUE_CAP};
use crate::io::{load_matrix_csv, load_points_csv, load_series_csv};
use crate::model::{
    validate_partition, DissimilarityMatrix, HomogeneousSet, Partition, PartitionMetrics, WidthConstraint, WidthKind,
};

/// Default per-run time limit in seconds.
pub const DEFAULT_TIME_LIMIT_S: f64 = 600.0;
pub const DEFAULT_DTW_WINDOW: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputKind {
    PointsCsv,
    MatrixCsv,
    SeriesCsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    EqwGreedy,
    EqwExact,
    EqwEnum,
    Hac,
    Dsatur,
    ExactColor,
    #[serde(rename = "clustergraph")]
    ClusterGraph,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::EqwGreedy,
        Algorithm::EqwExact,
        Algorithm::EqwEnum,
        Algorithm::Hac,
        Algorithm::Dsatur,
        Algorithm::ExactColor,
        Algorithm::ClusterGraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::EqwGreedy => "eqw-greedy",
            Algorithm::EqwExact => "eqw-exact",
            Algorithm::EqwEnum => "eqw-enum",
            Algorithm::Hac => "hac",
            Algorithm::Dsatur => "dsatur",
            Algorithm::ExactColor => "exact-color",
            Algorithm::ClusterGraph => "clustergraph",
        }
    }

    /// Whether the algorithm accepts a radius constraint (only the
    /// decomposition pipeline does).
    pub fn supports_radius(self) -> bool {
        matches!(self, Algorithm::EqwGreedy | Algorithm::EqwExact | Algorithm::EqwEnum)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }
}

impl FromStr for InputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "points-csv" => Ok(InputKind::PointsCsv),
            "matrix-csv" => Ok(InputKind::MatrixCsv),
            "series-csv" => Ok(InputKind::SeriesCsv),
            other => Err(Error::Config(format!("unknown input kind {other:?}"))),
        }
    }
}

fn default_time_limit() -> f64 {
    DEFAULT_TIME_LIMIT_S
}
fn default_clique_cap() -> usize {
    DEFAULT_CLIQUE_CAP
}
fn default_enum_limit() -> usize {
    DEFAULT_ENUM_LIMIT
}
fn default_dtw_window() -> usize {
    DEFAULT_DTW_WINDOW
}
fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub input_kind: InputKind,
    pub constraint: WidthKind,
    pub threshold: f64,
    pub algorithm: Algorithm,
    #[serde(default)]
    pub subobjective: SubObjective,
    #[serde(default = "default_time_limit")]
    pub time_limit_s: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_clique_cap")]
    pub clique_cap: usize,
    #[serde(default = "default_enum_limit")]
    pub enum_limit: usize,
    #[serde(default = "default_dtw_window")]
    pub dtw_window: usize,
    #[serde(default)]
    pub label_col: Option<usize>,
    /// Drop radius balls contained in other balls before covering.
    #[serde(default = "default_true")]
    pub prune_balls: bool,
}

impl RunConfig {
    pub fn new(
        input: impl Into<PathBuf>,
        input_kind: InputKind,
        constraint: WidthKind,
        threshold: f64,
        algorithm: Algorithm,
    ) -> Self {
        RunConfig {
            input: input.into(),
            input_kind,
            constraint,
            threshold,
            algorithm,
            subobjective: SubObjective::None,
            time_limit_s: DEFAULT_TIME_LIMIT_S,
            seed: None,
            clique_cap: DEFAULT_CLIQUE_CAP,
            enum_limit: DEFAULT_ENUM_LIMIT,
            dtw_window: DEFAULT_DTW_WINDOW,
            label_col: None,
            prune_balls: true,
        }
    }

    pub fn width_constraint(&self) -> Result<WidthConstraint> {
        WidthConstraint::new(self.constraint, self.threshold)
    }

    pub fn time_limit(&self) -> Result<Duration> {
        Duration::try_from_secs_f64(self.time_limit_s)
            .map_err(|_| Error::Config(format!("invalid time limit {}", self.time_limit_s)))
    }

    pub fn check(&self) -> Result<()> {
        self.width_constraint()?;
        self.time_limit()?;
        if self.constraint == WidthKind::Radius && !self.algorithm.supports_radius() {
            return Err(Error::Config(format!(
                "{} supports only diameter constraints",
                self.algorithm
            )));
        }
        if self.clique_cap == 0 || self.enum_limit == 0 {
            return Err(Error::Config(
                "clique cap and enumeration limit must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Loaded input data.
#[derive(Clone, Debug)]
pub enum Input {
    Points(PointDataset),
    Matrix(DissimilarityMatrix),
    Series(SeriesDataset),
}

impl Input {
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        Ok(match cfg.input_kind {
            InputKind::PointsCsv => Input::Points(load_points_csv(&cfg.input, cfg.label_col)?),
            InputKind::MatrixCsv => Input::Matrix(load_matrix_csv(&cfg.input)?),
            InputKind::SeriesCsv => Input::Series(load_series_csv(&cfg.input, cfg.dtw_window)?),
        })
    }

    pub fn dissimilarities(&self) -> Result<DissimilarityMatrix> {
        match self {
            Input::Points(p) => euclidean_matrix(p),
            Input::Matrix(m) => Ok(m.clone()),
            Input::Series(s) => dtw_matrix(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub cluster_count: usize,
    pub labels: Vec<usize>,
    /// Cluster centers (radius constraint only).
    pub centers: Option<Vec<usize>>,
    /// `wcsd` sums unordered pairs; the ordered-pair sum is twice as large.
    pub metrics: PartitionMetrics,
    pub proven_optimal: bool,
    pub time_limit_hit: bool,
    /// Clique enumeration hit its cap or cover enumeration hit its limit.
    pub truncated: bool,
    pub duration_s: f64,
    pub config: RunConfig,
}

impl RunReport {
    /// 0 for a clean run, 2 when a time limit or a cap cut the work short.
    pub fn exit_code(&self) -> i32 {
        if self.time_limit_hit || self.truncated {
            2
        } else {
            0
        }
    }
}

/// Partition plus solver status, before validation and reporting.
#[derive(Clone, Debug)]
pub struct Solved {
    pub partition: Partition,
    pub proven_optimal: bool,
    pub time_limit_hit: bool,
    pub truncated: bool,
}

pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.check()?;
    let input = Input::load(cfg)?;
    run_on(&input.dissimilarities()?, cfg)
}

/// Runs `cfg` on an already built matrix (`cfg.input` is only echoed).
pub fn run_on(d: &DissimilarityMatrix, cfg: &RunConfig) -> Result<RunReport> {
    cfg.check()?;
    let c = cfg.width_constraint()?;
    let start = Instant::now();
    let solved = match cfg.seed {
        None => solve(d, cfg)?,
        Some(seed) => solve_permuted(d, cfg, seed)?,
    };
    let duration_s = start.elapsed().as_secs_f64();
    let metrics = validate_partition(&solved.partition, d, &c).map_err(|e| {
        Error::Domain(format!(
            "internal error: {} produced an invalid partition: {e}",
            cfg.algorithm
        ))
    })?;
    let (labels, centers) = solved.partition.into_parts();
    Ok(RunReport {
        cluster_count: labels.iter().max().map_or(0, |&m| m + 1),
        labels,
        centers,
        metrics,
        proven_optimal: solved.proven_optimal,
        time_limit_hit: solved.time_limit_hit,
        truncated: solved.truncated,
        duration_s,
        config: cfg.clone(),
    })
}

/// Solves on a seeded random relabelling of the elements and maps the
/// result back to the original indices.
fn solve_permuted(d: &DissimilarityMatrix, cfg: &RunConfig, seed: u64) -> Result<Solved> {
    let mut perm: Vec<usize> = (0..d.len()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let inner = solve(&d.permuted(&perm), cfg)?;
    let mut raw = vec![0; d.len()];
    for (p, &l) in inner.partition.labels().iter().enumerate() {
        raw[perm[p]] = l;
    }
    let labels = relabel_compact(&raw);
    let centers = inner.partition.centers().map(|cs| {
        let mut out = vec![0; cs.len()];
        for (old, &center) in cs.iter().enumerate() {
            // cluster `old` maps to the new label of any of its members, e.g. its center
            out[labels[perm[center]]] = perm[center];
            debug_assert_eq!(raw[perm[center]], old);
        }
        out
    });
    Ok(Solved {
        partition: Partition::new(labels, centers)?,
        ..inner
    })
}

/// Homogeneous sets for the decomposition pipeline.
pub fn homogeneous_sets(
    d: &DissimilarityMatrix,
    c: &WidthConstraint,
    clique_cap: usize,
    prune: bool,
) -> HomogeneousSetCollection {
    match c.kind {
        WidthKind::Radius => {
            let balls = radius_balls(d, c.threshold);
            if prune {
                prune_dominated(&balls)
            } else {
                balls
            }
        }
        WidthKind::Diameter => maximal_cliques(&build_threshold_graph(d, c.threshold), clique_cap),
    }
}

/// Dispatches to the configured algorithm on `d` as given.
pub fn solve(d: &DissimilarityMatrix, cfg: &RunConfig) -> Result<Solved> {
    let c = cfg.width_constraint()?;
    let time_limit = cfg.time_limit()?;
    let strategy = AssignmentStrategy::for_subobjective(cfg.subobjective);
    match cfg.algorithm {
        Algorithm::EqwGreedy => {
            let mut sets = homogeneous_sets(d, &c, cfg.clique_cap, cfg.prune_balls);
            let truncated = sets.truncated;
            if truncated {
                // a capped clique list may miss elements; singletons are always homogeneous
                let mut seen = vec![false; d.len()];
                for s in &sets.sets {
                    s.members.iter().for_each(|&m| seen[m] = true);
                }
                for e in (0..d.len()).filter(|&e| !seen[e]) {
                    sets.sets.push(HomogeneousSet::new(vec![e], None));
                }
            }
            let cover = greedy_cover(&sets)?;
            Ok(Solved {
                partition: assign_unique(&cover, d, &c, strategy)?,
                proven_optimal: false,
                time_limit_hit: false,
                truncated,
            })
        }
        Algorithm::EqwExact => {
            let sets = homogeneous_sets(d, &c, cfg.clique_cap, cfg.prune_balls);
            let sol = exact_min_cover(&sets, time_limit)?;
            Ok(Solved {
                partition: assign_unique(&sol.cover, d, &c, strategy)?,
                proven_optimal: sol.proven,
                time_limit_hit: !sol.proven,
                truncated: false,
            })
        }
        Algorithm::EqwEnum => {
            let sets = homogeneous_sets(d, &c, cfg.clique_cap, cfg.prune_balls);
            let all = enumerate_min_covers(&sets, cfg.enum_limit, time_limit)?;
            let chosen = select_cover(&all.covers, d, cfg.subobjective)?;
            Ok(Solved {
                partition: assign_unique(chosen, d, &c, strategy)?,
                proven_optimal: all.proven,
                time_limit_hit: all.timed_out,
                truncated: all.limit_hit,
            })
        }
        Algorithm::Hac => Ok(Solved {
            partition: hac_complete_link(d, c.threshold),
            proven_optimal: false,
            time_limit_hit: false,
            truncated: false,
        }),
        Algorithm::Dsatur => {
            let g = complement(&build_threshold_graph(d, c.threshold));
            Ok(Solved {
                partition: coloring_to_partition(&dsatur_heuristic(&g)),
                proven_optimal: false,
                time_limit_hit: false,
                truncated: false,
            })
        }
        Algorithm::ExactColor => {
            let g = complement(&build_threshold_graph(d, c.threshold));
            let sol = exact_coloring_with_order(&g, Some(&fpf_order(d)), time_limit);
            Ok(Solved {
                partition: coloring_to_partition(&sol.coloring),
                proven_optimal: sol.proven,
                time_limit_hit: !sol.proven,
                truncated: false,
            })
        }
        Algorithm::ClusterGraph => {
            let r = clustergraph(d, c.threshold, time_limit)?;
            Ok(Solved {
                partition: r.partition,
                proven_optimal: r.proven,
                time_limit_hit: !r.proven,
                truncated: false,
            })
        }
    }
}

/// A batch of runs, each repeated over the same seeds.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    #[serde(default)]
    pub seeds: Vec<u64>,
    pub runs: Vec<RunConfig>,
}

impl BenchSpec {
    /// Reads a JSON spec; relative input paths resolve against its directory.
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let mut spec: BenchSpec = serde_json::from_reader(std::fs::File::open(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for r in &mut spec.runs {
            if r.input.is_relative() {
                r.input = base.join(&r.input);
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub input: PathBuf,
    pub algorithm: Algorithm,
    pub constraint: WidthKind,
    pub threshold: f64,
    pub seeds: Vec<Option<u64>>,
    pub min_clusters: Option<usize>,
    pub max_clusters: Option<usize>,
    pub mean_duration_s: Option<f64>,
    /// Population standard deviation of the durations.
    pub std_duration_s: Option<f64>,
    pub all_proven: bool,
    pub time_limit_hit: bool,
    pub truncated: bool,
    pub errors: Vec<String>,
}

/// Runs every config once per seed (once unseeded if `seeds` is empty).
/// Failures are recorded in the row and the batch continues.
pub fn bench(spec: &BenchSpec) -> Vec<BenchRow> {
    let seeds: Vec<Option<u64>> = if spec.seeds.is_empty() {
        vec![None]
    } else {
        spec.seeds.iter().copied().map(Some).collect()
    };
    spec.runs
        .iter()
        .map(|cfg| {
            let mut row = BenchRow {
                input: cfg.input.clone(),
                algorithm: cfg.algorithm,
                constraint: cfg.constraint,
                threshold: cfg.threshold,
                seeds: seeds.clone(),
                min_clusters: None,
                max_clusters: None,
                mean_duration_s: None,
                std_duration_s: None,
                all_proven: true,
                time_limit_hit: false,
                truncated: false,
                errors: Vec::new(),
            };
            let matrix = cfg
                .check()
                .and_then(|_| Input::load(cfg))
                .and_then(|i| i.dissimilarities());
            let d = match matrix {
                Ok(d) => d,
                Err(e) => {
                    row.all_proven = false;
                    row.errors.push(e.to_string());
                    return row;
                }
            };
            let mut durations = Vec::new();
            for &seed in &seeds {
                let cfg = RunConfig { seed, ..cfg.clone() };
                match run_on(&d, &cfg) {
                    Ok(r) => {
                        row.min_clusters = Some(row.min_clusters.map_or(r.cluster_count, |m| m.min(r.cluster_count)));
                        row.max_clusters = Some(row.max_clusters.map_or(r.cluster_count, |m| m.max(r.cluster_count)));
                        row.all_proven &= r.proven_optimal;
                        row.time_limit_hit |= r.time_limit_hit;
                        row.truncated |= r.truncated;
                        durations.push(r.duration_s);
                    }
                    Err(e) => {
                        row.all_proven = false;
                        row.errors.push(format!("seed {seed:?}: {e}"));
                    }
                }
            }
            if !durations.is_empty() {
                let mean = durations.iter().sum::<f64>() / durations.len() as f64;
                let var = durations.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / durations.len() as f64;
                row.mean_duration_s = Some(mean);
                row.std_duration_s = Some(var.sqrt());
            }
            row
        })
        .collect()
}

/// 2 if any run was cut short, 1 if every run failed, 0 otherwise.
pub fn bench_exit_code(rows: &[BenchRow]) -> i32 {
    if rows.iter().any(|r| r.time_limit_hit || r.truncated) {
        2
    } else if !rows.is_empty() && rows.iter().all(|r| r.min_clusters.is_none()) {
        1
    } else {
        0
    }
}
