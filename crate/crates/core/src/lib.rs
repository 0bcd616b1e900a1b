//! Equiwide clustering.
//!
//! Partition a finite population into the fewest clusters such that every
//! cluster's width (diameter or radius) stays within a dissimilarity
//! threshold. The exact pipeline runs in three steps:
//!
//! 1. enumerate maximal homogeneous sets ([`homoset`]),
//! 2. find a minimum-cardinality set cover of the population ([`cover`]),
//! 3. resolve elements that sit in several chosen sets ([`assign`]).
//!
//! [`baselines`] holds the comparison algorithms (complete-link HAC, DSATUR
//! colouring, exact colouring, CLUSTERGRAPH) and [`pipeline`] wires
//! everything behind a single [`pipeline::run`] entry point.

pub mod assign;
pub mod baselines;
mod bitset;
pub mod cover;
pub mod dissim;
mod error;
pub mod graph;
pub mod homoset;
pub mod io;
pub mod model;
pub mod pipeline;

pub use bitset::BitSet;
pub use error::{Error, Result};
pub use model::{DissimilarityMatrix, HomogeneousSet, Partition, PartitionMetrics, WidthConstraint, WidthKind};
