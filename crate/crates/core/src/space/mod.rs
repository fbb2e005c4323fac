//! Distributional space: co-occurrence accumulation, feature weighting and
//! binary persistence.

pub mod io;
pub mod matrix;
pub mod weighting;

pub use io::{read_space, write_space, SpaceSidecar};
pub use matrix::{accumulate, build_matrix, CooccurrenceMatrix, MatrixBuilder};
pub use weighting::{pmi, weight, ContextVector, WeightedSpace, Weighting};
