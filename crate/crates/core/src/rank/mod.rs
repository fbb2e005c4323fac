//! Candidate ranking, evaluation metrics and interchange files.

pub mod eval;
pub mod io;
pub mod metrics;
pub mod scorer;

pub use eval::{evaluate, EvalReport, QueryEval, SkippedQuery};
pub use io::{read_gold, read_predictions, read_queries, write_predictions};
pub use metrics::{average_precision, precision_at_k, reciprocal_rank, PrecisionNorm};
pub use scorer::{top_k, RankedResult, Scorer, DEFAULT_TOP_K};
