//! Document-structure-aware hypernym discovery.
//!
//! The pipeline ingests tagged corpora and structured documents
//! ([`ingest`]), extracts window co-occurrences and structural mention roles
//! ([`context`]), builds weighted sparse context spaces ([`space`]), scores
//! candidate hypernyms with inclusion and structure measures ([`measures`]),
//! and ranks and evaluates them ([`rank`]). [`pii`] reuses the structural
//! machinery to flag personal-data spans.

pub mod context;
pub mod error;
pub mod ingest;
pub mod measures;
pub mod par;
pub mod pii;
pub mod rank;
pub mod space;

pub use error::{Error, Result};
