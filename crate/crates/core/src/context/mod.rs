//! Context extraction: window co-occurrences from tagged corpora and
//! structural mention roles from structured documents.

pub mod ids;
pub mod stats;
pub mod structure;
pub mod window;

pub use ids::{ContextId, GeneralContext, RelationalContext};
pub use stats::{GeneralTable, RelationalTable, StructureStats, UnitId};
pub use structure::{annotate_general, annotate_relational, count_structure, StructureConfig};
pub use window::{extract_window_events, ContextConfig, CooccurrenceEvent};
