//! Hypernymy measures.
//!
//! Argument order follows the two families: inclusion measures take
//! `(hyponym, hypernym)`, context probabilities take `(hypernym, hyponym)`.

pub mod config;
pub mod inclusion;
pub mod score;
pub mod structure;

pub use config::{Importance, MeasureConfig};
pub use inclusion::{clarke_de, inv_cl, inv_cl_rev, InclusionMeasure};
pub use score::{final_score, ScoreBreakdown};
pub use structure::{
    cde_definition, cde_section, combined_rho, context_occurrences, general_contribution, general_rho,
    relational_rho, rho_by_context, Rho,
};
