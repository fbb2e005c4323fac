use serde::Serialize;

use crate::context::{ContextId, StructureStats};
use crate::error::Result;
use crate::ingest::vocab::TermId;
use crate::measures::config::MeasureConfig;
use crate::measures::inclusion::InclusionMeasure;
use crate::measures::structure::{cde_definition, cde_section, combine, rho_by_context};
use crate::space::WeightedSpace;

/// Components of one (hyponym, hypernym) score.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreBreakdown {
    pub inclusion: f64,
    /// Raw `ρ_i(hypernym, hyponym)` indexed by [`ContextId::slot`].
    pub rho: Vec<f64>,
    pub combined_rho: f64,
    pub section: f64,
    pub definition: f64,
    pub structure: f64,
    #[serde(rename = "final")]
    pub final_score: f64,
}

impl ScoreBreakdown {
    pub fn rho_of(&self, ctx: ContextId) -> f64 {
        self.rho[ctx.slot()]
    }
}

#[inline]
pub(crate) fn blend(inclusion: f64, structure: f64, alpha: f64) -> f64 {
    alpha * inclusion + (1.0 - alpha) * structure
}

#[inline]
pub(crate) fn structure_sum(rho: f64, section: f64, definition: f64) -> f64 {
    rho + section + definition
}

fn count(stats: &StructureStats, id: Option<TermId>, f: impl Fn(&StructureStats, TermId) -> u64) -> f64 {
    id.map_or(0.0, |t| f(stats, t) as f64)
}

/// Scores `y` as a hypernym of `x`.
///
/// The inclusion measure sees `(x, y)`; the context probabilities see
/// `(y, x)` since their first argument is the hypernym. Terms missing from the
/// space or the stats contribute empty vectors and zero counts.
pub fn final_score(
    x: &str,
    y: &str,
    space: &WeightedSpace,
    stats: &StructureStats,
    cfg: &MeasureConfig,
    measure: InclusionMeasure,
) -> Result<ScoreBreakdown> {
    let inclusion = measure.apply(&space.context_vector(x), &space.context_vector(y))?;
    let (xi, yi) = (stats.term_id(x), stats.term_id(y));
    let (rho, combined_rho) = match (xi, yi) {
        (Some(xi), Some(yi)) => {
            let rho = rho_by_context(yi, xi, stats);
            let c = combine(yi, &rho, stats, cfg);
            (rho.to_vec(), c)
        }
        _ => (vec![0.0; ContextId::COUNT], 0.0),
    };
    let section = cde_section(
        count(stats, xi, StructureStats::section_title_count),
        count(stats, yi, StructureStats::section_title_count),
        cfg,
    );
    let definition = cde_definition(
        count(stats, xi, StructureStats::definition_count),
        count(stats, yi, StructureStats::definition_count),
        cfg,
    )?;
    let structure = structure_sum(combined_rho, section, definition);
    Ok(ScoreBreakdown {
        inclusion,
        rho,
        combined_rho,
        section,
        definition,
        structure,
        final_score: blend(inclusion, structure, cfg.alpha),
    })
}
