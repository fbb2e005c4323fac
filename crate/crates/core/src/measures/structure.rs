//! Structure measures: title and definition counts, relational and general
//! context probabilities, and their weighted combination.

use crate::context::{ContextId, GeneralContext, RelationalContext, StructureStats};
use crate::error::{Error, Result};
use crate::ingest::vocab::TermId;
use crate::measures::config::MeasureConfig;

/// `w3·z2(y) + w4/z2(x)`, with the denominator replaced by 1 when `z2(x) = 0`.
pub fn cde_section(z2x: f64, z2y: f64, cfg: &MeasureConfig) -> f64 {
    let denom = if z2x == 0.0 { 1.0 } else { z2x };
    cfg.w3 * z2y + cfg.w4 / denom
}

/// `w5·z3(y)·log(1 + z3(x))`, or `w5·z3(y)·log z3(x)` without smoothing.
pub fn cde_definition(z3x: f64, z3y: f64, cfg: &MeasureConfig) -> Result<f64> {
    let log = if cfg.log_smoothing {
        z3x.ln_1p()
    } else if z3x >= 1.0 {
        z3x.ln()
    } else {
        return Err(Error::Domain(format!(
            "definition count {z3x} has no logarithm; enable log_smoothing"
        )));
    };
    Ok(cfg.w5 * z3y * log)
}

/// A relational probability and whether `x` ever held the head slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rho {
    pub value: f64,
    pub supported: bool,
}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub(crate) fn relational_ratio(hits: usize, heads: usize) -> Rho {
    if heads == 0 {
        Rho { value: 0.0, supported: false }
    } else {
        Rho {
            value: hits as f64 / heads as f64,
            supported: true,
        }
    }
}

/// Share of the units headed by `x` that hold `y` as an item.
pub fn relational_rho(ctx: RelationalContext, x: TermId, y: TermId, stats: &StructureStats) -> Rho {
    let table = stats.relational(ctx);
    let heads = table.head_units(x);
    relational_ratio(sorted_intersection_len(heads, table.item_units(y)), heads.len())
}

/// Per-unit contribution `c(x)·(1 − min(c(y),0)) / (1 + max(c(y),0))`.
pub fn general_contribution(cx: i8, cy: i8) -> f64 {
    cx as f64 * general_factor(cy)
}

pub(crate) fn general_factor(cy: i8) -> f64 {
    let cy = cy as f64;
    (1.0 - cy.min(0.0)) / (1.0 + cy.max(0.0))
}

/// Sum of [`general_contribution`] over the units where `y` is mentioned.
pub fn general_rho(ctx: GeneralContext, x: TermId, y: TermId, stats: &StructureStats) -> f64 {
    let table = stats.general(ctx);
    let ys = stats.mention_units(y);
    let mut sum = 0.0;
    let mut j = 0;
    for &(unit, cx) in table.term_values(x) {
        while j < ys.len() && ys[j] < unit {
            j += 1;
        }
        if j < ys.len() && ys[j] == unit {
            sum += general_contribution(cx, table.c(unit, y));
        }
    }
    sum
}

/// `n_{i,x}`: head-slot units for relational contexts, `+1` units for general ones.
pub fn context_occurrences(ctx: ContextId, x: TermId, stats: &StructureStats) -> u64 {
    match ctx {
        ContextId::Relational(r) => stats.head_count(r, x),
        ContextId::General(g) => stats.general(g).positive_count(x),
    }
}

pub fn context_rho(ctx: ContextId, x: TermId, y: TermId, stats: &StructureStats) -> f64 {
    match ctx {
        ContextId::Relational(r) => relational_rho(r, x, y, stats).value,
        ContextId::General(g) => general_rho(g, x, y, stats),
    }
}

#[inline]
pub(crate) fn weighted_term(w: f64, f: f64, rho: f64) -> f64 {
    w * f * rho
}

/// Raw `ρ_i(x,y)` for every context, indexed by [`ContextId::slot`].
pub fn rho_by_context(x: TermId, y: TermId, stats: &StructureStats) -> [f64; ContextId::COUNT] {
    let mut out = [0.0; ContextId::COUNT];
    for ctx in ContextId::all() {
        out[ctx.slot()] = context_rho(ctx, x, y, stats);
    }
    out
}

/// `Σ_i w_i · f_i(n_x, n_{i,x}) · ρ_i(x,y)` with `x` as the hypernym.
pub fn combined_rho(x: TermId, y: TermId, stats: &StructureStats, cfg: &MeasureConfig) -> f64 {
    combine(x, &rho_by_context(x, y, stats), stats, cfg)
}

pub(crate) fn combine(x: TermId, rho: &[f64; ContextId::COUNT], stats: &StructureStats, cfg: &MeasureConfig) -> f64 {
    let weights = cfg.context_weight_table();
    let n_x = stats.mentions(x);
    let mut total = 0.0;
    for ctx in ContextId::all() {
        let s = ctx.slot();
        let f = cfg.importance.factor(n_x, context_occurrences(ctx, x, stats));
        total += weighted_term(weights[s], f, rho[s]);
    }
    total
}
