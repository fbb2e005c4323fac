//! Brute-force reference implementations written from the definitions.

use std::collections::BTreeMap;

use hyperdoc_core::context::{ContextConfig, ContextId, GeneralContext, RelationalContext, StructureStats};
use hyperdoc_core::ingest::corpus::TokenizedCorpus;
use hyperdoc_core::measures::{InclusionMeasure, Importance, MeasureConfig};
use hyperdoc_core::space::WeightedSpace;

/// Greedy longest match, spelled out independently of the library.
pub fn oracle_matches(lemmas: &[&str], terms: &[String]) -> Vec<(String, usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < lemmas.len() {
        let two = (i + 1 < lemmas.len()).then(|| format!("{} {}", lemmas[i], lemmas[i + 1]));
        if let Some(t) = two.filter(|t| terms.contains(t)) {
            out.push((t, i, i + 2));
            i += 2;
        } else if terms.iter().any(|t| t == lemmas[i]) {
            out.push((lemmas[i].to_string(), i, i + 1));
            i += 1;
        } else {
            i += 1;
        }
    }
    out
}

pub fn oracle_events(corpus: &TokenizedCorpus, terms: &[String], cfg: &ContextConfig) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for s in corpus.sentences() {
        let lemmas: Vec<&str> = s.iter().map(|t| t.lemma.as_str()).collect();
        for (term, start, end) in oracle_matches(&lemmas, terms) {
            for (j, tok) in s.iter().enumerate() {
                let side = if j < start && start - j <= cfg.window_size {
                    "L:"
                } else if j >= end && j - end < cfg.window_size {
                    "R:"
                } else {
                    continue;
                };
                if !cfg.pos_filter.contains(&tok.pos) {
                    continue;
                }
                let f = if cfg.directional { format!("{side}{}", tok.lemma) } else { tok.lemma.clone() };
                out.push((term.clone(), f));
            }
        }
    }
    out.sort();
    out
}

pub fn brute_relational(stats: &StructureStats, ctx: RelationalContext, x: u32, y: u32) -> f64 {
    let t = stats.relational(ctx);
    let (mut num, mut den) = (0u32, 0u32);
    for j in 0..t.units() {
        num += (t.a(j, x) * t.b(j, y)) as u32;
        den += t.a(j, x) as u32;
    }
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn brute_general(stats: &StructureStats, ctx: GeneralContext, x: u32, y: u32) -> f64 {
    let t = stats.general(ctx);
    let mut sum = 0.0;
    for j in 0..stats.general_units() {
        if !stats.is_mentioned_in(j, y) {
            continue;
        }
        let (cx, cy) = (t.c(j, x) as f64, t.c(j, y) as f64);
        sum += cx * (1.0 - cy.min(0.0)) / (1.0 + cy.max(0.0));
    }
    sum
}

pub fn dense(space: &WeightedSpace, term: &str) -> BTreeMap<u32, f64> {
    space.context_vector(term).entries().iter().copied().collect()
}

pub fn oracle_cde(x: &BTreeMap<u32, f64>, y: &BTreeMap<u32, f64>) -> f64 {
    let total: f64 = x.values().sum();
    if total == 0.0 {
        return 0.0;
    }
    x.iter().map(|(f, w)| y.get(f).map_or(0.0, |v| w.min(*v))).sum::<f64>() / total
}

/// Full score written out from the definitions, with brute-force context
/// probabilities.
pub fn oracle_score(q: &str, c: &str, space: &WeightedSpace, stats: &StructureStats, cfg: &MeasureConfig, m: InclusionMeasure) -> f64 {
    let (vq, vc) = (dense(space, q), dense(space, c));
    let (qc, cq) = (oracle_cde(&vq, &vc), oracle_cde(&vc, &vq));
    let inclusion = match m {
        InclusionMeasure::ClarkeDe => qc,
        InclusionMeasure::InvCl => (qc * (1.0 - qc)).sqrt(),
        InclusionMeasure::InvClRev => (qc * (1.0 - cq)).sqrt(),
    };
    let (qi, ci) = (stats.term_id(q), stats.term_id(c));
    let mut rho = 0.0;
    if let (Some(qi), Some(ci)) = (qi, ci) {
        let n_x = stats.mentions(ci) as f64;
        for ctx in ContextId::all() {
            let (r, n_ix) = match ctx {
                ContextId::Relational(k) => (brute_relational(stats, k, ci, qi), stats.relational(k).head_units(ci).len() as f64),
                ContextId::General(k) => (
                    brute_general(stats, k, ci, qi),
                    stats.general(k).term_values(ci).iter().filter(|v| v.1 == 1).count() as f64,
                ),
            };
            let f = match cfg.importance {
                Importance::Constant => 1.0,
                Importance::Ratio => if n_x == 0.0 { 0.0 } else { n_ix / n_x },
            };
            rho += cfg.context_weight(ctx) * f * r;
        }
    }
    let z = |id: Option<u32>, f: fn(&StructureStats, u32) -> u64| id.map_or(0.0, |t| f(stats, t) as f64);
    let z2q = z(qi, StructureStats::section_title_count);
    let section = cfg.w3 * z(ci, StructureStats::section_title_count) + cfg.w4 / if z2q == 0.0 { 1.0 } else { z2q };
    let definition = cfg.w5 * z(ci, StructureStats::definition_count) * (1.0 + z(qi, StructureStats::definition_count)).ln();
    cfg.alpha * inclusion + (1.0 - cfg.alpha) * (rho + section + definition)
}
