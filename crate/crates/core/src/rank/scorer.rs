//! Scoring one query against every vocabulary term.

use crate::context::{ContextId, GeneralContext, RelationalContext, StructureStats};
use crate::error::Result;
use crate::ingest::vocab::TermId;
use crate::measures::config::MeasureConfig;
use crate::measures::inclusion::{cde_ratio, InclusionMeasure};
use crate::measures::score::{blend, final_score, structure_sum};
use crate::measures::structure::{
    cde_definition, cde_section, context_occurrences, general_factor, relational_ratio, weighted_term,
};
use crate::par;
use crate::space::WeightedSpace;

/// Candidates for one query, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedResult {
    pub query: String,
    pub candidates: Vec<(String, f64)>,
}

impl RankedResult {
    pub fn terms(&self) -> Vec<&str> {
        self.candidates.iter().map(|c| c.0.as_str()).collect()
    }
}

pub const DEFAULT_TOP_K: usize = 100;

fn rank_order(a: &(String, f64), b: &(String, f64)) -> std::cmp::Ordering {
    b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0))
}

/// The best `k` by score, ties broken by term.
pub fn top_k(query: &str, mut scores: Vec<(String, f64)>, k: usize) -> RankedResult {
    if k == 0 {
        scores.clear();
    } else if scores.len() > k {
        scores.select_nth_unstable_by(k - 1, rank_order);
        scores.truncate(k);
    }
    scores.sort_unstable_by(rank_order);
    RankedResult {
        query: query.to_string(),
        candidates: scores,
    }
}

/// Scores queries against the whole vocabulary of `stats`.
///
/// Inclusion overlaps are accumulated by walking the feature columns of the
/// query vector once; context probabilities by walking the units that mention
/// the query. Both paths sum in the same order as [`final_score`], so
/// [`Scorer::score_all`] and [`Scorer::score_pairwise`] agree bit for bit.
pub struct Scorer<'a> {
    space: &'a WeightedSpace,
    stats: &'a StructureStats,
    cfg: &'a MeasureConfig,
    measure: InclusionMeasure,
    row_of: Vec<Option<u32>>,
    row_sums: Vec<f64>,
    weights: [f64; ContextId::COUNT],
}

impl<'a> Scorer<'a> {
    pub fn new(
        space: &'a WeightedSpace,
        stats: &'a StructureStats,
        cfg: &'a MeasureConfig,
        measure: InclusionMeasure,
    ) -> Result<Self> {
        cfg.validate()?;
        let row_of = stats.terms().iter().map(|t| space.term_row(t).map(|r| r as u32)).collect();
        let row_sums = (0..space.terms().len())
            .map(|r| {
                let v = space.row_vector(r);
                crate::measures::inclusion::check_nonnegative(&v).map(|_| v.sum())
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Scorer {
            space,
            stats,
            cfg,
            measure,
            row_of,
            row_sums,
            weights: cfg.context_weight_table(),
        })
    }

    pub fn measure(&self) -> InclusionMeasure {
        self.measure
    }

    /// Reference path: one [`final_score`] call per candidate.
    pub fn score_pairwise(&self, query: &str) -> Result<Vec<(String, f64)>> {
        self.stats
            .terms()
            .iter()
            .filter(|t| t.as_str() != query)
            .map(|t| {
                final_score(query, t, self.space, self.stats, self.cfg, self.measure).map(|s| (t.clone(), s.final_score))
            })
            .collect()
    }

    /// One score per vocabulary term other than `query`, in vocabulary order.
    pub fn score_all(&self, query: &str) -> Result<Vec<(String, f64)>> {
        let n = self.stats.terms().len();
        let qi = self.stats.term_id(query);

        let qvec = self.space.context_vector(query);
        let qsum = qvec.sum();
        let mut overlap = vec![0.0f64; self.space.terms().len()];
        for &(f, wq) in qvec.entries() {
            let (rows, vals) = self.space.column(f);
            for (&r, &w) in rows.iter().zip(vals) {
                overlap[r as usize] += wq.min(w);
            }
        }

        let rho = match qi {
            Some(q) => self.combined_rho_against(q, n),
            None => vec![0.0; n],
        };

        let count = |f: fn(&StructureStats, TermId) -> u64, id: Option<TermId>| id.map_or(0.0, |t| f(self.stats, t) as f64);
        let z2q = count(StructureStats::section_title_count, qi);
        let z3q = count(StructureStats::definition_count, qi);
        // Surfaces the domain error even when the vocabulary has no other term.
        cde_definition(z3q, 0.0, self.cfg)?;

        let mut out = Vec::with_capacity(n.saturating_sub(1));
        for (c, term) in self.stats.terms().iter().enumerate() {
            if Some(c as TermId) == qi || (qi.is_none() && term == query) {
                continue;
            }
            let (cde_qc, cde_cq) = match self.row_of[c] {
                Some(r) => {
                    let o = overlap[r as usize];
                    (cde_ratio(o, qsum), cde_ratio(o, self.row_sums[r as usize]))
                }
                None => (cde_ratio(0.0, qsum), 0.0),
            };
            let inclusion = self.measure.from_cde(cde_qc, cde_cq);
            let section = cde_section(z2q, self.stats.section_title_count(c as TermId) as f64, self.cfg);
            let definition = cde_definition(z3q, self.stats.definition_count(c as TermId) as f64, self.cfg)?;
            let structure = structure_sum(rho[c], section, definition);
            out.push((term.clone(), blend(inclusion, structure, self.cfg.alpha)));
        }
        Ok(out)
    }

    /// `combined_rho(c, q)` for every term `c`.
    fn combined_rho_against(&self, q: TermId, n: usize) -> Vec<f64> {
        let mut total = vec![0.0f64; n];
        let mut acc = vec![0.0f64; n];
        let mut hits = vec![0usize; n];
        let mut touched: Vec<TermId> = Vec::new();
        let mut seen = vec![false; n];

        let mut flush = |ctx: ContextId, touched: &mut Vec<TermId>, value_of: &mut dyn FnMut(TermId) -> f64| {
            let w = self.weights[ctx.slot()];
            for &t in touched.iter() {
                let f = self.cfg.importance.factor(self.stats.mentions(t), context_occurrences(ctx, t, self.stats));
                total[t as usize] += weighted_term(w, f, value_of(t));
            }
        };

        for ctx in RelationalContext::ALL {
            let table = self.stats.relational(ctx);
            for &u in table.item_units(q) {
                for &h in table.heads_in(u) {
                    if !seen[h as usize] {
                        seen[h as usize] = true;
                        touched.push(h);
                    }
                    hits[h as usize] += 1;
                }
            }
            flush(ContextId::Relational(ctx), &mut touched, &mut |t| {
                relational_ratio(hits[t as usize], table.head_units(t).len()).value
            });
            for &t in &touched {
                hits[t as usize] = 0;
                seen[t as usize] = false;
            }
            touched.clear();
        }

        for ctx in GeneralContext::ALL {
            let table = self.stats.general(ctx);
            for &u in self.stats.mention_units(q) {
                let g = general_factor(table.c(u, q));
                for &(t, cx) in table.unit_values(u) {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        touched.push(t);
                    }
                    acc[t as usize] += cx as f64 * g;
                }
            }
            flush(ContextId::General(ctx), &mut touched, &mut |t| acc[t as usize]);
            for &t in &touched {
                acc[t as usize] = 0.0;
                seen[t as usize] = false;
            }
            touched.clear();
        }
        total
    }

    pub fn rank(&self, query: &str, k: usize) -> Result<RankedResult> {
        Ok(top_k(query, self.score_all(query)?, k))
    }

    /// Ranks every query; output order follows `queries`.
    pub fn rank_all<S: AsRef<str> + Sync>(&self, queries: &[S], k: usize) -> Result<Vec<RankedResult>> {
        par::map(queries, |q| self.rank(q.as_ref(), k)).into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{count_structure, StructureConfig};
    use crate::ingest::markdown::parse_markdown;
    use crate::ingest::vocab::Vocabulary;
    use crate::space::{weight, MatrixBuilder, Weighting};

    fn scores(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
        pairs.iter().map(|&(t, s)| (t.to_string(), s)).collect()
    }

    #[test]
    fn top_k_examples() {
        assert_eq!(top_k("q", scores(&[("a", 1.0), ("b", 2.0)]), 1).terms(), ["b"]);
        assert_eq!(top_k("q", scores(&[("b", 1.0), ("a", 1.0)]), 2).terms(), ["a", "b"]);
        assert_eq!(top_k("q", scores(&[("a", 1.0)]), 5).candidates.len(), 1);
        assert!(top_k("q", scores(&[("a", 1.0)]), 0).candidates.is_empty());
    }

    fn toy() -> (WeightedSpace, StructureStats) {
        let vocab = Vocabulary::from_terms(["animal", "dog", "cat"], 1, 0).unwrap();
        let docs = [
            parse_markdown("a", "# Animal\n\nAnimal kinds:\n- dog\n- cat\n"),
            parse_markdown("b", "A DOG (cat) is here?\n"),
        ];
        let stats = count_structure(&docs, &vocab, &StructureConfig::default());
        let mut b = MatrixBuilder::new();
        for (t, f, n) in [("dog", "bark", 2), ("dog", "pet", 1), ("animal", "pet", 3), ("cat", "pet", 1), ("cat", "meow", 4)] {
            b.add(t, f, n);
        }
        (weight(&b.finish(), Weighting::Ppmi).unwrap(), stats)
    }

    #[test]
    fn vectorized_matches_pairwise() {
        let (space, stats) = toy();
        for measure in InclusionMeasure::ALL {
            for alpha in [0.0, 0.3, 1.0] {
                let cfg = MeasureConfig { alpha, ..MeasureConfig::default() };
                let s = Scorer::new(&space, &stats, &cfg, measure).unwrap();
                for q in ["animal", "dog", "cat", "unseen"] {
                    assert_eq!(s.score_all(q).unwrap(), s.score_pairwise(q).unwrap(), "{q} {measure} {alpha}");
                }
            }
        }
    }

    #[test]
    fn self_excluded() {
        let vocab = Vocabulary::from_terms(["solo"], 1, 0).unwrap();
        let stats = StructureStats::new(&vocab);
        let space = weight(&MatrixBuilder::new().finish(), Weighting::Freq).unwrap();
        let cfg = MeasureConfig::default();
        let s = Scorer::new(&space, &stats, &cfg, InclusionMeasure::ClarkeDe).unwrap();
        assert!(s.score_all("solo").unwrap().is_empty());
    }

    #[test]
    fn unseen_query_with_zero_stats() {
        let vocab = Vocabulary::from_terms(["aa", "bb"], 1, 0).unwrap();
        let stats = StructureStats::new(&vocab);
        let space = weight(&MatrixBuilder::new().finish(), Weighting::Freq).unwrap();
        let cfg = MeasureConfig { w4: 0.0, ..MeasureConfig::default() };
        let s = Scorer::new(&space, &stats, &cfg, InclusionMeasure::InvCl).unwrap();
        assert!(s.score_all("zz").unwrap().iter().all(|c| c.1 == 0.0));
        let cfg = MeasureConfig::default();
        let s = Scorer::new(&space, &stats, &cfg, InclusionMeasure::InvCl).unwrap();
        assert!(s.score_all("zz").unwrap().iter().all(|c| c.1 == 0.5 * cfg.w4));
    }

    #[test]
    fn hypernym_ranks_first() {
        let (space, stats) = toy();
        let cfg = MeasureConfig::default();
        let s = Scorer::new(&space, &stats, &cfg, InclusionMeasure::ClarkeDe).unwrap();
        assert_eq!(s.rank("dog", 1).unwrap().terms(), ["animal"]);
        let all = s.rank_all(&["dog", "cat"], 10).unwrap();
        assert_eq!(all[1].query, "cat");
        assert_eq!(all[1].candidates[0].0, "animal");
    }

    #[test]
    fn negative_weights_rejected() {
        let (_, stats) = toy();
        let mut b = MatrixBuilder::new();
        b.add("dog", "a", 1);
        b.add("cat", "b", 1);
        b.add("cat", "a", 5);
        let pmi = weight(&b.finish(), Weighting::Pmi).unwrap();
        let cfg = MeasureConfig::default();
        assert!(Scorer::new(&pmi, &stats, &cfg, InclusionMeasure::ClarkeDe).is_err());
    }
}
