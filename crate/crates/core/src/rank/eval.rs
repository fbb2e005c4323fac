use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Result;
use crate::rank::io::check_aligned;
use crate::rank::metrics::{average_precision, precision_at_k, reciprocal_rank, PrecisionNorm};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryEval {
    pub line: usize,
    pub query: String,
    pub ap: f64,
    pub rr: f64,
    pub p_at_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedQuery {
    pub line: usize,
    pub query: String,
}

/// Aggregate and per-query metrics. Means are over queries with a
/// nonempty gold set; the rest are listed in `skipped`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub map: f64,
    pub mrr: f64,
    pub p_at_k: f64,
    pub k: usize,
    pub precision_denominator: &'static str,
    pub evaluated: usize,
    pub skipped: Vec<SkippedQuery>,
    pub rows: Vec<QueryEval>,
}

/// Mean that does not depend on the order of `values`.
fn mean(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    values.into_iter().sum::<f64>() / n
}

pub fn evaluate(
    queries: &[String],
    gold: &[Vec<String>],
    predictions: &[Vec<String>],
    k: usize,
    norm: PrecisionNorm,
) -> Result<EvalReport> {
    check_aligned("gold", queries.len(), gold.len())?;
    check_aligned("prediction", queries.len(), predictions.len())?;
    let k = k.max(1);
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (i, ((q, g), p)) in queries.iter().zip(gold).zip(predictions).enumerate() {
        let g: BTreeSet<String> = g.iter().cloned().collect();
        let (Some(ap), Some(rr), Some(pk)) = (
            average_precision(p, &g),
            reciprocal_rank(p, &g),
            precision_at_k(p, &g, k, norm),
        ) else {
            skipped.push(SkippedQuery {
                line: i + 1,
                query: q.clone(),
            });
            continue;
        };
        rows.push(QueryEval {
            line: i + 1,
            query: q.clone(),
            ap,
            rr,
            p_at_k: pk,
        });
    }
    Ok(EvalReport {
        map: mean(rows.iter().map(|r| r.ap).collect()),
        mrr: mean(rows.iter().map(|r| r.rr).collect()),
        p_at_k: mean(rows.iter().map(|r| r.p_at_k).collect()),
        k,
        precision_denominator: norm.name(),
        evaluated: rows.len(),
        skipped,
        rows,
    })
}
