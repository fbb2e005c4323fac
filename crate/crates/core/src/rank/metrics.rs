//! Ranking metrics against a gold set.

use std::collections::{BTreeSet, HashSet};

/// Denominator of precision at k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecisionNorm {
    /// `min(k, |gold|)`
    #[default]
    Capped,
    /// `k`
    Raw,
}

impl PrecisionNorm {
    pub fn name(self) -> &'static str {
        match self {
            PrecisionNorm::Capped => "min(k,|gold|)",
            PrecisionNorm::Raw => "k",
        }
    }
}

/// Ranks (1-based) of the first occurrence of each gold term.
fn hit_ranks<S: AsRef<str>>(ranked: &[S], gold: &BTreeSet<String>) -> Vec<usize> {
    let mut seen: HashSet<&str> = HashSet::new();
    let mut out = Vec::new();
    for (i, t) in ranked.iter().enumerate() {
        let t = t.as_ref();
        if gold.contains(t) && seen.insert(t) {
            out.push(i + 1);
        }
    }
    out
}

/// `None` when `gold` is empty.
pub fn average_precision<S: AsRef<str>>(ranked: &[S], gold: &BTreeSet<String>) -> Option<f64> {
    if gold.is_empty() {
        return None;
    }
    if ranked.is_empty() {
        return Some(0.0);
    }
    let sum: f64 = hit_ranks(ranked, gold)
        .iter()
        .enumerate()
        .map(|(h, &rank)| (h + 1) as f64 / rank as f64)
        .sum();
    Some(sum / gold.len().min(ranked.len()) as f64)
}

pub fn reciprocal_rank<S: AsRef<str>>(ranked: &[S], gold: &BTreeSet<String>) -> Option<f64> {
    if gold.is_empty() {
        return None;
    }
    Some(hit_ranks(ranked, gold).first().map_or(0.0, |&r| 1.0 / r as f64))
}

/// `None` when `gold` is empty or `k` is zero.
pub fn precision_at_k<S: AsRef<str>>(ranked: &[S], gold: &BTreeSet<String>, k: usize, norm: PrecisionNorm) -> Option<f64> {
    if gold.is_empty() || k == 0 {
        return None;
    }
    let top = &ranked[..k.min(ranked.len())];
    let hits = hit_ranks(top, gold).len();
    let denom = match norm {
        PrecisionNorm::Capped => k.min(gold.len()),
        PrecisionNorm::Raw => k,
    };
    Some(hits as f64 / denom as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gold(terms: &[&str]) -> BTreeSet<String> {
        terms.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn ap_examples() {
        let g = gold(&["g"]);
        assert_eq!(average_precision(&["g", "x"], &g), Some(1.0));
        assert_eq!(average_precision(&["x", "g"], &g), Some(0.5));
        assert_eq!(average_precision(&["x", "y"], &g), Some(0.0));
        assert_eq!(average_precision::<&str>(&[], &g), Some(0.0));
        assert_eq!(average_precision(&["g"], &gold(&[])), None);
    }

    #[test]
    fn ap_counts_duplicates_once() {
        let g = gold(&["a", "b"]);
        assert_eq!(average_precision(&["a", "a", "b"], &g), Some((1.0 + 2.0 / 3.0) / 2.0));
    }

    #[test]
    fn rr_examples() {
        let g = gold(&["g"]);
        assert_eq!(reciprocal_rank(&["x", "y", "g"], &g), Some(1.0 / 3.0));
        assert_eq!(reciprocal_rank(&["x"], &g), Some(0.0));
    }

    #[test]
    fn precision_examples() {
        let g = gold(&["a"]);
        let ranked = ["a", "x", "y", "z", "w"];
        assert_eq!(precision_at_k(&ranked, &g, 5, PrecisionNorm::Capped), Some(1.0));
        assert_eq!(precision_at_k(&ranked, &g, 5, PrecisionNorm::Raw), Some(0.2));
        assert_eq!(precision_at_k(&["x", "y"], &g, 5, PrecisionNorm::Capped), Some(0.0));
        assert_eq!(precision_at_k(&ranked, &g, 0, PrecisionNorm::Capped), None);
    }
}
