mod common;

use std::collections::BTreeSet;

use hyperdoc_core::context::{count_structure, ContextConfig, StructureConfig};
use hyperdoc_core::ingest::parse_markdown;
use hyperdoc_core::measures::{clarke_de, general_contribution, inv_cl, inv_cl_rev, InclusionMeasure, MeasureConfig};
use hyperdoc_core::pii::pii_score;
use hyperdoc_core::rank::{average_precision, evaluate, precision_at_k, reciprocal_rank, top_k, PrecisionNorm, Scorer};
use hyperdoc_core::space::{build_matrix, read_space, weight, write_space, ContextVector, MatrixBuilder, Weighting};
use proptest::prelude::*;

fn vector() -> impl Strategy<Value = ContextVector> {
    prop::collection::vec((0u32..40, 0.0f64..100.0), 0..30).prop_map(ContextVector::from_pairs)
}

proptest! {
    #[test]
    fn inclusion_measures_are_bounded(x in vector(), y in vector()) {
        let c = clarke_de(&x, &y).unwrap();
        prop_assert!((0.0..=1.0).contains(&c));
        let i = inv_cl(&x, &y).unwrap();
        prop_assert!((0.0..=0.5).contains(&i));
        prop_assert_eq!(i == 0.0, c == 0.0 || c == 1.0);
        let r = inv_cl_rev(&x, &y).unwrap();
        prop_assert!((0.0..=1.0).contains(&r));
    }

    #[test]
    fn self_inclusion_is_total(x in vector()) {
        let c = clarke_de(&x, &x).unwrap();
        prop_assert_eq!(c, if x.is_empty() { 0.0 } else { 1.0 });
        prop_assert_eq!(inv_cl(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn accumulation_ignores_event_order(
        events in prop::collection::vec((0usize..5, 0usize..6, 1u64..4), 0..40),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        let build = |ev: &[(usize, usize, u64)]| {
            let mut b = MatrixBuilder::new();
            for &(t, f, n) in ev {
                b.add(&format!("t{t}"), &format!("f{f}"), n);
            }
            b.finish()
        };
        let a = build(&events);
        let mut shuffled = events.clone();
        shuffled.shuffle(&mut common::rng(seed));
        let b = build(&shuffled);
        prop_assert_eq!(a.triples(), b.triples());
        prop_assert_eq!(a.total(), events.iter().map(|e| e.2).sum::<u64>());
    }

    #[test]
    fn ppmi_is_nonnegative_and_within_count_support(
        events in prop::collection::vec((0usize..6, 0usize..6, 1u64..5), 1..50),
    ) {
        let mut b = MatrixBuilder::new();
        for &(t, f, n) in &events {
            b.add(&format!("t{t}"), &format!("f{f}"), n);
        }
        let m = b.finish();
        let s = weight(&m, Weighting::Ppmi).unwrap();
        for t in m.terms() {
            for &(f, w) in s.context_vector(t).entries() {
                prop_assert!(w > 0.0);
                prop_assert!(m.get(t, &m.features()[f as usize]) > 0);
            }
        }
        prop_assert_eq!(&s, &weight(&m, Weighting::Ppmi).unwrap());
        let mut buf = Vec::new();
        write_space(&s, &mut buf).unwrap();
        prop_assert_eq!(read_space(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn uniform_counts_give_empty_ppmi(rows in 1usize..6, cols in 1usize..6, n in 1u64..9) {
        let mut b = MatrixBuilder::new();
        for t in 0..rows {
            for f in 0..cols {
                b.add(&format!("t{t}"), &format!("f{f}"), n);
            }
        }
        prop_assert_eq!(weight(&b.finish(), Weighting::Ppmi).unwrap().nnz(), 0);
    }

    #[test]
    fn metrics_are_bounded(
        ranked in prop::collection::vec(0u8..20, 0..30),
        gold in prop::collection::btree_set(0u8..20, 1..6),
        k in 1usize..10,
    ) {
        let ranked: Vec<String> = ranked.iter().map(|t| t.to_string()).collect();
        let gold: BTreeSet<String> = gold.iter().map(|t| t.to_string()).collect();
        for v in [
            average_precision(&ranked, &gold).unwrap(),
            reciprocal_rank(&ranked, &gold).unwrap(),
            precision_at_k(&ranked, &gold, k, PrecisionNorm::Capped).unwrap(),
            precision_at_k(&ranked, &gold, k, PrecisionNorm::Raw).unwrap(),
        ] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn irrelevant_candidate_below_k_changes_nothing_at_k(
        ranked in prop::collection::vec(0u8..20, 0..15),
        gold in prop::collection::btree_set(0u8..20, 1..6),
        k in 1usize..10,
    ) {
        let ranked: Vec<String> = ranked.iter().map(|t| t.to_string()).collect();
        let gold: BTreeSet<String> = gold.iter().map(|t| t.to_string()).collect();
        let mut longer = ranked.clone();
        while longer.len() < k {
            longer.push(format!("pad{}", longer.len()));
        }
        let base = longer.clone();
        longer.push("irrelevant".into());
        let p = |r: &[String]| precision_at_k(r, &gold, k, PrecisionNorm::Capped).unwrap();
        prop_assert_eq!(p(&base), p(&longer));
        prop_assert_eq!(reciprocal_rank(&base, &gold), reciprocal_rank(&longer, &gold));
        if base.len() >= gold.len() {
            prop_assert_eq!(average_precision(&base, &gold), average_precision(&longer, &gold));
        }
    }

    #[test]
    fn evaluation_ignores_query_order(
        rows in prop::collection::vec(
            (prop::collection::vec(0u8..8, 0..8), prop::collection::vec(0u8..8, 0..4)),
            1..12,
        ),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        let to_s = |v: &[u8]| v.iter().map(|t| t.to_string()).collect::<Vec<_>>();
        let mut entries: Vec<(String, Vec<String>, Vec<String>)> = rows
            .iter()
            .enumerate()
            .map(|(i, (p, g))| (format!("q{i}"), to_s(g), to_s(p)))
            .collect();
        let run = |e: &[(String, Vec<String>, Vec<String>)]| {
            let q: Vec<String> = e.iter().map(|r| r.0.clone()).collect();
            let g: Vec<Vec<String>> = e.iter().map(|r| r.1.clone()).collect();
            let p: Vec<Vec<String>> = e.iter().map(|r| r.2.clone()).collect();
            evaluate(&q, &g, &p, 5, PrecisionNorm::Capped).unwrap()
        };
        let a = run(&entries);
        entries.shuffle(&mut common::rng(seed));
        let b = run(&entries);
        prop_assert_eq!((a.map, a.mrr, a.p_at_k, a.evaluated), (b.map, b.mrr, b.p_at_k, b.evaluated));
    }

    #[test]
    fn top_k_is_sorted_prefix(scores in prop::collection::vec(0u8..10, 0..60), k in 1usize..30) {
        let scores: Vec<(String, f64)> = scores.iter().enumerate().map(|(i, &s)| (format!("t{i:02}"), s as f64)).collect();
        let n = scores.len();
        let r = top_k("q", scores, k);
        prop_assert_eq!(r.candidates.len(), k.min(n));
        for w in r.candidates.windows(2) {
            prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
        }
    }

    #[test]
    fn pii_score_is_monotone(bits in prop::array::uniform8(0u8..2), weights in prop::array::uniform8(0.0f64..5.0), which in 0usize..8, threshold in 0.0f64..10.0) {
        let (s, flag) = pii_score(&bits, &weights, threshold);
        let mut more = bits;
        more[which] = 1;
        let (s2, flag2) = pii_score(&more, &weights, threshold);
        prop_assert!(s2 >= s);
        prop_assert!(flag2 || !flag);
        prop_assert_eq!(flag, s >= threshold);
    }
}

#[test]
fn general_contribution_enumeration() {
    let allowed = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
    let mut table = Vec::new();
    for cx in [-1i8, 0, 1] {
        for cy in [-1i8, 0, 1] {
            let v = general_contribution(cx, cy);
            assert!(allowed.contains(&v), "({cx},{cy}) -> {v}");
            table.push(v);
        }
    }
    assert_eq!(table, [-2.0, -1.0, -0.5, 0.0, 0.0, 0.0, 2.0, 1.0, 0.5]);
}

fn scaled(cfg: &MeasureConfig, lambda: f64) -> MeasureConfig {
    let mut out = cfg.clone();
    for c in hyperdoc_core::context::ContextId::all() {
        out.context_weights.insert(c.name().to_string(), cfg.context_weight(c) * lambda);
    }
    out.w3 *= lambda;
    out.w4 *= lambda;
    out.w5 *= lambda;
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scaling_structure_weights_keeps_ranking(seed in any::<u64>(), exp in -4i32..5, lambda in 0.01f64..100.0) {
        let mut r = common::rng(seed);
        let terms = common::terms(20);
        let vocab = common::vocab(&terms);
        let docs: Vec<_> = (0..3).map(|i| parse_markdown(&format!("m{i}"), &common::markdown(&mut r, &terms))).collect();
        let stats = count_structure(&docs, &vocab, &StructureConfig::default());
        let corpus = common::corpus(&mut r, &terms, 400);
        let m = build_matrix(&corpus, &vocab, &ContextConfig::default());
        let space = weight(&m, Weighting::Freq).unwrap();
        let base = MeasureConfig { alpha: 0.0, ..MeasureConfig::default() };
        let s0 = Scorer::new(&space, &stats, &base, InclusionMeasure::ClarkeDe).unwrap();
        let pow2 = scaled(&base, 2f64.powi(exp));
        let s1 = Scorer::new(&space, &stats, &pow2, InclusionMeasure::ClarkeDe).unwrap();
        let any = scaled(&base, lambda);
        let s2 = Scorer::new(&space, &stats, &any, InclusionMeasure::ClarkeDe).unwrap();
        for q in terms.iter().take(5) {
            let a = s0.score_all(q).unwrap();
            let b = s1.score_all(q).unwrap();
            let c = s2.score_all(q).unwrap();
            let (ra, rb) = (top_k(q, a.clone(), 100), top_k(q, b.clone(), 100));
            prop_assert_eq!(ra.terms(), rb.terms());
            for ((x, y), z) in a.iter().zip(&b).zip(&c) {
                prop_assert_eq!(x.1 * 2f64.powi(exp), y.1);
                prop_assert!((x.1 * lambda - z.1).abs() <= 1e-12 * (x.1 * lambda).abs().max(1.0));
            }
        }
    }
}
