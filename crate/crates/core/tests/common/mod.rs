#![allow(dead_code)]

pub mod oracle;

use hyperdoc_core::ingest::corpus::{CorpusDocument, Pos, Token, TokenizedCorpus};
use hyperdoc_core::ingest::Vocabulary;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    TestRng::seed_from_u64(seed)
}

const FILLER: [&str; 12] = [
    "the", "of", "and", "runs", "large", "small", "makes", "with", "city", "green", "is", "music",
];

/// Term list of `n` entries: single words `wNN`, every fifth one a bigram.
pub fn terms(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if i % 5 == 4 { format!("w{:02} w{:02}", i - 1, i) } else { format!("w{i:02}") })
        .collect()
}

pub fn vocab(terms: &[String]) -> Vocabulary {
    Vocabulary::from_terms(terms.iter().map(String::as_str), 1, 0).unwrap()
}

fn random_pos(rng: &mut TestRng) -> Pos {
    *[Pos::Noun, Pos::Noun, Pos::Verb, Pos::Adj, Pos::Other].choose(rng).unwrap()
}

/// A corpus of at most `max_tokens` tokens whose lemmas mix vocabulary words
/// and filler.
pub fn corpus(rng: &mut TestRng, terms: &[String], max_tokens: usize) -> TokenizedCorpus {
    let words: Vec<&str> = terms.iter().flat_map(|t| t.split(' ')).collect();
    let total = rng.gen_range(1..=max_tokens);
    let mut documents = Vec::new();
    let mut left = total;
    let mut d = 0;
    while left > 0 {
        let mut doc = CorpusDocument {
            id: format!("d{d}"),
            sentences: Vec::new(),
        };
        d += 1;
        for _ in 0..rng.gen_range(1..6) {
            if left == 0 {
                break;
            }
            let len = rng.gen_range(1..=left.min(25));
            left -= len;
            let sentence = (0..len)
                .map(|_| {
                    let lemma = if rng.gen_bool(0.5) { *words.choose(rng).unwrap() } else { *FILLER.choose(rng).unwrap() };
                    Token::new(lemma, lemma, random_pos(rng))
                })
                .collect();
            doc.sentences.push(sentence);
        }
        documents.push(doc);
    }
    TokenizedCorpus { documents }
}

fn phrase(rng: &mut TestRng, terms: &[String], len: usize) -> String {
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                terms.choose(rng).unwrap().clone()
            } else {
                FILLER.choose(rng).unwrap().to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Markdown that exercises every structural cue the parser knows.
pub fn markdown(rng: &mut TestRng, terms: &[String]) -> String {
    let mut out = String::new();
    for _ in 0..rng.gen_range(1..8) {
        let p = |rng: &mut TestRng, n| phrase(rng, terms, n);
        let pick = |rng: &mut TestRng| terms.choose(rng).unwrap().clone();
        match rng.gen_range(0..14) {
            0 => out.push_str(&format!("{} {}\n\n", "#".repeat(rng.gen_range(1..4)), p(rng, 2))),
            1 => {
                out.push_str(&format!("{}:\n", p(rng, 3)));
                for _ in 0..rng.gen_range(1..4) {
                    out.push_str(&format!("- {}\n", p(rng, 2)));
                }
                out.push('\n');
            }
            2 => out.push_str(&format!("{} ({}) {}.\n\n", p(rng, 2), p(rng, 2), p(rng, 1))),
            3 => out.push_str(&format!("see [{}](https://example.org/{}/{})\n\n", pick(rng), pick(rng).replace(' ', "-"), pick(rng).replace(' ', "-"))),
            4 => out.push_str(&format!("{}[^1] {}\n\n[^1]: {}\n\n", pick(rng), p(rng, 2), p(rng, 2))),
            5 => out.push_str(&format!("{} ~{}~ and ^{}^ {}\n\n", p(rng, 1), pick(rng), pick(rng), pick(rng))),
            6 => out.push_str(&format!("    {}. {}\n\n", p(rng, 2), p(rng, 3))),
            7 => out.push_str(&format!("{{{}}}_{{{}}}\n\n", p(rng, 2), pick(rng))),
            8 => out.push_str(&format!("| {} | {} |\n|---|---|\n| {} | {} |\n\n", pick(rng), p(rng, 6), pick(rng), p(rng, 1))),
            9 => out.push_str(&format!("Figure 1: {}\n\n> {}\n\n", p(rng, 3), p(rng, 2))),
            10 => out.push_str(&format!("{} **{}** =={}== {}?\n\n", p(rng, 1), pick(rng), pick(rng), pick(rng))),
            11 => out.push_str(&format!("{} > {}, {}; \"{}\"\n\n", pick(rng).to_uppercase(), pick(rng), pick(rng), pick(rng))),
            12 => out.push_str(&format!("# References\n\n{}\n\n", p(rng, 3))),
            _ => out.push_str(&format!("{}\n\n", p(rng, 5))),
        }
    }
    out
}
