use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::ingest::corpus::Token;

pub type TermId = u32;

pub const DEFAULT_MIN_LENGTH: usize = 3;

/// Candidate term set. Terms are case-folded with internal whitespace
/// collapsed to single spaces; ids follow first-seen order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, TermId>,
    max_tokens: usize,
    pub min_length: usize,
    pub min_frequency: u64,
}

pub fn normalize_term(raw: &str) -> String {
    raw.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

impl Vocabulary {
    /// Builds a vocabulary from raw terms: folds, drops terms shorter than
    /// `min_length` characters, and deduplicates keeping first occurrence.
    pub fn from_terms<I, S>(terms: I, min_length: usize, min_frequency: u64) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut vocab = Vocabulary {
            terms: Vec::new(),
            index: HashMap::new(),
            max_tokens: 0,
            min_length,
            min_frequency,
        };
        for raw in terms {
            let term = normalize_term(raw.as_ref());
            if term.is_empty() || term.chars().count() < min_length {
                continue;
            }
            if vocab.index.contains_key(&term) {
                continue;
            }
            vocab.max_tokens = vocab.max_tokens.max(term.split(' ').count());
            vocab.index.insert(term.clone(), vocab.terms.len() as TermId);
            vocab.terms.push(term);
        }
        if vocab.terms.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        Ok(vocab)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, id: TermId) -> &str {
        &self.terms[id as usize]
    }

    pub fn id(&self, term: &str) -> Option<TermId> {
        self.index.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(&normalize_term(term))
    }

    /// Longest term length in tokens.
    pub fn max_tokens(&self) -> usize {
        self.max_tokens
    }
}

/// Reads one term per line. Blank lines are ignored; an input with no
/// surviving terms is an error.
pub fn load_vocabulary<R: BufRead>(reader: R, min_length: usize, min_frequency: u64) -> Result<Vocabulary> {
    let mut lines = Vec::new();
    for line in reader.lines() {
        lines.push(line?);
    }
    Vocabulary::from_terms(lines, min_length, min_frequency)
}

/// A vocabulary match over a token sequence: tokens `start..end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermMatch {
    pub term: TermId,
    pub start: usize,
    pub end: usize,
}

/// Greedy left-to-right longest match over a lemma sequence.
pub fn match_lemmas<S: AsRef<str>>(lemmas: &[S], vocab: &Vocabulary) -> Vec<TermMatch> {
    let mut out = Vec::new();
    let mut key = String::new();
    let mut i = 0;
    while i < lemmas.len() {
        let longest = vocab.max_tokens.min(lemmas.len() - i);
        let mut matched = None;
        for len in (1..=longest).rev() {
            key.clear();
            for (k, lemma) in lemmas[i..i + len].iter().enumerate() {
                if k > 0 {
                    key.push(' ');
                }
                key.push_str(lemma.as_ref());
            }
            if let Some(&term) = vocab.index.get(key.as_str()) {
                matched = Some(TermMatch {
                    term,
                    start: i,
                    end: i + len,
                });
                break;
            }
        }
        match matched {
            Some(m) => {
                out.push(m);
                i = m.end;
            }
            None => i += 1,
        }
    }
    out
}

pub fn match_terms(sentence: &[Token], vocab: &Vocabulary) -> Vec<TermMatch> {
    let lemmas: Vec<&str> = sentence.iter().map(|t| t.lemma.as_str()).collect();
    match_lemmas(&lemmas, vocab)
}
