//! Window-based co-occurrence extraction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::corpus::{Pos, Sentence, TokenizedCorpus};
use crate::ingest::vocab::{match_terms, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContextConfig {
    pub window_size: usize,
    /// Prefix features with `L:`/`R:` by side.
    pub directional: bool,
    pub pos_filter: BTreeSet<Pos>,
}

impl Default for ContextConfig {
    fn default() -> Self {
        ContextConfig {
            window_size: 5,
            directional: false,
            pos_filter: [Pos::Noun, Pos::Verb, Pos::Adj].into_iter().collect(),
        }
    }
}

impl ContextConfig {
    /// Parses a context-type name such as `win5` or `win5d`.
    pub fn from_name(name: &str) -> Result<Self> {
        let rest = name
            .strip_prefix("win")
            .ok_or_else(|| Error::Config(format!("unknown context type {name:?}")))?;
        let (digits, directional) = match rest.strip_suffix('d') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        let window_size: usize = digits
            .parse()
            .map_err(|_| Error::Config(format!("unknown context type {name:?}")))?;
        let cfg = ContextConfig {
            window_size,
            directional,
            ..ContextConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn name(&self) -> String {
        format!("win{}{}", self.window_size, if self.directional { "d" } else { "" })
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_size == 0 {
            return Err(Error::Config("window_size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceEvent<'a> {
    pub target: &'a str,
    pub feature: String,
    pub count: u64,
}

/// Events for one sentence: every vocabulary mention paired with each
/// POS-admitted neighbour lemma within `window_size` tokens of either edge.
pub fn sentence_events<'a>(
    sentence: &Sentence,
    vocab: &'a Vocabulary,
    cfg: &ContextConfig,
) -> Vec<CooccurrenceEvent<'a>> {
    let mut out = Vec::new();
    let n = sentence.len();
    for m in match_terms(sentence, vocab) {
        let target = vocab.term(m.term);
        let left = m.start.saturating_sub(cfg.window_size)..m.start;
        let right = m.end..(m.end + cfg.window_size).min(n);
        for (side, range) in [("L:", left), ("R:", right)] {
            for tok in &sentence[range] {
                if !cfg.pos_filter.contains(&tok.pos) {
                    continue;
                }
                let feature = if cfg.directional {
                    format!("{side}{}", tok.lemma)
                } else {
                    tok.lemma.clone()
                };
                out.push(CooccurrenceEvent {
                    target,
                    feature,
                    count: 1,
                });
            }
        }
    }
    out
}

pub fn extract_window_events<'a>(
    corpus: &'a TokenizedCorpus,
    vocab: &'a Vocabulary,
    cfg: &ContextConfig,
) -> impl Iterator<Item = CooccurrenceEvent<'a>> + 'a {
    let cfg = cfg.clone();
    corpus
        .sentences()
        .flat_map(move |s| sentence_events(s, vocab, &cfg))
}
