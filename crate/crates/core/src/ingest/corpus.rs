//! Pre-tagged corpus reader and writer.
//!
//! Format: one `SURFACE<TAB>LEMMA<TAB>POS` token per line, a blank line ends
//! a sentence, and a `##DOC<TAB><id>` line starts a new document.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DOC_DIRECTIVE: &str = "##DOC";

/// Id given to tokens that appear before any `##DOC` line.
pub const DEFAULT_DOC_ID: &str = "doc0";

/// Coarse part-of-speech tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Other,
}

impl Pos {
    /// Maps a UPOS-style tag. Anything outside NOUN/VERB/ADJ becomes `Other`.
    pub fn from_tag(tag: &str) -> Pos {
        match tag.trim().to_ascii_uppercase().as_str() {
            "NOUN" => Pos::Noun,
            "VERB" => Pos::Verb,
            "ADJ" => Pos::Adj,
            _ => Pos::Other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Other => "OTHER",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "NOUN" => Ok(Pos::Noun),
            "VERB" => Ok(Pos::Verb),
            "ADJ" => Ok(Pos::Adj),
            "OTHER" => Ok(Pos::Other),
            other => Err(Error::Config(format!("unknown POS tag {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// Lower-cased lemma.
    pub lemma: String,
    pub pos: Pos,
    /// Character range of the surface form in the source text.
    pub span: (usize, usize),
}

impl Token {
    pub fn new(surface: &str, lemma: &str, pos: Pos) -> Self {
        Token {
            surface: surface.to_string(),
            lemma: lemma.to_lowercase(),
            pos,
            span: (0, surface.chars().count()),
        }
    }
}

pub type Sentence = Vec<Token>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusDocument {
    pub id: String,
    pub sentences: Vec<Sentence>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenizedCorpus {
    pub documents: Vec<CorpusDocument>,
}

impl TokenizedCorpus {
    pub fn sentence_count(&self) -> usize {
        self.documents.iter().map(|d| d.sentences.len()).sum()
    }

    pub fn token_count(&self) -> usize {
        self.sentences().map(|s| s.len()).sum()
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.documents.iter().flat_map(|d| d.sentences.iter())
    }

    /// Appends the documents of `other`, rejecting duplicate ids.
    pub fn extend(&mut self, other: TokenizedCorpus) -> Result<()> {
        let mut seen: HashSet<String> = self.documents.iter().map(|d| d.id.clone()).collect();
        for doc in &other.documents {
            if !seen.insert(doc.id.clone()) {
                return Err(Error::Config(format!("duplicate document id {:?}", doc.id)));
            }
        }
        self.documents.extend(other.documents);
        Ok(())
    }
}

/// Parses a tagged corpus. Tokens before the first `##DOC` line belong to a
/// document named [`DEFAULT_DOC_ID`].
pub fn parse_tagged_corpus<R: BufRead>(reader: R) -> Result<TokenizedCorpus> {
    parse_tagged_corpus_with_default(reader, DEFAULT_DOC_ID)
}

pub fn parse_tagged_corpus_with_default<R: BufRead>(
    reader: R,
    default_id: &str,
) -> Result<TokenizedCorpus> {
    let mut documents: Vec<CorpusDocument> = Vec::new();
    let mut ids: HashSet<String> = HashSet::new();
    let mut sentence: Sentence = Vec::new();
    let mut offset = 0usize;

    fn flush(documents: &mut [CorpusDocument], sentence: &mut Sentence) {
        if !sentence.is_empty() {
            let doc = documents.last_mut().expect("document opened before tokens");
            doc.sentences.push(std::mem::take(sentence));
        }
    }

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let raw = line?;
        let line_chars = raw.chars().count() + 1;
        let line = raw.strip_suffix('\r').unwrap_or(&raw);

        if line.trim().is_empty() {
            flush(&mut documents, &mut sentence);
        } else if line == DOC_DIRECTIVE || line.starts_with(&format!("{DOC_DIRECTIVE}\t")) {
            flush(&mut documents, &mut sentence);
            let id = line[DOC_DIRECTIVE.len()..].trim();
            if id.is_empty() {
                return Err(Error::parse(lineno, "document directive without an id"));
            }
            if !ids.insert(id.to_string()) {
                return Err(Error::parse(lineno, format!("duplicate document id {id:?}")));
            }
            documents.push(CorpusDocument {
                id: id.to_string(),
                sentences: Vec::new(),
            });
        } else {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(Error::parse(
                    lineno,
                    format!("expected 3 tab-separated columns, found {}", cols.len()),
                ));
            }
            let (surface, lemma) = (cols[0].trim(), cols[1].trim());
            if surface.is_empty() || lemma.is_empty() {
                return Err(Error::parse(lineno, "empty surface or lemma"));
            }
            if documents.is_empty() {
                ids.insert(default_id.to_string());
                documents.push(CorpusDocument {
                    id: default_id.to_string(),
                    sentences: Vec::new(),
                });
            }
            let lead = cols[0].chars().take_while(|c| c.is_whitespace()).count();
            let start = offset + lead;
            sentence.push(Token {
                surface: surface.to_string(),
                lemma: lemma.to_lowercase(),
                pos: Pos::from_tag(cols[2]),
                span: (start, start + surface.chars().count()),
            });
        }
        offset += line_chars;
    }
    flush(&mut documents, &mut sentence);
    Ok(TokenizedCorpus { documents })
}

/// Writes the corpus in the tagged format, with an explicit `##DOC` line for
/// every document. Re-parsing the output yields the same corpus modulo spans.
pub fn write_tagged_corpus<W: Write>(corpus: &TokenizedCorpus, mut out: W) -> Result<()> {
    for doc in &corpus.documents {
        writeln!(out, "{DOC_DIRECTIVE}\t{}", doc.id)?;
        for sentence in &doc.sentences {
            for tok in sentence {
                writeln!(out, "{}\t{}\t{}", tok.surface, tok.lemma, tok.pos)?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}
