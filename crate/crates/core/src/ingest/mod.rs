//! Corpus and document ingestion: tagged corpora, markdown, Doc JSON,
//! vocabularies and multiword term matching.

pub mod corpus;
pub mod docjson;
pub mod document;
pub mod markdown;
pub mod text;
pub mod vocab;

pub use corpus::{parse_tagged_corpus, write_tagged_corpus, CorpusDocument, Pos, Token, TokenizedCorpus};
pub use docjson::{parse_docjson, to_docjson};
pub use document::{Block, BlockKind, InlineSpan, SpanKind, StructuredDocument};
pub use markdown::parse_markdown;
pub use vocab::{load_vocabulary, match_terms, TermId, TermMatch, Vocabulary};
