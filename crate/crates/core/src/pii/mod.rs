//! Structural personal-data cues scored with a linear indicator model.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::document::{Block, BlockKind, SpanKind, StructuredDocument};
use crate::ingest::text;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PiiContext {
    MaskedChars,
    NamedAttachment,
    TableText,
    SectionTitleCue,
    EmailFooter,
    BlankResponse,
    BoxedColored,
    IndentedLarge,
}

impl PiiContext {
    pub const ALL: [PiiContext; 8] = [
        PiiContext::MaskedChars,
        PiiContext::NamedAttachment,
        PiiContext::TableText,
        PiiContext::SectionTitleCue,
        PiiContext::EmailFooter,
        PiiContext::BlankResponse,
        PiiContext::BoxedColored,
        PiiContext::IndentedLarge,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PiiContext::MaskedChars => "masked_chars",
            PiiContext::NamedAttachment => "named_attachment",
            PiiContext::TableText => "table_text",
            PiiContext::SectionTitleCue => "section_title_cue",
            PiiContext::EmailFooter => "email_footer",
            PiiContext::BlankResponse => "blank_response",
            PiiContext::BoxedColored => "boxed_colored",
            PiiContext::IndentedLarge => "indented_large",
        }
    }
}

impl fmt::Display for PiiContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PiiContext {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PiiContext::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown PII context {s:?}")))
    }
}

pub type Indicators = [u8; 8];

pub const DEFAULT_THRESHOLD: f64 = 1.0;
pub const DEFAULT_WEIGHT: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PiiConfig {
    /// Overrides keyed by context name; missing ones get [`DEFAULT_WEIGHT`].
    pub weights: BTreeMap<String, f64>,
    pub threshold: f64,
    /// Lexemes that mark a governing section title as personal.
    pub title_cues: Vec<String>,
    /// Lexemes that mark an attachment file name as personal.
    pub attachment_cues: Vec<String>,
}

impl Default for PiiConfig {
    fn default() -> Self {
        PiiConfig {
            weights: BTreeMap::new(),
            threshold: DEFAULT_THRESHOLD,
            title_cues: ["personal", "account", "identity", "medical"].map(String::from).to_vec(),
            attachment_cues: [
                "passport", "statement", "payslip", "salary", "invoice", "tax", "id", "ssn", "resume", "cv", "scan",
                "medical", "bank", "license", "contract",
            ]
            .map(String::from)
            .to_vec(),
        }
    }
}

impl PiiConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, &w) in &self.weights {
            name.parse::<PiiContext>()?;
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Config(format!("PII weight {name} must be finite and >= 0, got {w}")));
            }
        }
        if !self.threshold.is_finite() {
            return Err(Error::Config("PII threshold must be finite".into()));
        }
        Ok(())
    }

    pub fn weight_table(&self) -> [f64; 8] {
        PiiContext::ALL.map(|c| self.weights.get(c.name()).copied().unwrap_or(DEFAULT_WEIGHT))
    }
}

static STARS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\*{3,}").unwrap());
static XRUN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[xX]{3,}").unwrap());
static BLANKS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"_{3,}").unwrap());
static FILENAME: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b([\w-]+)\.(pdf|docx?|xlsx?|csv|txt|rtf|odt|jpe?g|png|tiff?|zip|pptx?)\b").unwrap()
});

/// `***` anywhere, or an x-run that is not part of a longer word.
fn has_masking(text: &str) -> bool {
    if STARS.is_match(text) {
        return true;
    }
    XRUN.find_iter(text).any(|m| {
        let before = text[..m.start()].chars().next_back();
        let after = text[m.end()..].chars().next();
        !before.is_some_and(char::is_alphabetic) && !after.is_some_and(char::is_alphabetic)
    })
}

fn has_named_attachment(text: &str, cues: &[String]) -> bool {
    FILENAME.captures_iter(text).any(|c| {
        let stem = c[1].to_lowercase();
        stem.chars().any(|ch| ch.is_ascii_digit())
            || stem
                .split(|ch: char| !ch.is_alphanumeric())
                .any(|part| cues.iter().any(|cue| cue == part))
    })
}

fn title_has_cue(title: &str, cues: &[String]) -> bool {
    text::words(title).iter().any(|w| cues.contains(&w.folded))
}

/// One scored text block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiiSpan {
    pub doc: String,
    pub path: String,
    pub text: String,
    #[serde(serialize_with = "indicator_map")]
    pub indicators: Indicators,
    pub score: f64,
    pub flagged: bool,
}

fn indicator_map<S: serde::Serializer>(ind: &Indicators, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(ind.len()))?;
    for c in PiiContext::ALL {
        m.serialize_entry(c.name(), &ind[c.index()])?;
    }
    m.end()
}

impl PiiSpan {
    pub fn fired(&self) -> Vec<PiiContext> {
        PiiContext::ALL.into_iter().filter(|c| self.indicators[c.index()] == 1).collect()
    }
}

struct Walk<'a, 'c> {
    doc: &'a StructuredDocument,
    cfg: &'c PiiConfig,
    last_top: Option<usize>,
    out: Vec<(String, &'a str, Indicators)>,
}

impl<'a> Walk<'a, '_> {
    fn block(&mut self, block: &'a Block, path: String, top: usize, in_box: bool, in_indent: bool, cue_title: bool) {
        let in_box = in_box || block.kind == BlockKind::InfoBox;
        let in_indent = in_indent || block.kind == BlockKind::Indent;
        if !block.text.trim().is_empty() {
            let has_span = |k: SpanKind| block.spans.iter().any(|s| s.kind == k);
            let mut ind = [0u8; 8];
            let mut set = |c: PiiContext, on: bool| ind[c.index()] = on as u8;
            set(PiiContext::MaskedChars, has_masking(&block.text));
            set(PiiContext::NamedAttachment, has_named_attachment(&block.text, &self.cfg.attachment_cues));
            set(PiiContext::TableText, block.kind == BlockKind::TableCell);
            set(PiiContext::SectionTitleCue, cue_title);
            set(PiiContext::EmailFooter, self.doc.is_email() && Some(top) == self.last_top);
            set(PiiContext::BlankResponse, BLANKS.is_match(&block.text));
            set(PiiContext::BoxedColored, in_box || has_span(SpanKind::Highlight));
            set(PiiContext::IndentedLarge, in_indent || has_span(SpanKind::LargeFont));
            self.out.push((path.clone(), &block.text, ind));
        }
        for (i, child) in block.children.iter().enumerate() {
            self.block(child, format!("{path}.children[{i}]"), top, in_box, in_indent, cue_title);
        }
    }
}

/// Indicator vectors for every block with text, in document order, keyed by
/// block path.
pub fn pii_indicators<'a>(doc: &'a StructuredDocument, cfg: &PiiConfig) -> Vec<(String, &'a str, Indicators)> {
    let mut walk = Walk {
        doc,
        cfg,
        last_top: doc.blocks.len().checked_sub(1),
        out: Vec::new(),
    };
    let mut titles: Vec<(u32, bool)> = Vec::new();
    for (top, block) in doc.blocks.iter().enumerate() {
        if let Some(level) = block.kind.title_level() {
            while titles.last().is_some_and(|&(l, _)| l >= level) {
                titles.pop();
            }
        }
        let governed = titles.iter().any(|t| t.1);
        walk.block(block, format!("blocks[{top}]"), top, false, false, governed);
        if let Some(level) = block.kind.title_level() {
            titles.push((level, title_has_cue(&block.text, &cfg.title_cues)));
        }
    }
    walk.out
}

/// `Σ w_i · indicator_i` and whether it reaches `threshold`.
pub fn pii_score(indicators: &Indicators, weights: &[f64; 8], threshold: f64) -> (f64, bool) {
    let mut score = 0.0;
    for (i, &on) in indicators.iter().enumerate() {
        score += weights[i] * on as f64;
    }
    (score, score >= threshold)
}

pub fn scan_document(doc: &StructuredDocument, cfg: &PiiConfig) -> Vec<PiiSpan> {
    let weights = cfg.weight_table();
    pii_indicators(doc, cfg)
        .into_iter()
        .map(|(path, text, indicators)| {
            let (score, flagged) = pii_score(&indicators, &weights, cfg.threshold);
            PiiSpan {
                doc: doc.id.clone(),
                path,
                text: text.to_string(),
                indicators,
                score,
                flagged,
            }
        })
        .collect()
}

/// Scans documents in parallel; output keeps document order.
pub fn scan_documents(docs: &[StructuredDocument], cfg: &PiiConfig) -> Result<Vec<PiiSpan>> {
    cfg.validate()?;
    Ok(par::map(docs, |d| scan_document(d, cfg)).into_iter().flatten().collect())
}

/// One JSON object per line.
pub fn write_report<W: Write>(mut out: W, spans: &[PiiSpan]) -> Result<()> {
    for s in spans {
        serde_json::to_writer(&mut out, s)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
