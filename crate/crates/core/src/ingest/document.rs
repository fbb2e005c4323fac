//! Normalized document model: a block tree with inline structural spans.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ingest::text;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    SectionTitle { level: u32 },
    Paragraph,
    BulletList,
    BulletItem,
    Footnote { label: String },
    Caption,
    TableCell,
    Indent,
    QuoteDouble,
    Abstract,
    Introduction,
    Conclusion,
    References,
    Appendix,
    Keywords,
    InfoBox,
    Shape,
}

impl BlockKind {
    /// Lower-snake-case name used in Doc JSON.
    pub fn name(&self) -> &'static str {
        match self {
            BlockKind::SectionTitle { .. } => "section_title",
            BlockKind::Paragraph => "paragraph",
            BlockKind::BulletList => "bullet_list",
            BlockKind::BulletItem => "bullet_item",
            BlockKind::Footnote { .. } => "footnote",
            BlockKind::Caption => "caption",
            BlockKind::TableCell => "table_cell",
            BlockKind::Indent => "indent",
            BlockKind::QuoteDouble => "quote_double",
            BlockKind::Abstract => "abstract",
            BlockKind::Introduction => "introduction",
            BlockKind::Conclusion => "conclusion",
            BlockKind::References => "references",
            BlockKind::Appendix => "appendix",
            BlockKind::Keywords => "keywords",
            BlockKind::InfoBox => "info_box",
            BlockKind::Shape => "shape",
        }
    }

    pub fn is_title(&self) -> bool {
        matches!(self, BlockKind::SectionTitle { .. })
    }

    pub fn title_level(&self) -> Option<u32> {
        match self {
            BlockKind::SectionTitle { level } => Some(*level),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpanKind {
    HyperlinkHead,
    HyperlinkTail,
    Bracketed,
    Subscript,
    Superscript,
    Emphasis,
    Uppercase,
    Highlight,
    AfterSymbol,
    LargeFont,
    QuestionPrecedingNoun,
    UnderbraceLabel,
}

impl SpanKind {
    pub const ALL: [SpanKind; 12] = [
        SpanKind::HyperlinkHead,
        SpanKind::HyperlinkTail,
        SpanKind::Bracketed,
        SpanKind::Subscript,
        SpanKind::Superscript,
        SpanKind::Emphasis,
        SpanKind::Uppercase,
        SpanKind::Highlight,
        SpanKind::AfterSymbol,
        SpanKind::LargeFont,
        SpanKind::QuestionPrecedingNoun,
        SpanKind::UnderbraceLabel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpanKind::HyperlinkHead => "hyperlink_head",
            SpanKind::HyperlinkTail => "hyperlink_tail",
            SpanKind::Bracketed => "bracketed",
            SpanKind::Subscript => "subscript",
            SpanKind::Superscript => "superscript",
            SpanKind::Emphasis => "emphasis",
            SpanKind::Uppercase => "uppercase",
            SpanKind::Highlight => "highlight",
            SpanKind::AfterSymbol => "after_symbol",
            SpanKind::LargeFont => "large_font",
            SpanKind::QuestionPrecedingNoun => "question_preceding_noun",
            SpanKind::UnderbraceLabel => "underbrace_label",
        }
    }
}

impl fmt::Display for SpanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpanKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SpanKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown span kind {s:?}"))
    }
}

/// A structural span over block text, as a character range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InlineSpan {
    pub start: usize,
    pub end: usize,
    pub kind: SpanKind,
}

impl InlineSpan {
    pub fn new(start: usize, end: usize, kind: SpanKind) -> Self {
        InlineSpan { start, end, kind }
    }

    pub fn contains(&self, start: usize, end: usize) -> bool {
        self.start <= start && end <= self.end
    }

    pub fn overlaps(&self, start: usize, end: usize) -> bool {
        self.start < end && start < self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub kind: BlockKind,
    pub text: String,
    pub children: Vec<Block>,
    pub spans: Vec<InlineSpan>,
}

impl Block {
    pub fn new(kind: BlockKind, text: impl Into<String>) -> Self {
        Block {
            kind,
            text: text.into(),
            children: Vec::new(),
            spans: Vec::new(),
        }
    }

    pub fn with_children(mut self, children: Vec<Block>) -> Self {
        self.children = children;
        self
    }

    pub fn with_spans(mut self, spans: Vec<InlineSpan>) -> Self {
        self.spans = spans;
        self
    }

    pub fn bullet_list(&self) -> Option<&Block> {
        self.children.iter().find(|c| c.kind == BlockKind::BulletList)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredDocument {
    pub id: String,
    pub blocks: Vec<Block>,
    /// Top-level index of the definition-text paragraph.
    pub first_paragraph_index: Option<usize>,
    /// Free-form genre tag; `"email"` enables email-footer detection.
    pub genre: Option<String>,
}

impl StructuredDocument {
    pub fn new(id: impl Into<String>, blocks: Vec<Block>) -> Self {
        StructuredDocument {
            id: id.into(),
            blocks,
            first_paragraph_index: None,
            genre: None,
        }
    }

    pub fn is_email(&self) -> bool {
        self.genre.as_deref() == Some("email")
    }

    /// Top-level indices of the definition-text blocks: `count` consecutive
    /// paragraphs starting at `first_paragraph_index`, or at the first
    /// non-empty paragraph when no index is recorded.
    pub fn definition_blocks(&self, count: usize) -> Vec<usize> {
        let start = self.first_paragraph_index.or_else(|| {
            self.blocks
                .iter()
                .position(|b| b.kind == BlockKind::Paragraph && !b.text.trim().is_empty())
        });
        let Some(start) = start else {
            return Vec::new();
        };
        self.blocks
            .iter()
            .enumerate()
            .skip(start)
            .filter(|(_, b)| b.kind == BlockKind::Paragraph)
            .take(count)
            .map(|(i, _)| i)
            .collect()
    }

    /// Checks every structural invariant of the document model.
    pub fn validate(&self) -> Result<()> {
        if let Some(i) = self.first_paragraph_index {
            match self.blocks.get(i) {
                Some(b) if b.kind == BlockKind::Paragraph => {}
                _ => {
                    return Err(Error::schema(
                        "first_paragraph_index",
                        format!("index {i} does not address a paragraph block"),
                    ))
                }
            }
        }
        for (i, block) in self.blocks.iter().enumerate() {
            validate_block(block, None, &format!("blocks[{i}]"))?;
        }
        Ok(())
    }
}

fn validate_block(block: &Block, parent: Option<&BlockKind>, path: &str) -> Result<()> {
    match &block.kind {
        BlockKind::BulletItem if parent != Some(&BlockKind::BulletList) => {
            return Err(Error::schema(path, "bullet_item outside a bullet_list"));
        }
        BlockKind::SectionTitle { level } if *level < 1 => {
            return Err(Error::schema(path, "section_title level must be >= 1"));
        }
        _ => {}
    }
    if parent == Some(&BlockKind::BulletList) && block.kind != BlockKind::BulletItem {
        return Err(Error::schema(
            path,
            format!("bullet_list may only contain bullet_item, found {}", block.kind.name()),
        ));
    }
    if block.kind == BlockKind::Paragraph {
        let lists = block
            .children
            .iter()
            .filter(|c| c.kind == BlockKind::BulletList)
            .count();
        if lists > 1 {
            return Err(Error::schema(path, "paragraph contains more than one bullet_list"));
        }
    }
    let len = text::char_len(&block.text);
    for (si, span) in block.spans.iter().enumerate() {
        if span.start >= span.end || span.end > len {
            return Err(Error::schema(
                format!("{path}.spans[{si}]"),
                format!("range {}..{} outside text of length {len}", span.start, span.end),
            ));
        }
    }
    for kind in SpanKind::ALL {
        let mut ranges: Vec<(usize, usize)> = block
            .spans
            .iter()
            .filter(|s| s.kind == kind)
            .map(|s| (s.start, s.end))
            .collect();
        ranges.sort_unstable();
        if ranges.windows(2).any(|w| w[1].0 < w[0].1) {
            return Err(Error::schema(
                format!("{path}.spans"),
                format!("overlapping {kind} spans"),
            ));
        }
    }
    for (ci, child) in block.children.iter().enumerate() {
        validate_block(child, Some(&block.kind), &format!("{path}.children[{ci}]"))?;
    }
    Ok(())
}
