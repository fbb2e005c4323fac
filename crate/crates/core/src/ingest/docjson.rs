//! Doc JSON: the interchange form of [`StructuredDocument`].
//!
//! ```json
//! {"id": "d", "genre": "email", "first_paragraph_index": 1,
//!  "blocks": [{"kind": "section_title", "level": 1, "text": "Country",
//!              "spans": [{"start": 0, "end": 7, "kind": "uppercase"}],
//!              "children": []}]}
//! ```
//!
//! Empty `text`, `children` and `spans` are omitted on output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::document::{Block, BlockKind, InlineSpan, SpanKind, StructuredDocument};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genre: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    first_paragraph_index: Option<usize>,
    blocks: Vec<RawBlock>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    text: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    children: Vec<RawBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    spans: Vec<RawSpan>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpan {
    start: usize,
    end: usize,
    kind: String,
}

pub fn parse_docjson(text: &str) -> Result<StructuredDocument> {
    let raw: RawDoc = serde_json::from_str(text)?;
    let mut blocks = Vec::with_capacity(raw.blocks.len());
    for (i, b) in raw.blocks.into_iter().enumerate() {
        blocks.push(convert_block(b, &format!("blocks[{i}]"))?);
    }
    let doc = StructuredDocument {
        id: raw.id,
        blocks,
        first_paragraph_index: raw.first_paragraph_index,
        genre: raw.genre,
    };
    doc.validate()?;
    Ok(doc)
}

fn convert_block(raw: RawBlock, path: &str) -> Result<Block> {
    let kind = match raw.kind.as_str() {
        "section_title" => {
            let level = raw
                .level
                .ok_or_else(|| Error::schema(path, "section_title requires \"level\""))?;
            BlockKind::SectionTitle { level }
        }
        "footnote" => {
            let label = raw
                .label
                .clone()
                .ok_or_else(|| Error::schema(path, "footnote requires \"label\""))?;
            BlockKind::Footnote { label }
        }
        "paragraph" => BlockKind::Paragraph,
        "bullet_list" => BlockKind::BulletList,
        "bullet_item" => BlockKind::BulletItem,
        "caption" => BlockKind::Caption,
        "table_cell" => BlockKind::TableCell,
        "indent" => BlockKind::Indent,
        "quote_double" => BlockKind::QuoteDouble,
        "abstract" => BlockKind::Abstract,
        "introduction" => BlockKind::Introduction,
        "conclusion" => BlockKind::Conclusion,
        "references" => BlockKind::References,
        "appendix" => BlockKind::Appendix,
        "keywords" => BlockKind::Keywords,
        "info_box" => BlockKind::InfoBox,
        "shape" => BlockKind::Shape,
        other => return Err(Error::schema(format!("{path}.kind"), format!("unknown block kind {other:?}"))),
    };
    if raw.level.is_some() && !kind.is_title() {
        return Err(Error::schema(format!("{path}.level"), "only section_title takes a level"));
    }
    if raw.label.is_some() && !matches!(kind, BlockKind::Footnote { .. }) {
        return Err(Error::schema(format!("{path}.label"), "only footnote takes a label"));
    }
    let mut spans = Vec::with_capacity(raw.spans.len());
    for (i, s) in raw.spans.into_iter().enumerate() {
        let kind: SpanKind = s
            .kind
            .parse()
            .map_err(|m| Error::schema(format!("{path}.spans[{i}].kind"), m))?;
        spans.push(InlineSpan::new(s.start, s.end, kind));
    }
    let mut children = Vec::with_capacity(raw.children.len());
    for (i, c) in raw.children.into_iter().enumerate() {
        children.push(convert_block(c, &format!("{path}.children[{i}]"))?);
    }
    Ok(Block {
        kind,
        text: raw.text,
        children,
        spans,
    })
}

fn raw_block(block: &Block) -> RawBlock {
    let (level, label) = match &block.kind {
        BlockKind::SectionTitle { level } => (Some(*level), None),
        BlockKind::Footnote { label } => (None, Some(label.clone())),
        _ => (None, None),
    };
    RawBlock {
        kind: block.kind.name().to_string(),
        level,
        label,
        text: block.text.clone(),
        children: block.children.iter().map(raw_block).collect(),
        spans: block
            .spans
            .iter()
            .map(|s| RawSpan {
                start: s.start,
                end: s.end,
                kind: s.kind.name().to_string(),
            })
            .collect(),
    }
}

/// Serializes to compact single-line Doc JSON.
pub fn to_docjson(doc: &StructuredDocument) -> String {
    let raw = RawDoc {
        id: doc.id.clone(),
        genre: doc.genre.clone(),
        first_paragraph_index: doc.first_paragraph_index,
        blocks: doc.blocks.iter().map(raw_block).collect(),
    };
    serde_json::to_string(&raw).expect("doc JSON serialization cannot fail")
}
