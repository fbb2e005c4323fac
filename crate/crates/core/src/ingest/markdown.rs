//! Markdown-subset parser producing a [`StructuredDocument`].
//!
//! Supported: `#`..`######` headers, `-`/`*`/`+` bullets, `[t](url)` links
//! and bare URLs, `**`/`_` emphasis, `==` highlight, `~sub~` and `^sup^`
//! scripts, `(...)` brackets, `{body}_{label}` underbraces, `[^n]` footnote
//! anchors with `[^n]: body` definitions, `>` quotes, 4-space indents,
//! `|`-tables, and `Figure N:` / `![alt](src)` captions. Anything else is
//! paragraph text.

use std::sync::LazyLock;

use regex::Regex;

use crate::ingest::document::{Block, BlockKind, InlineSpan, SpanKind, StructuredDocument};
use crate::ingest::text;

static HEADER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(#{1,6})\s+(.*?)\s*#*\s*$").unwrap());
static BULLET: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^ {0,3}[-*+]\s+(.*)$").unwrap());
static FOOTNOTE_DEF: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\[\^([^\]\s]+)\]:\s*(.*)$").unwrap());
static IMAGE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^!\[([^\]]*)\]\([^)]*\)\s*$").unwrap());
static CAPTION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:Figure|Fig\.|Table)\s+\d+[:.]").unwrap());
static TABLE_SEP: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\|?[\s:|-]+\|?$").unwrap());
static URL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r#"(?:https?://|www\.)[^\s<>()\[\]{}"]+|[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)+/[^\s<>()\[\]{}"]*"#)
        .unwrap()
});

pub fn parse_markdown(id: &str, source: &str) -> StructuredDocument {
    let mut p = BlockParser::default();
    for line in source.lines() {
        p.line(line.strip_suffix('\r').unwrap_or(line));
    }
    p.flush_all();
    let first_paragraph_index = p
        .blocks
        .iter()
        .position(|b| b.kind == BlockKind::Paragraph && !b.text.trim().is_empty());
    StructuredDocument {
        id: id.to_string(),
        blocks: p.blocks,
        first_paragraph_index,
        genre: None,
    }
}

#[derive(Default)]
struct BlockParser {
    blocks: Vec<Block>,
    para: Vec<String>,
    items: Vec<String>,
    indent: Vec<String>,
    quote: Vec<String>,
    // A paragraph flushed by a blank line may still receive the list that follows it.
    attachable: bool,
}

impl BlockParser {
    fn line(&mut self, line: &str) {
        if line.trim().is_empty() {
            let had_text = !self.para.is_empty() && self.items.is_empty();
            self.flush_all();
            self.attachable = had_text || self.attachable;
            return;
        }
        if let Some(rest) = line.strip_prefix("    ").or_else(|| line.strip_prefix('\t')) {
            if self.indent.is_empty() {
                self.flush_all();
            }
            self.indent.push(rest.trim().to_string());
            return;
        }
        if !self.indent.is_empty() {
            self.flush_indent();
        }
        if let Some(rest) = line.strip_prefix('>') {
            if self.quote.is_empty() {
                self.flush_all();
            }
            self.quote.push(rest.trim().to_string());
            return;
        }
        if !self.quote.is_empty() {
            self.flush_quote();
        }
        if let Some(c) = HEADER.captures(line) {
            self.flush_all();
            let level = c[1].len() as u32;
            self.push(BlockKind::SectionTitle { level }, &c[2]);
            return;
        }
        if let Some(c) = BULLET.captures(line) {
            self.items.push(c[1].trim().to_string());
            return;
        }
        if let Some(c) = FOOTNOTE_DEF.captures(line) {
            self.flush_all();
            self.push(BlockKind::Footnote { label: c[1].to_string() }, &c[2]);
            return;
        }
        if let Some(c) = IMAGE.captures(line) {
            self.flush_all();
            self.push(BlockKind::Caption, &c[1]);
            return;
        }
        if CAPTION.is_match(line) {
            self.flush_all();
            self.push(BlockKind::Caption, line.trim());
            return;
        }
        let trimmed = line.trim();
        if trimmed.starts_with('|') {
            self.flush_all();
            if !TABLE_SEP.is_match(trimmed) {
                let inner = trimmed.trim_start_matches('|').trim_end_matches('|');
                for cell in inner.split('|') {
                    self.push(BlockKind::TableCell, cell.trim());
                }
            }
            return;
        }
        if !self.items.is_empty() {
            self.flush_paragraph();
        }
        self.para.push(trimmed.to_string());
    }

    fn push(&mut self, kind: BlockKind, raw: &str) {
        self.attachable = false;
        self.blocks.push(inline_block(kind, raw));
    }

    fn flush_all(&mut self) {
        self.flush_paragraph();
        self.flush_indent();
        self.flush_quote();
    }

    fn flush_paragraph(&mut self) {
        if self.para.is_empty() && self.items.is_empty() {
            return;
        }
        let list = (!self.items.is_empty()).then(|| {
            let items = self
                .items
                .drain(..)
                .map(|t| inline_block(BlockKind::BulletItem, &t))
                .collect();
            Block::new(BlockKind::BulletList, "").with_children(items)
        });
        if self.para.is_empty() {
            let list = list.expect("items present");
            let reuse = self.attachable
                && matches!(self.blocks.last(), Some(b) if b.kind == BlockKind::Paragraph && b.bullet_list().is_none());
            if reuse {
                self.blocks.last_mut().unwrap().children.push(list);
            } else {
                self.blocks.push(Block::new(BlockKind::Paragraph, "").with_children(vec![list]));
            }
        } else {
            let raw = self.para.join(" ");
            self.para.clear();
            let mut block = inline_block(BlockKind::Paragraph, &raw);
            block.children.extend(list);
            self.blocks.push(block);
        }
        self.attachable = false;
    }

    fn flush_indent(&mut self) {
        if !self.indent.is_empty() {
            let raw = self.indent.join(" ");
            self.indent.clear();
            self.push(BlockKind::Indent, &raw);
        }
    }

    fn flush_quote(&mut self) {
        if !self.quote.is_empty() {
            let raw = self.quote.join(" ");
            self.quote.clear();
            self.push(BlockKind::QuoteDouble, &raw);
        }
    }
}

fn inline_block(kind: BlockKind, raw: &str) -> Block {
    let (text, spans) = parse_inline(raw);
    Block::new(kind, text).with_spans(spans)
}

/// Parses inline markup into plain text plus spans, then tags URLs,
/// uppercase words, question-preceding words and after-symbol words.
pub fn parse_inline(raw: &str) -> (String, Vec<InlineSpan>) {
    let chars: Vec<char> = raw.chars().collect();
    let mut out = Inline::default();
    out.parse(&chars);
    let mut spans = out.spans;
    let text = out.text;
    tag_text(&text, &mut spans);
    spans.sort();
    spans.dedup();
    (text, spans)
}

#[derive(Default)]
struct Inline {
    text: String,
    len: usize,
    spans: Vec<InlineSpan>,
}

fn find_seq(chars: &[char], from: usize, pat: &[char]) -> Option<usize> {
    (from..chars.len().saturating_sub(pat.len() - 1)).find(|&k| chars[k..].starts_with(pat))
}

fn matching(chars: &[char], open_at: usize, open: char, close: char) -> Option<usize> {
    let mut depth = 0usize;
    for (k, &c) in chars.iter().enumerate().skip(open_at) {
        if c == open {
            depth += 1;
        } else if c == close {
            depth -= 1;
            if depth == 0 {
                return Some(k);
            }
        }
    }
    None
}

impl Inline {
    fn push_char(&mut self, c: char) {
        self.text.push(c);
        self.len += 1;
    }

    fn push_str(&mut self, s: &str) {
        self.text.push_str(s);
        self.len += s.chars().count();
    }

    /// Appends parsed `inner` and wraps it in a span of `kind`, dropping
    /// nested spans of the same kind.
    fn wrap(&mut self, inner: &[char], kind: SpanKind) {
        let mut sub = Inline::default();
        sub.parse(inner);
        let start = self.len;
        self.push_str(&sub.text);
        for s in sub.spans.into_iter().filter(|s| s.kind != kind) {
            self.spans.push(InlineSpan::new(s.start + start, s.end + start, s.kind));
        }
        if self.len > start {
            self.spans.push(InlineSpan::new(start, self.len, kind));
        }
    }

    fn append(&mut self, inner: &[char]) {
        let mut sub = Inline::default();
        sub.parse(inner);
        let start = self.len;
        self.push_str(&sub.text);
        for s in sub.spans {
            self.spans.push(InlineSpan::new(s.start + start, s.end + start, s.kind));
        }
    }

    fn parse(&mut self, chars: &[char]) {
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let next = chars.get(i + 1).copied();
            let prev_alnum = i > 0 && chars[i - 1].is_alphanumeric();

            // footnote anchor: kept verbatim
            if c == '[' && next == Some('^') {
                if let Some(end) = chars[i..].iter().position(|&x| x == ']') {
                    for &x in &chars[i..=i + end] {
                        self.push_char(x);
                    }
                    i += end + 1;
                    continue;
                }
            }
            if c == '[' {
                if let Some(close) = matching(chars, i, '[', ']') {
                    if chars.get(close + 1) == Some(&'(') {
                        if let Some(paren) = matching(chars, close + 1, '(', ')') {
                            self.append(&chars[i + 1..close]);
                            let url: String = chars[close + 2..paren].iter().collect();
                            if !url.trim().is_empty() {
                                self.push_char(' ');
                                self.push_str(url.trim());
                            }
                            i = paren + 1;
                            continue;
                        }
                    }
                }
            }
            if c == '*' && next == Some('*') {
                let starts_ok = chars.get(i + 2).is_some_and(|x| *x != '*' && !x.is_whitespace());
                if starts_ok {
                    if let Some(end) = find_seq(chars, i + 2, &['*', '*']) {
                        if !chars[end - 1].is_whitespace() {
                            self.wrap(&chars[i + 2..end], SpanKind::Emphasis);
                            i = end + 2;
                            continue;
                        }
                    }
                }
            }
            if c == '_' && !prev_alnum && next.is_some_and(|x| x != '_' && !x.is_whitespace()) {
                let end = (i + 2..chars.len()).find(|&k| {
                    chars[k] == '_'
                        && !chars[k - 1].is_whitespace()
                        && !chars.get(k + 1).is_some_and(|x| x.is_alphanumeric())
                });
                if let Some(end) = end {
                    self.wrap(&chars[i + 1..end], SpanKind::Emphasis);
                    i = end + 1;
                    continue;
                }
            }
            if c == '=' && next == Some('=') {
                if let Some(end) = find_seq(chars, i + 2, &['=', '=']) {
                    if end > i + 2 {
                        self.wrap(&chars[i + 2..end], SpanKind::Highlight);
                        i = end + 2;
                        continue;
                    }
                }
            }
            if c == '~' || c == '^' {
                let kind = if c == '~' { SpanKind::Subscript } else { SpanKind::Superscript };
                let end = (i + 1..chars.len())
                    .take_while(|&k| !chars[k].is_whitespace())
                    .find(|&k| chars[k] == c);
                if let Some(end) = end.filter(|&e| e > i + 1) {
                    self.wrap(&chars[i + 1..end], kind);
                    i = end + 1;
                    continue;
                }
            }
            if c == '(' {
                if let Some(close) = matching(chars, i, '(', ')').filter(|&k| k > i + 1) {
                    self.push_char('(');
                    self.wrap(&chars[i + 1..close], SpanKind::Bracketed);
                    self.push_char(')');
                    i = close + 1;
                    continue;
                }
            }
            if c == '{' {
                if let Some(close) = matching(chars, i, '{', '}') {
                    if chars.get(close + 1) == Some(&'_') && chars.get(close + 2) == Some(&'{') {
                        if let Some(lclose) = matching(chars, close + 2, '{', '}') {
                            self.push_char('{');
                            self.append(&chars[i + 1..close]);
                            self.push_char('}');
                            self.push_char(' ');
                            self.wrap(&chars[close + 3..lclose], SpanKind::UnderbraceLabel);
                            i = lclose + 1;
                            continue;
                        }
                    }
                }
            }
            self.push_char(c);
            i += 1;
        }
    }
}

fn byte_to_char(text: &str) -> Vec<usize> {
    // maps byte offset -> char offset for every char boundary
    let mut map = vec![0usize; text.len() + 1];
    let mut ci = 0;
    for (b, ch) in text.char_indices() {
        map[b..b + ch.len_utf8()].fill(ci);
        ci += 1;
    }
    map[text.len()] = ci;
    map
}

fn tag_text(text: &str, spans: &mut Vec<InlineSpan>) {
    let chars: Vec<char> = text.chars().collect();
    let b2c = byte_to_char(text);
    let mut url_ranges = Vec::new();

    for m in URL.find_iter(text) {
        let mut url = m.as_str();
        url = url.trim_end_matches(['.', ',', ';', ':', '!', '?']);
        let start = b2c[m.start()];
        url_ranges.push((start, start + url.chars().count()));
        let after_scheme = url.find("://").map(|p| p + 3).unwrap_or(0);
        let Some(slash) = url[after_scheme..].find('/') else { continue };
        let path_start = after_scheme + slash;
        let path = &url[path_start..];
        let path = path.split(['?', '#']).next().unwrap_or("");
        let mut segments = Vec::new();
        let mut offset = b2c[m.start() + path_start];
        for seg in path.split('/') {
            let len = seg.chars().count();
            if !seg.is_empty() && seg.chars().any(|c| c.is_alphanumeric()) {
                segments.push((offset, offset + len));
            }
            offset += len + 1;
        }
        if let Some((&last, heads)) = segments.split_last() {
            for &(s, e) in heads {
                spans.push(InlineSpan::new(s, e, SpanKind::HyperlinkHead));
            }
            spans.push(InlineSpan::new(last.0, last.1, SpanKind::HyperlinkTail));
        }
    }
    let in_url = |k: usize| url_ranges.iter().any(|&(s, e)| s <= k && k < e);

    let words = text::words(text);
    for w in &words {
        if in_url(w.start) {
            continue;
        }
        let letters: Vec<char> = chars[w.start..w.end].iter().copied().filter(|c| c.is_alphabetic()).collect();
        if w.end - w.start >= 2 && letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase()) {
            spans.push(InlineSpan::new(w.start, w.end, SpanKind::Uppercase));
        }
    }

    for (k, &c) in chars.iter().enumerate() {
        if c != '?' || in_url(k) {
            continue;
        }
        if let Some(w) = words.iter().rev().find(|w| w.end <= k) {
            if chars[w.end..k].iter().all(|c| c.is_whitespace()) {
                spans.push(InlineSpan::new(w.start, w.end, SpanKind::QuestionPrecedingNoun));
            }
        }
    }

    let mut k = 0;
    while k < chars.len() {
        let sym_len = match chars[k] {
            '>' | '<' | '#' => 1,
            '|' if chars.get(k + 1) == Some(&'|') => 2,
            '&' if chars.get(k + 1) == Some(&'&') => 2,
            _ => 0,
        };
        if sym_len == 0 || in_url(k) {
            k += 1;
            continue;
        }
        let after = k + sym_len;
        if let Some(w) = words.iter().find(|w| w.start >= after) {
            if chars[after..w.start].iter().all(|c| c.is_whitespace()) {
                spans.push(InlineSpan::new(w.start, w.end, SpanKind::AfterSymbol));
            }
        }
        k = after;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span_texts(text: &str, spans: &[InlineSpan], kind: SpanKind) -> Vec<String> {
        spans
            .iter()
            .filter(|s| s.kind == kind)
            .map(|s| text::char_slice(text, s.start, s.end).to_string())
            .collect()
    }

    #[test]
    fn minimal_header() {
        let d = parse_markdown("d", "# Country\nJapan is east.");
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.blocks[0].kind, BlockKind::SectionTitle { level: 1 });
        assert_eq!(d.blocks[0].text, "Country");
        assert_eq!(d.blocks[1].kind, BlockKind::Paragraph);
        assert_eq!(d.first_paragraph_index, Some(1));
        d.validate().unwrap();
    }

    #[test]
    fn bullets_attach_to_preceding_paragraph() {
        let d = parse_markdown("d", "X contains the following:\n- X1\n- X2");
        assert_eq!(d.blocks.len(), 1);
        let p = &d.blocks[0];
        assert_eq!(p.text, "X contains the following:");
        let list = p.bullet_list().unwrap();
        let items: Vec<_> = list.children.iter().map(|b| (b.kind.clone(), b.text.as_str())).collect();
        assert_eq!(
            items,
            [(BlockKind::BulletItem, "X1"), (BlockKind::BulletItem, "X2")]
        );
        d.validate().unwrap();
    }

    #[test]
    fn bullets_after_blank_line_still_attach() {
        let d = parse_markdown("d", "Genres:\n\n* rock\n* jazz\n\nAfter.");
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.blocks[0].bullet_list().unwrap().children.len(), 2);
        assert_eq!(d.blocks[1].text, "After.");
    }

    #[test]
    fn text_after_list_starts_new_paragraph() {
        let d = parse_markdown("d", "Head:\n- a\n- b\nTail text\n- c");
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.blocks[1].text, "Tail text");
        assert_eq!(d.blocks[1].bullet_list().unwrap().children.len(), 1);
        d.validate().unwrap();
    }

    #[test]
    fn list_under_header_gets_empty_paragraph() {
        let d = parse_markdown("d", "## Items\n- a\n- b");
        assert_eq!(d.blocks[1].kind, BlockKind::Paragraph);
        assert_eq!(d.blocks[1].text, "");
        assert_eq!(d.first_paragraph_index, None);
    }

    #[test]
    fn url_segments_head_and_tail() {
        let d = parse_markdown("d", "see www.webmd.com/a/symptoms/headache");
        let b = &d.blocks[0];
        assert_eq!(span_texts(&b.text, &b.spans, SpanKind::HyperlinkHead), ["a", "symptoms"]);
        assert_eq!(span_texts(&b.text, &b.spans, SpanKind::HyperlinkTail), ["headache"]);
    }

    #[test]
    fn markdown_link_renders_url() {
        let (text, spans) = parse_inline("read [this](https://x.org/music/jazz?q=1).");
        assert_eq!(text, "read this https://x.org/music/jazz?q=1.");
        assert_eq!(span_texts(&text, &spans, SpanKind::HyperlinkHead), ["music"]);
        assert_eq!(span_texts(&text, &spans, SpanKind::HyperlinkTail), ["jazz"]);
        assert!(span_texts(&text, &spans, SpanKind::QuestionPrecedingNoun).is_empty());
    }

    #[test]
    fn emphasis_highlight_scripts() {
        let (text, spans) = parse_inline("A **few priorities** and _yoga_ with ==secret== H~2~O 1^st^");
        assert_eq!(text, "A few priorities and yoga with secret H2O 1st");
        assert_eq!(span_texts(&text, &spans, SpanKind::Emphasis), ["few priorities", "yoga"]);
        assert_eq!(span_texts(&text, &spans, SpanKind::Highlight), ["secret"]);
        assert_eq!(span_texts(&text, &spans, SpanKind::Subscript), ["2"]);
        assert_eq!(span_texts(&text, &spans, SpanKind::Superscript), ["st"]);
    }

    #[test]
    fn masked_digits_are_not_emphasis() {
        let (text, spans) = parse_inline("card ****1234");
        assert_eq!(text, "card ****1234");
        assert!(spans.is_empty());
        let (text, _) = parse_inline("fill in ____ here and expression_1");
        assert_eq!(text, "fill in ____ here and expression_1");
    }

    #[test]
    fn brackets_and_underbrace() {
        let (text, spans) = parse_inline("Location (Japan, Singapore (SG)) and {e1, e2}_{Hypernym} here");
        assert_eq!(text, "Location (Japan, Singapore (SG)) and {e1, e2} Hypernym here");
        assert_eq!(span_texts(&text, &spans, SpanKind::Bracketed), ["Japan, Singapore (SG)"]);
        assert_eq!(span_texts(&text, &spans, SpanKind::UnderbraceLabel), ["Hypernym"]);
        assert_eq!(span_texts(&text, &spans, SpanKind::Uppercase), ["SG"]);
    }

    #[test]
    fn uppercase_question_and_symbols() {
        let (text, spans) = parse_inline("NATO and I. Which city? a > b && c #tag");
        assert_eq!(span_texts(&text, &spans, SpanKind::Uppercase), ["NATO"]);
        assert_eq!(span_texts(&text, &spans, SpanKind::QuestionPrecedingNoun), ["city"]);
        assert_eq!(span_texts(&text, &spans, SpanKind::AfterSymbol), ["b", "c", "tag"]);
    }

    #[test]
    fn footnotes_quotes_indents_tables_captions() {
        let src = "Word[^1] here.\n\n[^1]: first note\n\n> said so\n\n    Opening words. body\n\n| Name | SSN |\n|---|---|\n| Bob | 1 |\n\nFigure 1: Genres of music\n![Shapes](a.png)";
        let d = parse_markdown("d", src);
        let kinds: Vec<&str> = d.blocks.iter().map(|b| b.kind.name()).collect();
        assert_eq!(
            kinds,
            [
                "paragraph",
                "footnote",
                "quote_double",
                "indent",
                "table_cell",
                "table_cell",
                "table_cell",
                "table_cell",
                "caption",
                "caption"
            ]
        );
        assert_eq!(d.blocks[0].text, "Word[^1] here.");
        assert_eq!(d.blocks[1].kind, BlockKind::Footnote { label: "1".into() });
        assert_eq!(d.blocks[3].text, "Opening words. body");
        assert_eq!(d.blocks[9].text, "Shapes");
        d.validate().unwrap();
    }

    #[test]
    fn nested_headers_levels() {
        let d = parse_markdown("d", "# A\n## B ##\ntext\n### C");
        let levels: Vec<_> = d.blocks.iter().filter_map(|b| b.kind.title_level()).collect();
        assert_eq!(levels, [1, 2, 3]);
        assert_eq!(d.blocks[1].text, "B");
    }
}
