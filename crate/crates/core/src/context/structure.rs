//! Structural annotation: maps document blocks and spans to relational
//! (`v_a`/`v_b`) and general (`v_c`) mention roles.
//!
//! Relational units:
//! - bullet list: one per block owning a bullet list; head = block text,
//!   items = bullet item texts
//! - hyperlink: one per link; head = path segments before the last, item =
//!   last segment
//! - footnote: one per sentence carrying anchors; head = that sentence,
//!   items = bodies of the anchored footnotes
//! - section hierarchy: one per title; head = title, items = every block in
//!   its scope (until the next title of the same or a higher level)
//! - brackets / scripts: one per sentence carrying such spans; head = the
//!   sentence outside the spans, items = span text
//! - indent: one per indented block; head = first sentence, items = rest
//! - underbrace: one per label; head = label, items = the braced body
//!
//! General units are block nodes (own text only).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::context::ids::{GeneralContext, RelationalContext};
use crate::context::stats::StructureStats;
use crate::error::{Error, Result};
use crate::ingest::document::{Block, BlockKind, InlineSpan, SpanKind, StructuredDocument};
use crate::ingest::text::{self, Word};
use crate::ingest::vocab::{match_lemmas, TermId, Vocabulary};
use crate::par;

static ANCHOR: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[\^([^\]\s]+)\]").unwrap());

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StructureConfig {
    /// Number of leading paragraphs treated as definition text.
    pub definition_paragraphs: usize,
    /// Shapes at positions below this limit count as hypernym-like.
    pub shape_order_limit: usize,
    /// Table cells with exactly this many words are single-word cells.
    pub single_word_cell: usize,
    /// Table cells with more than this many words are many-word cells.
    pub many_word_cell: usize,
}

impl Default for StructureConfig {
    fn default() -> Self {
        StructureConfig {
            definition_paragraphs: 1,
            shape_order_limit: 3,
            single_word_cell: 1,
            many_word_cell: 5,
        }
    }
}

impl StructureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.many_word_cell < self.single_word_cell {
            return Err(Error::Config("many_word_cell must be >= single_word_cell".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Mention {
    pub term: TermId,
    pub start: usize,
    pub end: usize,
}

fn mentions_in(words: &[Word], vocab: &Vocabulary, keep: impl Fn(&Word) -> bool) -> Vec<Mention> {
    let picked: Vec<&Word> = words.iter().filter(|w| keep(w)).collect();
    let lemmas: Vec<&str> = picked.iter().map(|w| w.folded.as_str()).collect();
    match_lemmas(&lemmas, vocab)
        .into_iter()
        .map(|m| Mention {
            term: m.term,
            start: picked[m.start].start,
            end: picked[m.end - 1].end,
        })
        .collect()
}

/// One block in a flattened document, in pre-order.
pub(crate) struct Node<'d> {
    pub block: &'d Block,
    pub top: usize,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub words: Vec<Word>,
    pub mentions: Vec<Mention>,
}

impl Node<'_> {
    pub fn text(&self) -> &str {
        &self.block.text
    }

    pub fn spans(&self, kinds: &[SpanKind]) -> Vec<InlineSpan> {
        let mut v: Vec<InlineSpan> = self.block.spans.iter().filter(|s| kinds.contains(&s.kind)).copied().collect();
        v.sort();
        v
    }

    /// Mentions inside `start..end`; words straddling a boundary are clipped.
    fn within(&self, vocab: &Vocabulary, start: usize, end: usize) -> Vec<Mention> {
        let clipped: Vec<Word> = self
            .words
            .iter()
            .filter(|w| w.start < end && start < w.end)
            .map(|w| {
                if start <= w.start && w.end <= end {
                    w.clone()
                } else {
                    let (s, e) = (w.start.max(start), w.end.min(end));
                    Word {
                        start: s,
                        end: e,
                        folded: text::char_slice(self.text(), s, e).to_lowercase(),
                    }
                }
            })
            .collect();
        mentions_in(&clipped, vocab, |_| true)
    }
}

/// A document flattened for annotation.
pub(crate) struct DocView<'d> {
    pub doc: &'d StructuredDocument,
    pub nodes: Vec<Node<'d>>,
    /// Top-level index -> node index.
    pub top_nodes: Vec<usize>,
    /// Top-level index -> dominating title top-level indices, outermost first.
    pub governing: Vec<Vec<usize>>,
}

impl<'d> DocView<'d> {
    pub fn new(doc: &'d StructuredDocument, vocab: &Vocabulary) -> Self {
        let mut nodes = Vec::new();
        let mut top_nodes = Vec::with_capacity(doc.blocks.len());
        for (top, block) in doc.blocks.iter().enumerate() {
            top_nodes.push(nodes.len());
            push_node(&mut nodes, block, top, None, vocab);
        }
        let mut governing = Vec::with_capacity(doc.blocks.len());
        let mut stack: Vec<(u32, usize)> = Vec::new();
        for (top, block) in doc.blocks.iter().enumerate() {
            if let Some(level) = block.kind.title_level() {
                while stack.last().is_some_and(|&(l, _)| l >= level) {
                    stack.pop();
                }
                governing.push(stack.iter().map(|&(_, t)| t).collect());
                stack.push((level, top));
            } else {
                governing.push(stack.iter().map(|&(_, t)| t).collect());
            }
        }
        DocView {
            doc,
            nodes,
            top_nodes,
            governing,
        }
    }

    /// Node indices of `node` and all its descendants.
    pub fn subtree(&self, node: usize) -> Vec<usize> {
        let mut out = vec![node];
        let mut k = 0;
        while k < out.len() {
            out.extend(self.nodes[out[k]].children.iter().copied());
            k += 1;
        }
        out
    }

    fn subtree_terms(&self, node: usize) -> BTreeSet<TermId> {
        self.subtree(node)
            .into_iter()
            .flat_map(|n| self.nodes[n].mentions.iter().map(|m| m.term))
            .collect()
    }

    /// Ancestor block kinds of a node, nearest first (excluding itself).
    fn ancestor_kinds(&self, node: usize) -> Vec<&BlockKind> {
        let mut out = Vec::new();
        let mut cur = self.nodes[node].parent;
        while let Some(p) = cur {
            out.push(&self.nodes[p].block.kind);
            cur = self.nodes[p].parent;
        }
        out
    }

    /// Texts of titles governing `node` (excluding the node itself).
    pub fn governing_titles(&self, node: usize) -> Vec<&'d str> {
        let top = self.nodes[node].top;
        self.governing[top]
            .iter()
            .map(|&t| self.doc.blocks[t].text.as_str())
            .collect()
    }
}

fn push_node<'d>(
    nodes: &mut Vec<Node<'d>>,
    block: &'d Block,
    top: usize,
    parent: Option<usize>,
    vocab: &Vocabulary,
) -> usize {
    let idx = nodes.len();
    let words = text::words(&block.text);
    let mentions = mentions_in(&words, vocab, |_| true);
    nodes.push(Node {
        block,
        top,
        parent,
        children: Vec::new(),
        words,
        mentions,
    });
    for child in &block.children {
        let c = push_node(nodes, child, top, Some(idx), vocab);
        nodes[idx].children.push(c);
    }
    idx
}

fn terms(mentions: &[Mention]) -> BTreeSet<TermId> {
    mentions.iter().map(|m| m.term).collect()
}

/// Adds relational units for one document.
pub(crate) fn add_relational(view: &DocView<'_>, vocab: &Vocabulary, stats: &mut StructureStats) {
    use RelationalContext as R;

    // bullet lists
    for node in &view.nodes {
        let Some(list) = node.block.bullet_list() else { continue };
        let heads = terms(&node.mentions);
        let list_node = node
            .children
            .iter()
            .copied()
            .find(|&c| std::ptr::eq(view.nodes[c].block, list))
            .expect("list child indexed");
        let items: BTreeSet<TermId> = view.nodes[list_node]
            .children
            .iter()
            .flat_map(|&c| view.nodes[c].mentions.iter().map(|m| m.term))
            .collect();
        stats.relational_mut(R::BulletList).add_unit(&heads, &items);
    }

    // hyperlinks
    for node in &view.nodes {
        let mut heads = BTreeSet::new();
        for span in node.spans(&[SpanKind::HyperlinkHead, SpanKind::HyperlinkTail]) {
            let found = terms(&node.within(vocab, span.start, span.end));
            if span.kind == SpanKind::HyperlinkHead {
                heads.extend(found);
            } else {
                stats.relational_mut(R::Hyperlink).add_unit(&heads, &found);
                heads.clear();
            }
        }
    }

    // footnotes
    let mut bodies: HashMap<&str, BTreeSet<TermId>> = HashMap::new();
    for (i, node) in view.nodes.iter().enumerate() {
        if let BlockKind::Footnote { label } = &node.block.kind {
            bodies.entry(label.as_str()).or_default().extend(view.subtree_terms(i));
        }
    }
    for node in &view.nodes {
        let text = node.text();
        if !text.contains("[^") {
            continue;
        }
        let b2c = byte_to_char(text);
        let anchors: Vec<(usize, usize, &str)> = ANCHOR
            .captures_iter(text)
            .map(|c| {
                let m = c.get(0).unwrap();
                (b2c[m.start()], b2c[m.end()], c.get(1).unwrap().as_str())
            })
            .collect();
        for (s, e) in text::sentences(text) {
            let here: Vec<_> = anchors.iter().filter(|a| s <= a.0 && a.0 < e).collect();
            if here.is_empty() {
                continue;
            }
            let heads: BTreeSet<TermId> = node
                .mentions
                .iter()
                .filter(|m| s <= m.start && m.end <= e)
                .filter(|m| !here.iter().any(|a| m.start < a.1 && a.0 < m.end))
                .map(|m| m.term)
                .collect();
            let mut items = BTreeSet::new();
            for a in &here {
                if let Some(b) = bodies.get(a.2) {
                    items.extend(b.iter().copied());
                }
            }
            stats.relational_mut(R::Footnote).add_unit(&heads, &items);
        }
    }

    // section hierarchy
    let blocks = &view.doc.blocks;
    for (top, block) in blocks.iter().enumerate() {
        let Some(level) = block.kind.title_level() else { continue };
        let heads = terms(&view.nodes[view.top_nodes[top]].mentions);
        let mut items = BTreeSet::new();
        for (next, later) in blocks.iter().enumerate().skip(top + 1) {
            if later.kind.title_level().is_some_and(|l| l <= level) {
                break;
            }
            items.extend(view.subtree_terms(view.top_nodes[next]));
        }
        stats.relational_mut(R::SectionHierarchy).add_unit(&heads, &items);
    }

    // brackets and scripts
    for (ctx, kinds) in [
        (R::Bracketed, &[SpanKind::Bracketed][..]),
        (R::SubSuperscript, &[SpanKind::Subscript, SpanKind::Superscript][..]),
    ] {
        for node in &view.nodes {
            let spans = node.spans(kinds);
            if spans.is_empty() {
                continue;
            }
            for (s, e) in text::sentences(node.text()) {
                let here: Vec<&InlineSpan> = spans.iter().filter(|sp| s <= sp.start && sp.start < e).collect();
                if here.is_empty() {
                    continue;
                }
                let heads: BTreeSet<TermId> = node
                    .mentions
                    .iter()
                    .filter(|m| s <= m.start && m.end <= e)
                    .filter(|m| !spans.iter().any(|sp| sp.overlaps(m.start, m.end)))
                    .map(|m| m.term)
                    .collect();
                let mut items = BTreeSet::new();
                for sp in here {
                    items.extend(terms(&node.within(vocab, sp.start, sp.end)));
                }
                stats.relational_mut(ctx).add_unit(&heads, &items);
            }
        }
    }

    // indents
    for node in &view.nodes {
        if node.block.kind != BlockKind::Indent {
            continue;
        }
        let (_, first_end) = text::sentences(node.text())[0];
        let heads: BTreeSet<TermId> = node.mentions.iter().filter(|m| m.end <= first_end).map(|m| m.term).collect();
        let mut items: BTreeSet<TermId> = node.mentions.iter().filter(|m| m.start >= first_end).map(|m| m.term).collect();
        for &c in &node.children {
            items.extend(view.subtree_terms(c));
        }
        stats.relational_mut(R::Indent).add_unit(&heads, &items);
    }

    // underbraces
    for node in &view.nodes {
        let labels = node.spans(&[SpanKind::UnderbraceLabel]);
        if labels.is_empty() {
            continue;
        }
        let chars: Vec<char> = node.text().chars().collect();
        for label in labels {
            let heads = terms(&node.within(vocab, label.start, label.end));
            let items = match brace_body(&chars, label.start) {
                Some((s, e)) => terms(&node.within(vocab, s, e)),
                None => BTreeSet::new(),
            };
            stats.relational_mut(R::Underbrace).add_unit(&heads, &items);
        }
    }
}

/// Char range inside the last `{...}` group closing before `before`.
fn brace_body(chars: &[char], before: usize) -> Option<(usize, usize)> {
    let close = (0..before.min(chars.len())).rev().find(|&k| chars[k] == '}')?;
    let mut depth = 0usize;
    for k in (0..=close).rev() {
        match chars[k] {
            '}' => depth += 1,
            '{' => {
                depth -= 1;
                if depth == 0 {
                    return Some((k + 1, close));
                }
            }
            _ => {}
        }
    }
    None
}

fn byte_to_char(text: &str) -> Vec<usize> {
    let mut map = vec![0usize; text.len() + 1];
    let mut ci = 0;
    for (b, ch) in text.char_indices() {
        map[b..b + ch.len_utf8()].fill(ci);
        ci += 1;
    }
    map[text.len()] = ci;
    map
}

fn title_matches(title: &str, words: &[&str]) -> bool {
    text::words(title).first().is_some_and(|w| words.contains(&w.folded.as_str()))
}

/// Adds per-document counts (`n_x`, `z_c^2`, `z_c^3`) and general units.
pub(crate) fn add_counts_and_general(
    view: &DocView<'_>,
    cfg: &StructureConfig,
    stats: &mut StructureStats,
    with_general: bool,
) {
    use GeneralContext as G;

    let definition: BTreeSet<usize> = view
        .doc
        .definition_blocks(cfg.definition_paragraphs)
        .into_iter()
        .map(|t| view.top_nodes[t])
        .collect();
    let mut shape_ordinal = 0usize;

    for (i, node) in view.nodes.iter().enumerate() {
        let kind = &node.block.kind;
        for m in &node.mentions {
            stats.add_mention(m.term);
            if kind.is_title() {
                stats.add_section_title(m.term);
            }
            if definition.contains(&i) {
                stats.add_definition(m.term);
            }
        }
        let shape_rank = (*kind == BlockKind::Shape).then(|| {
            shape_ordinal += 1;
            shape_ordinal - 1
        });
        if !with_general {
            continue;
        }
        let unit = stats.add_general_unit(&terms(&node.mentions));
        if node.mentions.is_empty() {
            continue;
        }

        let ancestors = view.ancestor_kinds(i);
        let in_kind = |k: &BlockKind| kind == k || ancestors.contains(&k);
        // titles are governed by their parents only
        let titles = view.governing_titles(i);
        let under = |names: &[&str]| titles.iter().any(|t| title_matches(t, names));

        let mut block_level: Vec<GeneralContext> = Vec::new();
        if in_kind(&BlockKind::Caption) {
            block_level.push(G::Caption);
        }
        if in_kind(&BlockKind::InfoBox) {
            block_level.push(G::InfoBox);
        }
        if in_kind(&BlockKind::QuoteDouble) {
            block_level.push(G::DoubleSpaced);
        }
        if *kind == BlockKind::TableCell {
            let n = node.words.len();
            if n == cfg.single_word_cell {
                block_level.push(G::SingleWordCell);
            }
            if n > cfg.many_word_cell {
                block_level.push(G::ManyWordCell);
            }
        }
        if shape_rank.is_some_and(|r| r < cfg.shape_order_limit) {
            block_level.push(G::ShapeOrder);
        }
        if in_kind(&BlockKind::Introduction)
            || in_kind(&BlockKind::Conclusion)
            || under(&["introduction", "conclusion", "conclusions"])
        {
            block_level.push(G::IntroConclusion);
        }
        if in_kind(&BlockKind::References) || under(&["references", "bibliography"]) {
            block_level.push(G::ReferencesCtx);
        }
        if in_kind(&BlockKind::Appendix) || under(&["appendix", "appendices"]) {
            block_level.push(G::AppendixCtx);
        }
        if in_kind(&BlockKind::Abstract) || in_kind(&BlockKind::Keywords) || under(&["abstract", "keywords"]) {
            block_level.push(G::KeywordsAbstract);
        }
        if definition.contains(&i) {
            block_level.push(G::DefinitionText);
        }

        let chars: Vec<char> = node.text().chars().collect();
        let mut values: Vec<BTreeMap<TermId, i8>> = vec![BTreeMap::new(); G::ALL.len()];
        for m in &node.mentions {
            let mut fired: Vec<GeneralContext> = block_level.clone();
            for span in &node.block.spans {
                if !span.overlaps(m.start, m.end) {
                    continue;
                }
                let ctx = match span.kind {
                    SpanKind::Uppercase => G::Uppercase,
                    SpanKind::Emphasis => G::EmphasisStyle,
                    SpanKind::Highlight => G::Highlight,
                    SpanKind::AfterSymbol => G::AfterSymbol,
                    SpanKind::LargeFont => G::LargeFont,
                    SpanKind::QuestionPrecedingNoun => G::QuestionNoun,
                    _ => continue,
                };
                fired.push(ctx);
            }
            let before = m.start.checked_sub(1).map(|k| chars[k]);
            let after = chars.get(m.end).copied();
            let punct = |c: Option<char>, set: &[char]| c.is_some_and(|c| set.contains(&c));
            if punct(before, &['-', '"', '\u{201C}', '\u{201D}'])
                || punct(after, &['-', ';', ',', '"', '\u{201C}', '\u{201D}'])
            {
                fired.push(G::PunctuatedText);
            }
            for ctx in fired {
                values[ctx.index()].insert(m.term, ctx.sign());
            }
        }
        for ctx in G::ALL {
            stats.set_general(ctx, unit, &values[ctx.index()]);
        }
    }
}

/// Relational contributions of one document.
pub fn annotate_relational(doc: &StructuredDocument, vocab: &Vocabulary) -> StructureStats {
    let view = DocView::new(doc, vocab);
    let mut stats = StructureStats::new(vocab);
    add_relational(&view, vocab, &mut stats);
    stats
}

/// General (`v_c`) contributions of one document, one unit per block node.
pub fn annotate_general(doc: &StructuredDocument, vocab: &Vocabulary, cfg: &StructureConfig) -> StructureStats {
    let view = DocView::new(doc, vocab);
    let mut stats = StructureStats::new(vocab);
    add_counts_and_general(&view, cfg, &mut stats, true);
    stats
}

/// Aggregates relational and general annotations plus per-term counts over
/// all documents. Documents are annotated in parallel and merged in input
/// order, so the result does not depend on thread count.
pub fn count_structure(docs: &[StructuredDocument], vocab: &Vocabulary, cfg: &StructureConfig) -> StructureStats {
    let base = StructureStats::new(vocab);
    let parts = par::map(docs, |doc| {
        let view = DocView::new(doc, vocab);
        let mut stats = base.empty_like();
        add_counts_and_general(&view, cfg, &mut stats, true);
        add_relational(&view, vocab, &mut stats);
        stats
    });
    let mut total = base;
    for part in &parts {
        total.merge(part);
    }
    total
}
