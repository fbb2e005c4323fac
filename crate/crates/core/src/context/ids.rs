use std::fmt;
use std::str::FromStr;

/// Structural contexts with a hypernym slot and a hyponym slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationalContext {
    BulletList,
    Hyperlink,
    Footnote,
    SectionHierarchy,
    Bracketed,
    SubSuperscript,
    Indent,
    Underbrace,
}

impl RelationalContext {
    pub const ALL: [RelationalContext; 8] = [
        RelationalContext::BulletList,
        RelationalContext::Hyperlink,
        RelationalContext::Footnote,
        RelationalContext::SectionHierarchy,
        RelationalContext::Bracketed,
        RelationalContext::SubSuperscript,
        RelationalContext::Indent,
        RelationalContext::Underbrace,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            RelationalContext::BulletList => "bullet_list",
            RelationalContext::Hyperlink => "hyperlink",
            RelationalContext::Footnote => "footnote",
            RelationalContext::SectionHierarchy => "section_hierarchy",
            RelationalContext::Bracketed => "bracketed",
            RelationalContext::SubSuperscript => "sub_superscript",
            RelationalContext::Indent => "indent",
            RelationalContext::Underbrace => "underbrace",
        }
    }
}

/// Structural cues that mark a single mention as hypernym-like (+1) or
/// hyponym-like (-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneralContext {
    Caption,
    PunctuatedText,
    QuestionNoun,
    Highlight,
    SingleWordCell,
    ShapeOrder,
    Uppercase,
    EmphasisStyle,
    AfterSymbol,
    InfoBox,
    LargeFont,
    ManyWordCell,
    IntroConclusion,
    ReferencesCtx,
    AppendixCtx,
    DoubleSpaced,
    KeywordsAbstract,
    DefinitionText,
}

impl GeneralContext {
    pub const ALL: [GeneralContext; 18] = [
        GeneralContext::Caption,
        GeneralContext::PunctuatedText,
        GeneralContext::QuestionNoun,
        GeneralContext::Highlight,
        GeneralContext::SingleWordCell,
        GeneralContext::ShapeOrder,
        GeneralContext::Uppercase,
        GeneralContext::EmphasisStyle,
        GeneralContext::AfterSymbol,
        GeneralContext::InfoBox,
        GeneralContext::LargeFont,
        GeneralContext::ManyWordCell,
        GeneralContext::IntroConclusion,
        GeneralContext::ReferencesCtx,
        GeneralContext::AppendixCtx,
        GeneralContext::DoubleSpaced,
        GeneralContext::KeywordsAbstract,
        GeneralContext::DefinitionText,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Value of `v_c` when the cue fires.
    pub fn sign(self) -> i8 {
        match self {
            GeneralContext::QuestionNoun
            | GeneralContext::Highlight
            | GeneralContext::AfterSymbol
            | GeneralContext::ManyWordCell
            | GeneralContext::ReferencesCtx => -1,
            _ => 1,
        }
    }

    /// Minor cues get a reduced default weight.
    pub fn is_minor(self) -> bool {
        matches!(
            self,
            GeneralContext::ManyWordCell
                | GeneralContext::IntroConclusion
                | GeneralContext::ReferencesCtx
                | GeneralContext::AppendixCtx
                | GeneralContext::DoubleSpaced
                | GeneralContext::KeywordsAbstract
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            GeneralContext::Caption => "caption",
            GeneralContext::PunctuatedText => "punctuated_text",
            GeneralContext::QuestionNoun => "question_noun",
            GeneralContext::Highlight => "highlight",
            GeneralContext::SingleWordCell => "single_word_cell",
            GeneralContext::ShapeOrder => "shape_order",
            GeneralContext::Uppercase => "uppercase",
            GeneralContext::EmphasisStyle => "emphasis_style",
            GeneralContext::AfterSymbol => "after_symbol",
            GeneralContext::InfoBox => "info_box",
            GeneralContext::LargeFont => "large_font",
            GeneralContext::ManyWordCell => "many_word_cell",
            GeneralContext::IntroConclusion => "intro_conclusion",
            GeneralContext::ReferencesCtx => "references",
            GeneralContext::AppendixCtx => "appendix",
            GeneralContext::DoubleSpaced => "double_spaced",
            GeneralContext::KeywordsAbstract => "keywords_abstract",
            GeneralContext::DefinitionText => "definition_text",
        }
    }
}

/// Either kind of structural context; the key space of context weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContextId {
    Relational(RelationalContext),
    General(GeneralContext),
}

impl ContextId {
    pub fn all() -> impl Iterator<Item = ContextId> {
        RelationalContext::ALL
            .into_iter()
            .map(ContextId::Relational)
            .chain(GeneralContext::ALL.into_iter().map(ContextId::General))
    }

    pub const COUNT: usize = 26;

    /// Dense position: relational contexts first, then general ones.
    pub fn slot(self) -> usize {
        match self {
            ContextId::Relational(r) => r.index(),
            ContextId::General(g) => RelationalContext::ALL.len() + g.index(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ContextId::Relational(r) => r.name(),
            ContextId::General(g) => g.name(),
        }
    }
}

impl fmt::Display for ContextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ContextId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        ContextId::all()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown context {s:?}"))
    }
}
