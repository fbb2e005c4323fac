//! Character-offset text utilities shared by the document parsers and the
//! structural annotators. All offsets are in `char`s, not bytes.

/// A word in block text with its character range and folded form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub start: usize,
    pub end: usize,
    pub folded: String,
}

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '_' | '\'' | '\u{2019}')
}

/// Splits text into words: runs of alphanumerics, optionally joined by a
/// single internal `-`, `_` or apostrophe (`south-east`, `expression_1`).
pub fn words(text: &str) -> Vec<Word> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_alphanumeric() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() {
            if chars[i].is_alphanumeric()
                || (is_joiner(chars[i]) && i + 1 < chars.len() && chars[i + 1].is_alphanumeric())
            {
                i += 1;
            } else {
                break;
            }
        }
        let folded = chars[start..i].iter().collect::<String>().to_lowercase();
        out.push(Word {
            start,
            end: i,
            folded,
        });
    }
    out
}

/// Sentence ranges over `text`: a sentence ends after `.`, `!` or `?` that is
/// followed by whitespace or end of text. Ranges cover the whole text.
pub fn sentences(text: &str) -> Vec<(usize, usize)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..chars.len() {
        if matches!(chars[i], '.' | '!' | '?')
            && (i + 1 == chars.len() || chars[i + 1].is_whitespace())
        {
            out.push((start, i + 1));
            start = i + 1;
        }
    }
    if start < chars.len() {
        out.push((start, chars.len()));
    }
    if out.is_empty() {
        out.push((0, 0));
    }
    out
}

pub fn char_len(text: &str) -> usize {
    text.chars().count()
}

/// Substring by character range. Out-of-range bounds are clamped.
pub fn char_slice(text: &str, start: usize, end: usize) -> &str {
    let mut indices = text.char_indices().map(|(b, _)| b).chain(std::iter::once(text.len()));
    let mut b_start = text.len();
    let mut b_end = text.len();
    for (ci, b) in (&mut indices).enumerate() {
        if ci == start {
            b_start = b;
        }
        if ci == end {
            b_end = b;
            break;
        }
    }
    if b_start > b_end {
        return "";
    }
    &text[b_start..b_end]
}
