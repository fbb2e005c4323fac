//! Line-aligned query, gold and prediction files.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::ingest::vocab::normalize_term;
use crate::rank::scorer::RankedResult;

fn lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader.lines().enumerate().map(|(i, l)| {
        l.map(|mut l| {
            if l.ends_with('\r') {
                l.pop();
            }
            (i + 1, l)
        })
        .map_err(Error::from)
    })
}

/// One term per line. Blank lines are rejected.
pub fn read_queries<R: BufRead>(reader: R) -> Result<Vec<String>> {
    lines(reader)
        .map(|l| {
            let (n, line) = l?;
            let term = normalize_term(&line);
            if term.is_empty() {
                Err(Error::parse(n, "empty query"))
            } else {
                Ok(term)
            }
        })
        .collect()
}

fn read_term_lists<R: BufRead>(reader: R) -> Result<Vec<Vec<String>>> {
    lines(reader)
        .map(|l| {
            let (_, line) = l?;
            Ok(line
                .split('\t')
                .map(normalize_term)
                .filter(|t| !t.is_empty())
                .collect())
        })
        .collect()
}

/// Tab-separated gold hypernyms per line; a blank line is an empty gold set.
pub fn read_gold<R: BufRead>(reader: R) -> Result<Vec<Vec<String>>> {
    read_term_lists(reader)
}

pub fn read_predictions<R: BufRead>(reader: R) -> Result<Vec<Vec<String>>> {
    read_term_lists(reader)
}

/// One line per result, candidates tab-separated in rank order.
pub fn write_predictions<W: Write>(mut out: W, results: &[RankedResult]) -> Result<()> {
    for r in results {
        let mut first = true;
        for (term, _) in &r.candidates {
            if !first {
                out.write_all(b"\t")?;
            }
            out.write_all(term.as_bytes())?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub(crate) fn check_aligned(what: &str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Alignment(format!("{expected} queries but {got} {what} lines")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gold_line_with_multiword_terms() {
        let g = read_gold("rock music\tgenre\n".as_bytes()).unwrap();
        assert_eq!(g, vec![vec!["rock music".to_string(), "genre".to_string()]]);
    }

    #[test]
    fn queries_are_normalized() {
        let q = read_queries("Rock  Music\r\njazz\n".as_bytes()).unwrap();
        assert_eq!(q, ["rock music", "jazz"]);
        assert!(matches!(read_queries("a\n\nb\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn predictions_round_trip() {
        let results = vec![
            RankedResult {
                query: "dog".into(),
                candidates: vec![("animal".into(), 2.0), ("pet animal".into(), 1.0)],
            },
            RankedResult {
                query: "rock".into(),
                candidates: vec![],
            },
        ];
        let mut buf = Vec::new();
        write_predictions(&mut buf, &results).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "animal\tpet animal\n\n");
        let back = read_predictions(buf.as_slice()).unwrap();
        assert_eq!(back, vec![vec!["animal".to_string(), "pet animal".to_string()], vec![]]);
        let mut again = Vec::new();
        let rebuilt: Vec<_> = back
            .iter()
            .zip(&results)
            .map(|(terms, r)| RankedResult {
                query: r.query.clone(),
                candidates: terms.iter().map(|t| (t.clone(), 0.0)).collect(),
            })
            .collect();
        write_predictions(&mut again, &rebuilt).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn alignment() {
        assert!(check_aligned("gold", 2, 2).is_ok());
        assert!(matches!(check_aligned("gold", 2, 3), Err(Error::Alignment(_))));
    }
}
