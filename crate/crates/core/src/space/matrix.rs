//! Sparse term x feature co-occurrence counts.

use std::collections::HashMap;

use indexmap::IndexSet;

use crate::context::window::{sentence_events, ContextConfig, CooccurrenceEvent};
use crate::ingest::corpus::TokenizedCorpus;
use crate::ingest::vocab::Vocabulary;
use crate::par;

/// Mutable accumulator. Term and feature ids are assigned in first-seen order.
#[derive(Debug, Clone, Default)]
pub struct MatrixBuilder {
    terms: IndexSet<String>,
    features: IndexSet<String>,
    cells: HashMap<(u32, u32), u64>,
}

impl MatrixBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, target: &str, feature: &str, count: u64) {
        if count == 0 {
            return;
        }
        let t = intern(&mut self.terms, target);
        let f = intern(&mut self.features, feature);
        *self.cells.entry((t, f)).or_default() += count;
    }

    /// Appends `other`. Merging chunk builders in chunk order yields the same
    /// ids as one sequential pass over the concatenated input.
    pub fn merge(&mut self, other: MatrixBuilder) {
        let tmap: Vec<u32> = other.terms.iter().map(|t| intern(&mut self.terms, t)).collect();
        let fmap: Vec<u32> = other.features.iter().map(|f| intern(&mut self.features, f)).collect();
        let mut cells: Vec<_> = other.cells.into_iter().collect();
        cells.sort_unstable();
        for ((t, f), n) in cells {
            *self.cells.entry((tmap[t as usize], fmap[f as usize])).or_default() += n;
        }
    }

    pub fn finish(self) -> CooccurrenceMatrix {
        let n_terms = self.terms.len();
        let n_features = self.features.len();
        let mut cells: Vec<((u32, u32), u64)> = self.cells.into_iter().collect();
        cells.sort_unstable_by_key(|c| c.0);
        let mut indptr = vec![0usize; n_terms + 1];
        let mut indices = Vec::with_capacity(cells.len());
        let mut counts = Vec::with_capacity(cells.len());
        let mut row_sums = vec![0u64; n_terms];
        let mut col_sums = vec![0u64; n_features];
        for &((t, f), n) in &cells {
            indptr[t as usize + 1] += 1;
            indices.push(f);
            counts.push(n);
            row_sums[t as usize] += n;
            col_sums[f as usize] += n;
        }
        for r in 0..n_terms {
            indptr[r + 1] += indptr[r];
        }
        let total = row_sums.iter().sum();
        CooccurrenceMatrix {
            terms: self.terms,
            features: self.features,
            indptr,
            indices,
            counts,
            row_sums,
            col_sums,
            total,
        }
    }
}

fn intern(set: &mut IndexSet<String>, key: &str) -> u32 {
    if let Some(i) = set.get_index_of(key) {
        return i as u32;
    }
    set.insert(key.to_string());
    (set.len() - 1) as u32
}

/// Immutable CSR co-occurrence matrix with marginals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooccurrenceMatrix {
    terms: IndexSet<String>,
    features: IndexSet<String>,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    counts: Vec<u64>,
    row_sums: Vec<u64>,
    col_sums: Vec<u64>,
    total: u64,
}

impl CooccurrenceMatrix {
    pub fn terms(&self) -> &IndexSet<String> {
        &self.terms
    }

    pub fn features(&self) -> &IndexSet<String> {
        &self.features
    }

    pub fn nnz(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn row_sum(&self, row: usize) -> u64 {
        self.row_sums[row]
    }

    pub fn col_sum(&self, col: usize) -> u64 {
        self.col_sums[col]
    }

    /// Feature ids and counts of one row, ascending by feature id.
    pub fn row(&self, row: usize) -> (&[u32], &[u64]) {
        let (s, e) = (self.indptr[row], self.indptr[row + 1]);
        (&self.indices[s..e], &self.counts[s..e])
    }

    pub fn get(&self, term: &str, feature: &str) -> u64 {
        let (Some(t), Some(f)) = (self.terms.get_index_of(term), self.features.get_index_of(feature)) else {
            return 0;
        };
        let (idx, counts) = self.row(t);
        idx.binary_search(&(f as u32)).map_or(0, |k| counts[k])
    }

    /// All nonzero cells as `(term, feature, count)`, sorted by strings.
    /// Independent of id assignment, so it compares matrices built from
    /// differently ordered inputs.
    pub fn triples(&self) -> Vec<(&str, &str, u64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for r in 0..self.terms.len() {
            let (idx, counts) = self.row(r);
            for (&f, &n) in idx.iter().zip(counts) {
                out.push((self.terms[r].as_str(), self.features[f as usize].as_str(), n));
            }
        }
        out.sort_unstable();
        out
    }

    /// Drops terms whose total count is below `min_frequency`.
    pub fn filter_min_frequency(self, min_frequency: u64) -> CooccurrenceMatrix {
        if min_frequency == 0 {
            return self;
        }
        let mut b = MatrixBuilder::new();
        for r in 0..self.terms.len() {
            if self.row_sums[r] < min_frequency {
                continue;
            }
            let (idx, counts) = self.row(r);
            for (&f, &n) in idx.iter().zip(counts) {
                b.add(&self.terms[r], &self.features[f as usize], n);
            }
        }
        b.finish()
    }
}

/// Sums events per (target, feature).
pub fn accumulate<'a, I>(events: I) -> CooccurrenceMatrix
where
    I: IntoIterator<Item = CooccurrenceEvent<'a>>,
{
    let mut b = MatrixBuilder::new();
    for e in events {
        b.add(e.target, &e.feature, e.count);
    }
    b.finish()
}

const DOCS_PER_SHARD: usize = 64;

/// Window extraction and accumulation over a corpus, sharded by document.
/// Shards are merged in order, so the result is identical for any thread
/// count and equal to `accumulate(extract_window_events(..))`.
pub fn build_matrix(corpus: &TokenizedCorpus, vocab: &Vocabulary, cfg: &ContextConfig) -> CooccurrenceMatrix {
    let shards = par::map_chunks(&corpus.documents, DOCS_PER_SHARD, |docs| {
        let mut b = MatrixBuilder::new();
        for s in docs.iter().flat_map(|d| d.sentences.iter()) {
            for e in sentence_events(s, vocab, cfg) {
                b.add(e.target, &e.feature, e.count);
            }
        }
        b
    });
    let mut total = MatrixBuilder::new();
    for shard in shards {
        total.merge(shard);
    }
    total.finish().filter_min_frequency(vocab.min_frequency)
}
