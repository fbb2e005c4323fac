//! Feature weighting and context vectors.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::par;
use crate::space::matrix::CooccurrenceMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weighting {
    Freq,
    Pmi,
    Ppmi,
}

impl Weighting {
    pub fn name(self) -> &'static str {
        match self {
            Weighting::Freq => "freq",
            Weighting::Pmi => "pmi",
            Weighting::Ppmi => "ppmi",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            Weighting::Freq => 0,
            Weighting::Pmi => 1,
            Weighting::Ppmi => 2,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Weighting::Freq),
            1 => Some(Weighting::Pmi),
            2 => Some(Weighting::Ppmi),
            _ => None,
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "freq" => Ok(Weighting::Freq),
            "pmi" => Ok(Weighting::Pmi),
            "ppmi" => Ok(Weighting::Ppmi),
            other => Err(Error::Config(format!("unknown weighting scheme {other:?}"))),
        }
    }
}

/// Natural-log pointwise mutual information of one cell.
pub fn pmi(count: u64, row_sum: u64, col_sum: u64, total: u64) -> f64 {
    ((count as f64 * total as f64) / (row_sum as f64 * col_sum as f64)).ln()
}

/// A sparse context vector, ascending by feature id, without zero entries.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContextVector {
    entries: Vec<(u32, f64)>,
}

impl ContextVector {
    /// Builds from arbitrary `(feature, weight)` pairs: sorted, duplicates
    /// summed, zeros dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, f64)>>(pairs: I) -> Self {
        let mut entries: Vec<(u32, f64)> = pairs.into_iter().collect();
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
        for (f, w) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == f => last.1 += w,
                _ => merged.push((f, w)),
            }
        }
        merged.retain(|e| e.1 != 0.0);
        ContextVector { entries: merged }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, feature: u32) -> f64 {
        self.entries
            .binary_search_by_key(&feature, |e| e.0)
            .map_or(0.0, |k| self.entries[k].1)
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// Weighted term x feature space with row (CSR) and column (CSC) access.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpace {
    scheme: Weighting,
    terms: IndexSet<String>,
    features: IndexSet<String>,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<f64>,
    col_ptr: Vec<usize>,
    col_rows: Vec<u32>,
    col_values: Vec<f64>,
}

impl WeightedSpace {
    pub(crate) fn from_csr(
        scheme: Weighting,
        terms: IndexSet<String>,
        features: IndexSet<String>,
        indptr: Vec<usize>,
        indices: Vec<u32>,
        values: Vec<f64>,
    ) -> Self {
        let n_features = features.len();
        let mut col_ptr = vec![0usize; n_features + 1];
        for &f in &indices {
            col_ptr[f as usize + 1] += 1;
        }
        for c in 0..n_features {
            col_ptr[c + 1] += col_ptr[c];
        }
        let mut fill = col_ptr.clone();
        let mut col_rows = vec![0u32; indices.len()];
        let mut col_values = vec![0f64; indices.len()];
        for r in 0..terms.len() {
            for k in indptr[r]..indptr[r + 1] {
                let c = indices[k] as usize;
                col_rows[fill[c]] = r as u32;
                col_values[fill[c]] = values[k];
                fill[c] += 1;
            }
        }
        WeightedSpace {
            scheme,
            terms,
            features,
            indptr,
            indices,
            values,
            col_ptr,
            col_rows,
            col_values,
        }
    }

    /// A space with no terms or features.
    pub fn empty(scheme: Weighting) -> Self {
        Self::from_csr(scheme, IndexSet::new(), IndexSet::new(), vec![0], Vec::new(), Vec::new())
    }

    pub fn scheme(&self) -> Weighting {
        self.scheme
    }

    pub fn terms(&self) -> &IndexSet<String> {
        &self.terms
    }

    pub fn features(&self) -> &IndexSet<String> {
        &self.features
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn term_row(&self, term: &str) -> Option<usize> {
        self.terms.get_index_of(term)
    }

    pub fn row(&self, row: usize) -> (&[u32], &[f64]) {
        let (s, e) = (self.indptr[row], self.indptr[row + 1]);
        (&self.indices[s..e], &self.values[s..e])
    }

    /// Rows and weights of one feature column, ascending by row.
    pub fn column(&self, feature: u32) -> (&[u32], &[f64]) {
        let (s, e) = (self.col_ptr[feature as usize], self.col_ptr[feature as usize + 1]);
        (&self.col_rows[s..e], &self.col_values[s..e])
    }

    pub(crate) fn csr(&self) -> (&[usize], &[u32], &[f64]) {
        (&self.indptr, &self.indices, &self.values)
    }

    pub fn row_vector(&self, row: usize) -> ContextVector {
        let (idx, vals) = self.row(row);
        ContextVector {
            entries: idx.iter().copied().zip(vals.iter().copied()).collect(),
        }
    }

    /// The term's row; unseen terms get an empty vector.
    pub fn context_vector(&self, term: &str) -> ContextVector {
        self.term_row(term).map(|r| self.row_vector(r)).unwrap_or_default()
    }
}

/// Applies a weighting scheme. Zero weights are not stored.
pub fn weight(m: &CooccurrenceMatrix, scheme: Weighting) -> Result<WeightedSpace> {
    if scheme != Weighting::Freq && m.total() == 0 {
        return Err(Error::EmptyMatrix(scheme.name()));
    }
    let total = m.total();
    let rows: Vec<Vec<(u32, f64)>> = par::map_range(m.terms().len(), |r| {
        let (idx, counts) = m.row(r);
        let row_sum = m.row_sum(r);
        idx.iter()
            .zip(counts)
            .filter_map(|(&f, &n)| {
                let w = match scheme {
                    Weighting::Freq => n as f64,
                    Weighting::Pmi => pmi(n, row_sum, m.col_sum(f as usize), total),
                    Weighting::Ppmi => pmi(n, row_sum, m.col_sum(f as usize), total).max(0.0),
                };
                (w != 0.0).then_some((f, w))
            })
            .collect()
    });
    let mut indptr = Vec::with_capacity(rows.len() + 1);
    indptr.push(0);
    let nnz: usize = rows.iter().map(Vec::len).sum();
    let mut indices = Vec::with_capacity(nnz);
    let mut values = Vec::with_capacity(nnz);
    for row in rows {
        for (f, w) in row {
            indices.push(f);
            values.push(w);
        }
        indptr.push(indices.len());
    }
    Ok(WeightedSpace::from_csr(
        scheme,
        m.terms().clone(),
        m.features().clone(),
        indptr,
        indices,
        values,
    ))
}
