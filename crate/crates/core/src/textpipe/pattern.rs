use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Binary stem-presence vector of fixed length `L`.
///
/// The ordering is a canonical total order used to sort pattern tables; it is
/// not meant to be meaningful beyond that.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StemVector {
    len: usize,
    words: Vec<u64>,
}

impl StemVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
            v.set(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// The `K` unique patterns of a corpus, their multiplicities and the
/// document-to-pattern map.
///
/// Documents are kept sorted by id and patterns in canonical order, so two
/// tables built from the same documents are identical however they were
/// assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTable {
    stem_count: usize,
    patterns: Vec<StemVector>,
    counts: Vec<usize>,
    doc_ids: Vec<String>,
    doc_patterns: Vec<usize>,
}

/// Groups `(doc id, vector)` pairs into unique patterns. The all-zero pattern
/// is a pattern like any other.
pub fn build_pattern_table(vectors: Vec<(String, StemVector)>) -> Result<PatternTable> {
    let stem_count = vectors.first().map_or(0, |(_, v)| v.len());
    if let Some((id, v)) = vectors.iter().find(|(_, v)| v.len() != stem_count) {
        return Err(Error::Structural(format!(
            "document `{id}` has a stem vector of length {}, expected {stem_count}",
            v.len()
        )));
    }
    let mut docs = vectors;
    docs.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(w) = docs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::Duplicate(format!("document id `{}`", w[0].0)));
    }
    if let Some((_, _)) = docs.iter().find(|(id, _)| id.is_empty()) {
        return Err(Error::InvalidInput("empty document id".into()));
    }

    let mut unique: BTreeMap<&StemVector, usize> = BTreeMap::new();
    for (_, v) in &docs {
        *unique.entry(v).or_default() += 1;
    }
    let index: BTreeMap<&StemVector, usize> =
        unique.keys().enumerate().map(|(i, v)| (*v, i)).collect();
    let doc_patterns = docs.iter().map(|(_, v)| index[v]).collect();
    let counts = unique.values().copied().collect();
    let patterns = unique.keys().map(|v| (*v).clone()).collect();
    let doc_ids = docs.into_iter().map(|(id, _)| id).collect();

    Ok(PatternTable {
        stem_count,
        patterns,
        counts,
        doc_ids,
        doc_patterns,
    })
}

impl PatternTable {
    /// `K`
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// `L`
    pub fn stem_count(&self) -> usize {
        self.stem_count
    }

    pub fn patterns(&self) -> &[StemVector] {
        &self.patterns
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    /// Document ids in sorted order.
    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// Pattern index of each document, aligned with [`doc_ids`](Self::doc_ids).
    pub fn doc_patterns(&self) -> &[usize] {
        &self.doc_patterns
    }

    pub fn doc_index(&self, id: &str) -> Option<usize> {
        self.doc_ids.binary_search_by(|d| d.as_str().cmp(id)).ok()
    }

    pub fn pattern_of(&self, id: &str) -> Option<usize> {
        self.doc_index(id).map(|i| self.doc_patterns[i])
    }

    pub fn pattern_index(&self, v: &StemVector) -> Option<usize> {
        self.patterns.binary_search(v).ok()
    }

    /// Empirical `P(S)`.
    pub fn distribution<T: Scalar>(&self) -> Vec<T> {
        normalize_counts(&self.counts)
    }

    /// Pattern counts over a subset of documents (indices into the sorted
    /// document list), in this table's pattern order.
    pub fn subset_counts(&self, docs: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut counts = vec![0; self.len()];
        for d in docs {
            counts[self.doc_patterns[d]] += 1;
        }
        counts
    }

    /// Combines two tables over disjoint document sets. Associative and
    /// commutative: the result is canonical.
    pub fn merge(&self, other: &PatternTable) -> Result<PatternTable> {
        if !self.is_empty() && !other.is_empty() && self.stem_count != other.stem_count {
            return Err(Error::Structural(format!(
                "cannot merge tables over {} and {} stems",
                self.stem_count, other.stem_count
            )));
        }
        build_pattern_table(self.vectors().chain(other.vectors()).collect())
    }

    fn vectors(&self) -> impl Iterator<Item = (String, StemVector)> + '_ {
        self.doc_ids
            .iter()
            .zip(&self.doc_patterns)
            .map(|(id, &k)| (id.clone(), self.patterns[k].clone()))
    }
}

/// `counts / Σ counts`; all zeros when the total is zero.
pub(crate) fn normalize_counts<T: Scalar>(counts: &[usize]) -> Vec<T> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return vec![T::zero(); counts.len()];
    }
    let t = T::from_count(total);
    counts.iter().map(|&c| T::from_count(c) / t).collect()
}
