use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pattern::StemVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VocabularyConfig {
    /// n-gram orders, e.g. `[1]` or `[1, 2]`.
    pub ngrams: Vec<usize>,
    pub min_df: usize,
    pub max_df_ratio: f64,
}

impl Default for VocabularyConfig {
    fn default() -> Self {
        Self {
            ngrams: vec![1],
            min_df: 1,
            max_df_ratio: 1.0,
        }
    }
}

impl VocabularyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_df < 1 {
            return Err(Error::Config("min_df must be at least 1".into()));
        }
        if !(self.max_df_ratio > 0.0 && self.max_df_ratio <= 1.0) {
            return Err(Error::Config(format!(
                "max_df_ratio must lie in (0, 1], got {}",
                self.max_df_ratio
            )));
        }
        if self.ngrams.is_empty() || self.ngrams.contains(&0) {
            return Err(Error::Config("ngrams must be a non-empty set of positive orders".into()));
        }
        Ok(())
    }
}

/// The stem universe: `L` distinct n-grams in lexicographic order.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    stems: Vec<String>,
    doc_frequency: Vec<usize>,
    config: VocabularyConfig,
    index: HashMap<String, usize>,
}

impl PartialEq for Vocabulary {
    fn eq(&self, other: &Self) -> bool {
        self.stems == other.stems
            && self.doc_frequency == other.doc_frequency
            && self.config == other.config
    }
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.stems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stems.is_empty()
    }

    pub fn stems(&self) -> &[String] {
        &self.stems
    }

    pub fn doc_frequency(&self) -> &[usize] {
        &self.doc_frequency
    }

    pub fn config(&self) -> &VocabularyConfig {
        &self.config
    }

    pub fn position(&self, stem: &str) -> Option<usize> {
        self.index.get(stem).copied()
    }
}

/// Distinct n-grams of a stemmed document for the given orders; n-grams of
/// order > 1 are joined with `_`.
pub fn document_ngrams(doc: &[String], orders: &[usize]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for &n in orders {
        if n == 0 || doc.len() < n {
            continue;
        }
        for w in doc.windows(n) {
            out.insert(w.join("_"));
        }
    }
    out
}

/// Keeps the n-grams whose document frequency lies in
/// `[min_df, max_df_ratio * N]`.
pub fn build_vocabulary(corpus: &[Vec<String>], config: &VocabularyConfig) -> Result<Vocabulary> {
    config.validate()?;
    let df: HashMap<String, usize> = corpus
        .par_iter()
        .fold(HashMap::new, |mut acc: HashMap<String, usize>, doc| {
            for g in document_ngrams(doc, &config.ngrams) {
                *acc.entry(g).or_default() += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });

    let max_df = config.max_df_ratio * corpus.len() as f64;
    let mut kept: Vec<(String, usize)> = df
        .into_iter()
        .filter(|&(_, f)| f >= config.min_df && (f as f64) <= max_df + 1e-9)
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary {
            min_df: config.min_df,
            max_df_ratio: config.max_df_ratio,
            documents: corpus.len(),
        });
    }
    kept.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let index = kept
        .iter()
        .enumerate()
        .map(|(i, (s, _))| (s.clone(), i))
        .collect();
    let (stems, doc_frequency) = kept.into_iter().unzip();
    Ok(Vocabulary {
        stems,
        doc_frequency,
        config: config.clone(),
        index,
    })
}

/// Binary presence vector of a stemmed document over the vocabulary.
/// Out-of-vocabulary n-grams are ignored.
pub fn vectorize(doc: &[String], vocab: &Vocabulary) -> StemVector {
    let mut v = StemVector::zeros(vocab.len());
    for g in document_ngrams(doc, &vocab.config.ngrams) {
        if let Some(i) = vocab.position(&g) {
            v.set(i);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn docs(xs: &[&[&str]]) -> Vec<Vec<String>> {
        xs.iter()
            .map(|d| d.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    fn cfg(ngrams: &[usize], min_df: usize, max_df_ratio: f64) -> VocabularyConfig {
        VocabularyConfig {
            ngrams: ngrams.to_vec(),
            min_df,
            max_df_ratio,
        }
    }

    #[test]
    fn unigram_enumeration() {
        let c = docs(&[&["a", "b"], &["a", "b"], &["a", "b"]]);
        let v = build_vocabulary(&c, &cfg(&[1], 1, 1.0)).unwrap();
        assert_eq!(v.stems(), &["a", "b"]);
        assert_eq!(v.doc_frequency(), &[3, 3]);
    }

    #[test]
    fn min_df_above_corpus_size_is_empty() {
        let c = docs(&[&["a", "b"], &["a", "b"], &["a", "b"]]);
        assert!(matches!(
            build_vocabulary(&c, &cfg(&[1], 4, 1.0)),
            Err(Error::EmptyVocabulary { .. })
        ));
    }

    #[test]
    fn bigrams_only() {
        let c = docs(&[&["a", "b"], &["b", "c"]]);
        let v = build_vocabulary(&c, &cfg(&[2], 1, 1.0)).unwrap();
        assert_eq!(v.stems(), &["a_b", "b_c"]);
        assert_eq!(v.doc_frequency(), &[1, 1]);
    }

    #[test]
    fn max_df_prunes_ubiquitous_stems() {
        let c = docs(&[&["a", "b"], &["a", "c"], &["a"]]);
        let v = build_vocabulary(&c, &cfg(&[1], 1, 0.5)).unwrap();
        assert_eq!(v.stems(), &["b", "c"]);
    }

    #[test]
    fn empty_corpus_is_empty_vocabulary() {
        assert!(matches!(
            build_vocabulary(&[], &cfg(&[1], 1, 1.0)),
            Err(Error::EmptyVocabulary { .. })
        ));
    }

    #[test]
    fn vectorize_presence() {
        let c = docs(&[&["a", "b", "c"]]);
        let v = build_vocabulary(&c, &cfg(&[1], 1, 1.0)).unwrap();
        let bits = |d: &[&str]| {
            let d: Vec<String> = d.iter().map(|s| s.to_string()).collect();
            vectorize(&d, &v).to_bools()
        };
        assert_eq!(bits(&["b", "b", "z"]), vec![false, true, false]);
        assert_eq!(bits(&[]), vec![false, false, false]);
        assert_eq!(bits(&["c", "a"]), vec![true, false, true]);
    }
}
