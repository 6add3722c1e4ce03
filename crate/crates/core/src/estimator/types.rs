use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::textpipe::PatternTable;

/// Ordered categories `D0, D1, …, DM`; `D0` is the off-topic (noise) class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategorySet {
    labels: Vec<String>,
    noise_index: usize,
}

impl CategorySet {
    /// First label is `D0`.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::with_noise(labels, 0)
    }

    pub fn with_noise<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        noise_index: usize,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::Config(format!(
                "a category set needs D0 and at least one more category, got {}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::Config(format!("duplicate category label `{dup}`")));
        }
        if labels.iter().any(String::is_empty) {
            return Err(Error::Config("empty category label".into()));
        }
        if noise_index >= labels.len() {
            return Err(Error::Config(format!("noise index {noise_index} out of range")));
        }
        Ok(Self {
            labels,
            noise_index,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `M + 1`
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn noise_index(&self) -> usize {
        self.noise_index
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A pattern table plus per-document hand codes. Coded documents form the
/// training set, uncoded ones the test set.
#[derive(Debug, Clone)]
pub struct CodedCorpus {
    categories: CategorySet,
    table: PatternTable,
    codes: Vec<Option<usize>>,
}

impl CodedCorpus {
    /// `codes` is aligned with `table.doc_ids()`.
    pub fn new(
        categories: CategorySet,
        table: PatternTable,
        codes: Vec<Option<usize>>,
    ) -> Result<Self> {
        if codes.len() != table.doc_count() {
            return Err(Error::Structural(format!(
                "{} codes for {} documents",
                codes.len(),
                table.doc_count()
            )));
        }
        if let Some(c) = codes.iter().flatten().find(|&&c| c >= categories.len()) {
            return Err(Error::InvalidInput(format!("category index {c} out of range")));
        }
        Ok(Self {
            categories,
            table,
            codes,
        })
    }

    /// Attaches `(doc id, label)` codes to a table. Unknown documents and
    /// labels outside the category set are errors.
    pub fn from_labels<'a>(
        categories: CategorySet,
        table: PatternTable,
        labels: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut codes = vec![None; table.doc_count()];
        for (id, label) in labels {
            let d = table
                .doc_index(id)
                .ok_or_else(|| Error::InvalidInput(format!("coded document `{id}` not in corpus")))?;
            let c = categories.index_of(label).ok_or_else(|| {
                Error::InvalidInput(format!("label `{label}` of `{id}` is not a declared category"))
            })?;
            if codes[d].replace(c).is_some() {
                return Err(Error::Duplicate(format!("code for document `{id}`")));
            }
        }
        Self::new(categories, table, codes)
    }

    pub fn categories(&self) -> &CategorySet {
        &self.categories
    }

    pub fn table(&self) -> &PatternTable {
        &self.table
    }

    pub fn codes(&self) -> &[Option<usize>] {
        &self.codes
    }

    /// `(pattern, category)` of every coded document, in document order.
    pub fn training_pairs(&self) -> Vec<(usize, usize)> {
        self.table
            .doc_patterns()
            .iter()
            .zip(&self.codes)
            .filter_map(|(&k, c)| c.map(|c| (k, c)))
            .collect()
    }

    pub fn training_len(&self) -> usize {
        self.codes.iter().filter(|c| c.is_some()).count()
    }

    pub fn test_len(&self) -> usize {
        self.codes.len() - self.training_len()
    }

    /// Indices (into the sorted document list) of the uncoded documents.
    pub fn test_docs(&self) -> impl Iterator<Item = usize> + '_ {
        self.codes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .map(|(i, _)| i)
    }

    /// Pattern counts of the test set, over all `K` patterns.
    pub fn test_counts(&self) -> Vec<usize> {
        self.table.subset_counts(self.test_docs())
    }

    /// Empirical `P(S)` of the test set.
    pub fn test_distribution<T: Scalar>(&self) -> Result<Vec<T>> {
        if self.test_len() == 0 {
            return Err(Error::InvalidInput("test set is empty: every document is coded".into()));
        }
        Ok(crate::textpipe::normalize_counts(&self.test_counts()))
    }

    /// Label frequencies of the training set.
    pub fn training_prior<T: Scalar>(&self) -> Result<CategoryDistribution<T>> {
        let mut counts = vec![0usize; self.categories.len()];
        for c in self.codes.iter().flatten() {
            counts[*c] += 1;
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(Error::InvalidInput("training set is empty".into()));
        }
        CategoryDistribution::new(
            self.categories.labels().to_vec(),
            crate::textpipe::normalize_counts(&counts),
        )
    }
}

/// A distribution over categories, optionally with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryDistribution<T = f64> {
    labels: Vec<String>,
    probs: Vec<T>,
    se: Option<Vec<T>>,
}

impl<T: Scalar> CategoryDistribution<T> {
    /// Validates `probs >= 0` and `|Σ probs - 1| <= T::simplex_tol()`.
    pub fn new(labels: Vec<String>, probs: Vec<T>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::Structural(format!(
                "{} labels for {} probabilities",
                labels.len(),
                probs.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < T::zero()) {
            return Err(Error::InvalidInput(format!("negative or non-finite probability in {probs:?}")));
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::simplex_tol() {
            return Err(Error::InvalidInput(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self {
            labels,
            probs,
            se: None,
        })
    }

    pub fn uniform(labels: Vec<String>) -> Self {
        let n = T::from_count(labels.len());
        let probs = vec![T::one() / n; labels.len()];
        Self {
            labels,
            probs,
            se: None,
        }
    }

    pub fn with_se(mut self, se: Vec<T>) -> Result<Self> {
        if se.len() != self.probs.len() {
            return Err(Error::Structural("se length differs from probs".into()));
        }
        self.se = Some(se);
        Ok(self)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn se(&self) -> Option<&[T]> {
        self.se.as_deref()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<T> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.probs[i])
    }

    /// Mean absolute error against a reference vector.
    pub fn mae(&self, truth: &[T]) -> T {
        let n = T::from_count(self.probs.len());
        self.probs
            .iter()
            .zip(truth)
            .map(|(&p, &t)| (p - t).abs())
            .sum::<T>()
            / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textpipe::{build_pattern_table, StemVector};

    #[test]
    fn category_set_rules() {
        assert!(CategorySet::new(["off"]).is_err());
        assert!(CategorySet::new(["off", "a", "off"]).is_err());
        let c = CategorySet::new(["off", "neg", "pos"]).unwrap();
        assert_eq!(c.noise_index(), 0);
        assert_eq!(c.index_of("pos"), Some(2));
    }

    #[test]
    fn distribution_validation() {
        let l = vec!["a".to_string(), "b".to_string()];
        assert!(CategoryDistribution::new(l.clone(), vec![0.5, 0.5]).is_ok());
        assert!(CategoryDistribution::new(l.clone(), vec![0.5, 0.6]).is_err());
        assert!(CategoryDistribution::new(l.clone(), vec![1.1, -0.1]).is_err());
        assert!(CategoryDistribution::new(l, vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn coded_corpus_splits_training_and_test() {
        let table = build_pattern_table(vec![
            ("a".into(), StemVector::from_bools(&[true])),
            ("b".into(), StemVector::from_bools(&[false])),
            ("c".into(), StemVector::from_bools(&[true])),
        ])
        .unwrap();
        let cats = CategorySet::new(["off", "on"]).unwrap();
        let cc = CodedCorpus::from_labels(cats.clone(), table.clone(), [("c", "on")]).unwrap();
        assert_eq!(cc.training_len(), 1);
        assert_eq!(cc.training_pairs(), vec![(1, 1)]);
        assert_eq!(cc.test_distribution::<f64>().unwrap(), vec![0.5, 0.5]);
        assert!(CodedCorpus::from_labels(cats.clone(), table.clone(), [("z", "on")]).is_err());
        assert!(CodedCorpus::from_labels(cats, table, [("a", "maybe")]).is_err());
    }
}
