use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::conditional::ConditionalMatrix;
use super::types::CategoryDistribution;

/// Bayes classification of one pattern: `argmax_i P(S_k | D_i) prior_i`,
/// ties going to the lowest category index.
pub fn classify_bayes<T: Scalar>(
    cond: &ConditionalMatrix<T>,
    prior: &CategoryDistribution<T>,
    pattern: usize,
) -> Result<usize> {
    if pattern >= cond.patterns() {
        return Err(Error::InvalidInput(format!(
            "pattern {pattern} out of range (K = {})",
            cond.patterns()
        )));
    }
    if prior.len() != cond.categories() {
        return Err(Error::Structural(format!(
            "prior over {} categories, conditional matrix has {}",
            prior.len(),
            cond.categories()
        )));
    }
    let mut best: Option<(usize, T)> = None;
    for (i, &pi) in prior.probs().iter().enumerate() {
        let post = cond.get(pattern, i) * pi;
        if post > T::zero() && best.map_or(true, |(_, b)| post > b) {
            best = Some((i, post));
        }
    }
    best.map(|(i, _)| i).ok_or(Error::UnseenPattern { pattern })
}

/// Classify-and-count: classify every test document by its pattern and
/// return the share of documents per category. `test_counts[k]` is the
/// number of test documents with pattern `k`.
pub fn estimate_classify_and_count<T: Scalar>(
    cond: &ConditionalMatrix<T>,
    prior: &CategoryDistribution<T>,
    test_counts: &[usize],
) -> Result<CategoryDistribution<T>> {
    if test_counts.len() != cond.patterns() {
        return Err(Error::Structural(format!(
            "{} test counts for {} patterns",
            test_counts.len(),
            cond.patterns()
        )));
    }
    let total: usize = test_counts.iter().sum();
    if total == 0 {
        return Err(Error::InvalidInput("no test documents".into()));
    }
    let mut tally = vec![0usize; cond.categories()];
    for (k, &n) in test_counts.iter().enumerate().filter(|(_, &n)| n > 0) {
        tally[classify_bayes(cond, prior, k)?] += n;
    }
    CategoryDistribution::new(
        cond.labels().to_vec(),
        crate::textpipe::normalize_counts(&tally),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    fn cond(rows: &[&[f64]]) -> ConditionalMatrix<f64> {
        let m = DenseMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
        let labels = (0..m.cols()).map(|i| format!("D{i}")).collect();
        ConditionalMatrix::from_matrix(labels, m, 0.0).unwrap()
    }

    fn identity3() -> ConditionalMatrix<f64> {
        cond(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]])
    }

    #[test]
    fn identity_and_dominant_likelihood() {
        let c = identity3();
        let u = CategoryDistribution::uniform(c.labels().to_vec());
        assert_eq!(classify_bayes(&c, &u, 2).unwrap(), 2);

        let c = cond(&[&[0.9, 0.1], &[0.1, 0.9]]);
        let u = CategoryDistribution::uniform(c.labels().to_vec());
        assert_eq!(classify_bayes(&c, &u, 0).unwrap(), 0);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let c = cond(&[&[0.5, 0.5, 0.0], &[0.5, 0.5, 1.0]]);
        let u = CategoryDistribution::uniform(c.labels().to_vec());
        assert_eq!(classify_bayes(&c, &u, 0).unwrap(), 0);
    }

    #[test]
    fn unseen_pattern_errors() {
        let c = cond(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let u = CategoryDistribution::uniform(c.labels().to_vec());
        assert!(matches!(classify_bayes(&c, &u, 2), Err(Error::UnseenPattern { pattern: 2 })));
        // an unseen pattern with no test documents is harmless
        assert!(estimate_classify_and_count(&c, &u, &[1, 1, 0]).is_ok());
    }

    #[test]
    fn counts_category_pure_patterns() {
        let c = identity3();
        let u = CategoryDistribution::uniform(c.labels().to_vec());
        let p = estimate_classify_and_count(&c, &u, &[2, 3, 5]).unwrap();
        assert_eq!(p.probs(), &[0.2, 0.3, 0.5]);
        let p = estimate_classify_and_count(&c, &u, &[0, 7, 0]).unwrap();
        assert_eq!(p.probs(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn biased_where_aggregate_is_not() {
        // pattern 1 ↦ D0 (0.8·0.5 > 0.1·0.5), pattern 2 ↦ D1: tally = P(S)
        let c = cond(&[&[0.8, 0.1], &[0.2, 0.9]]);
        let u = CategoryDistribution::uniform(c.labels().to_vec());
        let p = estimate_classify_and_count(&c, &u, &[45, 55]).unwrap();
        assert_eq!(p.probs(), &[0.45, 0.55]);
    }
}
