use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

use super::types::{CategorySet, CodedCorpus};

/// `K × (M+1)` matrix of `P(S = S_k | D = D_i)`; each column is a
/// distribution over patterns.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalMatrix<T = f64> {
    labels: Vec<String>,
    values: DenseMatrix<T>,
    alpha: T,
}

impl<T: Scalar> ConditionalMatrix<T> {
    /// Wraps an explicit matrix. Columns must be nonnegative and sum to one.
    pub fn from_matrix(labels: Vec<String>, values: DenseMatrix<T>, alpha: T) -> Result<Self> {
        if labels.len() != values.cols() {
            return Err(Error::Structural(format!(
                "{} labels for {} columns",
                labels.len(),
                values.cols()
            )));
        }
        if values.rows() == 0 || values.cols() == 0 {
            return Err(Error::Structural("empty conditional matrix".into()));
        }
        let tol = T::simplex_tol();
        for (j, col) in values.columns().enumerate() {
            if col.iter().any(|v| !v.is_finite() || *v < T::zero()) {
                return Err(Error::InvalidInput(format!(
                    "column `{}` has negative or non-finite entries",
                    labels[j]
                )));
            }
            let s: T = col.iter().copied().sum();
            if (s - T::one()).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "column `{}` sums to {s}, not 1",
                    labels[j]
                )));
            }
        }
        Ok(Self {
            labels,
            values,
            alpha,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &DenseMatrix<T> {
        &self.values
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// `K`
    pub fn patterns(&self) -> usize {
        self.values.rows()
    }

    /// `M + 1`
    pub fn categories(&self) -> usize {
        self.values.cols()
    }

    pub fn get(&self, pattern: usize, category: usize) -> T {
        self.values[(pattern, category)]
    }

    /// `P(S|D) p`, the pattern distribution implied by a category distribution.
    pub fn forward(&self, p: &[T]) -> Vec<T> {
        self.values.mul_vec(p)
    }
}

/// Estimates `P(S|D)` from the coded documents with additive smoothing:
/// `(n_ki + α) / (n_i + α K)`.
pub fn fit_conditional<T: Scalar>(training: &CodedCorpus, alpha: T) -> Result<ConditionalMatrix<T>> {
    fit_conditional_from_pairs(
        training.categories(),
        training.table().len(),
        &training.training_pairs(),
        alpha,
    )
}

/// [`fit_conditional`] on raw `(pattern, category)` pairs over `patterns`
/// distinct patterns.
pub fn fit_conditional_from_pairs<T: Scalar>(
    categories: &CategorySet,
    patterns: usize,
    pairs: &[(usize, usize)],
    alpha: T,
) -> Result<ConditionalMatrix<T>> {
    if patterns == 0 {
        return Err(Error::Structural("no patterns".into()));
    }
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::Config(format!("smoothing constant must be >= 0, got {alpha}")));
    }
    let m = categories.len();
    let mut counts = vec![vec![0usize; patterns]; m];
    let mut totals = vec![0usize; m];
    for &(k, c) in pairs {
        if k >= patterns || c >= m {
            return Err(Error::Structural(format!("pair ({k}, {c}) out of range")));
        }
        counts[c][k] += 1;
        totals[c] += 1;
    }
    let kk = T::from_count(patterns);
    let mut columns = Vec::with_capacity(m);
    for (c, col_counts) in counts.iter().enumerate() {
        if totals[c] == 0 && alpha == T::zero() {
            return Err(Error::UnidentifiableCategory {
                category: categories.labels()[c].clone(),
            });
        }
        let denom = T::from_count(totals[c]) + alpha * kk;
        columns.push(
            col_counts
                .iter()
                .map(|&n| (T::from_count(n) + alpha) / denom)
                .collect::<Vec<T>>(),
        );
    }
    Ok(ConditionalMatrix {
        labels: categories.labels().to_vec(),
        values: DenseMatrix::from_columns(&columns)?,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cats(n: usize) -> CategorySet {
        CategorySet::new((0..n).map(|i| format!("D{i}"))).unwrap()
    }

    #[test]
    fn direct_frequency() {
        let pairs = [(0, 1), (0, 1), (0, 1), (1, 1), (0, 0)];
        let cm = fit_conditional_from_pairs(&cats(2), 2, &pairs, 0.0).unwrap();
        assert_eq!(cm.values().column(1), &[0.75, 0.25]);
    }

    #[test]
    fn pure_smoothing_for_empty_category() {
        let pairs = [(0, 0), (1, 1)];
        let cm = fit_conditional_from_pairs(&cats(3), 2, &pairs, 1.0).unwrap();
        assert_eq!(cm.values().column(2), &[0.5, 0.5]);
    }

    #[test]
    fn smoothed_counts_hand_arithmetic() {
        // D1 counts (2,1,1), alpha 1: (2+1)/(4+3), (1+1)/7, (1+1)/7
        let pairs = [(0, 1), (0, 1), (1, 1), (2, 1), (0, 0)];
        let cm = fit_conditional_from_pairs(&cats(2), 3, &pairs, 1.0).unwrap();
        let col = cm.values().column(1);
        assert_abs_diff_eq!(col[0], 3.0 / 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(col[1], 2.0 / 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(col[2], 2.0 / 7.0, epsilon = 1e-15);
    }

    #[test]
    fn empty_category_without_smoothing_is_named() {
        let err = fit_conditional_from_pairs::<f64>(&cats(3), 2, &[(0, 0), (1, 1)], 0.0).unwrap_err();
        match err {
            Error::UnidentifiableCategory { category } => assert_eq!(category, "D2"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn columns_on_simplex() {
        let pairs: Vec<(usize, usize)> = (0..50).map(|i| (i * 7 % 13, i % 4)).collect();
        let cm = fit_conditional_from_pairs(&cats(4), 13, &pairs, 0.5).unwrap();
        for col in cm.values().columns() {
            let s: f64 = col.iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
            assert!(col.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn from_matrix_validates_columns() {
        let m = DenseMatrix::from_rows(&[vec![0.5, 0.1], vec![0.4, 0.9]]).unwrap();
        assert!(ConditionalMatrix::from_matrix(vec!["a".into(), "b".into()], m, 0.0).is_err());
    }
}
