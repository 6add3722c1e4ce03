use rand::distr::{Distribution, Uniform};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::spec::SyntheticSpec;
use crate::error::{Error, Result};
use crate::estimator::{CategorySet, CodedCorpus, ConditionalMatrix};
use crate::linalg::DenseMatrix;
use crate::textpipe::{build_pattern_table, StemVector};

/// A generated corpus with the true category of every document.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub corpus: CodedCorpus,
    /// True category per document, aligned with the corpus' sorted document ids.
    pub truth: Vec<usize>,
    /// Degeneracies worth knowing about (identical emission rows, categories
    /// without any coded document).
    pub warnings: Vec<String>,
}

/// Draws a corpus from `spec`. Exactly `⌈n_total · train_fraction⌉`
/// documents, chosen uniformly, keep their label. Deterministic in `spec.seed`.
pub fn generate_corpus(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let unit = Uniform::new(0.0f64, 1.0).expect("valid range");
    let cumulative: Vec<f64> = spec
        .true_p
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let last = cumulative.len() - 1;

    let n = spec.n_total;
    let l = spec.stems();
    let width = n.to_string().len();
    let mut truth = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for d in 0..n {
        let u = unit.sample(&mut rng);
        let cat = cumulative.iter().position(|&c| u < c).unwrap_or(last);
        let row = &spec.emission[cat];
        let mut v = StemVector::zeros(l);
        for (s, &e) in row.iter().enumerate() {
            if unit.sample(&mut rng) < e {
                v.set(s);
            }
        }
        truth.push(cat);
        vectors.push((format!("s{d:0width$}"), v));
    }

    let mut codes = vec![None; n];
    for d in index::sample(&mut rng, n, spec.n_coded()) {
        codes[d] = Some(truth[d]);
    }

    let mut warnings = Vec::new();
    for i in 0..spec.emission.len() {
        for j in i + 1..spec.emission.len() {
            if spec.emission[i] == spec.emission[j] {
                warnings.push(format!("collinearity: categories D{i} and D{j} have identical emissions"));
            }
        }
    }
    let mut coded_per_cat = vec![0usize; spec.true_p.len()];
    for c in codes.iter().flatten() {
        coded_per_cat[*c] += 1;
    }
    for (i, &c) in coded_per_cat.iter().enumerate() {
        if c == 0 {
            warnings.push(format!("category D{i} has no coded documents"));
        }
    }

    // ids are zero-padded, so the table's sorted order is generation order
    let table = build_pattern_table(vectors)?;
    let corpus = CodedCorpus::new(CategorySet::new(spec.labels())?, table, codes)?;
    Ok(SyntheticCorpus {
        corpus,
        truth,
        warnings,
    })
}

/// Exact `P(S|D)` of the generative model over all `2^L` patterns, in the
/// canonical pattern order. Limited to `L <= 20`.
pub fn analytic_conditional(spec: &SyntheticSpec) -> Result<(ConditionalMatrix<f64>, Vec<StemVector>)> {
    spec.validate()?;
    let l = spec.stems();
    if l > 20 {
        return Err(Error::Config(format!("analytic conditional limited to 20 stems, got {l}")));
    }
    let mut patterns: Vec<StemVector> = (0..1usize << l)
        .map(|code| StemVector::from_bools(&(0..l).map(|b| code >> b & 1 == 1).collect::<Vec<_>>()))
        .collect();
    patterns.sort();
    let columns: Vec<Vec<f64>> = spec
        .emission
        .iter()
        .map(|row| {
            patterns
                .iter()
                .map(|p| {
                    row.iter()
                        .enumerate()
                        .map(|(s, &e)| if p.get(s) { e } else { 1.0 - e })
                        .product()
                })
                .collect()
        })
        .collect();
    let cond = ConditionalMatrix::from_matrix(spec.labels(), DenseMatrix::from_columns(&columns)?, 0.0)?;
    Ok((cond, patterns))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(emission: Vec<Vec<f64>>, n: usize, tf: f64) -> SyntheticSpec {
        let k = emission.len();
        SyntheticSpec {
            true_p: vec![1.0 / k as f64; k],
            emission,
            n_total: n,
            train_fraction: tf,
            seed: 11,
        }
    }

    #[test]
    fn coded_count_is_ceiling() {
        let s = spec(vec![vec![0.3, 0.6], vec![0.7, 0.2]], 101, 0.1);
        let c = generate_corpus(&s).unwrap();
        assert_eq!(c.corpus.training_len(), 11);
        assert_eq!(c.corpus.test_len(), 90);
    }

    #[test]
    fn deterministic_given_seed() {
        let s = spec(vec![vec![0.3, 0.6, 0.5], vec![0.7, 0.2, 0.5]], 500, 0.2);
        let a = generate_corpus(&s).unwrap();
        let b = generate_corpus(&s).unwrap();
        assert_eq!(a.corpus.table(), b.corpus.table());
        assert_eq!(a.corpus.codes(), b.corpus.codes());
        assert_eq!(a.truth, b.truth);
        let c = generate_corpus(&s.with_seed(12)).unwrap();
        assert_ne!(a.truth, c.truth);
    }

    #[test]
    fn separable_patterns_reveal_category() {
        let s = spec(
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            300,
            0.1,
        );
        let c = generate_corpus(&s).unwrap();
        let table = c.corpus.table();
        for (d, &k) in table.doc_patterns().iter().enumerate() {
            let ones: Vec<usize> = table.patterns()[k].ones().collect();
            assert_eq!(ones, vec![c.truth[d]]);
        }
    }

    #[test]
    fn warns_on_identical_emissions() {
        let s = spec(vec![vec![0.5, 0.5], vec![0.5, 0.5]], 50, 0.2);
        let c = generate_corpus(&s).unwrap();
        assert!(c.warnings.iter().any(|w| w.contains("collinearity")));
    }

    #[test]
    fn analytic_columns_are_distributions() {
        let s = spec(vec![vec![0.3, 0.6, 0.1], vec![0.7, 0.2, 0.95]], 10, 0.5);
        let (cond, pats) = analytic_conditional(&s).unwrap();
        assert_eq!(pats.len(), 8);
        for col in cond.values().columns() {
            assert!((col.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        // pattern (1,0,1) under D1: 0.7 · 0.8 · 0.95
        let k = pats.iter().position(|p| p.to_bools() == [true, false, true]).unwrap();
        assert!((cond.get(k, 1) - 0.7 * 0.8 * 0.95).abs() < 1e-15);
    }
}
