use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::conditional::fit_conditional_from_pairs;
use super::isa::estimate_isa;
use super::types::{CategoryDistribution, CodedCorpus};

const MAX_REDRAWS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig<T = f64> {
    /// Number of replicates `B`, at least 2.
    pub replications: usize,
    pub seed: u64,
    pub alpha: T,
}

/// Aggregate estimate with bootstrap standard errors.
///
/// Training documents are resampled with replacement `B` times; each replicate
/// refits `P(S|D)` and re-solves for `P(D)` against the same test `P(S)`.
/// Replicate `b` draws from its own generator seeded with `seed + b`, so the
/// result does not depend on scheduling. A replicate that loses a category
/// present in the original training set is redrawn, up to 100 times.
///
/// The point estimate is the non-bootstrap one; `se` is the per-category
/// sample standard deviation over replicates.
pub fn bootstrap_se<T: Scalar>(
    training: &CodedCorpus,
    test_ps: &[T],
    config: &BootstrapConfig<T>,
) -> Result<CategoryDistribution<T>> {
    if config.replications < 2 {
        return Err(Error::Config(format!(
            "bootstrap needs at least 2 replications, got {}",
            config.replications
        )));
    }
    let cats = training.categories();
    let k = training.table().len();
    let pairs = training.training_pairs();
    if pairs.is_empty() {
        return Err(Error::InvalidInput("training set is empty".into()));
    }
    let point = estimate_isa(&fit_conditional_from_pairs(cats, k, &pairs, config.alpha)?, test_ps)?;

    let mut present = vec![false; cats.len()];
    for &(_, c) in &pairs {
        present[c] = true;
    }

    let replicates: Vec<Vec<T>> = (0..config.replications)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(b as u64));
            let sample = draw_covering(&pairs, &present, &mut rng)?;
            let cond = fit_conditional_from_pairs(cats, k, &sample, config.alpha)?;
            Ok(estimate_isa(&cond, test_ps)?.probs().to_vec())
        })
        .collect::<Result<_>>()?;

    let n = T::from_count(replicates.len());
    let se = (0..cats.len())
        .map(|i| {
            let mean = replicates.iter().map(|r| r[i]).sum::<T>() / n;
            let ss = replicates
                .iter()
                .map(|r| (r[i] - mean) * (r[i] - mean))
                .sum::<T>();
            (ss / (n - T::one())).sqrt()
        })
        .collect();
    point.with_se(se)
}

fn draw_covering(
    pairs: &[(usize, usize)],
    present: &[bool],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>> {
    for _ in 0..MAX_REDRAWS {
        let sample: Vec<(usize, usize)> = (0..pairs.len())
            .map(|_| pairs[rng.random_range(0..pairs.len())])
            .collect();
        let mut seen = vec![false; present.len()];
        for &(_, c) in &sample {
            seen[c] = true;
        }
        if seen.iter().zip(present).all(|(&s, &p)| s || !p) {
            return Ok(sample);
        }
    }
    Err(Error::BootstrapExhausted {
        attempts: MAX_REDRAWS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::CategorySet;
    use crate::textpipe::{build_pattern_table, StemVector};

    fn corpus(coded: &[(bool, bool, Option<&str>)]) -> CodedCorpus {
        let table = build_pattern_table(
            coded
                .iter()
                .enumerate()
                .map(|(i, &(a, b, _))| (format!("d{i:03}"), StemVector::from_bools(&[a, b])))
                .collect(),
        )
        .unwrap();
        let labels: Vec<(String, &str)> = coded
            .iter()
            .enumerate()
            .filter_map(|(i, &(_, _, l))| l.map(|l| (format!("d{i:03}"), l)))
            .collect();
        CodedCorpus::from_labels(
            CategorySet::new(["off", "on"]).unwrap(),
            table,
            labels.iter().map(|(id, l)| (id.as_str(), *l)),
        )
        .unwrap()
    }

    #[test]
    fn degenerate_training_has_zero_se() {
        let mut docs = vec![(true, false, Some("on")); 5];
        docs.extend([(false, true, None), (true, true, None), (true, false, None)]);
        let c = corpus(&docs);
        let ps: Vec<f64> = c.test_distribution().unwrap();
        let cfg = BootstrapConfig {
            replications: 2,
            seed: 1,
            alpha: 0.5,
        };
        let est = bootstrap_se(&c, &ps, &cfg).unwrap();
        assert_eq!(est.se().unwrap(), &[0.0, 0.0]);
    }

    #[test]
    fn deterministic_given_seed_and_point_unchanged() {
        let mut docs = Vec::new();
        for i in 0..40 {
            let lab = if i % 3 == 0 { "off" } else { "on" };
            docs.push((i % 2 == 0, i % 5 == 0, Some(lab)));
        }
        for i in 0..60 {
            docs.push((i % 3 == 0, i % 4 == 0, None));
        }
        let c = corpus(&docs);
        let ps: Vec<f64> = c.test_distribution().unwrap();
        let cfg = BootstrapConfig {
            replications: 50,
            seed: 42,
            alpha: 0.5,
        };
        let a = bootstrap_se(&c, &ps, &cfg).unwrap();
        let b = bootstrap_se(&c, &ps, &cfg).unwrap();
        assert_eq!(a, b);
        let plain = estimate_isa(&crate::estimator::fit_conditional(&c, 0.5).unwrap(), &ps).unwrap();
        assert_eq!(a.probs(), plain.probs());
        assert!(a.se().unwrap().iter().all(|&s| s > 0.0));
    }

    #[test]
    fn rejects_single_replication() {
        let c = corpus(&[(true, false, Some("on")), (false, true, Some("off")), (true, true, None)]);
        let ps: Vec<f64> = c.test_distribution().unwrap();
        let cfg = BootstrapConfig {
            replications: 1,
            seed: 0,
            alpha: 0.5,
        };
        assert!(matches!(bootstrap_se(&c, &ps, &cfg), Err(Error::Config(_))));
    }
}
