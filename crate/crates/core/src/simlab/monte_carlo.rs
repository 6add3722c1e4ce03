use rayon::prelude::*;

use super::generate::generate_corpus;
use super::spec::SyntheticSpec;
use crate::error::{Error, Result};
use crate::estimator::{estimate_classify_and_count, estimate_isa, fit_conditional};

/// Both estimators on one synthetic corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationResult {
    pub index: usize,
    pub seed: u64,
    pub isa_estimate: Vec<f64>,
    pub cc_estimate: Vec<f64>,
    pub isa_mae: f64,
    pub cc_mae: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReplicationOutcome {
    Ok(ReplicationResult),
    Failed { index: usize, seed: u64, error: String },
}

impl ReplicationOutcome {
    pub fn result(&self) -> Option<&ReplicationResult> {
        match self {
            ReplicationOutcome::Ok(r) => Some(r),
            ReplicationOutcome::Failed { .. } => None,
        }
    }
}

/// Mean and sample standard deviation of one estimator's error and of each
/// estimated coordinate across successful replications.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorSummary {
    pub mae_mean: f64,
    pub mae_sd: f64,
    pub coord_mean: Vec<f64>,
    pub coord_sd: Vec<f64>,
}

impl EstimatorSummary {
    /// Coordinate standard deviations in percentage points.
    pub fn coord_sd_pp(&self) -> Vec<f64> {
        self.coord_sd.iter().map(|s| 100.0 * s).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub succeeded: usize,
    pub failed: usize,
    pub isa: EstimatorSummary,
    pub cc: EstimatorSummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub outcomes: Vec<ReplicationOutcome>,
    pub summary: MonteCarloSummary,
}

/// `replications` independent corpora with seeds `spec.seed + 1 ..= spec.seed + R`.
pub fn run_monte_carlo(spec: &SyntheticSpec, replications: usize, alpha: f64) -> Result<MonteCarloReport> {
    if replications < 2 {
        return Err(Error::Config(format!("Monte Carlo needs R >= 2, got {replications}")));
    }
    let seeds: Vec<u64> = (1..=replications as u64).map(|r| spec.seed.wrapping_add(r)).collect();
    run_monte_carlo_seeds(spec, &seeds, alpha)
}

/// One replication per listed seed. Replications run in parallel; the summary
/// is reduced in replication order, so it is bit-identical for any thread count.
pub fn run_monte_carlo_seeds(spec: &SyntheticSpec, seeds: &[u64], alpha: f64) -> Result<MonteCarloReport> {
    spec.validate()?;
    if seeds.len() < 2 {
        return Err(Error::Config(format!("Monte Carlo needs R >= 2, got {}", seeds.len())));
    }
    let outcomes: Vec<ReplicationOutcome> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| match replicate(spec, seed, alpha) {
            Ok((isa, cc)) => ReplicationOutcome::Ok(ReplicationResult {
                index: i + 1,
                seed,
                isa_mae: mae(&isa, &spec.true_p),
                cc_mae: mae(&cc, &spec.true_p),
                isa_estimate: isa,
                cc_estimate: cc,
            }),
            Err(e) => ReplicationOutcome::Failed {
                index: i + 1,
                seed,
                error: e.to_string(),
            },
        })
        .collect();
    let results: Vec<&ReplicationResult> = outcomes.iter().filter_map(ReplicationOutcome::result).collect();
    let summary = summarize(&results, outcomes.len() - results.len(), spec.true_p.len());
    Ok(MonteCarloReport { outcomes, summary })
}

fn replicate(spec: &SyntheticSpec, seed: u64, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let syn = generate_corpus(&spec.with_seed(seed))?;
    let corpus = &syn.corpus;
    let cond = fit_conditional(corpus, alpha)?;
    let ps: Vec<f64> = corpus.test_distribution()?;
    let isa = estimate_isa(&cond, &ps)?;
    let prior = corpus.training_prior()?;
    let cc = estimate_classify_and_count(&cond, &prior, &corpus.test_counts())?;
    Ok((isa.probs().to_vec(), cc.probs().to_vec()))
}

fn mae(est: &[f64], truth: &[f64]) -> f64 {
    est.iter().zip(truth).map(|(a, b)| (a - b).abs()).sum::<f64>() / est.len() as f64
}

fn mean_sd(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let ss: f64 = xs.map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

/// Summary statistics over successful replications, in the given order.
pub fn summarize(results: &[&ReplicationResult], failed: usize, categories: usize) -> MonteCarloSummary {
    let one = |mae_of: fn(&ReplicationResult) -> f64, est_of: fn(&ReplicationResult) -> &[f64]| {
        let (mae_mean, mae_sd) = mean_sd(results.iter().map(|r| mae_of(r)));
        let (coord_mean, coord_sd) = (0..categories)
            .map(|i| mean_sd(results.iter().map(|r| est_of(r)[i])))
            .unzip();
        EstimatorSummary {
            mae_mean,
            mae_sd,
            coord_mean,
            coord_sd,
        }
    };
    MonteCarloSummary {
        succeeded: results.len(),
        failed,
        isa: one(|r| r.isa_mae, |r| &r.isa_estimate),
        cc: one(|r| r.cc_mae, |r| &r.cc_estimate),
    }
}
