//! Synthetic corpora with known ground truth, a Monte Carlo harness comparing
//! the aggregate estimator against classify-and-count, and a brute-force
//! simplex oracle for small instances.
//!
//! The generative model: each document draws its category from `true_p`, then
//! every stem independently with that category's Bernoulli probability.

mod generate;
mod monte_carlo;
mod oracle;
mod report;
mod spec;

pub use generate::{analytic_conditional, generate_corpus, SyntheticCorpus};
pub use monte_carlo::{
    run_monte_carlo, run_monte_carlo_seeds, summarize, EstimatorSummary, MonteCarloReport,
    MonteCarloSummary, ReplicationOutcome, ReplicationResult,
};
pub use oracle::brute_force_simplex;
pub use report::{parse_results, write_results, write_summary, ResultsFile};
pub use spec::{SimulationFile, SyntheticSpec};
