//! Aggregate (inverse) and individual (classify-and-count) estimators of the
//! category distribution `P(D)`, plus bootstrap standard errors.
//!
//! The aggregate estimator never classifies a document. It fits `P(S|D)` from
//! the hand-coded subset and solves `P(S) = P(S|D) P(D)` for `P(D)` over the
//! probability simplex.

mod bootstrap;
mod classify;
mod conditional;
mod io;
mod isa;
mod types;

pub use bootstrap::{bootstrap_se, BootstrapConfig};
pub use classify::{classify_bayes, estimate_classify_and_count};
pub use conditional::{fit_conditional, fit_conditional_from_pairs, ConditionalMatrix};
pub use io::{parse_codes, read_codes, write_estimate_report};
pub use isa::{estimate_isa, normal_equations_estimate};
pub use types::{CategoryDistribution, CategorySet, CodedCorpus};

/// Default additive smoothing constant for [`fit_conditional`].
pub const DEFAULT_ALPHA: f64 = 0.5;
