//! Aggregate opinion quantification from text.
//!
//! The crate estimates the distribution of opinion categories in a corpus
//! directly, by inverting `P(S) = P(S|D) P(D)` over binary stem-presence
//! patterns, and compares it with the classify-then-count baseline. On top of
//! that it composes eight per-dimension sentiment distributions into a daily
//! well-being index and its monthly and yearly aggregates.
//!
//! Modules:
//! - [`textpipe`]: records, tokenization, stemming, vocabulary, stem vectors and the pattern table.
//! - [`estimator`]: conditional matrix, the inverse (aggregate) estimator, classify-and-count, bootstrap.
//! - [`swbi`]: component scores, index composition, daily/monthly/yearly series and exports.
//! - [`simlab`]: synthetic corpora, Monte Carlo harness, brute-force simplex oracle.
//!
//! Numerical types are generic over [`Scalar`] (`f32`/`f64`); the `*64`/`*32`
//! aliases below fix the precision.

pub mod error;
pub mod estimator;
pub mod linalg;
pub mod scalar;
pub mod simlab;
pub mod swbi;
pub mod textpipe;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Scalar;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type ConditionalMatrix64 = estimator::ConditionalMatrix<f64>;
pub type ConditionalMatrix32 = estimator::ConditionalMatrix<f32>;
pub type CategoryDistribution64 = estimator::CategoryDistribution<f64>;
pub type CategoryDistribution32 = estimator::CategoryDistribution<f32>;
pub type DenseMatrix64 = linalg::DenseMatrix<f64>;
pub type DenseMatrix32 = linalg::DenseMatrix<f32>;
