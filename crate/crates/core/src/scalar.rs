use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar the estimators are generic over (`f32` or `f64`).
///
/// The tolerances are the ones every validation in the crate uses; they are
/// per-type because a single-precision column cannot sum to one within 1e-12.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Tolerance on `|sum(p) - 1|` when a vector claims to be a distribution.
    fn simplex_tol() -> Self;

    /// Relative tolerance of the pivoted-QR rank decision.
    fn rank_rtol() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f64 {
    fn simplex_tol() -> Self {
        1e-9
    }

    fn rank_rtol() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn simplex_tol() -> Self {
        1e-5
    }

    fn rank_rtol() -> Self {
        1e-5
    }
}
