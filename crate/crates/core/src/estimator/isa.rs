use crate::error::{Error, Result};
use crate::linalg::{normal_equations_solution, simplex_least_squares, PivotedQr};
use crate::scalar::Scalar;

use super::conditional::ConditionalMatrix;
use super::types::CategoryDistribution;

/// Aggregate estimate of `P(D)` from the test-set pattern distribution `ps`.
///
/// Returns the minimizer of `||P(S) - P(S|D) p||²` over the probability
/// simplex. If the unconstrained normal-equations solution
/// `(P(S|D)ᵀ P(S|D))⁻¹ P(S|D)ᵀ P(S)` is already a distribution, that is what
/// comes back.
///
/// Fails with [`Error::Underdetermined`] when `K < M+1` and with
/// [`Error::CollinearCategories`] when the pivoted QR of `P(S|D)` finds a rank
/// below `M+1`.
pub fn estimate_isa<T: Scalar>(
    cond: &ConditionalMatrix<T>,
    ps: &[T],
) -> Result<CategoryDistribution<T>> {
    check_shapes(cond, ps)?;
    let a = cond.values();
    let p = if cond.categories() == 1 {
        vec![T::one()]
    } else {
        simplex_least_squares(a, ps)?
    };
    CategoryDistribution::new(cond.labels().to_vec(), p)
}

/// The printed closed form, unconstrained: may leave the simplex.
pub fn normal_equations_estimate<T: Scalar>(cond: &ConditionalMatrix<T>, ps: &[T]) -> Result<Vec<T>> {
    check_shapes(cond, ps)?;
    normal_equations_solution(cond.values(), ps)
}

fn check_shapes<T: Scalar>(cond: &ConditionalMatrix<T>, ps: &[T]) -> Result<()> {
    let (k, m) = (cond.patterns(), cond.categories());
    if ps.len() != k {
        return Err(Error::Structural(format!(
            "P(S) has {} entries, conditional matrix has {k} patterns",
            ps.len()
        )));
    }
    if k < m {
        return Err(Error::Underdetermined {
            patterns: k,
            categories: m,
        });
    }
    let qr = PivotedQr::new(cond.values(), T::rank_rtol());
    if let Some(set) = qr.dependent_set() {
        return Err(Error::CollinearCategories {
            columns: set.into_iter().map(|j| cond.labels()[j].clone()).collect(),
        });
    }
    Ok(())
}
