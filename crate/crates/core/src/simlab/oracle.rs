use crate::error::{Error, Result};
use crate::estimator::{CategoryDistribution, ConditionalMatrix};
use crate::scalar::Scalar;

/// Exhaustive search of the simplex grid with spacing `step` for the point
/// minimizing `||ps - cond · p||²`. Independent of the active-set solver; for
/// checking it on small instances (at most 4 categories, `step <= 0.01`,
/// `1/step` integral).
pub fn brute_force_simplex<T: Scalar>(
    cond: &ConditionalMatrix<T>,
    ps: &[T],
    step: f64,
) -> Result<CategoryDistribution<T>> {
    let n = cond.categories();
    if n > 4 {
        return Err(Error::OracleTooLarge { categories: n });
    }
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::Config(format!("grid step must lie in (0, 0.01], got {step}")));
    }
    let divisions = (1.0 / step).round() as usize;
    if ((divisions as f64) * step - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("grid step {step} does not divide 1")));
    }
    if ps.len() != cond.patterns() {
        return Err(Error::Structural("P(S) length differs from pattern count".into()));
    }

    let values = cond.values();
    let scale = T::from_count(divisions);
    let mut best: Option<(T, Vec<usize>)> = None;
    let mut counts = vec![0usize; n];
    let mut p = vec![T::zero(); n];
    let mut resid = vec![T::zero(); ps.len()];
    visit(&mut counts, 0, divisions, &mut |c| {
        for (pi, &ci) in p.iter_mut().zip(c) {
            *pi = T::from_count(ci) / scale;
        }
        resid.copy_from_slice(ps);
        for (j, &pj) in p.iter().enumerate() {
            for (r, &a) in resid.iter_mut().zip(values.column(j)) {
                *r = *r - a * pj;
            }
        }
        let obj = resid.iter().fold(T::zero(), |acc, &r| acc + r * r);
        if best.as_ref().map_or(true, |(b, _)| obj < *b) {
            best = Some((obj, c.to_vec()));
        }
    });
    let (_, c) = best.expect("grid is non-empty");
    CategoryDistribution::new(
        cond.labels().to_vec(),
        c.iter().map(|&ci| T::from_count(ci) / scale).collect(),
    )
}

/// Calls `f` on every composition of `remaining` into the slots from `pos` on.
fn visit(counts: &mut [usize], pos: usize, remaining: usize, f: &mut impl FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        f(counts);
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        visit(counts, pos + 1, remaining - c, f);
    }
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

    #[test]
    fn identity_recovers_grid_point() {
        let c = cond(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
        let p = brute_force_simplex(&c, &[0.2, 0.3, 0.5], 1e-3).unwrap();
        for (a, b) in p.probs().iter().zip([0.2, 0.3, 0.5]) {
            assert!((a - b).abs() <= 1e-3);
        }
    }

    #[test]
    fn single_category() {
        let c = cond(&[&[0.4], &[0.6]]);
        assert_eq!(brute_force_simplex(&c, &[0.5, 0.5], 1e-2).unwrap().probs(), &[1.0]);
    }

    #[test]
    fn limits() {
        let c = cond(&[&[0.2; 5], &[0.2; 5], &[0.2; 5], &[0.2; 5], &[0.2; 5]]);
        assert!(matches!(
            brute_force_simplex(&c, &[0.2; 5], 1e-2),
            Err(Error::OracleTooLarge { categories: 5 })
        ));
        let c = cond(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert!(brute_force_simplex(&c, &[0.5, 0.5], 0.1).is_err());
        assert!(brute_force_simplex(&c, &[0.5, 0.5], 0.003).is_err());
    }
}
