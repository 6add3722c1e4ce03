//! Small dense linear algebra: column-major matrices, Householder QR with
//! column pivoting, least squares, and the probability-simplex constrained
//! least-squares solver behind the aggregate estimator.
//!
//! Problem sizes here are tall and thin (thousands of patterns, a handful of
//! categories), so everything is written for `rows >> cols`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Builds from columns; every column must have the same length.
    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Structural("columns of unequal length".into()));
        }
        Ok(Self {
            rows,
            cols,
            data: columns.concat(),
        })
    }

    /// Builds from row-major nested vectors.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Structural("rows of unequal length".into()));
        }
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[T]> {
        (0..self.cols).map(move |j| self.column(j))
    }

    /// `self * x`
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in mul_vec");
        let mut out = vec![T::zero(); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.column(j)) {
                *o = *o + a * xj;
            }
        }
        out
    }

    /// `selfᵀ * y`
    pub fn tr_mul_vec(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.rows, "dimension mismatch in tr_mul_vec");
        self.columns().map(|c| dot(c, y)).collect()
    }

    /// `selfᵀ * self`
    pub fn gram(&self) -> DenseMatrix<T> {
        let n = self.cols;
        let mut g = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = dot(self.column(i), self.column(j));
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, idx: &[usize]) -> DenseMatrix<T> {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for &j in idx {
            data.extend_from_slice(self.column(j));
        }
        DenseMatrix {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[j * self.rows + i]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[j * self.rows + i]
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub fn norm2<T: Scalar>(a: &[T]) -> T {
    // scaled to avoid overflow on f32
    let scale = a.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let ss = a.iter().fold(T::zero(), |acc, &x| {
        let y = x / scale;
        acc + y * y
    });
    scale * ss.sqrt()
}

/// Householder QR with column pivoting, `A P = Q R`.
///
/// The Householder vectors are kept below the diagonal of `qr`, `R` on and
/// above it.
#[derive(Debug, Clone)]
pub struct PivotedQr<T> {
    qr: DenseMatrix<T>,
    tau: Vec<T>,
    perm: Vec<usize>,
    rank: usize,
}

impl<T: Scalar> PivotedQr<T> {
    /// Factorizes `a`. Rank is the number of diagonal entries of `R` whose
    /// magnitude exceeds `rtol * max_j ||a_j||`.
    pub fn new(a: &DenseMatrix<T>, rtol: T) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let mut qr = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut tau = vec![T::zero(); n.min(m)];
        let mut norms: Vec<T> = qr.columns().map(norm2).collect();
        let max_norm = norms.iter().fold(T::zero(), |acc, &x| acc.max(x));
        let tol = rtol * max_norm;

        let steps = n.min(m);
        for k in 0..steps {
            // pivot: largest remaining column norm, lowest index on ties
            let mut best = k;
            for j in k + 1..n {
                if norms[j] > norms[best] {
                    best = j;
                }
            }
            if best != k {
                for i in 0..m {
                    let tmp = qr[(i, k)];
                    qr[(i, k)] = qr[(i, best)];
                    qr[(i, best)] = tmp;
                }
                norms.swap(k, best);
                perm.swap(k, best);
            }

            // Householder reflector for qr[k.., k]
            let alpha = norm2(&qr.column(k)[k..]);
            if alpha == T::zero() {
                tau[k] = T::zero();
                continue;
            }
            let x0 = qr[(k, k)];
            let beta = if x0 >= T::zero() { -alpha } else { alpha };
            let v0 = x0 - beta;
            for i in k + 1..m {
                qr[(i, k)] = qr[(i, k)] / v0;
            }
            tau[k] = (beta - x0) / beta;
            qr[(k, k)] = beta;

            for j in k + 1..n {
                let mut s = qr[(k, j)];
                for i in k + 1..m {
                    s = s + qr[(i, k)] * qr[(i, j)];
                }
                s = s * tau[k];
                qr[(k, j)] = qr[(k, j)] - s;
                for i in k + 1..m {
                    qr[(i, j)] = qr[(i, j)] - s * qr[(i, k)];
                }
                // recompute instead of downdating; n is tiny
                norms[j] = norm2(&qr.column(j)[k + 1..]);
            }
        }

        let rank = (0..steps)
            .take_while(|&k| qr[(k, k)].abs() > tol && tol >= T::zero() && max_norm > T::zero())
            .count();
        Self {
            qr,
            tau,
            perm,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `R[i, j]` for `i <= j`.
    pub fn r(&self, i: usize, j: usize) -> T {
        self.qr[(i, j)]
    }

    /// Applies `Qᵀ` to `b` in place.
    fn apply_qt(&self, b: &mut [T]) {
        let m = self.qr.rows();
        for (k, &t) in self.tau.iter().enumerate() {
            if t == T::zero() {
                continue;
            }
            let mut s = b[k];
            for i in k + 1..m {
                s = s + self.qr[(i, k)] * b[i];
            }
            s = s * t;
            b[k] = b[k] - s;
            for i in k + 1..m {
                b[i] = b[i] - s * self.qr[(i, k)];
            }
        }
    }

    /// Least-squares solution of `A x ≈ b`; requires full column rank.
    pub fn solve_least_squares(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.qr.cols();
        if self.rank < n {
            return Err(Error::NoConvergence(format!(
                "least squares on rank-deficient matrix (rank {} < {n})",
                self.rank
            )));
        }
        let mut qtb = b.to_vec();
        self.apply_qt(&mut qtb);
        let mut z = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = qtb[i];
            for j in i + 1..n {
                s = s - self.qr[(i, j)] * z[j];
            }
            z[i] = s / self.qr[(i, i)];
        }
        let mut x = vec![T::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        Ok(x)
    }

    /// When rank-deficient, the first numerically dependent column together
    /// with the independent columns it is built from (original indices, sorted).
    pub fn dependent_set(&self) -> Option<Vec<usize>> {
        let n = self.qr.cols();
        if self.rank >= n {
            return None;
        }
        let r = self.rank;
        // R11 z = R12[:, first dependent]
        let mut z = vec![T::zero(); r];
        for i in (0..r).rev() {
            let mut s = self.qr[(i, r)];
            for j in i + 1..r {
                s = s - self.qr[(i, j)] * z[j];
            }
            z[i] = s / self.qr[(i, i)];
        }
        let cutoff = T::lit(1e-8);
        let mut set: Vec<usize> = z
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > cutoff)
            .map(|(i, _)| self.perm[i])
            .collect();
        set.push(self.perm[r]);
        set.sort_unstable();
        Some(set)
    }
}

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting. Fails on an exactly singular pivot.
pub fn solve_square<T: Scalar>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::Structural("solve_square needs a square system".into()));
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let mut p = k;
        for i in k + 1..n {
            if m[(i, k)].abs() > m[(p, k)].abs() {
                p = i;
            }
        }
        if m[(p, k)] == T::zero() {
            return Err(Error::NoConvergence("singular system".into()));
        }
        if p != k {
            for j in 0..n {
                let tmp = m[(k, j)];
                m[(k, j)] = m[(p, j)];
                m[(p, j)] = tmp;
            }
            x.swap(k, p);
        }
        for i in k + 1..n {
            let f = m[(i, k)] / m[(k, k)];
            if f == T::zero() {
                continue;
            }
            for j in k..n {
                m[(i, j)] = m[(i, j)] - f * m[(k, j)];
            }
            x[i] = x[i] - f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s = s - m[(i, j)] * x[j];
        }
        x[i] = s / m[(i, i)];
    }
    Ok(x)
}

/// The closed-form normal-equations solution `(AᵀA)⁻¹ Aᵀ b`, formed
/// literally through the Gram matrix. No constraints.
pub fn normal_equations_solution<T: Scalar>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    solve_square(&a.gram(), &a.tr_mul_vec(b))
}

/// Minimizes `||A x - b||²` subject to `sum(x) = 1` with only the columns in
/// `free` allowed to be nonzero. Eliminates the first free variable and solves
/// the remaining unconstrained problem by QR.
fn equality_constrained_ls<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &[T],
    free: &[usize],
) -> Result<Vec<T>> {
    let n = a.cols();
    let mut x = vec![T::zero(); n];
    let (&pivot, rest) = free
        .split_first()
        .expect("free set is never empty on the simplex");
    if rest.is_empty() {
        x[pivot] = T::one();
        return Ok(x);
    }
    // x_pivot = 1 - Σ y  ⇒  (A_rest - a_pivot 1ᵀ) y ≈ b - a_pivot
    let a_piv = a.column(pivot);
    let cols: Vec<Vec<T>> = rest
        .iter()
        .map(|&j| a.column(j).iter().zip(a_piv).map(|(&u, &v)| u - v).collect())
        .collect();
    let reduced = DenseMatrix::from_columns(&cols)?;
    let rhs: Vec<T> = b.iter().zip(a_piv).map(|(&u, &v)| u - v).collect();
    let qr = PivotedQr::new(&reduced, T::rank_rtol());
    let y = qr.solve_least_squares(&rhs)?;
    let mut sum = T::zero();
    for (&j, &yj) in rest.iter().zip(&y) {
        x[j] = yj;
        sum = sum + yj;
    }
    x[pivot] = T::one() - sum;
    Ok(x)
}

/// Minimizes `||A p - b||²` over the probability simplex `{p >= 0, Σp = 1}`
/// with a primal active-set method.
///
/// `A` must have full column rank, which makes the problem strictly convex and
/// the minimizer unique. When the unconstrained minimizer already lies in the
/// simplex it is returned as is (the first subproblem solves it exactly).
pub fn simplex_least_squares<T: Scalar>(a: &DenseMatrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.cols();
    if n == 0 {
        return Err(Error::Structural("no columns".into()));
    }
    if b.len() != a.rows() {
        return Err(Error::Structural(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    if n == 1 {
        return Ok(vec![T::one()]);
    }

    let mut at_zero = vec![false; n];
    let mut p = vec![T::one() / T::from_count(n); n];
    let max_iter = 20 * n + 50;
    let grad_scale = {
        let an = a.columns().map(norm2).fold(T::zero(), |m, x| m.max(x));
        let bn = norm2(b);
        an * (an + bn) + T::one()
    };
    let mult_tol = T::lit(1e3) * T::epsilon() * grad_scale;

    for _ in 0..max_iter {
        let free: Vec<usize> = (0..n).filter(|&j| !at_zero[j]).collect();
        let cand = equality_constrained_ls(a, b, &free)?;

        if free.iter().all(|&j| cand[j] >= T::zero()) {
            p = cand;
            // gradient/2 = Aᵀ(Ap - b); on the free set it equals the
            // multiplier of the sum constraint
            let resid: Vec<T> = a
                .mul_vec(&p)
                .iter()
                .zip(b)
                .map(|(&u, &v)| u - v)
                .collect();
            let g = a.tr_mul_vec(&resid);
            let mu = free.iter().map(|&j| g[j]).sum::<T>() / T::from_count(free.len());
            let release = (0..n)
                .filter(|&j| at_zero[j])
                .map(|j| (j, g[j] - mu))
                .filter(|&(_, nu)| nu < -mult_tol)
                .fold(None::<(usize, T)>, |best, (j, nu)| match best {
                    Some((_, b_nu)) if b_nu <= nu => best,
                    _ => Some((j, nu)),
                });
            match release {
                None => {
                    for (j, v) in p.iter_mut().enumerate() {
                        if at_zero[j] || *v < T::zero() {
                            *v = T::zero();
                        }
                    }
                    return Ok(p);
                }
                Some((j, _)) => at_zero[j] = false,
            }
        } else {
            // step toward the candidate until the first coordinate hits zero
            let mut step = T::one();
            for &j in &free {
                if cand[j] < T::zero() {
                    let s = p[j] / (p[j] - cand[j]);
                    if s < step {
                        step = s;
                    }
                }
            }
            for &j in &free {
                p[j] = p[j] + step * (cand[j] - p[j]);
            }
            let eps = T::lit(1e2) * T::epsilon();
            let mut added = false;
            for &j in &free {
                if cand[j] < T::zero() && p[j] <= eps {
                    p[j] = T::zero();
                    at_zero[j] = true;
                    added = true;
                }
            }
            if !added {
                // numerical corner: force the most negative candidate out
                let j = free
                    .iter()
                    .copied()
                    .min_by(|&x, &y| cand[x].partial_cmp(&cand[y]).expect("finite"))
                    .expect("non-empty");
                p[j] = T::zero();
                at_zero[j] = true;
            }
            if at_zero.iter().all(|&z| z) {
                return Err(Error::NoConvergence("active set emptied the simplex".into()));
            }
        }
    }
    Err(Error::NoConvergence(format!(
        "simplex least squares exceeded {max_iter} iterations"
    )))
}
