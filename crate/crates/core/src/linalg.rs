//! Small dense linear algebra: a row-major matrix, LU factorisation with
//! partial pivoting, and a Hager/Higham 1-norm condition estimate.
//!
//! The systems produced by the solvers are at most a few hundred unknowns, so
//! a straightforward `O(n^3)` factorisation is all that is required.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Condition-number ceiling above which a system is reported as
/// ill-conditioned rather than solved.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has {} entries",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
            .collect())
    }

    /// Matrix-matrix product.
    pub fn matmul(&self, rhs: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// In-place scalar multiple.
    pub fn scale(&mut self, s: T) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(T::zero(), |acc, v| acc + v.abs()))
            .fold(T::zero(), T::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        let mut sums = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            for (s, v) in sums.iter_mut().zip(self.row(i)) {
                *s += v.abs();
            }
        }
        sums.into_iter().fold(T::zero(), T::max)
    }

    /// Assemble a 2x2 block matrix `[a b; c d]`.
    pub fn block2(a: &Matrix<T>, b: &Matrix<T>, c: &Matrix<T>, d: &Matrix<T>) -> Result<Matrix<T>> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("inconsistent block sizes".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        Ok(Matrix::from_fn(rows, cols, |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - a.cols)],
            (false, true) => c[(i - a.rows, j)],
            (false, false) => d[(i - a.rows, j - a.cols)],
        }))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// `PA = LU` with unit-diagonal `L` stored below the diagonal of `lu`.
#[derive(Debug, Clone)]
pub struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Factorise a square matrix using partial (row) pivoting.
    pub fn factor(a: &Matrix<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "LU requires a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].abs()))
                    .fold((k, -T::one()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pivot > T::zero()) || !pivot.is_finite() {
                return Err(Error::Singular { column: k });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let inv = T::one() / lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] * inv;
                lu[(i, k)] = factor;
                if factor == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} entries, system has {n}",
                b.len()
            )));
        }
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = self.lu.row(i);
            let s = (0..i).fold(x[i], |acc, j| acc - row[j] * x[j]);
            x[i] = s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s = (i + 1..n).fold(x[i], |acc, j| acc - row[j] * x[j]);
            x[i] = s / row[i];
        }
        Ok(x)
    }

    /// Solve `A^T x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} entries, system has {n}",
                b.len()
            )));
        }
        // A^T = U^T L^T P, so solve U^T y = b, L^T z = y, x = P^T z.
        let mut y = b.to_vec();
        for i in 0..n {
            let s = (0..i).fold(y[i], |acc, j| acc - self.lu[(j, i)] * y[j]);
            y[i] = s / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let s = (i + 1..n).fold(y[i], |acc, j| acc - self.lu[(j, i)] * y[j]);
            y[i] = s;
        }
        let mut x = vec![T::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        Ok(x)
    }

    /// Lower-bound estimate of `||A^{-1}||_1` (Hager's method with Higham's
    /// alternating-sign safeguard).
    pub fn inverse_norm1_estimate(&self) -> Result<T> {
        let n = self.dim();
        if n == 0 {
            return Ok(T::zero());
        }
        let norm1 = |v: &[T]| v.iter().fold(T::zero(), |acc, x| acc + x.abs());
        let nf = T::from_index(n);
        let mut x = vec![T::one() / nf; n];
        let mut estimate = T::zero();
        for iteration in 0..5 {
            let y = self.solve(&x)?;
            let ny = norm1(&y);
            if iteration > 0 && ny <= estimate {
                break;
            }
            estimate = ny;
            let xi: Vec<T> = y
                .iter()
                .map(|&v| if v >= T::zero() { T::one() } else { -T::one() })
                .collect();
            let z = self.solve_transpose(&xi)?;
            let (jmax, zmax) =
                z.iter().enumerate().fold(
                    (0, -T::one()),
                    |best, (j, v)| if v.abs() > best.1 { (j, v.abs()) } else { best },
                );
            let ztx = z.iter().zip(&x).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            if zmax <= ztx {
                break;
            }
            x.iter_mut().for_each(|v| *v = T::zero());
            x[jmax] = T::one();
        }
        let alt: Vec<T> = (0..n)
            .map(|i| {
                let sign = if i % 2 == 0 { T::one() } else { -T::one() };
                let ramp = if n > 1 {
                    T::from_index(i) / T::from_index(n - 1)
                } else {
                    T::zero()
                };
                sign * (T::one() + ramp)
            })
            .collect();
        let alt_est = T::lit(2.0) * norm1(&self.solve(&alt)?) / (T::lit(3.0) * nf);
        Ok(estimate.max(alt_est))
    }
}

/// Result of a checked dense solve.
#[derive(Debug, Clone)]
pub struct DenseSolve<T> {
    pub x: Vec<T>,
    /// 1-norm condition-number estimate.
    pub condition: T,
    /// `||A x - b||_inf / ||b||_inf` (absolute residual when `b = 0`).
    pub relative_residual: T,
}

/// Factorise, estimate the condition number, and solve `A x = b`, refusing
/// systems whose condition estimate exceeds [`CONDITION_LIMIT`].
pub fn solve_checked<T: Real>(a: &Matrix<T>, b: &[T]) -> Result<DenseSolve<T>> {
    let lu = Lu::factor(a)?;
    let condition = a.norm_1() * lu.inverse_norm1_estimate()?;
    let c = condition.to_f64_lossy();
    if !(c <= CONDITION_LIMIT) {
        return Err(Error::IllConditioned {
            condition: c,
            limit: CONDITION_LIMIT,
        });
    }
    let x = lu.solve(b)?;
    let ax = a.mul_vec(&x)?;
    let res = ax.iter().zip(b).fold(T::zero(), |acc, (&u, &v)| acc.max((u - v).abs()));
    let bnorm = b.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    let relative_residual = if bnorm > T::zero() { res / bnorm } else { res };
    Ok(DenseSolve {
        x,
        condition,
        relative_residual,
    })
}
