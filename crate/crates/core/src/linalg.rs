//! Dense matrices over a [`Scalar`] field, linear solving and exact
//! determinants.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{NumericMode, Scalar};

pub type DenseVector<S> = Vec<S>;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> DenseMatrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(DenseMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, order, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn mul_vec(&self, x: &[S]) -> Result<DenseVector<S>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!("{}x{} times {}", self.rows, self.cols, x.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension("inner dimensions differ".into()));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .fold(S::zero(), |acc, t| acc + self.get(i, t).clone() * other.get(t, j).clone())
        }))
    }
}

impl<T: fmt::Debug> fmt::Debug for DenseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Result of [`solve_linear`].
#[derive(Clone, Debug)]
pub struct LinearSolution<S> {
    pub x: DenseVector<S>,
    /// `|smallest pivot| / |largest pivot|` of the float elimination; `None`
    /// in exact mode.
    pub pivot_ratio: Option<f64>,
}

/// Pivot ratio below which float solves are flagged as ill-conditioned.
pub const CONDITIONING_WARN_RATIO: f64 = 1e-10;

/// Solves `m x = rhs`.
///
/// Exact scalars go through fraction-free (Bareiss) elimination with exact
/// back-substitution; floats through Gaussian elimination with partial
/// pivoting, where a pivot below `mode.epsilon_abs` counts as singular.
pub fn solve_linear<S: Scalar>(
    m: &DenseMatrix<S>,
    rhs: &[S],
    mode: &NumericMode,
) -> Result<LinearSolution<S>> {
    if !m.is_square() || rhs.len() != m.rows {
        return Err(Error::Dimension(format!(
            "system {}x{} with rhs {}",
            m.rows,
            m.cols,
            rhs.len()
        )));
    }
    if S::EXACT {
        solve_bareiss(m, rhs).map(|x| LinearSolution { x, pivot_ratio: None })
    } else {
        solve_partial_pivot(m, rhs, mode.epsilon_abs)
    }
}

fn augmented<S: Scalar>(m: &DenseMatrix<S>, rhs: &[S]) -> Vec<Vec<S>> {
    (0..m.rows)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(rhs[i].clone());
            row
        })
        .collect()
}

fn solve_bareiss<S: Scalar>(m: &DenseMatrix<S>, rhs: &[S]) -> Result<Vec<S>> {
    let n = m.rows;
    let mut a = augmented(m, rhs);
    let mut prev = S::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Err(Error::Singular { rank: rank_exact(m), order: n });
        };
        a.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone())
                    / prev.clone();
                a[i][j] = v;
            }
            a[i][k] = S::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = a[i][n].clone();
        for j in i + 1..n {
            acc = acc - a[i][j].clone() * x[j].clone();
        }
        x[i] = acc / a[i][i].clone();
    }
    Ok(x)
}

fn solve_partial_pivot<S: Scalar>(
    m: &DenseMatrix<S>,
    rhs: &[S],
    eps: f64,
) -> Result<LinearSolution<S>> {
    let n = m.rows;
    let mut a = augmented(m, rhs);
    let (mut smallest, mut largest) = (f64::INFINITY, 0.0f64);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&r, &s| a[r][k].abs().to_f64().total_cmp(&a[s][k].abs().to_f64()))
            .expect("non-empty pivot column");
        let mag = a[p][k].abs().to_f64();
        if mag < eps {
            return Err(Error::Singular { rank: rank_float(m, eps), order: n });
        }
        smallest = smallest.min(mag);
        largest = largest.max(mag);
        a.swap(k, p);
        for i in k + 1..n {
            let factor = a[i][k].clone() / a[k][k].clone();
            for j in k..=n {
                a[i][j] = a[i][j].clone() - factor.clone() * a[k][j].clone();
            }
        }
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = a[i][n].clone();
        for j in i + 1..n {
            acc = acc - a[i][j].clone() * x[j].clone();
        }
        x[i] = acc / a[i][i].clone();
    }
    let pivot_ratio = if n == 0 { 1.0 } else { smallest / largest };
    Ok(LinearSolution { x, pivot_ratio: Some(pivot_ratio) })
}

/// Exact rank by elimination that skips zero columns.
pub fn rank_exact<S: Scalar>(m: &DenseMatrix<S>) -> usize {
    let mut a = m.to_rows();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..m.rows {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone() / a[rank][col].clone();
            for j in col..m.cols {
                a[i][j] = a[i][j].clone() - factor.clone() * a[rank][j].clone();
            }
        }
        rank += 1;
    }
    rank
}

fn rank_float<S: Scalar>(m: &DenseMatrix<S>, eps: f64) -> usize {
    let mut a: Vec<Vec<f64>> = m.to_rows().iter().map(|r| r.iter().map(S::to_f64).collect()).collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..m.rows)
            .filter(|&r| a[r][col].abs() >= eps)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
        else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..m.rows {
            let factor = a[i][col] / a[rank][col];
            for j in col..m.cols {
                a[i][j] -= factor * a[rank][j];
            }
        }
        rank += 1;
    }
    rank
}

/// Exact determinant by Bareiss elimination. Float scalars are rejected.
pub fn determinant_exact<S: Scalar>(m: &DenseMatrix<S>) -> Result<S> {
    if !S::EXACT {
        return Err(Error::UnsupportedMode);
    }
    if !m.is_square() {
        return Err(Error::Dimension("determinant of a non-square matrix".into()));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(S::one());
    }
    let mut a = m.to_rows();
    let mut prev = S::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Ok(S::zero());
        };
        if p != k {
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone())
                    / prev.clone();
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}
