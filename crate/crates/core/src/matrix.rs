//! Dense row-major `f64` matrix and the handful of kernels the solver needs.
//!
//! Operations return fresh matrices; nothing here mutates its inputs.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result, Shape};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawMatrix"))]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Unchecked wire form; deserialization goes through [`Matrix::from_vec`].
#[cfg(feature = "serde")]
#[derive(serde::Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawMatrix> for Matrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        Matrix::from_vec(raw.rows, raw.cols, raw.data)
    }
}

impl Matrix {
    /// Builds a matrix from a row-major buffer.
    ///
    /// Both dimensions must be positive and every entry finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::BufferLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(idx) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: idx / cols,
                col: idx % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    op: "from_rows",
                    left: (1, n_cols),
                    right: (1, row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(n_rows, n_cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dims(rows, cols)?;
        Ok(Self::raw(rows, cols, vec![0.0; rows * cols]))
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        Ok(m)
    }

    /// Builds a matrix whose entry `(i, j)` is `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        check_dims(rows, cols)?;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec(rows, cols, data)
    }

    // Kernel results skip validation; the solver checks finiteness itself.
    pub(crate) fn raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> Shape {
        (self.rows, self.cols)
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// First entry below zero, as `(row, col, value)`.
    pub fn first_negative(&self) -> Option<(usize, usize, f64)> {
        self.data
            .iter()
            .position(|&x| x < 0.0)
            .map(|idx| (idx / self.cols, idx % self.cols, self.data[idx]))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        Matrix::raw(self.cols, self.rows, out)
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        matmul(self, rhs)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        self.map(|x| x * factor)
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Matrix {
        Matrix::raw(self.rows, self.cols, self.data.iter().map(|&x| f(x)).collect())
    }

    fn zip_with(&self, rhs: &Matrix, op: &'static str, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        same_shape(op, self, rhs)?;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Matrix::raw(self.rows, self.cols, data))
    }

    /// Squared Frobenius norm.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    /// Entrywise ℓ1 norm (sum of absolute values).
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).sum()
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.data.len() as f64
    }

    /// Frobenius inner product `⟨self, rhs⟩`.
    pub fn dot(&self, rhs: &Matrix) -> Result<f64> {
        same_shape("dot", self, rhs)?;
        Ok(self.data.iter().zip(&rhs.data).map(|(a, b)| a * b).sum())
    }

    /// Number of entries strictly below `threshold`.
    pub fn count_below(&self, threshold: f64) -> usize {
        self.data.iter().filter(|&&x| x < threshold).count()
    }

    /// `self · Γ`: column `j` is column `j` minus column `j + 1`.
    ///
    /// A single-column matrix has no adjacent pairs and yields `None`.
    pub fn adjacent_column_differences(&self) -> Option<Matrix> {
        if self.cols < 2 {
            return None;
        }
        let out_cols = self.cols - 1;
        let mut out = Vec::with_capacity(self.rows * out_cols);
        for row in self.data.chunks_exact(self.cols) {
            out.extend(row.windows(2).map(|pair| pair[0] - pair[1]));
        }
        Some(Matrix::raw(self.rows, out_cols, out))
    }

    /// `self · Γ Γᵀ` without forming Γ: a second difference along each row
    /// with free (first-difference) ends.
    pub fn gamma_gram_product(&self) -> Matrix {
        let n = self.cols;
        let mut out = vec![0.0; self.data.len()];
        if n < 2 {
            return Matrix::raw(self.rows, n, out);
        }
        for (src, dst) in self.data.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
            dst[0] = src[0] - src[1];
            for j in 1..n - 1 {
                dst[j] = 2.0 * src[j] - src[j - 1] - src[j + 1];
            }
            dst[n - 1] = src[n - 1] - src[n - 2];
        }
        Matrix::raw(self.rows, n, out)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (row, col): (usize, usize)) -> &f64 {
        &self.data[row * self.cols + col]
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 {
        return Err(Error::InvalidSize { what: "rows", value: rows });
    }
    if cols == 0 {
        return Err(Error::InvalidSize { what: "cols", value: cols });
    }
    Ok(())
}

fn same_shape(op: &'static str, a: &Matrix, b: &Matrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

/// Standard matrix product `a · b`.
pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "matmul",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let (n, m) = (a.rows, b.cols);
    let mut out = vec![0.0; n * m];
    for i in 0..n {
        let out_row = &mut out[i * m..(i + 1) * m];
        for (k, &aik) in a.row(i).iter().enumerate() {
            if aik == 0.0 {
                continue;
            }
            for (o, &bkj) in out_row.iter_mut().zip(b.row(k)) {
                *o += aik * bkj;
            }
        }
    }
    Ok(Matrix::raw(n, m, out))
}

/// `a · bᵀ` computed from row dot products, without forming `bᵀ`.
pub fn matmul_transpose_b(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch {
            op: "matmul_transpose_b",
            left: a.shape(),
            right: b.shape(),
        });
    }
    let mut out = Vec::with_capacity(a.rows * b.rows);
    for i in 0..a.rows {
        let ai = a.row(i);
        out.extend((0..b.rows).map(|j| dot(ai, b.row(j))));
    }
    Ok(Matrix::raw(a.rows, b.rows, out))
}

// Four independent accumulators so the loop vectorizes.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let mut ca = a.chunks_exact(4);
    let mut cb = b.chunks_exact(4);
    for (x, y) in (&mut ca).zip(&mut cb) {
        for l in 0..4 {
            acc[l] += x[l] * y[l];
        }
    }
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

pub fn frobenius_norm(m: &Matrix) -> f64 {
    libm::sqrt(m.norm_sq())
}

/// The `n × (n−1)` forward-difference operator Γ with `Γ[j][j] = 1` and
/// `Γ[j+1][j] = −1`, so that `(HΓ)[:, j] = H[:, j] − H[:, j+1]`.
pub fn gamma_operator(n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::InvalidSize {
            what: "gamma_operator n",
            value: n,
        });
    }
    let mut g = Matrix::zeros(n, n - 1)?;
    for j in 0..n - 1 {
        g.data[j * (n - 1) + j] = 1.0;
        g.data[(j + 1) * (n - 1) + j] = -1.0;
    }
    Ok(g)
}

/// `‖ΓΓᵀ‖_F` for the `n`-column difference operator: `sqrt(6n − 8)`.
///
/// Zero when `n < 2`, where there are no adjacent columns.
pub fn gamma_gram_norm(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        libm::sqrt((6 * n - 8) as f64)
    }
}

/// Projection onto the nonnegative orthant, `max{0, x}` entrywise.
pub fn nonneg_project(m: &Matrix) -> Matrix {
    m.map(|x| if x > 0.0 { x } else { 0.0 })
}

/// `max{0, x − tau}` entrywise: the prox of `tau‖·‖₁` plus the nonnegativity
/// indicator.
pub fn soft_threshold_nonneg(m: &Matrix, tau: f64) -> Result<Matrix> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::InvalidParameter { name: "tau", value: tau });
    }
    Ok(m.map(|x| {
        let shifted = x - tau;
        if shifted > 0.0 {
            shifted
        } else {
            0.0
        }
    }))
}
