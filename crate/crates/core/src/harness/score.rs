//! Recovery scoring that is blind to the order and scale of components.

use alloc::vec;
use alloc::vec::Vec;

use crate::assignment::min_cost_assignment;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecoveryScore {
    /// `‖Ŵ − Ŵ_r‖_F` after normalization and matching.
    pub dist_w: f64,
    /// `‖Ĥ − Ĥ_r‖_F` after normalization and matching.
    pub dist_h: f64,
    /// `permutation[j]` is the learned component matched to true component `j`.
    pub permutation: Vec<usize>,
}

impl RecoveryScore {
    pub fn total(&self) -> f64 {
        self.dist_w + self.dist_h
    }
}

/// Scales every column to unit Euclidean norm; zero columns stay zero.
pub fn normalize_columns(m: &Matrix) -> Matrix {
    normalize_rows(&m.transpose()).transpose()
}

/// Scales every row to unit Euclidean norm; zero rows stay zero.
pub fn normalize_rows(m: &Matrix) -> Matrix {
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        let row = m.row(i);
        let norm = libm::sqrt(row.iter().map(|x| x * x).sum::<f64>());
        if norm > 0.0 {
            data.extend(row.iter().map(|x| x / norm));
        } else {
            data.extend_from_slice(row);
        }
    }
    Matrix::raw(m.rows(), m.cols(), data)
}

fn mismatch(op: &'static str, left: &Matrix, right: &Matrix) -> Error {
    Error::DimensionMismatch {
        op,
        left: left.shape(),
        right: right.shape(),
    }
}

/// Compares learned factors `(w, h)` with ground truth `(w_true, h_true)`.
///
/// Columns of both `W`s and rows of both `H`s are normalized, the learned
/// components are matched to the true ones by minimum total column distance
/// (exact assignment), and the Frobenius distances of the matched,
/// normalized factors are returned.
pub fn score_recovery(w: &Matrix, h: &Matrix, w_true: &Matrix, h_true: &Matrix) -> Result<RecoveryScore> {
    if w.shape() != w_true.shape() {
        return Err(mismatch("score W", w, w_true));
    }
    if h.shape() != h_true.shape() {
        return Err(mismatch("score H", h, h_true));
    }
    if w.cols() != h.rows() {
        return Err(mismatch("score W·H", w, h));
    }
    let k = w.cols();

    // Work with components as rows.
    let wn = normalize_rows(&w.transpose());
    let wtn = normalize_rows(&w_true.transpose());
    let hn = normalize_rows(h);
    let htn = normalize_rows(h_true);

    let mut cost = vec![0.0; k * k];
    for j in 0..k {
        for i in 0..k {
            cost[j * k + i] = libm::sqrt(sq_dist(wtn.row(j), wn.row(i)));
        }
    }
    let permutation = min_cost_assignment(&cost, k);

    let mut dw = 0.0;
    let mut dh = 0.0;
    for (j, &i) in permutation.iter().enumerate() {
        dw += sq_dist(wtn.row(j), wn.row(i));
        dh += sq_dist(htn.row(j), hn.row(i));
    }
    Ok(RecoveryScore {
        dist_w: libm::sqrt(dw),
        dist_h: libm::sqrt(dh),
        permutation,
    })
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
