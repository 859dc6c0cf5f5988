//! The regularized NMF cost
//!
//! ```text
//! Ψ(W, H) = ‖V − WH‖²_F + η‖HΓ‖²_F + λ‖W‖₁ + β_W‖W‖²_F + β_H‖H‖²_F
//! ```
//!
//! restricted to nonnegative `W` and `H`, together with the block gradients
//! of its smooth part and the block Lipschitz moduli used as step sizes.

use crate::error::{Error, Result};
use crate::matrix::{gamma_gram_norm, matmul, matmul_transpose_b, Matrix};

/// Floor applied to every Lipschitz modulus so a collapsed factor never
/// produces a zero step modulus.
pub const LIPSCHITZ_FLOOR: f64 = 1e-12;

/// Regularization weights. All must be finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ObjectiveParams {
    /// ℓ1 weight on `W`.
    pub lambda: f64,
    /// Smoothness weight on adjacent columns of `H`.
    pub eta: f64,
    /// Ridge weight on `W`.
    pub beta_w: f64,
    /// Ridge weight on `H`.
    pub beta_h: f64,
}

impl Default for ObjectiveParams {
    fn default() -> Self {
        Self {
            lambda: 0.0,
            eta: 0.0,
            beta_w: 0.1,
            beta_h: 0.1,
        }
    }
}

impl ObjectiveParams {
    pub fn new(lambda: f64, eta: f64, beta_w: f64, beta_h: f64) -> Result<Self> {
        let p = Self {
            lambda,
            eta,
            beta_w,
            beta_h,
        };
        p.validate()?;
        Ok(p)
    }

    /// No regularization at all: plain Euclidean NMF.
    pub fn unregularized() -> Self {
        Self {
            lambda: 0.0,
            eta: 0.0,
            beta_w: 0.0,
            beta_h: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("lambda", self.lambda),
            ("eta", self.eta),
            ("beta_w", self.beta_w),
            ("beta_h", self.beta_h),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(())
    }
}

fn check_shapes(v: &Matrix, w: &Matrix, h: &Matrix) -> Result<()> {
    if w.cols() != h.rows() {
        return Err(Error::DimensionMismatch {
            op: "W·H",
            left: w.shape(),
            right: h.shape(),
        });
    }
    if v.shape() != (w.rows(), h.cols()) {
        return Err(Error::DimensionMismatch {
            op: "V vs W·H",
            left: v.shape(),
            right: (w.rows(), h.cols()),
        });
    }
    Ok(())
}

fn check_nonneg(what: &'static str, m: &Matrix) -> Result<()> {
    match m.first_negative() {
        Some((row, col, value)) => Err(Error::NegativeEntry { what, row, col, value }),
        None => Ok(()),
    }
}

/// `‖V − WH‖_F`.
pub fn reconstruction_error(v: &Matrix, w: &Matrix, h: &Matrix) -> Result<f64> {
    check_shapes(v, w, h)?;
    Ok(libm::sqrt(v.sub(&matmul(w, h)?)?.norm_sq()))
}

/// Evaluates Ψ at a nonnegative pair `(w, h)`.
///
/// The nonnegativity indicators are not represented as `+∞`; a negative
/// entry is reported as an error instead.
pub fn evaluate(v: &Matrix, w: &Matrix, h: &Matrix, p: &ObjectiveParams) -> Result<f64> {
    check_shapes(v, w, h)?;
    check_nonneg("W", w)?;
    check_nonneg("H", h)?;
    Ok(evaluate_unchecked(v, w, h, p))
}

pub(crate) fn evaluate_unchecked(v: &Matrix, w: &Matrix, h: &Matrix, p: &ObjectiveParams) -> f64 {
    let wh = matmul(w, h).expect("shapes checked");
    let residual: f64 = v
        .as_slice()
        .iter()
        .zip(wh.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let smooth = if p.eta != 0.0 {
        h.adjacent_column_differences().map_or(0.0, |d| d.norm_sq())
    } else {
        0.0
    };
    residual + p.eta * smooth + p.lambda * w.l1_norm() + p.beta_w * w.norm_sq() + p.beta_h * h.norm_sq()
}

/// Gradient in `W` of the smooth part: `2WHHᵀ − 2VHᵀ + 2β_W W`.
///
/// The ℓ1 term is left to the proximal step.
pub fn grad_w(v: &Matrix, w: &Matrix, h: &Matrix, p: &ObjectiveParams) -> Result<Matrix> {
    check_shapes(v, w, h)?;
    let hht = matmul_transpose_b(h, h)?;
    Ok(grad_w_with_gram(v, w, h, &hht, p))
}

fn grad_w_with_gram(v: &Matrix, w: &Matrix, h: &Matrix, hht: &Matrix, p: &ObjectiveParams) -> Matrix {
    let whht = matmul(w, hht).expect("shapes checked");
    let vht = matmul_transpose_b(v, h).expect("shapes checked");
    let data = whht
        .as_slice()
        .iter()
        .zip(vht.as_slice())
        .zip(w.as_slice())
        .map(|((a, b), x)| 2.0 * (a - b + p.beta_w * x))
        .collect();
    Matrix::raw(w.rows(), w.cols(), data)
}

/// Gradient in `H` of the smooth part: `2WᵀWH − 2WᵀV + 2ηHΓΓᵀ + 2β_H H`.
pub fn grad_h(v: &Matrix, w: &Matrix, h: &Matrix, p: &ObjectiveParams) -> Result<Matrix> {
    check_shapes(v, w, h)?;
    if p.eta > 0.0 && h.cols() < 2 {
        return Err(Error::SmoothnessNeedsColumns { cols: h.cols() });
    }
    let wt = w.transpose();
    let wtw = matmul(&wt, w)?;
    Ok(grad_h_with_gram(v, &wt, &wtw, h, p))
}

fn grad_h_with_gram(v: &Matrix, wt: &Matrix, wtw: &Matrix, h: &Matrix, p: &ObjectiveParams) -> Matrix {
    let wtwh = matmul(wtw, h).expect("shapes checked");
    let wtv = matmul(wt, v).expect("shapes checked");
    let smooth = if p.eta != 0.0 {
        Some(h.gamma_gram_product())
    } else {
        None
    };
    let mut data: alloc::vec::Vec<f64> = wtwh
        .as_slice()
        .iter()
        .zip(wtv.as_slice())
        .zip(h.as_slice())
        .map(|((a, b), x)| 2.0 * (a - b + p.beta_h * x))
        .collect();
    if let Some(s) = smooth {
        for (d, g) in data.iter_mut().zip(s.as_slice()) {
            *d += 2.0 * p.eta * g;
        }
    }
    Matrix::raw(h.rows(), h.cols(), data)
}

/// Lipschitz modulus of `grad_w` in `W` at fixed `H`:
/// `max(2‖HHᵀ‖_F + 2β_W, ε_L)`.
pub fn lipschitz_w(h: &Matrix, p: &ObjectiveParams) -> f64 {
    let hht = matmul_transpose_b(h, h).expect("H·Hᵀ is always defined");
    lipschitz_w_from_gram(&hht, p)
}

fn lipschitz_w_from_gram(hht: &Matrix, p: &ObjectiveParams) -> f64 {
    let l = 2.0 * libm::sqrt(hht.norm_sq()) + 2.0 * p.beta_w;
    l.max(LIPSCHITZ_FLOOR)
}

/// Lipschitz modulus of `grad_h` in `H` at fixed `W`, for `H` with `n`
/// columns: `max(2‖WᵀW‖_F + 2η‖ΓΓᵀ‖_F + 2β_H, ε_L)`.
pub fn lipschitz_h(w: &Matrix, n: usize, p: &ObjectiveParams) -> f64 {
    let wtw = matmul(&w.transpose(), w).expect("Wᵀ·W is always defined");
    lipschitz_h_from_gram(&wtw, n, p)
}

fn lipschitz_h_from_gram(wtw: &Matrix, n: usize, p: &ObjectiveParams) -> f64 {
    let l = 2.0 * libm::sqrt(wtw.norm_sq()) + 2.0 * p.eta * gamma_gram_norm(n) + 2.0 * p.beta_h;
    l.max(LIPSCHITZ_FLOOR)
}

/// Gradient of the `W` block together with its Lipschitz modulus, sharing
/// the `HHᵀ` product. Shapes must already be validated.
pub(crate) fn w_block(v: &Matrix, w: &Matrix, h: &Matrix, p: &ObjectiveParams) -> (Matrix, f64) {
    let hht = matmul_transpose_b(h, h).expect("shapes checked");
    (grad_w_with_gram(v, w, h, &hht, p), lipschitz_w_from_gram(&hht, p))
}

/// Gradient of the `H` block together with its Lipschitz modulus, sharing
/// the `WᵀW` product. Shapes must already be validated.
pub(crate) fn h_block(v: &Matrix, w: &Matrix, h: &Matrix, p: &ObjectiveParams) -> (Matrix, f64) {
    let wt = w.transpose();
    let wtw = matmul(&wt, w).expect("shapes checked");
    (
        grad_h_with_gram(v, &wt, &wtw, h, p),
        lipschitz_h_from_gram(&wtw, h.cols(), p),
    )
}
