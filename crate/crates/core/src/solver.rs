//! Proximal alternating linearized minimization for the regularized NMF
//! objective.
//!
//! Each iteration takes one proximal-gradient step on `W` (ℓ1 + nonnegativity
//! prox) followed by one on `H` (nonnegativity prox), each with step
//! `1 / (γ·L)` where `L` is the block Lipschitz modulus at the current
//! point. With `γ > 1` every iteration decreases Ψ.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{nonneg_project, soft_threshold_nonneg, Matrix};
use crate::objective::{evaluate_unchecked, h_block, w_block, ObjectiveParams, LIPSCHITZ_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum InitStrategy {
    /// I.i.d. uniform entries on `[0, s]`, `s = 2·sqrt(mean(V) / K)`.
    #[default]
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    /// Inner dimension K.
    pub k: usize,
    /// Step inflation for the `W` block, strictly above 1.
    pub gamma1: f64,
    /// Step inflation for the `H` block, strictly above 1.
    pub gamma2: f64,
    pub max_iter: usize,
    /// Relative step size below which the iteration stops.
    pub tol: f64,
    pub init: InitStrategy,
    pub seed: u64,
}

impl SolverConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            gamma1: 1.1,
            gamma2: 1.1,
            max_iter: 5000,
            tol: 1e-6,
            init: InitStrategy::UniformRandom,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidSize { what: "k", value: 0 });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidSize {
                what: "max_iter",
                value: 0,
            });
        }
        for (name, value) in [("gamma1", self.gamma1), ("gamma2", self.gamma2)] {
            if !(value.is_finite() && value > 1.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: self.tol,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FactorizationResult {
    pub w: Matrix,
    pub h: Matrix,
    /// Ψ after each iteration; entry 0 is Ψ at the initial point.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    /// The relative-step criterion was met before `max_iter`.
    pub converged: bool,
}

impl FactorizationResult {
    pub fn final_objective(&self) -> f64 {
        *self.objective_trace.last().expect("trace holds the initial value")
    }
}

/// One proximal block update and the step modulus (`γ·L`) it used.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockUpdate {
    pub next: Matrix,
    pub modulus: f64,
}

fn check_input(v: &Matrix) -> Result<()> {
    match v.first_negative() {
        Some((row, col, value)) => Err(Error::NegativeEntry {
            what: "V",
            row,
            col,
            value,
        }),
        None => Ok(()),
    }
}

fn check_factors(v: &Matrix, w: &Matrix, h: &Matrix, p: &ObjectiveParams) -> Result<()> {
    // Delegates the shape and sign checks.
    crate::objective::evaluate(v, w, h, p).map(|_| ())
}

/// Random initial factors scaled so that `E[W⁰H⁰]` matches `mean(V)`.
pub fn initialize(v: &Matrix, config: &SolverConfig) -> Result<(Matrix, Matrix)> {
    check_input(v)?;
    if config.k == 0 {
        return Err(Error::InvalidSize { what: "k", value: 0 });
    }
    let k = config.k;
    let scale = match config.init {
        // E[w·h] = (s/2)² per term, K terms per entry.
        InitStrategy::UniformRandom => 2.0 * libm::sqrt(v.mean() / k as f64),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut draw = |_: usize, _: usize| rng.random::<f64>() * scale;
    let w = Matrix::from_fn(v.rows(), k, &mut draw)?;
    let h = Matrix::from_fn(k, v.cols(), &mut draw)?;
    Ok((w, h))
}

/// Step (a): `W⁺ = max{0, W − ∇_W/c − λ/c}` with `c = γ₁·L_W(H)`.
pub fn update_w(v: &Matrix, w: &Matrix, h: &Matrix, p: &ObjectiveParams, gamma1: f64) -> Result<BlockUpdate> {
    let failure = Error::NumericFailure {
        block: "W",
        iteration: None,
    };
    let (grad, lipschitz) = w_block(v, w, h, p);
    let c = gamma1 * lipschitz;
    if !c.is_finite() {
        return Err(failure);
    }
    let step = 1.0 / c;
    let forward = w.sub(&grad.scale(step))?;
    // The prox clamps NaN to zero, so check before it.
    if !forward.is_finite() {
        return Err(failure);
    }
    let next = soft_threshold_nonneg(&forward, p.lambda * step).map_err(|_| failure)?;
    Ok(BlockUpdate { next, modulus: c })
}

/// Step (b): `H⁺ = max{0, H − ∇_H/d}` with `d = γ₂·L_H(W)`.
pub fn update_h(v: &Matrix, w: &Matrix, h: &Matrix, p: &ObjectiveParams, gamma2: f64) -> Result<BlockUpdate> {
    let failure = Error::NumericFailure {
        block: "H",
        iteration: None,
    };
    let (grad, lipschitz) = h_block(v, w, h, p);
    let d = gamma2 * lipschitz;
    if !d.is_finite() {
        return Err(failure);
    }
    let forward = h.sub(&grad.scale(1.0 / d))?;
    if !forward.is_finite() {
        return Err(failure);
    }
    Ok(BlockUpdate {
        next: nonneg_project(&forward),
        modulus: d,
    })
}

/// One full PALM iteration. The `H` step sees the updated `W`.
pub fn palm_step(
    v: &Matrix,
    w: &Matrix,
    h: &Matrix,
    p: &ObjectiveParams,
    config: &SolverConfig,
) -> Result<(Matrix, Matrix)> {
    p.validate()?;
    check_factors(v, w, h, p)?;
    if p.eta > 0.0 && h.cols() < 2 {
        return Err(Error::SmoothnessNeedsColumns { cols: h.cols() });
    }
    step_unchecked(v, w, h, p, config)
}

fn step_unchecked(
    v: &Matrix,
    w: &Matrix,
    h: &Matrix,
    p: &ObjectiveParams,
    config: &SolverConfig,
) -> Result<(Matrix, Matrix)> {
    let w_next = update_w(v, w, h, p, config.gamma1)?.next;
    let h_next = update_h(v, &w_next, h, p, config.gamma2)?.next;
    Ok((w_next, h_next))
}

fn relative_step(w: &Matrix, h: &Matrix, w_next: &Matrix, h_next: &Matrix) -> f64 {
    let diff = w_next.sub(w).expect("same shape").norm_sq() + h_next.sub(h).expect("same shape").norm_sq();
    let base = w.norm_sq() + h.norm_sq();
    libm::sqrt(diff) / libm::sqrt(base).max(LIPSCHITZ_FLOOR)
}

/// Runs PALM from a seeded random start until the relative step drops
/// below `config.tol` or `config.max_iter` iterations have run.
pub fn solve(v: &Matrix, p: &ObjectiveParams, config: &SolverConfig) -> Result<FactorizationResult> {
    p.validate()?;
    config.validate()?;
    check_input(v)?;
    if p.eta > 0.0 && v.cols() < 2 {
        return Err(Error::SmoothnessNeedsColumns { cols: v.cols() });
    }
    let (w0, h0) = initialize(v, config)?;
    solve_from(v, w0, h0, p, config)
}

/// Same as [`solve`] but starting from caller-supplied factors.
pub fn solve_from(
    v: &Matrix,
    mut w: Matrix,
    mut h: Matrix,
    p: &ObjectiveParams,
    config: &SolverConfig,
) -> Result<FactorizationResult> {
    p.validate()?;
    config.validate()?;
    check_input(v)?;
    check_factors(v, &w, &h, p)?;
    if p.eta > 0.0 && h.cols() < 2 {
        return Err(Error::SmoothnessNeedsColumns { cols: h.cols() });
    }

    let mut trace = Vec::with_capacity(config.max_iter.min(1 << 16) + 1);
    let initial = evaluate_unchecked(v, &w, &h, p);
    if !initial.is_finite() {
        return Err(Error::NumericFailure {
            block: "objective",
            iteration: Some(0),
        });
    }
    trace.push(initial);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iter {
        let (w_next, h_next) = step_unchecked(v, &w, &h, p, config).map_err(|e| match e {
            Error::NumericFailure { block, .. } => Error::NumericFailure {
                block,
                iteration: Some(iterations + 1),
            },
            other => other,
        })?;
        iterations += 1;
        let objective = evaluate_unchecked(v, &w_next, &h_next, p);
        if !objective.is_finite() {
            return Err(Error::NumericFailure {
                block: "objective",
                iteration: Some(iterations),
            });
        }
        trace.push(objective);
        let rel = relative_step(&w, &h, &w_next, &h_next);
        w = w_next;
        h = h_next;
        if rel < config.tol {
            converged = true;
            break;
        }
    }

    Ok(FactorizationResult {
        w,
        h,
        objective_trace: trace,
        iterations,
        converged,
    })
}
