//! Non-negative matrix factorization by proximal alternating linearized
//! minimization (PALM), with an ℓ1 sparsity penalty on `W`, a first-difference
//! smoothness penalty on the rows of `H`, and ridge terms on both factors.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line tool live in the `palm-nmf` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assignment;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod objective;
pub mod solver;

pub use error::{Error, Result};
pub use matrix::{frobenius_norm, gamma_gram_norm, gamma_operator, matmul, nonneg_project, soft_threshold_nonneg, Matrix};
pub use objective::{evaluate, grad_h, grad_w, lipschitz_h, lipschitz_w, reconstruction_error, ObjectiveParams, LIPSCHITZ_FLOOR};
pub use solver::{initialize, palm_step, solve, solve_from, update_h, update_w, BlockUpdate, FactorizationResult, InitStrategy, SolverConfig};
