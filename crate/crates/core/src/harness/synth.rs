//! Synthetic ground-truth factors and noisy observations.

use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::matrix::{matmul, Matrix};

/// How negative entries produced by the noise are removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ClipMode {
    /// `max{0, x}`.
    #[default]
    MaxZero,
    /// `|x|`.
    Absolute,
}

/// Parameters of a synthetic recovery instance `V ≈ W_r·H_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SyntheticSpec {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    /// Noise standard deviation. `None` means `0.1 × mean(W_r·H_r)`.
    pub sigma: Option<f64>,
    /// Fraction of entries of `W_r` left nonzero.
    pub w_density: f64,
    pub clip_mode: ClipMode,
    pub seed: u64,
}

/// Relative noise level used when [`SyntheticSpec::sigma`] is unset.
pub const DEFAULT_RELATIVE_SIGMA: f64 = 0.1;

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            d: 100,
            k: 5,
            n: 200,
            sigma: None,
            w_density: 1.0,
            clip_mode: ClipMode::MaxZero,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        for (what, value) in [("d", self.d), ("k", self.k)] {
            if value == 0 {
                return Err(Error::InvalidSize { what, value });
            }
        }
        if self.n < 2 {
            return Err(Error::InvalidSize {
                what: "n",
                value: self.n,
            });
        }
        if !(self.w_density > 0.0 && self.w_density <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "w_density",
                value: self.w_density,
            });
        }
        if let Some(sigma) = self.sigma {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "sigma",
                    value: sigma,
                });
            }
        }
        Ok(())
    }
}

/// A generated instance together with the noise level actually applied.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticInstance {
    pub v: Matrix,
    pub w_true: Matrix,
    pub h_true: Matrix,
    pub sigma: f64,
}

// SplitMix64 finalizer, used to derive independent sub-seeds.
fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `k × n` matrix whose rows are sums of two to four Gaussian bumps.
///
/// Bump centers are uniform on `[0, n−1]`, widths on `[n/20, n/6]` and
/// amplitudes on `[0.5, 2]`.
pub fn gen_smooth_rows(k: usize, n: usize, seed: u64) -> Result<Matrix> {
    if k == 0 {
        return Err(Error::InvalidSize { what: "k", value: k });
    }
    if n < 2 {
        return Err(Error::InvalidSize { what: "n", value: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nf = n as f64;
    let mut data = Vec::with_capacity(k * n);
    for _ in 0..k {
        let bumps: Vec<(f64, f64, f64)> = (0..rng.random_range(2..=4))
            .map(|_| {
                let center = rng.random_range(0.0..=nf - 1.0);
                let width = rng.random_range(nf / 20.0..=nf / 6.0);
                let amplitude = rng.random_range(0.5..=2.0);
                (center, width, amplitude)
            })
            .collect();
        data.extend((0..n).map(|j| {
            let x = j as f64;
            bumps
                .iter()
                .map(|&(mu, s, a)| a * libm::exp(-(x - mu) * (x - mu) / (2.0 * s * s)))
                .sum::<f64>()
        }));
    }
    Matrix::from_vec(k, n, data)
}

/// `d × k` matrix with entries uniform on `(0, 1]`, of which exactly
/// `round((1 − density)·d·k)` randomly chosen ones are zeroed.
pub fn gen_sparse_matrix(d: usize, k: usize, density: f64, seed: u64) -> Result<Matrix> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "density",
            value: density,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // 1 − [0, 1) keeps drawn entries strictly positive, so the zero count is exact.
    let mut data: Vec<f64> = (0..d * k).map(|_| 1.0 - rng.random::<f64>()).collect();
    let zeros = libm::round((1.0 - density) * (d * k) as f64) as usize;
    for idx in index::sample(&mut rng, d * k, zeros.min(d * k)).iter() {
        data[idx] = 0.0;
    }
    Matrix::from_vec(d, k, data)
}

/// `clip(W_r·H_r + G)` with `G` i.i.d. `N(0, σ²)`.
pub fn make_v(w_true: &Matrix, h_true: &Matrix, sigma: f64, clip_mode: ClipMode, seed: u64) -> Result<Matrix> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
        });
    }
    let clean = matmul(w_true, h_true)?;
    let noisy = if sigma == 0.0 {
        clean
    } else {
        let normal = Normal::new(0.0, sigma).map_err(|_| Error::InvalidParameter {
            name: "sigma",
            value: sigma,
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        clean.map(|x| x + normal.sample(&mut rng))
    };
    let clipped = match clip_mode {
        ClipMode::MaxZero => noisy.map(|x| if x > 0.0 { x } else { 0.0 }),
        ClipMode::Absolute => noisy.map(f64::abs),
    };
    Ok(clipped)
}

/// Generates the full instance described by `spec`.
///
/// The three random ingredients (`W_r`, `H_r`, noise) draw from independent
/// streams derived from `spec.seed`.
pub fn generate_instance(spec: &SyntheticSpec) -> Result<SyntheticInstance> {
    spec.validate()?;
    let w_true = gen_sparse_matrix(spec.d, spec.k, spec.w_density, derive_seed(spec.seed, 1))?;
    let h_true = gen_smooth_rows(spec.k, spec.n, derive_seed(spec.seed, 2))?;
    let sigma = match spec.sigma {
        Some(s) => s,
        None => DEFAULT_RELATIVE_SIGMA * matmul(&w_true, &h_true)?.mean(),
    };
    let v = make_v(&w_true, &h_true, sigma, spec.clip_mode, derive_seed(spec.seed, 3))?;
    Ok(SyntheticInstance {
        v,
        w_true,
        h_true,
        sigma,
    })
}
