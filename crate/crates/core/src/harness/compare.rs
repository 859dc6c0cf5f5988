//! Multi-seed comparison of objective variants on one synthetic instance.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::harness::score::score_recovery;
use crate::harness::synth::{generate_instance, SyntheticInstance, SyntheticSpec};
use crate::objective::{reconstruction_error, ObjectiveParams};
use crate::solver::{solve, SolverConfig};

/// Outcome of a single successful run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunScore {
    pub dist_w: f64,
    pub dist_h: f64,
    pub permutation: Vec<usize>,
    /// `‖V − WH‖_F` of the learned factors.
    pub reconstruction_error: f64,
    pub final_objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl RunScore {
    pub fn total(&self) -> f64 {
        self.dist_w + self.dist_h
    }
}

/// One `(variant, seed)` cell of the comparison. Exactly one of `score`
/// and `error` is set.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunRecord {
    pub variant: usize,
    pub seed: u64,
    pub score: Option<RunScore>,
    pub error: Option<String>,
}

impl RunRecord {
    pub fn failed(&self) -> bool {
        self.score.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl Stats {
    /// `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            0.5 * (sorted[mid - 1] + sorted[mid])
        };
        Some(Stats {
            mean,
            median,
            std: libm::sqrt(var),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VariantSummary {
    pub variant: usize,
    pub params: ObjectiveParams,
    pub runs: usize,
    pub failures: usize,
    pub dist_w: Option<Stats>,
    pub dist_h: Option<Stats>,
    /// Statistics of `dist_w + dist_h`.
    pub total: Option<Stats>,
    pub reconstruction_error: Option<Stats>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonTable {
    pub spec: SyntheticSpec,
    /// Noise level actually applied to the instance.
    pub sigma: f64,
    pub config: SolverConfig,
    pub repeats: usize,
    pub summaries: Vec<VariantSummary>,
    /// Sorted by variant index, then seed.
    pub runs: Vec<RunRecord>,
}

impl ComparisonTable {
    pub fn all_failed(&self) -> bool {
        self.runs.iter().all(RunRecord::failed)
    }
}

/// The `(variant, seed)` schedule: seeds `config.seed + r` for each repeat,
/// identical for every variant.
pub fn run_schedule(variants: usize, config: &SolverConfig, repeats: usize) -> Vec<(usize, u64)> {
    (0..variants)
        .flat_map(|v| (0..repeats as u64).map(move |r| (v, config.seed.wrapping_add(r))))
        .collect()
}

/// Solves and scores one cell of the comparison. Solver failures are
/// recorded in the returned record, never propagated.
pub fn run_one(
    instance: &SyntheticInstance,
    variant: usize,
    params: &ObjectiveParams,
    config: &SolverConfig,
    seed: u64,
) -> RunRecord {
    let config = SolverConfig { seed, ..*config };
    let outcome = solve(&instance.v, params, &config).and_then(|result| {
        let score = score_recovery(&result.w, &result.h, &instance.w_true, &instance.h_true)?;
        Ok(RunScore {
            dist_w: score.dist_w,
            dist_h: score.dist_h,
            permutation: score.permutation,
            reconstruction_error: reconstruction_error(&instance.v, &result.w, &result.h)?,
            final_objective: result.final_objective(),
            iterations: result.iterations,
            converged: result.converged,
        })
    });
    match outcome {
        Ok(score) => RunRecord {
            variant,
            seed,
            score: Some(score),
            error: None,
        },
        Err(e) => RunRecord {
            variant,
            seed,
            score: None,
            error: Some(e.to_string()),
        },
    }
}

fn check_comparison_inputs(spec: &SyntheticSpec, variants: &[ObjectiveParams], config: &SolverConfig, repeats: usize) -> Result<()> {
    spec.validate()?;
    config.validate()?;
    if repeats == 0 {
        return Err(Error::InvalidSize {
            what: "repeats",
            value: 0,
        });
    }
    if variants.is_empty() {
        return Err(Error::InvalidSize {
            what: "variants",
            value: 0,
        });
    }
    for p in variants {
        p.validate()?;
    }
    Ok(())
}

/// Builds the table from run records in any order.
pub fn assemble(
    spec: &SyntheticSpec,
    sigma: f64,
    variants: &[ObjectiveParams],
    config: &SolverConfig,
    repeats: usize,
    mut runs: Vec<RunRecord>,
) -> ComparisonTable {
    runs.sort_by_key(|r| (r.variant, r.seed));
    let summaries = variants
        .iter()
        .enumerate()
        .map(|(idx, params)| {
            let scores: Vec<&RunScore> = runs
                .iter()
                .filter(|r| r.variant == idx)
                .filter_map(|r| r.score.as_ref())
                .collect();
            let total_runs = runs.iter().filter(|r| r.variant == idx).count();
            let collect = |f: fn(&RunScore) -> f64| Stats::of(&scores.iter().map(|s| f(s)).collect::<Vec<_>>());
            VariantSummary {
                variant: idx,
                params: *params,
                runs: total_runs,
                failures: total_runs - scores.len(),
                dist_w: collect(|s| s.dist_w),
                dist_h: collect(|s| s.dist_h),
                total: collect(RunScore::total),
                reconstruction_error: collect(|s| s.reconstruction_error),
            }
        })
        .collect();
    ComparisonTable {
        spec: *spec,
        sigma,
        config: *config,
        repeats,
        summaries,
        runs,
    }
}

/// Generates the instance once, then solves it for every variant and every
/// initialization seed in the schedule, sequentially.
pub fn run_comparison(
    spec: &SyntheticSpec,
    variants: &[ObjectiveParams],
    config: &SolverConfig,
    repeats: usize,
) -> Result<ComparisonTable> {
    check_comparison_inputs(spec, variants, config, repeats)?;
    let instance = generate_instance(spec)?;
    let runs = run_schedule(variants.len(), config, repeats)
        .into_iter()
        .map(|(v, seed)| run_one(&instance, v, &variants[v], config, seed))
        .collect();
    Ok(assemble(spec, instance.sigma, variants, config, repeats, runs))
}

/// Input checks shared with external (e.g. parallel) drivers.
pub fn prepare_comparison(
    spec: &SyntheticSpec,
    variants: &[ObjectiveParams],
    config: &SolverConfig,
    repeats: usize,
) -> Result<SyntheticInstance> {
    check_comparison_inputs(spec, variants, config, repeats)?;
    generate_instance(spec)
}
