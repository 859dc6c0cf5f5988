//! Subcommand definitions and their implementations.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use palm_nmf_core::harness::{score_recovery, ClipMode, ComparisonTable, SyntheticSpec};
use palm_nmf_core::{solve, InitStrategy, ObjectiveParams, SolverConfig};
use serde::Serialize;

use crate::bench::{default_variants, run_comparison_parallel};
use crate::io::{ensure_dir, format_trace, load_json, load_matrix, save_json, save_matrix, write_text};
use crate::manifest::RunManifest;

/// Non-negative matrix factorization with sparsity and smoothness penalties.
#[derive(Debug, Parser)]
#[command(name = "palm-nmf", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factorize a CSV matrix V ≈ W·H.
    Factorize(FactorizeArgs),
    /// Generate a synthetic instance with known factors.
    Synth(SynthArgs),
    /// Score learned factors against ground truth.
    Score(ScoreArgs),
    /// Compare objective variants over repeated random initializations.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Step inflation for the W block (> 1).
    #[arg(long, default_value_t = 1.1)]
    pub gamma1: f64,
    /// Step inflation for the H block (> 1).
    #[arg(long, default_value_t = 1.1)]
    pub gamma2: f64,
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    /// Relative step tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Initialization seed (first seed of the schedule for `bench`).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SolverArgs {
    fn config(&self, k: usize) -> SolverConfig {
        SolverConfig {
            k,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            max_iter: self.max_iter,
            tol: self.tol,
            init: InitStrategy::UniformRandom,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FactorizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Inner dimension.
    #[arg(long)]
    pub k: usize,
    /// ℓ1 weight on W.
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Smoothness weight on adjacent columns of H.
    #[arg(long, default_value_t = 0.0)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub beta_w: f64,
    #[arg(long, default_value_t = 0.1)]
    pub beta_h: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClipArg {
    MaxZero,
    Absolute,
}

impl From<ClipArg> for ClipMode {
    fn from(c: ClipArg) -> Self {
        match c {
            ClipArg::MaxZero => ClipMode::MaxZero,
            ClipArg::Absolute => ClipMode::Absolute,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    #[arg(long, default_value_t = 100)]
    pub d: usize,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Noise standard deviation; defaults to 0.1 × mean(W_true·H_true).
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Fraction of nonzero entries in W_true.
    #[arg(long, default_value_t = 1.0)]
    pub w_density: f64,
    #[arg(long, value_enum, default_value_t = ClipArg::MaxZero)]
    pub clip: ClipArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SpecArgs {
    pub fn spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            d: self.d,
            k: self.k,
            n: self.n,
            sigma: self.sigma,
            w_density: self.w_density,
            clip_mode: self.clip.into(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub w: PathBuf,
    #[arg(long)]
    pub h: PathBuf,
    #[arg(long)]
    pub w_true: PathBuf,
    #[arg(long)]
    pub h_true: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Instance description (`spec.json` as written by `synth`). Overrides
    /// the individual instance flags.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub instance: BenchSpecArgs,
    #[arg(long, default_value_t = 15)]
    pub repeats: usize,
    /// JSON list of objective parameter sets, inline or as a file path.
    #[arg(long)]
    pub variants: Option<String>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: PathBuf,
}

/// Instance flags for `bench`; defaults describe the sparse + smooth
/// benchmark (80 % zeros in W_true, absolute-value clipping).
#[derive(Debug, Clone, Args)]
pub struct BenchSpecArgs {
    #[arg(long, default_value_t = 100)]
    pub d: usize,
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    pub w_density: f64,
    #[arg(long, value_enum, default_value_t = ClipArg::Absolute)]
    pub clip: ClipArg,
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
}

impl BenchSpecArgs {
    fn spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            d: self.d,
            k: self.k,
            n: self.n,
            sigma: self.sigma,
            w_density: self.w_density,
            clip_mode: self.clip.into(),
            seed: self.data_seed,
        }
    }
}

/// How a command failed; decides the exit status.
#[derive(Debug)]
pub enum CommandError {
    /// Bad flags or inconsistent inputs (exit 2).
    Usage(String),
    /// Runtime, IO or numeric failure (exit 1).
    Runtime(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => 2,
            CommandError::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CommandError::Usage(m) | CommandError::Runtime(m) => m,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CommandError {
    CommandError::Runtime(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> CommandError {
    CommandError::Usage(e.to_string())
}

/// Runs a parsed command, returning what to print on stdout.
pub fn run(cli: Cli) -> Result<String, CommandError> {
    match cli.command {
        Command::Factorize(args) => cmd_factorize(&args),
        Command::Synth(args) => cmd_synth(&args),
        Command::Score(args) => cmd_score(&args),
        Command::Bench(args) => cmd_bench(&args),
    }
}

#[derive(Serialize)]
struct FactorizeSummary {
    final_objective: f64,
    converged: bool,
    iterations: usize,
}

pub fn cmd_factorize(args: &FactorizeArgs) -> Result<String, CommandError> {
    let params = ObjectiveParams::new(args.lambda, args.eta, args.beta_w, args.beta_h).map_err(usage)?;
    let config = args.solver.config(args.k);
    config.validate().map_err(usage)?;
    let v = load_matrix(&args.input).map_err(runtime)?;
    let result = solve(&v, &params, &config).map_err(|e| match e {
        palm_nmf_core::Error::NumericFailure { .. } => runtime(e),
        other => usage(other),
    })?;

    let out = ensure_dir(&args.out).map_err(runtime)?;
    let mut outputs = Vec::new();
    save_matrix(&result.w, out.join("W.csv")).map_err(runtime)?;
    outputs.push("W.csv".to_string());
    save_matrix(&result.h, out.join("H.csv")).map_err(runtime)?;
    outputs.push("H.csv".to_string());
    write_text(out.join("trace.csv"), &format_trace(&result.objective_trace)).map_err(runtime)?;
    outputs.push("trace.csv".to_string());
    outputs.push("manifest.json".to_string());
    let manifest = RunManifest {
        input: args.input.clone(),
        params,
        config,
        out_dir: args.out.clone(),
        outputs,
        iterations: result.iterations,
        converged: result.converged,
        final_objective: result.final_objective(),
    };
    save_json(&manifest, out.join("manifest.json")).map_err(runtime)?;

    let summary = FactorizeSummary {
        final_objective: result.final_objective(),
        converged: result.converged,
        iterations: result.iterations,
    };
    Ok(serde_json::to_string(&summary).map_err(runtime)? + "\n")
}

pub fn cmd_synth(args: &SynthArgs) -> Result<String, CommandError> {
    let spec = args.spec.spec();
    spec.validate().map_err(usage)?;
    let instance = palm_nmf_core::harness::generate_instance(&spec).map_err(usage)?;
    let out = ensure_dir(&args.out).map_err(runtime)?;
    save_matrix(&instance.v, out.join("V.csv")).map_err(runtime)?;
    save_matrix(&instance.w_true, out.join("W_true.csv")).map_err(runtime)?;
    save_matrix(&instance.h_true, out.join("H_true.csv")).map_err(runtime)?;
    // Record the noise level actually applied so the file fully pins the data.
    let resolved = SyntheticSpec {
        sigma: Some(instance.sigma),
        ..spec
    };
    save_json(&resolved, out.join("spec.json")).map_err(runtime)?;
    Ok(format!(
        "{}\n",
        serde_json::to_string(&resolved).map_err(runtime)?
    ))
}

pub fn cmd_score(args: &ScoreArgs) -> Result<String, CommandError> {
    let w = load_matrix(&args.w).map_err(runtime)?;
    let h = load_matrix(&args.h).map_err(runtime)?;
    let w_true = load_matrix(&args.w_true).map_err(runtime)?;
    let h_true = load_matrix(&args.h_true).map_err(runtime)?;
    let score = score_recovery(&w, &h, &w_true, &h_true).map_err(usage)?;
    Ok(serde_json::to_string(&score).map_err(runtime)? + "\n")
}

fn parse_variants(arg: &str) -> Result<Vec<ObjectiveParams>, CommandError> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(Path::new(arg)).map_err(|e| usage(format!("{arg}: {e}")))?
    };
    let variants: Vec<ObjectiveParams> =
        serde_json::from_str(&text).map_err(|e| usage(format!("--variants: {e}")))?;
    for p in &variants {
        p.validate().map_err(usage)?;
    }
    if variants.is_empty() {
        return Err(usage("--variants: empty list"));
    }
    Ok(variants)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<String, CommandError> {
    let spec = match &args.spec {
        Some(path) => load_json::<SyntheticSpec>(path).map_err(usage)?,
        None => args.instance.spec(),
    };
    let variants = match &args.variants {
        Some(v) => parse_variants(v)?,
        None => default_variants().to_vec(),
    };
    let config = args.solver.config(spec.k);
    let table = run_comparison_parallel(&spec, &variants, &config, args.repeats).map_err(usage)?;

    let out = ensure_dir(&args.out).map_err(runtime)?;
    save_json(&table, out.join("comparison.json")).map_err(runtime)?;
    write_text(out.join("comparison.csv"), &comparison_csv(&table)).map_err(runtime)?;

    if table.all_failed() {
        return Err(CommandError::Runtime(format!(
            "all {} runs failed; first error: {}",
            table.runs.len(),
            table.runs[0].error.as_deref().unwrap_or("unknown")
        )));
    }
    Ok(bench_summary(&table))
}

/// One line per run: `variant,seed,status,dist_w,dist_h,total,reconstruction_error,iterations,converged`.
pub fn comparison_csv(table: &ComparisonTable) -> String {
    let mut out = String::from("variant,seed,status,dist_w,dist_h,total,reconstruction_error,iterations,converged\n");
    for r in &table.runs {
        match &r.score {
            Some(s) => writeln!(
                out,
                "{},{},ok,{},{},{},{},{},{}",
                r.variant,
                r.seed,
                s.dist_w,
                s.dist_h,
                s.total(),
                s.reconstruction_error,
                s.iterations,
                s.converged
            ),
            None => writeln!(out, "{},{},failed,,,,,,", r.variant, r.seed),
        }
        .expect("writing to a String cannot fail");
    }
    out
}

fn bench_summary(table: &ComparisonTable) -> String {
    let mut out = String::from("variant\tlambda\teta\tbeta_w\tbeta_h\tmedian_dist_w\tmedian_dist_h\tmedian_total\tstd_total\tfailures\n");
    for s in &table.summaries {
        let med = |st: Option<palm_nmf_core::harness::Stats>| st.map_or("-".to_string(), |x| format!("{:.6}", x.median));
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            s.variant,
            s.params.lambda,
            s.params.eta,
            s.params.beta_w,
            s.params.beta_h,
            med(s.dist_w),
            med(s.dist_h),
            med(s.total),
            s.total.map_or("-".to_string(), |x| format!("{:.6}", x.std)),
            s.failures
        )
        .expect("writing to a String cannot fail");
    }
    out
}
