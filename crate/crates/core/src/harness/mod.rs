//! Synthetic recovery experiments: data generation, permutation- and
//! scale-invariant scoring, and multi-seed variant comparison.

pub mod compare;
pub mod score;
pub mod synth;

pub use compare::{
    assemble, prepare_comparison, run_comparison, run_one, run_schedule, ComparisonTable, RunRecord, RunScore, Stats,
    VariantSummary,
};
pub use score::{normalize_columns, normalize_rows, score_recovery, RecoveryScore};
pub use synth::{
    gen_smooth_rows, gen_sparse_matrix, generate_instance, make_v, ClipMode, SyntheticInstance, SyntheticSpec,
    DEFAULT_RELATIVE_SIGMA,
};
