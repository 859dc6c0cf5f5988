use std::path::PathBuf;

use palm_nmf_core::{ObjectiveParams, SolverConfig};
use serde::{Deserialize, Serialize};

/// Record of one `factorize` run, written as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub input: PathBuf,
    pub params: ObjectiveParams,
    pub config: SolverConfig,
    pub out_dir: PathBuf,
    /// File names written into `out_dir`, in write order.
    pub outputs: Vec<String>,
    pub iterations: usize,
    pub converged: bool,
    pub final_objective: f64,
}
