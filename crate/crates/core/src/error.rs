use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Shape of a matrix as `(rows, cols)`.
pub type Shape = (usize, usize);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: Shape,
        right: Shape,
    },

    #[error("invalid size for {what}: {value}")]
    InvalidSize { what: &'static str, value: usize },

    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("buffer of length {len} does not match shape {rows}x{cols}")]
    BufferLength { rows: usize, cols: usize, len: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{what} has negative entry {value} at ({row}, {col})")]
    NegativeEntry {
        what: &'static str,
        row: usize,
        col: usize,
        value: f64,
    },

    #[error("smoothness penalty needs at least 2 columns, got {cols}")]
    SmoothnessNeedsColumns { cols: usize },

    #[error("non-finite value while updating {block}{}", fmt_iteration(.iteration))]
    NumericFailure {
        block: &'static str,
        iteration: Option<usize>,
    },
}

fn fmt_iteration(iteration: &Option<usize>) -> alloc::string::String {
    match iteration {
        Some(it) => alloc::format!(" at iteration {it}"),
        None => alloc::string::String::new(),
    }
}
