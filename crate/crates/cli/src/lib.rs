//! CSV/JSON file formats and the `palm-nmf` command-line tool around
//! [`palm_nmf_core`].

pub mod bench;
pub mod commands;
pub mod error;
pub mod io;
pub mod manifest;

pub use error::{IoError, Result};
pub use io::{load_matrix, save_matrix};
pub use manifest::RunManifest;
