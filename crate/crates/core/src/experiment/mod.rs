//! Reproducible experiments: a checked config in, CSV or PPM artifacts and
//! a manifest out.
//!
//! Artifacts depend only on the config (seed included). Wall time and the
//! thread count go to the manifest, never to an artifact.

mod config;
mod run;

pub use config::{parse_json, parse_key_value, ExperimentConfig, ExperimentKind, RawValue, Value};
pub use run::{compute, run, Artifact, Manifest, OutputRecord, RunReport};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Process exit status for a failed run. Configuration and catalog lookups
/// are the caller's fault; everything else is a numerical failure.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::CatalogMiss { .. } => EXIT_CONFIG,
        _ => EXIT_NUMERICAL,
    }
}
