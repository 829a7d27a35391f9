//! Experiment harness: circuit loading, the bundled corpus, benchmark
//! configuration and runs, and file-level verification.

pub mod bench;
pub mod config;
pub mod corpus;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::circuit::Circuit;
use crate::equivalence::{verify, VerificationConfig, VerificationReport};
use crate::error::VerifyError;
use crate::qasm::{parse_qasm, ParseDiagnostic};

pub use bench::{run_benchmark, run_benchmark_on, BenchmarkResult, BenchmarkRow};
pub use config::BenchmarkConfig;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{diagnostic}", path.display())]
    Parse {
        path: PathBuf,
        diagnostic: ParseDiagnostic,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
}

/// Reads and parses an OpenQASM 2.0 file; the circuit is named after the
/// file stem.
pub fn load_circuit(path: &Path) -> Result<Circuit, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let circuit = parse_qasm(&text).map_err(|diagnostic| HarnessError::Parse {
        path: path.to_path_buf(),
        diagnostic,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(circuit.with_name(name))
}

/// Loads both files and runs the verification loop on them.
pub fn verify_files(
    spec_path: &Path,
    impl_path: &Path,
    config: &VerificationConfig,
) -> Result<VerificationReport, HarnessError> {
    let spec = load_circuit(spec_path)?;
    let imp = load_circuit(impl_path)?;
    Ok(verify(&spec, &imp, config)?)
}
