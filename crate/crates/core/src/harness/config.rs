//! Benchmark configuration and its key-value file format.
//!
//! ```text
//! # comments run to end of line
//! circuits      = a.qasm, b.qasm
//! schemes       = classical, local, global
//! error_options = remove-1, insert-1, toffoli-end
//! error_seeds   = 50
//! stimuli_seeds = 5
//! max_stimuli   = 16
//! epsilon       = 1e-8
//! output        = results.csv
//! master_seed   = 42
//! layers        = 8
//! ```

use std::path::{Path, PathBuf};

use crate::equivalence::{DEFAULT_EPSILON, DEFAULT_MAX_STIMULI};
use crate::harness::HarnessError;
use crate::mutator::ErrorOption;
use crate::stimuli::Scheme;

pub const DEFAULT_ERROR_SEEDS: usize = 50;
pub const DEFAULT_STIMULI_SEEDS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkConfig {
    pub circuit_paths: Vec<PathBuf>,
    pub schemes: Vec<Scheme>,
    pub error_options: Vec<ErrorOption>,
    pub error_seeds: usize,
    pub stimuli_seeds: usize,
    pub max_stimuli: usize,
    pub epsilon: f64,
    pub output_path: Option<PathBuf>,
    pub master_seed: u64,
    /// Adds an unmutated control row (realization = specification) per
    /// circuit and scheme.
    pub control: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            circuit_paths: Vec::new(),
            schemes: vec![Scheme::Classical, Scheme::LocalQuantum, Scheme::global()],
            error_options: ErrorOption::ALL.to_vec(),
            error_seeds: DEFAULT_ERROR_SEEDS,
            stimuli_seeds: DEFAULT_STIMULI_SEEDS,
            max_stimuli: DEFAULT_MAX_STIMULI,
            epsilon: DEFAULT_EPSILON,
            output_path: None,
            master_seed: 0,
            control: false,
        }
    }
}

impl BenchmarkConfig {
    /// Applies a layer count to every global scheme in the list.
    pub fn set_layers(&mut self, layers: usize) {
        for s in &mut self.schemes {
            if let Scheme::GlobalQuantum { .. } = s {
                *s = Scheme::global_with_layers(layers);
            }
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.schemes.is_empty() {
            return bad("at least one scheme is required");
        }
        if self.error_options.is_empty() && !self.control {
            return bad("at least one error option is required");
        }
        if self.error_seeds == 0 || self.stimuli_seeds == 0 {
            return bad("seed counts must be at least 1");
        }
        if self.max_stimuli == 0 {
            return bad("max_stimuli must be at least 1");
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return bad("epsilon must lie in (0, 0.5)");
        }
        if self.schemes.iter().any(|s| !s.is_valid()) {
            return bad("layer count must be at least 1");
        }
        Ok(())
    }

    /// Reads a config file. Relative circuit and output paths resolve
    /// against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        BenchmarkConfig::from_str_with_base(&text, path.parent())
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        BenchmarkConfig::from_str_with_base(text, None)
    }

    fn from_str_with_base(text: &str, base: Option<&Path>) -> Result<Self, HarnessError> {
        let mut cfg = BenchmarkConfig::default();
        let mut layers = None;
        let resolve = |p: &str| -> PathBuf {
            let p = PathBuf::from(p);
            match base {
                Some(b) if p.is_relative() && !b.as_os_str().is_empty() => b.join(p),
                _ => p,
            }
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| HarnessError::Config(format!("line {}: {m}", i + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let list = || value.split(',').map(str::trim).filter(|s| !s.is_empty());
            let count = || -> Result<usize, HarnessError> {
                value
                    .parse()
                    .map_err(|_| err(format!("`{key}` expects a count, found `{value}`")))
            };
            match key {
                "circuits" | "circuit_paths" => cfg.circuit_paths = list().map(resolve).collect(),
                "schemes" => {
                    cfg.schemes = list()
                        .map(|s| s.parse::<Scheme>().map_err(err))
                        .collect::<Result<_, _>>()?
                }
                "error_options" => {
                    cfg.error_options = list()
                        .map(|s| s.parse::<ErrorOption>().map_err(err))
                        .collect::<Result<_, _>>()?
                }
                "error_seeds" => cfg.error_seeds = count()?,
                "stimuli_seeds" => cfg.stimuli_seeds = count()?,
                "max_stimuli" => cfg.max_stimuli = count()?,
                "layers" => layers = Some(count()?),
                "epsilon" => {
                    cfg.epsilon = value
                        .parse()
                        .map_err(|_| err(format!("`epsilon` expects a number, found `{value}`")))?
                }
                "output" | "output_path" => cfg.output_path = Some(resolve(value)),
                "master_seed" => {
                    cfg.master_seed = value
                        .parse()
                        .map_err(|_| err(format!("`master_seed` expects a u64, found `{value}`")))?
                }
                "control" => {
                    cfg.control = value.parse().map_err(|_| {
                        err(format!("`control` expects true/false, found `{value}`"))
                    })?
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        if let Some(l) = layers {
            cfg.set_layers(l);
        }
        Ok(cfg)
    }
}
