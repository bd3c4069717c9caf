use std::fs;
use std::path::{Path, PathBuf};

use iqoap_core::adaptive::IterationConfig;
use iqoap_core::lattice::Basis;
use serde::Deserialize;

use crate::builtin;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Spectrum,
    Scaling,
    Converge,
    Ensemble,
}

/// Where a basis comes from. JSON: `{"builtin": "c"}` or `{"file": "basis.json"}`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum BasisSource {
    Builtin(String),
    File(PathBuf),
}

/// Parameters of the random-lattice sampler used by `ensemble`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomLattices {
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    #[serde(default = "default_lattices")]
    pub lattices: usize,
    #[serde(default = "default_max_diagonal")]
    pub max_diagonal: i64,
    #[serde(default = "default_entry_range")]
    pub entry_range: i64,
}

fn default_dimension() -> usize {
    4
}
fn default_lattices() -> usize {
    50
}
fn default_max_diagonal() -> i64 {
    4
}
fn default_entry_range() -> i64 {
    10
}

impl Default for RandomLattices {
    fn default() -> Self {
        RandomLattices {
            dimension: default_dimension(),
            lattices: default_lattices(),
            max_diagonal: default_max_diagonal(),
            entry_range: default_entry_range(),
        }
    }
}

/// Experiment manifest. Every field is optional; unset fields take the
/// per-command defaults below.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Option<Experiment>,
    pub bases: Option<Vec<BasisSource>>,
    pub random: Option<RandomLattices>,
    pub k: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub entry_range: Option<i64>,
    pub runs: Option<usize>,
    pub iterations: Option<usize>,
    pub max_qaoa_retries: Option<usize>,
    pub shots_per_attempt: Option<usize>,
    pub grid_points: Option<usize>,
    pub tolerance: Option<f64>,
    /// Known squared successive minima of a file basis, for success rates.
    pub minima: Option<Vec<i64>>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// A basis with the label used in file names and, when known, its lattice's
/// squared successive minima.
#[derive(Debug, Clone)]
pub struct LabeledBasis {
    pub label: String,
    pub basis: Basis,
    pub minima: Option<Vec<i64>>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn check_experiment(&self, command: Experiment) -> Result<(), CliError> {
        match self.experiment {
            Some(e) if e != command => Err(CliError::Usage(format!(
                "config is for the {e:?} experiment, not {command:?}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn k_values(&self, default: &[usize]) -> Result<Vec<usize>, CliError> {
        let k = self.k.clone().unwrap_or_else(|| default.to_vec());
        if k.is_empty() {
            return Err(CliError::Usage("k list is empty".into()));
        }
        if k.contains(&0) {
            return Err(CliError::Usage("k values must be at least 1".into()));
        }
        Ok(k)
    }

    pub fn single_k(&self, default: usize) -> Result<usize, CliError> {
        match self.k_values(&[default])?.as_slice() {
            [k] => Ok(*k),
            more => Err(CliError::Usage(format!("this experiment takes one k, got {}", more.len()))),
        }
    }

    pub fn bases(&self, default: &[&str]) -> Result<Vec<LabeledBasis>, CliError> {
        let sources = self.bases.clone().unwrap_or_else(|| {
            default.iter().map(|l| BasisSource::Builtin(l.to_string())).collect()
        });
        if sources.is_empty() {
            return Err(CliError::Usage("no bases given".into()));
        }
        sources.iter().map(|s| self.resolve(s)).collect()
    }

    fn resolve(&self, source: &BasisSource) -> Result<LabeledBasis, CliError> {
        match source {
            BasisSource::Builtin(label) => {
                let basis = builtin::builtin(label)
                    .ok_or_else(|| CliError::Usage(format!("unknown builtin basis {label:?}, expected one of {:?}", builtin::LABELS)))?;
                Ok(LabeledBasis { label: label.clone(), basis, minima: Some(builtin::MINIMA.to_vec()) })
            }
            BasisSource::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
                let basis: Basis = serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "file".into());
                Ok(LabeledBasis { label, basis, minima: self.minima.clone() })
            }
        }
    }

    pub fn iteration_config(&self, k: usize, seed: u64) -> Result<IterationConfig, CliError> {
        let defaults = IterationConfig::default();
        let config = IterationConfig {
            k,
            max_iterations: self.iterations.unwrap_or(defaults.max_iterations),
            max_qaoa_retries: self.max_qaoa_retries.unwrap_or(defaults.max_qaoa_retries),
            shots_per_attempt: self.shots_per_attempt.unwrap_or(defaults.shots_per_attempt),
            grid_points: self.grid_points.unwrap_or(defaults.grid_points),
            tolerance: self.tolerance.unwrap_or(defaults.tolerance),
            seed,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses a comma-separated `--k` value.
pub fn parse_k_list(s: &str) -> Result<Vec<usize>, CliError> {
    if s.trim().is_empty() {
        return Err(CliError::Usage("--k needs at least one value".into()));
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid k value {t:?}")))
        })
        .collect()
}
