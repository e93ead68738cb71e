use std::path::{Path, PathBuf};

use permpoly::ensembles::{EnsembleKind, EnsembleSpec, Potential};
use permpoly::C64;
use serde::Deserialize;

use crate::CliError;

/// Seed used when neither `--seed`, the config file nor `PERMPOLY_SEED` set one.
pub const DEFAULT_SEED: u64 = 20_240_101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Contents of a `--config` file. Every key is optional; command-line flags
/// take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<String>,
    pub ensemble: Option<String>,
    pub n: Option<usize>,
    #[serde(rename = "N")]
    pub big_n: Option<usize>,
    pub potential: Option<Vec<f64>>,
    pub mu: Option<Vec<[f64; 2]>>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub bins: Option<usize>,
    pub half_width: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

/// Options shared by every subcommand, after merging flags, config file and
/// environment.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub ensemble: Option<EnsembleKind>,
    pub n: Option<usize>,
    pub big_n: Option<usize>,
    pub potential: Option<Potential>,
    pub mu: Vec<C64>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: usize,
    pub bins: Option<usize>,
    pub half_width: Option<f64>,
}

/// Raw flag values as clap parsed them.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub ensemble: Option<String>,
    pub n: Option<usize>,
    pub big_n: Option<usize>,
    pub mu: Vec<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub config: Option<PathBuf>,
    pub bins: Option<usize>,
    pub half_width: Option<f64>,
}

/// Parses `re,im` (or a bare real number).
pub fn parse_mu(s: &str) -> Result<C64, CliError> {
    let bad = || CliError::Usage(format!("invalid --mu '{s}': expected 're,im'"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

impl RunConfig {
    pub fn resolve(command: &str, flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        if let Some(c) = &file.command {
            if c != command {
                return Err(CliError::Usage(format!(
                    "config is for command '{c}' but '{command}' was requested"
                )));
            }
        }
        let ensemble = match flags.ensemble.or(file.ensemble) {
            Some(s) => Some(EnsembleKind::parse(&s).map_err(|e| CliError::Usage(e.to_string()))?),
            None => None,
        };
        let potential = match file.potential {
            Some(c) => Some(Potential::new(c).map_err(|e| CliError::Usage(e.to_string()))?),
            None => None,
        };
        let mu = if flags.mu.is_empty() {
            file.mu.unwrap_or_default().into_iter().map(|[re, im]| C64::new(re, im)).collect()
        } else {
            flags.mu.iter().map(|s| parse_mu(s)).collect::<Result<_, _>>()?
        };
        let seed = match flags.seed.or(file.seed) {
            Some(s) => s,
            None => match std::env::var("PERMPOLY_SEED") {
                Ok(v) => v.trim().parse().map_err(|_| {
                    CliError::Usage(format!("PERMPOLY_SEED='{v}' is not an unsigned integer"))
                })?,
                Err(_) => DEFAULT_SEED,
            },
        };
        if let Some(0) = flags.samples.or(file.samples) {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        Ok(Self {
            command: command.to_string(),
            ensemble,
            n: flags.n.or(file.n),
            big_n: flags.big_n.or(file.big_n),
            potential,
            mu,
            samples: flags.samples.or(file.samples),
            seed,
            out: flags.out.or(file.out),
            format: flags.format.or(file.format),
            workers: flags.workers.or(file.workers).unwrap_or(0),
            bins: flags.bins.or(file.bins),
            half_width: flags.half_width.or(file.half_width),
        })
    }

    pub fn require_ensemble(&self) -> Result<EnsembleKind, CliError> {
        self.ensemble.ok_or_else(|| CliError::Usage(format!("{} needs --ensemble", self.command)))
    }

    pub fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::Usage(format!("{} needs --n", self.command)))
    }

    /// Ensemble spec built from `--ensemble`, `--n` and the config potential.
    pub fn spec(&self) -> Result<EnsembleSpec, CliError> {
        let kind = self.require_ensemble()?;
        let n = self.require_n()?;
        let spec = match (kind, &self.potential) {
            (EnsembleKind::UnitaryInvariant, Some(v)) => EnsembleSpec::unitary_invariant(v.clone(), n),
            (EnsembleKind::UnitaryInvariant, None) => {
                return Err(CliError::Usage("unitary-invariant ensemble needs a potential in --config".into()))
            }
            (_, Some(_)) => return Err(CliError::Usage("a potential only applies to the unitary-invariant ensemble".into())),
            (k, None) => EnsembleSpec::new(k, n),
        };
        spec.map_err(CliError::from)
    }
}
