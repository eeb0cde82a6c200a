//! Flag surface, config-file merging, and resolved run configurations.
//!
//! Every subcommand accepts `--config <file>` with flat `key=value` lines
//! using the same keys as the long flags (`model=gue`, `T=1e6`, ...).
//! Explicit flags take precedence over file values, which take precedence
//! over the defaults (N = 7, T = 1e6, M = 400, eta = 1/e, epsilon = 0.1).

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tempens_core::hamiltonian::ModelKind;
use tempens_core::pauli::PauliEnsembleKind;

/// A bad flag, config key, or parameter combination. Exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(ConfigError(msg.into()))
}

#[derive(Parser, Debug)]
#[command(
    name = "tempens",
    version,
    about = "Frame potentials of the two-Hamiltonian + random-Pauli temporal ensemble"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Estimate frame potentials for a list of k at fixed T.
    FramePotential(FramePotentialArgs),
    /// Sweep the time window T at fixed k and locate the epsilon crossing.
    SweepTime(SweepTimeArgs),
    /// Sweep system size (and k) cells with fresh Hamiltonians per size.
    SweepSize(SweepSizeArgs),
    /// Sample diagonal Pauli matrix elements over eigenstates.
    PauliSpectrum(PauliSpectrumArgs),
    /// Run the internal verification battery.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Master seed; all streams are derived from it by label.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: TEMPENS_THREADS or all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output path (default: <command>.<format> in the working directory).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Flat key=value config file with the same keys as the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FramePotentialArgs {
    /// Hamiltonian family: gue or spin.
    #[arg(long)]
    pub model: Option<String>,
    /// Number of qubits.
    #[arg(long)]
    pub n: Option<u32>,
    /// Upper bound of the evolution-time window.
    #[arg(long = "T")]
    pub t_max: Option<f64>,
    /// Number of sampled evolution operators M.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Comma-separated frame-potential orders.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    /// Pauli ensemble: full, iz, prefix-z, or none.
    #[arg(long)]
    pub pauli: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SweepTimeArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Single frame-potential order for the sweep.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub pauli: Option<String>,
    /// Explicit comma-separated T grid (overrides t-min/t-max/t-points).
    #[arg(long = "t-grid", value_delimiter = ',')]
    pub t_grid: Option<Vec<f64>>,
    #[arg(long = "t-min")]
    pub t_min: Option<f64>,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    #[arg(long = "t-points")]
    pub t_points: Option<usize>,
    /// Deviation threshold for the crossing.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Slope fit window "lo,hi" (default: decade past the crossing).
    #[arg(long = "fit-window", value_delimiter = ',')]
    pub fit_window: Option<Vec<f64>>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SweepSizeArgs {
    #[arg(long)]
    pub model: Option<String>,
    /// Comma-separated k values.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<u32>>,
    #[arg(long = "n-min")]
    pub n_min: Option<u32>,
    #[arg(long = "n-max")]
    pub n_max: Option<u32>,
    #[arg(long)]
    pub pauli: Option<String>,
    #[arg(long = "T")]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Suppression factor in the critical-size condition.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Memory budget in bytes; larger cells are skipped, not failed.
    #[arg(long = "mem-budget")]
    pub mem_budget: Option<u64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct PauliSpectrumArgs {
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Number of spectrum samples.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub pauli: Option<String>,
    /// Optional path for the raw sampled values (index,c rows).
    #[arg(long)]
    pub values: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// quick (small-N identities and oracles) or full (adds spectral and
    /// Haar-baseline statistics).
    #[arg(long)]
    pub level: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Values parsed out of a `--config` file.
pub struct FileConfig {
    map: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> anyhow::Result<Self> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_error(format!("cannot read config {path:?}: {e}")))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    config_error(format!("config line {} is not key=value", lineno + 1))
                })?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Self { map })
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> anyhow::Result<Option<T>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                config_error(format!("config key {key}={raw} does not parse"))
            }),
        }
    }

    pub fn get_list<T: std::str::FromStr>(&self, key: &str) -> anyhow::Result<Option<Vec<T>>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|s| s.trim().parse::<T>())
                .collect::<Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| config_error(format!("config key {key}={raw} does not parse"))),
        }
    }
}

pub fn parse_model(s: &str) -> anyhow::Result<ModelKind> {
    match s {
        "gue" => Ok(ModelKind::Gue),
        "spin" => Ok(ModelKind::RandomSpin),
        other => Err(config_error(format!(
            "unknown model {other:?}; expected gue or spin"
        ))),
    }
}

pub fn parse_pauli(s: &str) -> anyhow::Result<PauliEnsembleKind> {
    match s {
        "full" => Ok(PauliEnsembleKind::UniformFull),
        "iz" => Ok(PauliEnsembleKind::UniformIZ),
        "prefix-z" => Ok(PauliEnsembleKind::PrefixZ),
        "none" => Ok(PauliEnsembleKind::IdentityOnly),
        other => Err(config_error(format!(
            "unknown pauli ensemble {other:?}; expected full, iz, prefix-z, or none"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

pub fn parse_format(s: &str) -> anyhow::Result<OutputFormat> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(config_error(format!(
            "unknown format {other:?}; expected csv or json"
        ))),
    }
}

/// Resolved common options shared by all commands.
pub struct ResolvedCommon {
    pub seed: u64,
    pub threads: Option<usize>,
    pub output: PathBuf,
    pub format: OutputFormat,
}

pub fn resolve_common(
    common: &CommonArgs,
    file: &FileConfig,
    default_stem: &str,
) -> anyhow::Result<ResolvedCommon> {
    let seed = common.seed.or(file.get("seed")?).unwrap_or(0);
    let threads = match common.threads.or(file.get("threads")?) {
        Some(t) => Some(t),
        None => std::env::var("TEMPENS_THREADS")
            .ok()
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| config_error(format!("TEMPENS_THREADS={v} does not parse")))
            })
            .transpose()?,
    };
    let format = parse_format(
        &common
            .format
            .clone()
            .or(file.get::<String>("format")?)
            .unwrap_or_else(|| "csv".into()),
    )?;
    let output = common
        .output
        .clone()
        .or(file.get::<PathBuf>("output")?)
        .unwrap_or_else(|| PathBuf::from(format!("{default_stem}.{}", format.extension())));
    Ok(ResolvedCommon {
        seed,
        threads,
        output,
        format,
    })
}
