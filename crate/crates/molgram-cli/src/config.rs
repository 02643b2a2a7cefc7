//! Run configuration: defaults, optional `key = value` config file, and
//! command-line flags, merged in that precedence order.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Classify,
    Regress,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum EmbeddingKind {
    Morgan,
    Kmers,
    WeightedKmers,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMode {
    /// Use the configured sigma value as-is.
    Fixed,
    /// Derive sigma from the median pairwise feature distance.
    Median,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Classify => "classify",
            Task::Regress => "regress",
        })
    }
}

/// The fully resolved configuration of one pipeline run; serialized verbatim
/// to `run_config.json` so a run can be reproduced from its artifacts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub task: Task,
    pub embedding: EmbeddingKind,
    /// false: feed the feature vectors to the models directly (baseline);
    /// true: Gaussian matrix → probability → Sinkhorn → kernel PCA first.
    pub use_sinkhorn_kernel: bool,
    pub sigma: f64,
    pub sigma_mode: SigmaMode,
    pub radius: usize,
    pub nbits: usize,
    pub kmer_k: usize,
    pub pca_components: usize,
    pub knn_k: usize,
    pub ridge_alpha: f64,
    pub train_fraction: f64,
    pub repeats: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("missing required option --{0} (or `{0}` in the config file)")]
    MissingOption(&'static str),
    #[error("cannot read config file {path}: {source}")]
    UnreadableFile {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config file line {line}: expected `key = value`, got {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("config file line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("config file line {line}: bad value for {key}: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("{0}")]
    OutOfRange(String),
}

/// Turn SMILES datasets into Gram matrices, embeddings, and evaluation
/// reports.
#[derive(Debug, Parser)]
#[command(name = "molgram", version)]
pub struct Cli {
    /// Optional `key = value` config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Input CSV with a `smiles` column plus `label` (classify) or `target`
    /// (regress).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Prediction task.
    #[arg(long, value_enum)]
    pub task: Option<Task>,
    /// Feature construction for each molecule.
    #[arg(long, value_enum)]
    pub embedding: Option<EmbeddingKind>,
    /// Balance a Gaussian Gram matrix and embed via kernel PCA (pass
    /// `false` to feed features to the models directly).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub use_sinkhorn_kernel: Option<bool>,
    /// Gaussian width for the pairwise similarity matrix.
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// How sigma is chosen: `fixed` uses --sigma, `median` derives it from
    /// the data.
    #[arg(long, value_enum)]
    pub sigma_mode: Option<SigmaMode>,
    /// Circular-fingerprint radius.
    #[arg(long)]
    pub radius: Option<usize>,
    /// Fingerprint length in bits.
    #[arg(long)]
    pub nbits: Option<usize>,
    /// Substring length for k-mer embeddings.
    #[arg(long)]
    pub kmer_k: Option<usize>,
    /// Embedding dimension kept by kernel PCA (clamped to the dataset size).
    #[arg(long)]
    pub pca_components: Option<usize>,
    /// Neighbor count for the KNN classifier.
    #[arg(long)]
    pub knn_k: Option<usize>,
    /// Ridge penalty; 0 gives plain least squares.
    #[arg(long, allow_negative_numbers = true)]
    pub ridge_alpha: Option<f64>,
    /// Fraction of rows used for training in each repeat.
    #[arg(long, allow_negative_numbers = true)]
    pub train_fraction: Option<f64>,
    /// Number of repeated random splits.
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Base seed for the split generator.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory receiving all artifacts (created if absent).
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

/// Values parsed out of a `key = value` config file; same shape as the
/// flag set.
#[derive(Debug, Default)]
struct FileConfig {
    input: Option<PathBuf>,
    task: Option<Task>,
    embedding: Option<EmbeddingKind>,
    use_sinkhorn_kernel: Option<bool>,
    sigma: Option<f64>,
    sigma_mode: Option<SigmaMode>,
    radius: Option<usize>,
    nbits: Option<usize>,
    kmer_k: Option<usize>,
    pca_components: Option<usize>,
    knn_k: Option<usize>,
    ridge_alpha: Option<f64>,
    train_fraction: Option<f64>,
    repeats: Option<usize>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
}

fn parse_enum<T: ValueEnum>(value: &str, line: usize, key: &str) -> Result<T, ConfigError> {
    T::from_str(value, false).map_err(|_| ConfigError::BadValue {
        line,
        key: key.to_string(),
        reason: format!("{value:?} is not a recognized value"),
    })
}

fn parse_num<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e| ConfigError::BadValue {
        line,
        key: key.to_string(),
        reason: format!("{e}"),
    })
}

fn parse_file(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })?;
    let mut file = FileConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        let (key, value) = stripped.split_once('=').ok_or_else(|| {
            ConfigError::MalformedLine {
                line,
                text: raw.trim().to_string(),
            }
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "input" => file.input = Some(PathBuf::from(value)),
            "task" => file.task = Some(parse_enum(value, line, key)?),
            "embedding" => file.embedding = Some(parse_enum(value, line, key)?),
            "use_sinkhorn_kernel" => {
                file.use_sinkhorn_kernel = Some(parse_num(value, line, key)?)
            }
            "sigma" => file.sigma = Some(parse_num(value, line, key)?),
            "sigma_mode" => file.sigma_mode = Some(parse_enum(value, line, key)?),
            "radius" => file.radius = Some(parse_num(value, line, key)?),
            "nbits" => file.nbits = Some(parse_num(value, line, key)?),
            "kmer_k" => file.kmer_k = Some(parse_num(value, line, key)?),
            "pca_components" => file.pca_components = Some(parse_num(value, line, key)?),
            "knn_k" => file.knn_k = Some(parse_num(value, line, key)?),
            "ridge_alpha" => file.ridge_alpha = Some(parse_num(value, line, key)?),
            "train_fraction" => file.train_fraction = Some(parse_num(value, line, key)?),
            "repeats" => file.repeats = Some(parse_num(value, line, key)?),
            "seed" => file.seed = Some(parse_num(value, line, key)?),
            "output_dir" => file.output_dir = Some(PathBuf::from(value)),
            other => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: other.to_string(),
                })
            }
        }
    }
    Ok(file)
}

/// Merges defaults, the optional config file, and flags (highest priority)
/// into a validated [`RunConfig`].
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let file = match &cli.config {
        Some(path) => parse_file(path)?,
        None => FileConfig::default(),
    };
    let config = RunConfig {
        input: cli
            .input
            .clone()
            .or(file.input)
            .ok_or(ConfigError::MissingOption("input"))?,
        task: cli.task.or(file.task).unwrap_or(Task::Classify),
        embedding: cli
            .embedding
            .or(file.embedding)
            .unwrap_or(EmbeddingKind::Morgan),
        use_sinkhorn_kernel: cli
            .use_sinkhorn_kernel
            .or(file.use_sinkhorn_kernel)
            .unwrap_or(true),
        sigma: cli.sigma.or(file.sigma).unwrap_or(1.0),
        sigma_mode: cli.sigma_mode.or(file.sigma_mode).unwrap_or(SigmaMode::Fixed),
        radius: cli.radius.or(file.radius).unwrap_or(2),
        nbits: cli.nbits.or(file.nbits).unwrap_or(2048),
        kmer_k: cli.kmer_k.or(file.kmer_k).unwrap_or(3),
        pca_components: cli.pca_components.or(file.pca_components).unwrap_or(100),
        knn_k: cli.knn_k.or(file.knn_k).unwrap_or(5),
        ridge_alpha: cli.ridge_alpha.or(file.ridge_alpha).unwrap_or(1.0),
        train_fraction: cli.train_fraction.or(file.train_fraction).unwrap_or(0.7),
        repeats: cli.repeats.or(file.repeats).unwrap_or(5),
        seed: cli.seed.or(file.seed).unwrap_or(42),
        output_dir: cli
            .output_dir
            .clone()
            .or(file.output_dir)
            .ok_or(ConfigError::MissingOption("output-dir"))?,
    };
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    /// Range checks mirroring what the consuming stages require.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::OutOfRange(msg));
        if !(self.sigma > 0.0) {
            return fail(format!("sigma must be positive, got {}", self.sigma));
        }
        if self.nbits == 0 {
            return fail("nbits must be at least 1".into());
        }
        if self.kmer_k == 0 {
            return fail("kmer-k must be at least 1".into());
        }
        if self.pca_components == 0 {
            return fail("pca-components must be at least 1".into());
        }
        if self.knn_k == 0 {
            return fail("knn-k must be at least 1".into());
        }
        if !(self.ridge_alpha >= 0.0 && self.ridge_alpha.is_finite()) {
            return fail(format!(
                "ridge-alpha must be finite and non-negative, got {}",
                self.ridge_alpha
            ));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return fail(format!(
                "train-fraction must lie strictly between 0 and 1, got {}",
                self.train_fraction
            ));
        }
        if self.repeats == 0 {
            return fail("repeats must be at least 1".into());
        }
        Ok(())
    }
}
