//! End-to-end orchestration: load → parse → embed → (Gram + kernel PCA) →
//! evaluate → write artifacts.
//!
//! Every artifact is written to a hidden temp file and renamed into place,
//! and all computation happens before the first write, so a failing run
//! leaves no partial outputs.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ndarray::Array2;

use molgram::embed::{
    build_vocabulary, kmer_vector, morgan_fingerprint, weighted_kmer_vector, EmbedError,
    FeatureVector,
};
use molgram::eval::{
    class_similarity_heatmap, run_experiment, DatasetLabels, EvalReport, LabeledDataset,
    ModelSpec, SplitSpec,
};
use molgram::export::{write_matrix_binary, write_matrix_csv};
use molgram::gram::{build_gram, median_heuristic_sigma, GramPipelineConfig};
use molgram::kpca::fit_kpca;
use molgram::smiles::parse_smiles;

use crate::config::{EmbeddingKind, RunConfig, SigmaMode, Task};
use crate::dataset::{load_dataset, LoadedLabels};

/// A pipeline failure tagged with the stage that produced it.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub message: String,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.stage, self.message)
    }
}

impl std::error::Error for StageError {}

fn stage_err<E: fmt::Display>(stage: &'static str) -> impl Fn(E) -> StageError {
    move |e| StageError {
        stage,
        message: e.to_string(),
    }
}

/// Runs the configured pipeline and writes all artifacts to
/// `config.output_dir`.
pub fn run_pipeline(config: &RunConfig) -> Result<(), StageError> {
    // Load.
    let (smiles, labels) = load_dataset(&config.input, config.task).map_err(stage_err("load"))?;

    // Parse, reporting every bad row at once.
    let mut graphs = Vec::with_capacity(smiles.len());
    let mut parse_failures = Vec::new();
    for (i, text) in smiles.iter().enumerate() {
        match parse_smiles(text) {
            Ok(graph) => graphs.push(graph),
            Err(e) => parse_failures.push(format!("row {} ({text}): {e}", i + 1)),
        }
    }
    if !parse_failures.is_empty() {
        return Err(StageError {
            stage: "parse",
            message: format!(
                "{} of {} molecules failed to parse — {}",
                parse_failures.len(),
                smiles.len(),
                parse_failures.join("; ")
            ),
        });
    }

    // Embed.
    let features = embed_all(config, &smiles, &graphs)?;

    // Optional Gram + kernel PCA; otherwise the raw features are the
    // embedding fed to the models.
    let mut gram_artifacts: Option<Array2<f64>> = None;
    let mut pca_warning = None;
    let (embeddings, column_names) = if config.use_sinkhorn_kernel {
        let sigma = match config.sigma_mode {
            SigmaMode::Fixed => config.sigma,
            SigmaMode::Median => {
                median_heuristic_sigma(&features).map_err(stage_err("gram"))?
            }
        };
        let gram_config = GramPipelineConfig {
            sigma,
            ..GramPipelineConfig::default()
        };
        let balanced = build_gram(&features, &gram_config).map_err(stage_err("gram"))?;
        if !balanced.converged {
            return Err(StageError {
                stage: "gram",
                message: format!(
                    "balancing did not converge within {} iterations",
                    gram_config.max_iterations
                ),
            });
        }
        let d = config.pca_components.min(features.len());
        let model = fit_kpca(&balanced.kernel, d).map_err(stage_err("kpca"))?;
        pca_warning = model.warning.clone();
        let scores = model.transform().scores;
        let names: Vec<String> = (1..=d).map(|j| format!("pc{j}")).collect();
        gram_artifacts = Some(balanced.kernel);
        (scores, names)
    } else {
        let width = features[0].len();
        let mut matrix = Array2::zeros((features.len(), width));
        for (i, feature) in features.iter().enumerate() {
            matrix.row_mut(i).assign(&feature.values);
        }
        let names: Vec<String> = (0..width).map(|j| format!("f{j}")).collect();
        (matrix, names)
    };

    // Evaluate.
    let (dataset, model) = match (&labels, config.task) {
        (LoadedLabels::Classes(classes), Task::Classify) => (
            LabeledDataset::classification(embeddings.clone(), classes)
                .map_err(stage_err("evaluate"))?,
            ModelSpec::Knn { k: config.knn_k },
        ),
        (LoadedLabels::Targets(targets), Task::Regress) => (
            LabeledDataset::regression(embeddings.clone(), targets.clone())
                .map_err(stage_err("evaluate"))?,
            ModelSpec::Ridge {
                alpha: config.ridge_alpha,
            },
        ),
        _ => unreachable!("load_dataset returns labels matching the task"),
    };
    let split = SplitSpec {
        train_fraction: config.train_fraction,
        repeats: config.repeats,
        seed: config.seed,
    };
    let report = run_experiment(&dataset, &split, &model).map_err(stage_err("evaluate"))?;

    // Class-similarity heatmap (classification only).
    let heatmap = match &dataset.labels {
        DatasetLabels::Classification {
            class_ids,
            class_names,
        } => {
            let (matrix, _degenerate) =
                class_similarity_heatmap(embeddings.view(), class_ids, class_names.len())
                    .map_err(stage_err("heatmap"))?;
            Some((matrix, class_names.clone()))
        }
        DatasetLabels::Regression { .. } => None,
    };

    // Write everything, atomically per file.
    write_artifacts(
        config,
        gram_artifacts,
        &embeddings,
        &column_names,
        &report,
        heatmap,
    )?;
    if let Some(warning) = pca_warning {
        eprintln!("warning: {warning}");
    }
    Ok(())
}

fn embed_all(
    config: &RunConfig,
    smiles: &[String],
    graphs: &[molgram::smiles::MolecularGraph],
) -> Result<Vec<FeatureVector>, StageError> {
    let with_row = |e: EmbedError| {
        let message = match &e {
            EmbedError::StringShorterThanK { index, .. } => {
                format!("row {}: {e}", index + 1)
            }
            _ => e.to_string(),
        };
        StageError {
            stage: "embed",
            message,
        }
    };
    match config.embedding {
        EmbeddingKind::Morgan => Ok(graphs
            .iter()
            .map(|g| morgan_fingerprint(g, config.radius, config.nbits))
            .collect()),
        EmbeddingKind::Kmers => {
            let vocab = build_vocabulary(smiles, config.kmer_k).map_err(with_row)?;
            smiles
                .iter()
                .enumerate()
                .map(|(i, text)| {
                    kmer_vector(text, &vocab).map_err(|e| StageError {
                        stage: "embed",
                        message: format!("row {}: {e}", i + 1),
                    })
                })
                .collect()
        }
        EmbeddingKind::WeightedKmers => {
            let vocab = build_vocabulary(smiles, config.kmer_k).map_err(with_row)?;
            smiles
                .iter()
                .enumerate()
                .map(|(i, text)| {
                    weighted_kmer_vector(text, &vocab, smiles.len()).map_err(|e| StageError {
                        stage: "embed",
                        message: format!("row {}: {e}", i + 1),
                    })
                })
                .collect()
        }
    }
}

fn write_artifacts(
    config: &RunConfig,
    gram: Option<Array2<f64>>,
    embeddings: &Array2<f64>,
    column_names: &[String],
    report: &EvalReport,
    heatmap: Option<(Array2<f64>, Vec<String>)>,
) -> Result<(), StageError> {
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(stage_err("write"))?;

    if let Some(kernel) = gram {
        let tmp = tmp_path(dir, "gram.csv");
        write_matrix_csv(&tmp, kernel.view()).map_err(stage_err("write"))?;
        promote(dir, &tmp, "gram.csv")?;
        let tmp = tmp_path(dir, "gram.bin");
        write_matrix_binary(&tmp, kernel.view()).map_err(stage_err("write"))?;
        promote(dir, &tmp, "gram.bin")?;
    }

    let mut embedding_csv = String::new();
    embedding_csv.push_str(&column_names.join(","));
    embedding_csv.push('\n');
    for row in embeddings.rows() {
        let line = row
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",");
        embedding_csv.push_str(&line);
        embedding_csv.push('\n');
    }
    write_string(dir, "embedding.csv", &embedding_csv)?;

    write_string(dir, "report.json", &format!("{}\n", report.to_json()))?;

    if let Some((matrix, class_names)) = heatmap {
        let mut csv = String::from("class,");
        csv.push_str(&class_names.join(","));
        csv.push('\n');
        for (name, row) in class_names.iter().zip(matrix.rows()) {
            csv.push_str(name);
            for value in row.iter() {
                csv.push(',');
                csv.push_str(&value.to_string());
            }
            csv.push('\n');
        }
        write_string(dir, "heatmap.csv", &csv)?;
    }

    let resolved = serde_json::to_string_pretty(config).map_err(stage_err("write"))?;
    write_string(dir, "run_config.json", &format!("{resolved}\n"))?;
    Ok(())
}

fn tmp_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!(".{name}.tmp"))
}

fn promote(dir: &Path, tmp: &Path, name: &str) -> Result<(), StageError> {
    fs::rename(tmp, dir.join(name)).map_err(stage_err("write"))
}

fn write_string(dir: &Path, name: &str, content: &str) -> Result<(), StageError> {
    let tmp = tmp_path(dir, name);
    let mut file = fs::File::create(&tmp).map_err(stage_err("write"))?;
    file.write_all(content.as_bytes()).map_err(stage_err("write"))?;
    file.flush().map_err(stage_err("write"))?;
    drop(file);
    promote(dir, &tmp, name)
}
