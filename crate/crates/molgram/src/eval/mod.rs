//! Evaluation harness: repeated random splits, KNN classification,
//! linear/ridge regression, metric suites, and class-similarity heatmaps.

pub mod heatmap;
pub mod knn;
pub mod metrics;
pub mod ridge;
pub mod rng;
pub mod split;

use std::collections::BTreeMap;
use std::time::Instant;

use ndarray::{Array2, Axis};
use serde::Serialize;
use thiserror::Error;

pub use heatmap::class_similarity_heatmap;
pub use knn::knn_classify;
pub use metrics::{classification_metrics, regression_metrics};
pub use ridge::ridge_regress;
pub use split::{random_split, SplitSpec};

/// Errors raised by the evaluation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("length mismatch: {left} on one side, {right} on the other")]
    LengthMismatch { left: usize, right: usize },
    #[error("k = {k} exceeds the number of training points ({train})")]
    KTooLarge { k: usize, train: usize },
    #[error("class id {class} is out of range for {n_classes} classes")]
    ClassOutOfRange { class: usize, n_classes: usize },
    #[error("true values are constant, so R² and EVS are undefined")]
    ZeroVariance,
    #[error("embedding row {row} has zero norm, so cosine similarity is undefined")]
    ZeroNormEmbedding { row: usize },
    #[error("class {class} has no members")]
    EmptyClass { class: usize },
    #[error("input contains a non-finite value")]
    NonFiniteInput,
    #[error("ridge penalty must be finite and non-negative, got {0}")]
    InvalidAlpha(f64),
    #[error("dataset has {n} rows, but at least 2 are required")]
    DatasetTooSmall { n: usize },
    #[error("split yields {train} training and {test} test rows; both need at least one")]
    DegenerateSplit { train: usize, test: usize },
    #[error("invalid split specification: {0}")]
    InvalidSplitSpec(String),
    #[error("model does not match the dataset task: KNN needs class labels, ridge needs real targets")]
    TaskMismatch,
}

/// Labels for a [`LabeledDataset`]: discrete classes or real-valued targets.
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetLabels {
    /// Dense class ids (`0..class_names.len()`) plus the name of each class,
    /// ordered by first appearance in the input labels.
    Classification {
        class_ids: Vec<usize>,
        class_names: Vec<String>,
    },
    /// One real target per row.
    Regression { targets: Vec<f64> },
}

/// Embeddings paired with labels, ready for a split/fit/score experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub embeddings: Array2<f64>,
    pub labels: DatasetLabels,
}

impl LabeledDataset {
    /// Builds a classification dataset, assigning dense class ids in order
    /// of first appearance of each distinct label.
    pub fn classification<S: AsRef<str>>(
        embeddings: Array2<f64>,
        labels: &[S],
    ) -> Result<Self, EvalError> {
        check_shape(&embeddings, labels.len())?;
        let mut class_names: Vec<String> = Vec::new();
        let mut class_ids = Vec::with_capacity(labels.len());
        for label in labels {
            let label = label.as_ref();
            let id = match class_names.iter().position(|name| name == label) {
                Some(id) => id,
                None => {
                    class_names.push(label.to_string());
                    class_names.len() - 1
                }
            };
            class_ids.push(id);
        }
        Ok(Self {
            embeddings,
            labels: DatasetLabels::Classification {
                class_ids,
                class_names,
            },
        })
    }

    /// Builds a regression dataset from real-valued targets.
    pub fn regression(embeddings: Array2<f64>, targets: Vec<f64>) -> Result<Self, EvalError> {
        check_shape(&embeddings, targets.len())?;
        if targets.iter().any(|t| !t.is_finite()) {
            return Err(EvalError::NonFiniteInput);
        }
        Ok(Self {
            embeddings,
            labels: DatasetLabels::Regression { targets },
        })
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.embeddings.nrows()
    }

    /// True when the dataset has no rows (unreachable via the constructors).
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_shape(embeddings: &Array2<f64>, n_labels: usize) -> Result<(), EvalError> {
    let n = embeddings.nrows();
    if n != n_labels {
        return Err(EvalError::LengthMismatch {
            left: n,
            right: n_labels,
        });
    }
    if n < 2 {
        return Err(EvalError::DatasetTooSmall { n });
    }
    if embeddings.iter().any(|v| !v.is_finite()) {
        return Err(EvalError::NonFiniteInput);
    }
    Ok(())
}

/// Model to evaluate: the variant fixes the task (KNN classifies, ridge
/// regresses) and carries its hyperparameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ModelSpec {
    Knn { k: usize },
    Ridge { alpha: f64 },
}

/// Per-repeat metric maps plus their arithmetic mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub per_repeat: Vec<BTreeMap<String, f64>>,
    pub mean: BTreeMap<String, f64>,
}

impl EvalReport {
    /// Aggregates repeat-level metric maps; the mean is taken key-wise over
    /// every key present in any repeat (missing entries count as absent,
    /// not zero — in practice all repeats share one key set).
    pub fn from_repeats(per_repeat: Vec<BTreeMap<String, f64>>) -> Self {
        let mut sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
        for repeat in &per_repeat {
            for (key, value) in repeat {
                let entry = sums.entry(key.clone()).or_insert((0.0, 0));
                entry.0 += value;
                entry.1 += 1;
            }
        }
        let mean = sums
            .into_iter()
            .map(|(key, (sum, count))| (key, sum / count as f64))
            .collect();
        Self { per_repeat, mean }
    }

    /// Serializes the report as pretty-printed JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metric maps are always serializable")
    }
}

/// Runs the full protocol: for each repeat, split the rows, fit the model on
/// the training side, predict the test side, and record the metric suite
/// plus `train_time_seconds` (wall-clock fit + predict).
pub fn run_experiment(
    dataset: &LabeledDataset,
    split: &SplitSpec,
    model: &ModelSpec,
) -> Result<EvalReport, EvalError> {
    let n = dataset.len();
    let mut per_repeat = Vec::with_capacity(split.repeats);
    for repeat_index in 0..split.repeats {
        let (train_idx, test_idx) = random_split(n, split, repeat_index)?;
        let train_x = dataset.embeddings.select(Axis(0), &train_idx);
        let test_x = dataset.embeddings.select(Axis(0), &test_idx);

        let repeat_metrics = match (model, &dataset.labels) {
            (
                ModelSpec::Knn { k },
                DatasetLabels::Classification {
                    class_ids,
                    class_names,
                },
            ) => {
                let train_y: Vec<usize> = train_idx.iter().map(|&i| class_ids[i]).collect();
                let test_y: Vec<usize> = test_idx.iter().map(|&i| class_ids[i]).collect();
                let started = Instant::now();
                let (predicted, scores) =
                    knn_classify(train_x.view(), &train_y, test_x.view(), *k, class_names.len())?;
                let elapsed = started.elapsed().as_secs_f64();
                let mut metrics = classification_metrics(&test_y, &predicted, scores.view())?;
                metrics.insert("train_time_seconds".to_string(), elapsed);
                metrics
            }
            (ModelSpec::Ridge { alpha }, DatasetLabels::Regression { targets }) => {
                let train_y: Vec<f64> = train_idx.iter().map(|&i| targets[i]).collect();
                let test_y: Vec<f64> = test_idx.iter().map(|&i| targets[i]).collect();
                let started = Instant::now();
                let predicted = ridge_regress(train_x.view(), &train_y, test_x.view(), *alpha)?;
                let elapsed = started.elapsed().as_secs_f64();
                let mut metrics = regression_metrics(&test_y, &predicted)?;
                metrics.insert("train_time_seconds".to_string(), elapsed);
                metrics
            }
            _ => return Err(EvalError::TaskMismatch),
        };
        per_repeat.push(repeat_metrics);
    }
    Ok(EvalReport::from_repeats(per_repeat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    fn separable_classification(n_per_class: usize) -> LabeledDataset {
        // One embedding dimension equals the class index, so the nearest
        // neighbor of any point is always same-class.
        let n = 2 * n_per_class;
        let mut x = Array2::zeros((n, 2));
        let mut labels = Vec::new();
        for i in 0..n {
            let class = i % 2;
            x[(i, 0)] = class as f64;
            x[(i, 1)] = (i as f64) * 1e-3;
            labels.push(if class == 0 { "ether" } else { "ester" });
        }
        LabeledDataset::classification(x, &labels).unwrap()
    }

    #[test]
    fn class_ids_follow_first_appearance() {
        let x = Array2::zeros((4, 1));
        let ds = LabeledDataset::classification(x, &["amine", "alkane", "amine", "alcohol"])
            .unwrap();
        match ds.labels {
            DatasetLabels::Classification {
                class_ids,
                class_names,
            } => {
                assert_eq!(class_names, vec!["amine", "alkane", "alcohol"]);
                assert_eq!(class_ids, vec![0, 1, 0, 2]);
            }
            _ => panic!("expected classification labels"),
        }
    }

    #[test]
    fn constructors_validate_shape_and_values() {
        assert_eq!(
            LabeledDataset::regression(Array2::zeros((3, 1)), vec![1.0, 2.0]),
            Err(EvalError::LengthMismatch { left: 3, right: 2 })
        );
        assert_eq!(
            LabeledDataset::regression(Array2::zeros((1, 1)), vec![1.0]),
            Err(EvalError::DatasetTooSmall { n: 1 })
        );
        assert_eq!(
            LabeledDataset::regression(Array2::zeros((2, 1)), vec![1.0, f64::NAN]),
            Err(EvalError::NonFiniteInput)
        );
        assert_eq!(
            LabeledDataset::classification(array![[f64::INFINITY], [0.0]], &["a", "b"]),
            Err(EvalError::NonFiniteInput)
        );
    }

    #[test]
    fn separable_classes_score_perfect_accuracy() {
        let ds = separable_classification(10);
        let report = run_experiment(
            &ds,
            &SplitSpec::default(),
            &ModelSpec::Knn { k: 1 },
        )
        .unwrap();
        assert_eq!(report.per_repeat.len(), 5);
        assert_eq!(report.mean["accuracy"], 1.0);
        assert!(report.mean["train_time_seconds"] >= 0.0);
    }

    #[test]
    fn linear_targets_regress_near_perfectly() {
        let n = 30;
        let mut x = Array2::zeros((n, 2));
        let mut y = Vec::new();
        for i in 0..n {
            x[(i, 0)] = i as f64;
            x[(i, 1)] = ((i * 7) % 5) as f64;
            y.push(2.0 * x[(i, 0)] - 3.0 * x[(i, 1)] + 1.0);
        }
        let ds = LabeledDataset::regression(x, y).unwrap();
        let report = run_experiment(
            &ds,
            &SplitSpec::default(),
            &ModelSpec::Ridge { alpha: 1e-6 },
        )
        .unwrap();
        assert!(report.mean["r2"] > 0.999, "r2 = {}", report.mean["r2"]);
    }

    #[test]
    fn report_mean_is_arithmetic_mean() {
        let ds = separable_classification(12);
        let report = run_experiment(
            &ds,
            &SplitSpec {
                repeats: 4,
                ..SplitSpec::default()
            },
            &ModelSpec::Knn { k: 3 },
        )
        .unwrap();
        for (key, &mean) in &report.mean {
            let expected: f64 = report
                .per_repeat
                .iter()
                .map(|m| m[key])
                .sum::<f64>()
                / report.per_repeat.len() as f64;
            assert!(
                (mean - expected).abs() < 1e-12,
                "{key}: {mean} vs {expected}"
            );
        }
    }

    #[test]
    fn mismatched_model_and_labels_error() {
        let ds = separable_classification(5);
        assert_eq!(
            run_experiment(&ds, &SplitSpec::default(), &ModelSpec::Ridge { alpha: 1.0 }),
            Err(EvalError::TaskMismatch)
        );
        let reg = LabeledDataset::regression(Array2::zeros((6, 1)), vec![0., 1., 2., 3., 4., 5.])
            .unwrap();
        assert_eq!(
            run_experiment(&reg, &SplitSpec::default(), &ModelSpec::Knn { k: 1 }),
            Err(EvalError::TaskMismatch)
        );
    }

    #[test]
    fn report_serializes_with_metric_keys() {
        let ds = separable_classification(6);
        let report = run_experiment(
            &ds,
            &SplitSpec {
                repeats: 2,
                ..SplitSpec::default()
            },
            &ModelSpec::Knn { k: 1 },
        )
        .unwrap();
        let json = report.to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["per_repeat"].as_array().unwrap().len(), 2);
        for key in [
            "accuracy",
            "precision_weighted",
            "recall_weighted",
            "f1_weighted",
            "f1_macro",
            "roc_auc_ovr_macro",
            "train_time_seconds",
        ] {
            assert!(value["mean"][key].is_number(), "missing mean key {key}");
        }
    }
}
