//! CSV dataset loading: a `smiles` column plus `label` (classification) or
//! `target` (regression), with 1-based data-row numbers in every error.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::Task;

/// Labels read from the dataset file, by task.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedLabels {
    Classes(Vec<String>),
    Targets(Vec<f64>),
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("input file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: PathBuf,
        source: csv::Error,
    },
    #[error("input is missing the required column {0:?}")]
    MissingColumn(&'static str),
    #[error("row {row}: target {value:?} is not a finite decimal number")]
    BadTargetValue { row: usize, value: String },
    #[error("row {row}: smiles cell is empty")]
    EmptySmiles { row: usize },
    #[error("row {row}: {source}")]
    MalformedRow { row: usize, source: csv::Error },
    #[error("input has no data rows")]
    Empty,
}

/// Reads the dataset, preserving row order. The `row` in every error is the
/// 1-based data row (the header is row 0).
pub fn load_dataset(path: &Path, task: Task) -> Result<(Vec<String>, LoadedLabels), DatasetError> {
    let mut reader = match csv::Reader::from_path(path) {
        Ok(reader) => reader,
        Err(e) => {
            return Err(match e.kind() {
                csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::NotFound => {
                    DatasetError::FileNotFound(path.to_path_buf())
                }
                _ => DatasetError::Unreadable {
                    path: path.to_path_buf(),
                    source: e,
                },
            })
        }
    };

    let headers = reader
        .headers()
        .map_err(|source| DatasetError::Unreadable {
            path: path.to_path_buf(),
            source,
        })?
        .clone();
    let column = |name: &'static str| -> Result<usize, DatasetError> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or(DatasetError::MissingColumn(name))
    };
    let smiles_col = column("smiles")?;
    let label_col = match task {
        Task::Classify => column("label")?,
        Task::Regress => column("target")?,
    };

    let mut smiles = Vec::new();
    let mut classes = Vec::new();
    let mut targets = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|source| DatasetError::MalformedRow { row, source })?;
        let text = record.get(smiles_col).unwrap_or("").trim();
        if text.is_empty() {
            return Err(DatasetError::EmptySmiles { row });
        }
        smiles.push(text.to_string());
        let cell = record.get(label_col).unwrap_or("").trim();
        match task {
            Task::Classify => classes.push(cell.to_string()),
            Task::Regress => {
                let value: f64 = cell.parse().map_err(|_| DatasetError::BadTargetValue {
                    row,
                    value: cell.to_string(),
                })?;
                if !value.is_finite() {
                    return Err(DatasetError::BadTargetValue {
                        row,
                        value: cell.to_string(),
                    });
                }
                targets.push(value);
            }
        }
    }
    if smiles.is_empty() {
        return Err(DatasetError::Empty);
    }
    let labels = match task {
        Task::Classify => LoadedLabels::Classes(classes),
        Task::Regress => LoadedLabels::Targets(targets),
    };
    Ok((smiles, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        write!(file, "{content}").unwrap();
        file
    }

    #[test]
    fn loads_classification_rows_in_order() {
        let file = write_csv("smiles,label\nCCO,alcohol\nCC,alkane\nCCN,amine\n");
        let (smiles, labels) = load_dataset(file.path(), Task::Classify).unwrap();
        assert_eq!(smiles, vec!["CCO", "CC", "CCN"]);
        assert_eq!(
            labels,
            LoadedLabels::Classes(vec![
                "alcohol".to_string(),
                "alkane".to_string(),
                "amine".to_string()
            ])
        );
    }

    #[test]
    fn loads_regression_targets() {
        let file = write_csv("smiles,target\nCCO,3\nCC,2.5\n");
        let (_, labels) = load_dataset(file.path(), Task::Regress).unwrap();
        assert_eq!(labels, LoadedLabels::Targets(vec![3.0, 2.5]));
    }

    #[test]
    fn missing_columns_are_named() {
        let file = write_csv("smiles,label\nCCO,x\n");
        assert!(matches!(
            load_dataset(file.path(), Task::Regress),
            Err(DatasetError::MissingColumn("target"))
        ));
        let file = write_csv("structure,target\nCCO,1\n");
        assert!(matches!(
            load_dataset(file.path(), Task::Classify),
            Err(DatasetError::MissingColumn("smiles"))
        ));
    }

    #[test]
    fn bad_target_names_the_row() {
        let file = write_csv("smiles,target\nCCO,1\nCC,abc\n");
        match load_dataset(file.path(), Task::Regress) {
            Err(DatasetError::BadTargetValue { row: 2, value }) => assert_eq!(value, "abc"),
            other => panic!("unexpected: {other:?}"),
        }
        let file = write_csv("smiles,target\nCCO,inf\n");
        assert!(matches!(
            load_dataset(file.path(), Task::Regress),
            Err(DatasetError::BadTargetValue { row: 1, .. })
        ));
    }

    #[test]
    fn empty_smiles_names_the_row() {
        let file = write_csv("smiles,label\nCCO,a\n,b\n");
        assert!(matches!(
            load_dataset(file.path(), Task::Classify),
            Err(DatasetError::EmptySmiles { row: 2 })
        ));
    }

    #[test]
    fn missing_file_is_distinguished() {
        assert!(matches!(
            load_dataset(Path::new("/definitely/not/here.csv"), Task::Classify),
            Err(DatasetError::FileNotFound(_))
        ));
    }

    #[test]
    fn extra_columns_are_ignored() {
        let file = write_csv("id,smiles,comment,label\n1,CCO,hi,alcohol\n");
        let (smiles, _) = load_dataset(file.path(), Task::Classify).unwrap();
        assert_eq!(smiles, vec!["CCO"]);
    }
}
