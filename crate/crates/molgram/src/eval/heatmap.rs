//! Class-level cosine-similarity heatmaps over embedding rows.

use ndarray::{Array2, ArrayView2};

use super::EvalError;

/// Mean pairwise cosine similarity between (and within) classes, min–max
/// normalized to `[0, 1]`.
///
/// Cell `(i, j)` averages cosine similarity over all cross-class pairs; the
/// diagonal averages over distinct within-class pairs, with singleton
/// classes assigned 1.0 (an embedding is fully similar to itself). Returns
/// the normalized matrix and a `degenerate` flag: when every raw cell is
/// equal the normalization is undefined, so the matrix is all zeros and the
/// flag is set.
pub fn class_similarity_heatmap(
    embeddings: ArrayView2<f64>,
    class_ids: &[usize],
    n_classes: usize,
) -> Result<(Array2<f64>, bool), EvalError> {
    let n = embeddings.nrows();
    if class_ids.len() != n {
        return Err(EvalError::LengthMismatch {
            left: n,
            right: class_ids.len(),
        });
    }
    if let Some(&bad) = class_ids.iter().find(|&&c| c >= n_classes) {
        return Err(EvalError::ClassOutOfRange {
            class: bad,
            n_classes,
        });
    }

    let mut norms = vec![0.0; n];
    for (row, norm) in embeddings.rows().into_iter().zip(norms.iter_mut()) {
        *norm = row.dot(&row).sqrt();
    }
    if let Some(row) = norms.iter().position(|&v| v == 0.0) {
        return Err(EvalError::ZeroNormEmbedding { row });
    }

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (idx, &c) in class_ids.iter().enumerate() {
        members[c].push(idx);
    }
    if let Some(class) = members.iter().position(|m| m.is_empty()) {
        return Err(EvalError::EmptyClass { class });
    }

    let cosine = |a: usize, b: usize| {
        embeddings.row(a).dot(&embeddings.row(b)) / (norms[a] * norms[b])
    };

    let mut raw = Array2::zeros((n_classes, n_classes));
    for i in 0..n_classes {
        for j in 0..n_classes {
            if i == j {
                let m = &members[i];
                if m.len() == 1 {
                    raw[(i, i)] = 1.0;
                } else {
                    let mut sum = 0.0;
                    let mut count = 0usize;
                    for (pos, &a) in m.iter().enumerate() {
                        for &b in &m[pos + 1..] {
                            sum += cosine(a, b);
                            count += 1;
                        }
                    }
                    raw[(i, i)] = sum / count as f64;
                }
            } else if i < j {
                let mut sum = 0.0;
                for &a in &members[i] {
                    for &b in &members[j] {
                        sum += cosine(a, b);
                    }
                }
                let mean = sum / (members[i].len() * members[j].len()) as f64;
                raw[(i, j)] = mean;
                raw[(j, i)] = mean;
            }
        }
    }

    let min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == min {
        return Ok((Array2::zeros((n_classes, n_classes)), true));
    }
    let normalized = raw.mapv(|v| (v - min) / (max - min));
    Ok((normalized, false))
}
