//! K-nearest-neighbors classification with fully deterministic tie-breaking.

use ndarray::{Array2, ArrayView2};

use super::EvalError;

/// Euclidean k-NN vote.
///
/// Returns predicted class ids and an `n_test × n_classes` score matrix
/// whose entry `(t, c)` is the fraction of the k neighbors of test point `t`
/// in class `c` (rows sum to 1; used for ROC-AUC).
///
/// Tie rules, fixed for reproducibility: neighbors at equal distance are
/// ordered by lower training index; vote ties go to the class of the nearest
/// neighbor among the tied classes.
pub fn knn_classify(
    train_x: ArrayView2<f64>,
    train_y: &[usize],
    test_x: ArrayView2<f64>,
    k: usize,
    n_classes: usize,
) -> Result<(Vec<usize>, Array2<f64>), EvalError> {
    let n_train = train_x.nrows();
    if train_y.len() != n_train {
        return Err(EvalError::LengthMismatch {
            left: n_train,
            right: train_y.len(),
        });
    }
    if k == 0 || k > n_train {
        return Err(EvalError::KTooLarge { k, train: n_train });
    }
    if let Some(&bad) = train_y.iter().find(|&&c| c >= n_classes) {
        return Err(EvalError::ClassOutOfRange {
            class: bad,
            n_classes,
        });
    }

    let n_test = test_x.nrows();
    let mut predictions = Vec::with_capacity(n_test);
    let mut scores = Array2::zeros((n_test, n_classes));

    for t in 0..n_test {
        let mut neighbors: Vec<(f64, usize)> = (0..n_train)
            .map(|i| {
                let dist: f64 = train_x
                    .row(i)
                    .iter()
                    .zip(test_x.row(t).iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                (dist, i)
            })
            .collect();
        neighbors.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .expect("finite distances")
                .then(a.1.cmp(&b.1))
        });
        let nearest = &neighbors[..k];

        let mut votes = vec![0usize; n_classes];
        for &(_, idx) in nearest {
            votes[train_y[idx]] += 1;
        }
        for (class, &count) in votes.iter().enumerate() {
            scores[(t, class)] = count as f64 / k as f64;
        }
        let top = *votes.iter().max().expect("at least one class");
        // Among classes tied at the top vote count, the one whose nearest
        // neighbor comes first wins.
        let winner = nearest
            .iter()
            .map(|&(_, idx)| train_y[idx])
            .find(|&class| votes[class] == top)
            .expect("some neighbor holds the top class");
        predictions.push(winner);
    }
    Ok((predictions, scores))
}
