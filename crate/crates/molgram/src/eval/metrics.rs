//! Classification and regression metric suites.

use std::collections::BTreeMap;

use ndarray::ArrayView2;

use super::EvalError;

/// Metric map for a classified test set.
///
/// Keys: `accuracy`, `precision_weighted`, `recall_weighted`, `f1_weighted`,
/// `f1_macro`, `roc_auc_ovr_macro`.
///
/// Per-class precision/recall/F1 come from the confusion matrix with the
/// convention 0/0 = 0 (`F1 = 2PR/(P+R)`, 0 when `P+R = 0`). Weighted
/// averages weight by true-label support; macro F1 averages over classes
/// present in the true labels — classes that appear only in predictions
/// count against precision but are not separately averaged. ROC-AUC is
/// one-vs-rest via the midrank Mann–Whitney statistic, macro-averaged over
/// classes with both positives and negatives; when no class is evaluable the
/// tie convention 0.5 is reported.
pub fn classification_metrics(
    y_true: &[usize],
    y_pred: &[usize],
    scores: ArrayView2<f64>,
) -> Result<BTreeMap<String, f64>, EvalError> {
    let n = y_true.len();
    if y_pred.len() != n {
        return Err(EvalError::LengthMismatch {
            left: n,
            right: y_pred.len(),
        });
    }
    if scores.nrows() != n {
        return Err(EvalError::LengthMismatch {
            left: n,
            right: scores.nrows(),
        });
    }
    if n == 0 {
        return Err(EvalError::DatasetTooSmall { n });
    }
    let n_classes = scores.ncols();
    if let Some(&bad) = y_true.iter().chain(y_pred.iter()).find(|&&c| c >= n_classes) {
        return Err(EvalError::ClassOutOfRange {
            class: bad,
            n_classes,
        });
    }

    let mut true_positive = vec![0usize; n_classes];
    let mut false_positive = vec![0usize; n_classes];
    let mut false_negative = vec![0usize; n_classes];
    let mut support = vec![0usize; n_classes];
    let mut correct = 0usize;
    for (&t, &p) in y_true.iter().zip(y_pred.iter()) {
        support[t] += 1;
        if t == p {
            correct += 1;
            true_positive[t] += 1;
        } else {
            false_positive[p] += 1;
            false_negative[t] += 1;
        }
    }

    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let mut precision_weighted = 0.0;
    let mut recall_weighted = 0.0;
    let mut f1_weighted = 0.0;
    let mut f1_macro = 0.0;
    let mut present_classes = 0usize;
    for c in 0..n_classes {
        let precision = ratio(true_positive[c], true_positive[c] + false_positive[c]);
        let recall = ratio(true_positive[c], true_positive[c] + false_negative[c]);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        let weight = support[c] as f64 / n as f64;
        precision_weighted += weight * precision;
        recall_weighted += weight * recall;
        f1_weighted += weight * f1;
        if support[c] > 0 {
            f1_macro += f1;
            present_classes += 1;
        }
    }
    f1_macro /= present_classes as f64;

    let mut auc_sum = 0.0;
    let mut auc_classes = 0usize;
    for c in 0..n_classes {
        let positives = support[c];
        let negatives = n - positives;
        if positives == 0 || negatives == 0 {
            continue;
        }
        auc_sum += binary_auc_midrank(
            y_true.iter().map(|&t| t == c),
            scores.column(c).iter().copied(),
        );
        auc_classes += 1;
    }
    let roc_auc = if auc_classes == 0 {
        0.5
    } else {
        auc_sum / auc_classes as f64
    };

    let mut metrics = BTreeMap::new();
    metrics.insert("accuracy".to_string(), correct as f64 / n as f64);
    metrics.insert("precision_weighted".to_string(), precision_weighted);
    metrics.insert("recall_weighted".to_string(), recall_weighted);
    metrics.insert("f1_weighted".to_string(), f1_weighted);
    metrics.insert("f1_macro".to_string(), f1_macro);
    metrics.insert("roc_auc_ovr_macro".to_string(), roc_auc);
    Ok(metrics)
}

/// Mann–Whitney AUC with midranks: ties between scores contribute ½.
fn binary_auc_midrank(
    labels: impl Iterator<Item = bool>,
    scores: impl Iterator<Item = f64>,
) -> f64 {
    let pairs: Vec<(f64, bool)> = scores.zip(labels).collect();
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&a, &b| pairs[a].0.partial_cmp(&pairs[b].0).expect("finite scores"));

    // Midranks: tied scores all receive the average of their 1-based ranks.
    let mut ranks = vec![0.0; pairs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pairs[order[j + 1]].0 == pairs[order[i]].0 {
            j += 1;
        }
        let midrank = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = midrank;
        }
        i = j + 1;
    }

    let n_pos = pairs.iter().filter(|(_, label)| *label).count() as f64;
    let n_neg = pairs.len() as f64 - n_pos;
    let rank_sum: f64 = pairs
        .iter()
        .zip(ranks.iter())
        .filter(|((_, label), _)| *label)
        .map(|(_, &r)| r)
        .sum();
    (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg)
}

/// Metric map for a regression test set.
///
/// Keys: `mae`, `mse`, `rmse`, `r2`, `evs` — with `R² = 1 − SS_res/SS_tot`
/// and `EVS = 1 − Var(y−ŷ)/Var(y)`. Constant true values make R² and EVS
/// undefined and raise [`EvalError::ZeroVariance`].
pub fn regression_metrics(y_true: &[f64], y_pred: &[f64]) -> Result<BTreeMap<String, f64>, EvalError> {
    let n = y_true.len();
    if y_pred.len() != n {
        return Err(EvalError::LengthMismatch {
            left: n,
            right: y_pred.len(),
        });
    }
    if n < 2 {
        return Err(EvalError::DatasetTooSmall { n });
    }
    let nf = n as f64;
    let mean = y_true.iter().sum::<f64>() / nf;
    let ss_tot: f64 = y_true.iter().map(|y| (y - mean) * (y - mean)).sum();
    if ss_tot == 0.0 {
        return Err(EvalError::ZeroVariance);
    }
    let residuals: Vec<f64> = y_true.iter().zip(y_pred.iter()).map(|(y, p)| y - p).collect();
    let mae = residuals.iter().map(|r| r.abs()).sum::<f64>() / nf;
    let mse = residuals.iter().map(|r| r * r).sum::<f64>() / nf;
    let rmse = mse.sqrt();
    let ss_res: f64 = residuals.iter().map(|r| r * r).sum();
    let r2 = 1.0 - ss_res / ss_tot;
    let residual_mean = residuals.iter().sum::<f64>() / nf;
    let residual_var = residuals
        .iter()
        .map(|r| (r - residual_mean) * (r - residual_mean))
        .sum::<f64>()
        / nf;
    let evs = 1.0 - residual_var / (ss_tot / nf);

    let mut metrics = BTreeMap::new();
    metrics.insert("mae".to_string(), mae);
    metrics.insert("mse".to_string(), mse);
    metrics.insert("rmse".to_string(), rmse);
    metrics.insert("r2".to_string(), r2);
    metrics.insert("evs".to_string(), evs);
    Ok(metrics)
}
