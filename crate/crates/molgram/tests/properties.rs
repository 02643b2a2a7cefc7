//! Property-based tests for the library's stated invariants, with
//! independent oracles for the balancing loop and the metric suite.

use molgram::embed::{build_vocabulary, kmer_vector, morgan_fingerprint, weighted_kmer_vector};
use molgram::eval::{
    classification_metrics, knn_classify, random_split, regression_metrics, SplitSpec,
};
use molgram::gram::{build_gram, sinkhorn_balance, GramPipelineConfig};
use molgram::kpca::fit_kpca;
use molgram::smiles::{parse_smiles, SmilesError};
use ndarray::{Array1, Array2, ArrayView2};
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

/// A random acyclic molecule as (tree adjacency, atom symbols).
fn arb_tree() -> impl Strategy<Value = (Vec<Vec<usize>>, Vec<char>)> {
    (2usize..10).prop_flat_map(|n| {
        let parents = prop::collection::vec(0usize..usize::MAX, n - 1);
        let symbols = prop::collection::vec(prop::sample::select(vec!['C', 'N', 'O', 'S']), n);
        (parents, symbols).prop_map(move |(parents, symbols)| {
            let mut adjacency = vec![Vec::new(); n];
            for (i, &p) in parents.iter().enumerate() {
                let child = i + 1;
                let parent = p % child; // uniform over existing atoms
                adjacency[parent].push(child);
                adjacency[child].push(parent);
            }
            (adjacency, symbols)
        })
    })
}

/// Serializes a tree molecule as SMILES, starting the depth-first walk at
/// `root`. Different roots give different strings for the same molecule.
fn tree_to_smiles(adjacency: &[Vec<usize>], symbols: &[char], root: usize) -> String {
    fn walk(
        adjacency: &[Vec<usize>],
        symbols: &[char],
        node: usize,
        parent: Option<usize>,
        out: &mut String,
    ) {
        out.push(symbols[node]);
        let children: Vec<usize> = adjacency[node]
            .iter()
            .copied()
            .filter(|&c| Some(c) != parent)
            .collect();
        for (i, &child) in children.iter().enumerate() {
            if i + 1 < children.len() {
                out.push('(');
                walk(adjacency, symbols, child, Some(node), out);
                out.push(')');
            } else {
                walk(adjacency, symbols, child, Some(node), out);
            }
        }
    }
    let mut out = String::new();
    walk(adjacency, symbols, root, None, &mut out);
    out
}

/// A strictly positive random square matrix of order 2..=8.
fn arb_positive_matrix() -> impl Strategy<Value = Array2<f64>> {
    (2usize..=8).prop_flat_map(|n| {
        prop::collection::vec(0.05f64..4.0, n * n)
            .prop_map(move |v| Array2::from_shape_vec((n, n), v).unwrap())
    })
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Plain alternating row/column normalization to uniform marginals 1/N —
/// the textbook Sinkhorn iteration in the linear domain, written without
/// reference to the production code.
fn alternating_normalization_oracle(p: &Array2<f64>, sweeps: usize) -> Array2<f64> {
    let n = p.nrows();
    let target = 1.0 / n as f64;
    let mut k = p.clone();
    for _ in 0..sweeps {
        for mut row in k.rows_mut() {
            let s = row.sum();
            row.mapv_inplace(|v| v * target / s);
        }
        for mut col in k.columns_mut() {
            let s = col.sum();
            col.mapv_inplace(|v| v * target / s);
        }
    }
    k
}

/// Confusion-matrix metrics computed the long way.
fn classification_oracle(
    y_true: &[usize],
    y_pred: &[usize],
    n_classes: usize,
) -> (f64, f64, f64, f64, f64) {
    let n = y_true.len() as f64;
    let mut confusion = vec![vec![0usize; n_classes]; n_classes];
    for (&t, &p) in y_true.iter().zip(y_pred.iter()) {
        confusion[t][p] += 1;
    }
    let accuracy = (0..n_classes).map(|c| confusion[c][c]).sum::<usize>() as f64 / n;
    let mut precision_w = 0.0;
    let mut recall_w = 0.0;
    let mut f1_w = 0.0;
    let mut f1_macro = 0.0;
    let mut present = 0usize;
    for c in 0..n_classes {
        let tp = confusion[c][c] as f64;
        let support: usize = confusion[c].iter().sum();
        let predicted: usize = (0..n_classes).map(|t| confusion[t][c]).sum();
        let precision = if predicted == 0 { 0.0 } else { tp / predicted as f64 };
        let recall = if support == 0 { 0.0 } else { tp / support as f64 };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        let weight = support as f64 / n;
        precision_w += weight * precision;
        recall_w += weight * recall;
        f1_w += weight * f1;
        if support > 0 {
            f1_macro += f1;
            present += 1;
        }
    }
    (accuracy, precision_w, recall_w, f1_w, f1_macro / present as f64)
}

/// Exhaustive pair-counting AUC: (concordant + ½·ties) / (positives·negatives).
fn pair_counting_auc(labels: &[bool], scores: &[f64]) -> f64 {
    let mut concordant = 0.0;
    let mut total = 0.0;
    for (i, &pos) in labels.iter().enumerate() {
        if !pos {
            continue;
        }
        for (j, &neg) in labels.iter().enumerate() {
            if neg {
                continue;
            }
            total += 1.0;
            if scores[i] > scores[j] {
                concordant += 1.0;
            } else if scores[i] == scores[j] {
                concordant += 0.5;
            }
        }
    }
    concordant / total
}

fn max_row_col_residual(k: ArrayView2<f64>) -> f64 {
    let n = k.nrows();
    let target = 1.0 / n as f64;
    let mut worst: f64 = 0.0;
    for row in k.rows() {
        worst = worst.max((row.sum() - target).abs());
    }
    for col in k.columns() {
        worst = worst.max((col.sum() - target).abs());
    }
    worst
}

fn fingerprint_bits(values: &Array1<f64>) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, _)| i)
        .collect()
}

// ---------------------------------------------------------------------------
// SMILES parser
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn parsing_is_deterministic_and_trees_are_acyclic((adjacency, symbols) in arb_tree()) {
        let smiles = tree_to_smiles(&adjacency, &symbols, 0);
        let first = parse_smiles(&smiles).unwrap();
        let second = parse_smiles(&smiles).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(first.atoms.len(), symbols.len());
        prop_assert_eq!(first.bonds.len(), symbols.len() - 1);
        prop_assert!(first.atoms.iter().all(|a| !a.ring_membership));
    }

    #[test]
    fn ring_closure_adds_exactly_one_bond((adjacency, symbols) in arb_tree()) {
        // Tying the serialization's first and last atoms into a ring adds
        // one bond; both endpoints become ring members. When those atoms
        // are already bonded the parser must reject the duplicate instead.
        let open = tree_to_smiles(&adjacency, &symbols, 0);
        let acyclic = parse_smiles(&open).unwrap();
        // Insert the ring-closure digit after the leading atom symbol and
        // append the partner digit at the end.
        let closed = format!("{}1{}1", &open[..1], &open[1..]);
        match parse_smiles(&closed) {
            Ok(cyclic) => {
                prop_assert_eq!(cyclic.bonds.len(), acyclic.bonds.len() + 1);
                prop_assert!(cyclic.atoms[0].ring_membership);
            }
            Err(SmilesError::DuplicateBond { .. }) => {
                // The walk ended on a neighbor of the root; no new edge fits.
            }
            Err(other) => prop_assert!(false, "unexpected error: {}", other),
        }
    }
}

// ---------------------------------------------------------------------------
// Fingerprints and k-mers
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn fingerprints_ignore_atom_ordering(
        (adjacency, symbols) in arb_tree(),
        root_choice in 0usize..usize::MAX,
        radius in 0usize..4,
    ) {
        // The same molecule written from two different starting atoms gives
        // two different strings; the fingerprint must not notice.
        let a = tree_to_smiles(&adjacency, &symbols, 0);
        let root = 1 + root_choice % (symbols.len() - 1);
        let b = tree_to_smiles(&adjacency, &symbols, root);
        let fa = morgan_fingerprint(&parse_smiles(&a).unwrap(), radius, 1024);
        let fb = morgan_fingerprint(&parse_smiles(&b).unwrap(), radius, 1024);
        prop_assert_eq!(fa.values, fb.values, "{} vs {}", a, b);
    }

    #[test]
    fn fingerprint_bits_grow_monotonically_with_radius((adjacency, symbols) in arb_tree()) {
        let smiles = tree_to_smiles(&adjacency, &symbols, 0);
        let graph = parse_smiles(&smiles).unwrap();
        let mut previous: Vec<usize> = Vec::new();
        for radius in 0..4 {
            let bits = fingerprint_bits(&morgan_fingerprint(&graph, radius, 2048).values);
            prop_assert!(
                previous.iter().all(|b| bits.binary_search(b).is_ok()),
                "radius {} lost bits from radius {}", radius, radius.saturating_sub(1)
            );
            previous = bits;
        }
    }

    #[test]
    fn kmer_counts_sum_to_window_count(
        (adjacency, symbols) in arb_tree(),
        k in 1usize..4,
    ) {
        let smiles = tree_to_smiles(&adjacency, &symbols, 0);
        prop_assume!(smiles.len() >= k);
        let corpus = [smiles.as_str(), "CCOCC", "NCCCN"];
        let vocab = build_vocabulary(&corpus, k).unwrap();
        let vector = kmer_vector(&smiles, &vocab).unwrap();
        prop_assert_eq!(vector.values.sum() as usize, smiles.len() - k + 1);
    }

    #[test]
    fn weighted_kmers_scale_counts_by_nonnegative_constants(
        (adjacency, symbols) in arb_tree(),
        k in 1usize..3,
    ) {
        let smiles = tree_to_smiles(&adjacency, &symbols, 0);
        prop_assume!(smiles.len() >= k);
        let corpus = [smiles.as_str(), "CCOCC", "NCCCN", "SCS"];
        let vocab = build_vocabulary(&corpus, k).unwrap();
        let counts = kmer_vector(&smiles, &vocab).unwrap();
        let weighted = weighted_kmer_vector(&smiles, &vocab, corpus.len()).unwrap();
        for i in 0..counts.len() {
            let c = counts.values[i];
            let w = weighted.values[i];
            if c == 0.0 {
                prop_assert_eq!(w, 0.0);
            } else {
                prop_assert!(w / c >= 0.0, "index {}: weight factor {}", i, w / c);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Sinkhorn balancing
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn balancing_matches_the_alternating_normalization_oracle(p in arb_positive_matrix()) {
        let config = GramPipelineConfig {
            xi: 1e-10,
            ..GramPipelineConfig::default()
        };
        let balanced = sinkhorn_balance(&p, &config).unwrap();
        prop_assert!(balanced.converged);
        let oracle = alternating_normalization_oracle(&p, 4000);
        let worst = (&balanced.kernel - &oracle)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(worst < 1e-8, "max deviation from oracle: {}", worst);
    }

    #[test]
    fn converged_kernels_are_doubly_stochastic(p in arb_positive_matrix()) {
        let config = GramPipelineConfig::default();
        let balanced = sinkhorn_balance(&p, &config).unwrap();
        prop_assert!(balanced.converged);
        prop_assert!(
            max_row_col_residual(balanced.kernel.view()) < config.xi,
            "marginal residual {}", max_row_col_residual(balanced.kernel.view())
        );
    }

    #[test]
    fn balancing_is_permutation_equivariant(p in arb_positive_matrix(), seed in any::<u64>()) {
        let n = p.nrows();
        // Derive a permutation from the seed by sorting hashed indices.
        let mut permutation: Vec<usize> = (0..n).collect();
        permutation.sort_by_key(|&i| (seed.wrapping_mul(0x9E3779B97F4A7C15).rotate_left(i as u32), i));

        let mut permuted = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                permuted[(i, j)] = p[(permutation[i], permutation[j])];
            }
        }
        let config = GramPipelineConfig::default();
        let k = sinkhorn_balance(&p, &config).unwrap().kernel;
        let k_permuted = sinkhorn_balance(&permuted, &config).unwrap().kernel;
        for i in 0..n {
            for j in 0..n {
                let expected = k[(permutation[i], permutation[j])];
                prop_assert!(
                    (k_permuted[(i, j)] - expected).abs() < 1e-10,
                    "entry ({}, {}): {} vs {}", i, j, k_permuted[(i, j)], expected
                );
            }
        }
    }

    #[test]
    fn marginal_residual_never_rises_near_convergence(p in arb_positive_matrix()) {
        let balanced = sinkhorn_balance(&p, &GramPipelineConfig::default()).unwrap();
        prop_assert!(balanced.converged);
        let residuals = &balanced.marginal_residuals;
        let tail = residuals.len().saturating_sub(10);
        for w in residuals[tail..].windows(2) {
            prop_assert!(
                w[1] <= w[0] * (1.0 + 1e-12) + f64::EPSILON,
                "residual rose near convergence: {} -> {}", w[0], w[1]
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Full Gram pipeline + kernel PCA
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn built_grams_are_symmetric_balanced_and_near_psd(
        rows in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 6), 3..10),
    ) {
        use molgram::embed::{FeatureKind, FeatureVector};
        let features: Vec<FeatureVector> = rows
            .iter()
            .map(|r| FeatureVector {
                values: Array1::from(r.clone()),
                kind: FeatureKind::Morgan,
            })
            .collect();
        let n = features.len();
        let config = GramPipelineConfig::default();
        let balanced = build_gram(&features, &config).unwrap();
        let k = &balanced.kernel;

        // Exact symmetry after the (K + Kᵀ)/2 step.
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(k[(i, j)], k[(j, i)]);
            }
        }
        // Symmetric input ⇒ row and column scalings agree.
        let ab_gap = balanced
            .scaling_a
            .iter()
            .zip(balanced.scaling_b.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        prop_assert!(ab_gap < 10.0 * config.xi, "a/b gap {}", ab_gap);
        prop_assert!(max_row_col_residual(k.view()) < config.xi);

        // Congruence transform of a PSD Gaussian kernel stays PSD.
        let sym = nalgebra::DMatrix::from_fn(n, n, |i, j| k[(i, j)]);
        let min_eig = sym
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |m, &v| m.min(v));
        prop_assert!(min_eig >= -1e-8, "min eigenvalue {}", min_eig);

        // Kernel PCA on the result: orthogonal columns, squared norms equal
        // eigenvalues, zero column means, non-increasing spectrum.
        let model = fit_kpca(k, n.min(3)).unwrap();
        let z = &model.components;
        for j in 0..model.rank() {
            let col = z.column(j);
            prop_assert!((col.dot(&col) - model.eigenvalues[j]).abs() < 1e-8);
            prop_assert!(col.sum().abs() / (n as f64) < 1e-9);
            for j2 in (j + 1)..model.rank() {
                prop_assert!(col.dot(&z.column(j2)).abs() < 1e-8);
            }
            if j > 0 {
                prop_assert!(model.eigenvalues[j] <= model.eigenvalues[j - 1] + 1e-15);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Evaluation metrics
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn classification_metrics_match_the_confusion_matrix_oracle(
        labels in prop::collection::vec((0usize..3, 0usize..3), 2..30),
    ) {
        let y_true: Vec<usize> = labels.iter().map(|&(t, _)| t).collect();
        let y_pred: Vec<usize> = labels.iter().map(|&(_, p)| p).collect();
        let mut scores = Array2::zeros((y_true.len(), 3));
        for (i, &p) in y_pred.iter().enumerate() {
            scores[(i, p)] = 1.0;
        }
        let metrics = classification_metrics(&y_true, &y_pred, scores.view()).unwrap();
        let (accuracy, precision_w, recall_w, f1_w, f1_macro) =
            classification_oracle(&y_true, &y_pred, 3);
        prop_assert!((metrics["accuracy"] - accuracy).abs() < 1e-12);
        prop_assert!((metrics["precision_weighted"] - precision_w).abs() < 1e-12);
        prop_assert!((metrics["recall_weighted"] - recall_w).abs() < 1e-12);
        prop_assert!((metrics["f1_weighted"] - f1_w).abs() < 1e-12);
        prop_assert!((metrics["f1_macro"] - f1_macro).abs() < 1e-12);
        for key in ["accuracy", "precision_weighted", "recall_weighted", "f1_weighted", "f1_macro", "roc_auc_ovr_macro"] {
            prop_assert!((0.0..=1.0).contains(&metrics[key]), "{} out of bounds", key);
        }
    }

    #[test]
    fn binary_auc_matches_pair_counting(
        rows in prop::collection::vec((any::<bool>(), 0u8..8), 2..50),
    ) {
        let labels: Vec<bool> = rows.iter().map(|&(l, _)| l).collect();
        prop_assume!(labels.iter().any(|&l| l) && labels.iter().any(|&l| !l));
        // Coarse score grid so ties actually occur.
        let score: Vec<f64> = rows.iter().map(|&(_, s)| s as f64 / 7.0).collect();
        let y_true: Vec<usize> = labels.iter().map(|&l| l as usize).collect();
        let y_pred = vec![0usize; labels.len()];
        let mut scores = Array2::zeros((labels.len(), 2));
        for (i, &s) in score.iter().enumerate() {
            scores[(i, 1)] = s;
            scores[(i, 0)] = 1.0 - s;
        }
        let metrics = classification_metrics(&y_true, &y_pred, scores.view()).unwrap();
        let expected_pos = pair_counting_auc(&labels, &score);
        let negated: Vec<bool> = labels.iter().map(|&l| !l).collect();
        let inverted: Vec<f64> = score.iter().map(|s| 1.0 - s).collect();
        let expected = (expected_pos + pair_counting_auc(&negated, &inverted)) / 2.0;
        prop_assert!((metrics["roc_auc_ovr_macro"] - expected).abs() < 1e-12,
            "{} vs {}", metrics["roc_auc_ovr_macro"], expected);
    }

    #[test]
    fn regression_metric_identities_hold(
        pairs in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 3..40),
    ) {
        let y: Vec<f64> = pairs.iter().map(|&(a, _)| a).collect();
        let pred: Vec<f64> = pairs.iter().map(|&(_, b)| b).collect();
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        prop_assume!(y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() > 1e-9);
        let metrics = regression_metrics(&y, &pred).unwrap();
        prop_assert!((metrics["rmse"] * metrics["rmse"] - metrics["mse"]).abs() < 1e-12);
        prop_assert!(metrics["mae"] >= 0.0 && metrics["mse"] >= 0.0);

        // Recentre the residuals: with zero-mean residual, R² = EVS.
        let residual_mean =
            y.iter().zip(pred.iter()).map(|(a, b)| a - b).sum::<f64>() / y.len() as f64;
        let centered_pred: Vec<f64> = pred.iter().map(|p| p + residual_mean).collect();
        let centered = regression_metrics(&y, &centered_pred).unwrap();
        prop_assert!((centered["r2"] - centered["evs"]).abs() < 1e-9);
    }

    #[test]
    fn splits_partition_and_are_deterministic(
        n in 2usize..200,
        seed in any::<u64>(),
        repeat in 0usize..5,
    ) {
        let spec = SplitSpec { train_fraction: 0.7, repeats: 5, seed };
        prop_assume!(random_split(n, &spec, repeat).is_ok());
        let (train, test) = random_split(n, &spec, repeat).unwrap();
        let (train2, test2) = random_split(n, &spec, repeat).unwrap();
        prop_assert_eq!(&train, &train2);
        prop_assert_eq!(&test, &test2);
        let mut all: Vec<usize> = train.iter().chain(test.iter()).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        prop_assert_eq!(train.len(), (0.7 * n as f64).floor() as usize);
    }

    #[test]
    fn knn_on_its_own_training_set_is_perfect(
        points in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0usize..3), 3..30),
    ) {
        // Distinct points: dedupe grid-wise to dodge identical coordinates
        // with different labels.
        let mut seen = std::collections::BTreeSet::new();
        let points: Vec<_> = points
            .into_iter()
            .filter(|&(x, y, _)| seen.insert(((x * 1e6) as i64, (y * 1e6) as i64)))
            .collect();
        prop_assume!(points.len() >= 2);
        let mut x = Array2::zeros((points.len(), 2));
        let mut labels = Vec::new();
        for (i, &(a, b, c)) in points.iter().enumerate() {
            x[(i, 0)] = a;
            x[(i, 1)] = b;
            labels.push(c);
        }
        let (predicted, _) = knn_classify(x.view(), &labels, x.view(), 1, 3).unwrap();
        prop_assert_eq!(predicted, labels);
    }
}
