//! Kernel PCA: double-center a symmetric Gram matrix, eigendecompose, and
//! keep the top components as low-dimensional scores.

use nalgebra::DMatrix;
use ndarray::Array2;
use thiserror::Error;

/// Relative threshold below which eigenvalues are treated as numerical zero.
const EIGENVALUE_DISCARD: f64 = 1e-10;
/// How asymmetric an input kernel may be before it is rejected.
const SYMMETRY_TOLERANCE: f64 = 1e-8;

/// A fitted kernel-PCA model.
#[derive(Debug, Clone, PartialEq)]
pub struct KpcaModel {
    /// Double-centered kernel `K_c = K − 1K/N − K1/N + 1K1/N²`.
    pub centered_kernel: Array2<f64>,
    /// Retained eigenvalues, sorted descending; every entry exceeds the
    /// discard tolerance `1e-10·max(λ)`.
    pub eigenvalues: Vec<f64>,
    /// N×rank matrix of eigenvectors scaled by √λ, so column j has squared
    /// norm λⱼ and the full-rank scores reproduce `Z·Zᵀ = K_c`.
    pub components: Array2<f64>,
    /// Requested embedding dimension.
    pub d: usize,
    /// Set when the numerical rank fell short of `d`; [`transform`] then
    /// zero-pads the trailing columns.
    pub warning: Option<String>,
}

impl KpcaModel {
    /// Number of eigenvalues that survived the discard tolerance (≤ d).
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Convenience alias for [`transform`].
    pub fn transform(&self) -> Embedding {
        transform(self)
    }
}

/// Training-set scores, one row per molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// N×d score matrix Z.
    pub scores: Array2<f64>,
}

/// Errors from kernel-PCA fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KpcaError {
    #[error("kernel is not symmetric: max |K − Kᵀ| = {max_asymmetry}")]
    NotSymmetric { max_asymmetry: f64 },
    #[error("d = {requested} exceeds the kernel size N = {n}")]
    DTooLarge { requested: usize, n: usize },
    #[error("d must be at least 1")]
    ZeroD,
    #[error("kernel must be square, got {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
}

/// Fit kernel PCA on a symmetric N×N kernel.
///
/// The kernel is double-centered, eigendecomposed, and eigenvalues at or
/// below `1e-10·max(λ)` are discarded; at most `d` survive. Eigenvectors are
/// scaled by √λ and sign-fixed so each column's largest-magnitude entry is
/// positive, which pins the output bit-for-bit across runs.
///
/// Rank deficiency (fewer surviving eigenvalues than `d`) is not an error:
/// the model records a warning and [`transform`] zero-pads.
pub fn fit_kpca(k: &Array2<f64>, d: usize) -> Result<KpcaModel, KpcaError> {
    let (rows, cols) = k.dim();
    if rows != cols {
        return Err(KpcaError::NotSquare { rows, cols });
    }
    let n = rows;
    if d == 0 {
        return Err(KpcaError::ZeroD);
    }
    if d > n {
        return Err(KpcaError::DTooLarge { requested: d, n });
    }
    let mut max_asymmetry = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            max_asymmetry = max_asymmetry.max((k[(i, j)] - k[(j, i)]).abs());
        }
    }
    if max_asymmetry > SYMMETRY_TOLERANCE {
        return Err(KpcaError::NotSymmetric { max_asymmetry });
    }

    let centered_kernel = double_center(k);

    // Dense symmetric eigendecomposition. The public API stays ndarray;
    // nalgebra is an internal detail.
    let na = DMatrix::from_fn(n, n, |i, j| centered_kernel[(i, j)]);
    let eigen = na.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .partial_cmp(&eigen.eigenvalues[a])
            .expect("finite eigenvalues")
    });

    let max_eigenvalue = eigen.eigenvalues[order[0]].max(0.0);
    let discard_at = EIGENVALUE_DISCARD * max_eigenvalue;
    let retained: Vec<usize> = order
        .into_iter()
        .filter(|&idx| eigen.eigenvalues[idx] > discard_at)
        .take(d)
        .collect();

    let mut eigenvalues = Vec::with_capacity(retained.len());
    let mut components = Array2::zeros((n, retained.len()));
    for (col, &idx) in retained.iter().enumerate() {
        let lambda = eigen.eigenvalues[idx];
        eigenvalues.push(lambda);
        let vector = eigen.eigenvectors.column(idx);
        // Sign convention: the entry of largest magnitude is made positive
        // (first such entry on exact ties).
        let mut flip = 1.0;
        let mut best = 0.0f64;
        for value in vector.iter() {
            if value.abs() > best {
                best = value.abs();
                flip = if *value < 0.0 { -1.0 } else { 1.0 };
            }
        }
        let scale = lambda.sqrt() * flip;
        for row in 0..n {
            components[(row, col)] = vector[row] * scale;
        }
    }

    let warning = (eigenvalues.len() < d).then(|| {
        format!(
            "requested {d} components but the numerical rank is {}; trailing columns are zero-padded",
            eigenvalues.len()
        )
    });

    Ok(KpcaModel {
        centered_kernel,
        eigenvalues,
        components,
        d,
        warning,
    })
}

fn double_center(k: &Array2<f64>) -> Array2<f64> {
    let n = k.nrows();
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n).map(|i| k.row(i).sum() / nf).collect();
    let col_means: Vec<f64> = (0..n).map(|j| k.column(j).sum() / nf).collect();
    let grand_mean = k.sum() / (nf * nf);
    Array2::from_shape_fn((n, n), |(i, j)| {
        k[(i, j)] - row_means[i] - col_means[j] + grand_mean
    })
}

/// Training-set scores of a fitted model: the scaled eigenvector columns,
/// zero-padded on the right when the numerical rank fell short of `d`.
pub fn transform(model: &KpcaModel) -> Embedding {
    let n = model.centered_kernel.nrows();
    let mut scores = Array2::zeros((n, model.d));
    for col in 0..model.components.ncols() {
        for row in 0..n {
            scores[(row, col)] = model.components[(row, col)];
        }
    }
    Embedding { scores }
}
