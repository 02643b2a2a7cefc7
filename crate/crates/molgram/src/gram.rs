//! Pairwise Gaussian matrices, probability normalization, Sinkhorn-Knopp
//! balancing, and the assembled Gram matrix.
//!
//! The pipeline: a Gaussian matrix `D(i,j) = exp(−‖fᵢ−fⱼ‖²/(2σ²))`, globally
//! normalized to a joint probability matrix `P = D / ΣD`, then balanced so
//! that `K = diag(a)·P·diag(b)` has uniform row and column marginals `1/N`
//! (the only symmetric choice of target). The balancing runs in the log
//! domain throughout: with σ of practical size the off-diagonal entries of
//! `D` span many orders of magnitude, and linear-domain scaling underflows.
//!
//! The entropic parameters ζ and δ are carried in the configuration for
//! fidelity with the transport formulation (the scaled cost `exp(−δ·P/ζ)`
//! with zero duals is exactly the iteration-0 state of the loop below), but
//! the balanced fixed point does not depend on them: both cancel once the
//! duals absorb the marginal constraints.

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::embed::FeatureVector;

/// Hyperparameters of the Gram pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct GramPipelineConfig {
    /// Gaussian width σ (feature-space distance units).
    pub sigma: f64,
    /// Entropic scale ζ.
    pub zeta: f64,
    /// Cost scale δ.
    pub delta: f64,
    /// Convergence tolerance ξ on the scaling-vector change.
    pub xi: f64,
    /// Upper bound on balancing sweeps.
    pub max_iterations: usize,
}

impl Default for GramPipelineConfig {
    fn default() -> Self {
        GramPipelineConfig {
            sigma: 1.0,
            zeta: 1.0,
            delta: 1e-10,
            xi: 1e-6,
            max_iterations: 10_000,
        }
    }
}

impl GramPipelineConfig {
    /// Check the field ranges declared by the type.
    pub fn validate(&self) -> Result<(), GramError> {
        if !(self.sigma > 0.0) {
            return Err(GramError::NonPositiveSigma(self.sigma));
        }
        if !(self.zeta > 0.0) || !(self.delta > 0.0) || !(self.xi > 0.0) {
            return Err(GramError::InvalidConfig);
        }
        if self.max_iterations == 0 {
            return Err(GramError::InvalidConfig);
        }
        Ok(())
    }
}

/// The balanced kernel with every pipeline intermediate.
///
/// When produced by [`build_gram`], `distance_matrix` is the Gaussian matrix
/// D (symmetric, unit diagonal) and `probability_matrix` its global
/// normalization P. When [`sinkhorn_balance`] is called directly, there is
/// no D; both fields then hold the input matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedKernel {
    /// Gaussian matrix D.
    pub distance_matrix: Array2<f64>,
    /// Joint probability matrix P (entries positive, total sum 1).
    pub probability_matrix: Array2<f64>,
    /// Row scaling vector a.
    pub scaling_a: Array1<f64>,
    /// Column scaling vector b.
    pub scaling_b: Array1<f64>,
    /// K = diag(a)·P·diag(b); symmetrized to (K+Kᵀ)/2 by [`build_gram`].
    pub kernel: Array2<f64>,
    /// Balancing sweeps performed.
    pub iterations_used: usize,
    /// True when the stopping rule (max scaling change < ξ) was met.
    pub converged: bool,
    /// Row-marginal residual max|row sum − 1/N| after each sweep; kept for
    /// convergence diagnostics and regression tests.
    pub marginal_residuals: Vec<f64>,
}

/// Errors from the Gram pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GramError {
    #[error("feature vector {index} has length {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("need at least {needed} feature vectors, got {got}")]
    TooFewVectors { needed: usize, got: usize },
    #[error("matrix entry ({row}, {col}) is not strictly positive")]
    NonPositiveEntry { row: usize, col: usize },
    #[error("matrix must be square, got {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite value during {stage} — check sigma/zeta configuration")]
    NonFiniteValue { stage: &'static str },
    #[error("invalid configuration: zeta, delta, xi must be positive and max_iterations ≥ 1")]
    InvalidConfig,
}

/// Pairwise Gaussian matrix: entry `(i,j) = exp(−‖fᵢ−fⱼ‖²/(2σ²))`.
/// Symmetric with an exactly-unit diagonal.
pub fn gaussian_distance_matrix(
    features: &[FeatureVector],
    sigma: f64,
) -> Result<Array2<f64>, GramError> {
    if !(sigma > 0.0) {
        return Err(GramError::NonPositiveSigma(sigma));
    }
    if features.len() < 2 {
        return Err(GramError::TooFewVectors {
            needed: 2,
            got: features.len(),
        });
    }
    let dim = features[0].len();
    for (index, f) in features.iter().enumerate() {
        if f.len() != dim {
            return Err(GramError::DimensionMismatch {
                index,
                expected: dim,
                found: f.len(),
            });
        }
    }
    let n = features.len();
    let denom = 2.0 * sigma * sigma;
    let mut d = Array2::ones((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let value = (-squared_distance(&features[i], &features[j]) / denom).exp();
            d[(i, j)] = value;
            d[(j, i)] = value;
        }
    }
    Ok(d)
}

fn squared_distance(a: &FeatureVector, b: &FeatureVector) -> f64 {
    a.values
        .iter()
        .zip(b.values.iter())
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// Median-heuristic Gaussian width: σ² = median of the pairwise squared
/// distances / 2. Errs when the median is zero (all vectors identical) —
/// a zero width is not a usable kernel.
pub fn median_heuristic_sigma(features: &[FeatureVector]) -> Result<f64, GramError> {
    if features.len() < 2 {
        return Err(GramError::TooFewVectors {
            needed: 2,
            got: features.len(),
        });
    }
    let mut distances = Vec::with_capacity(features.len() * (features.len() - 1) / 2);
    for i in 0..features.len() {
        for j in (i + 1)..features.len() {
            distances.push(squared_distance(&features[i], &features[j]));
        }
    }
    distances.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let mid = distances.len() / 2;
    let median = if distances.len() % 2 == 1 {
        distances[mid]
    } else {
        0.5 * (distances[mid - 1] + distances[mid])
    };
    let sigma = (median / 2.0).sqrt();
    if !(sigma > 0.0) {
        return Err(GramError::NonPositiveSigma(sigma));
    }
    Ok(sigma)
}

/// Global normalization to a joint probability matrix: `P = D / ΣD`.
///
/// The σ that produced D cancels under the global sum, so it is not a
/// parameter here; P is a true probability matrix regardless of the width.
pub fn normalize_to_probability(d: &Array2<f64>) -> Result<Array2<f64>, GramError> {
    check_strictly_positive(d)?;
    let total: f64 = d.sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(GramError::NonFiniteValue {
            stage: "probability normalization",
        });
    }
    Ok(d / total)
}

fn check_strictly_positive(m: &Array2<f64>) -> Result<(), GramError> {
    for ((row, col), &value) in m.indexed_iter() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(GramError::NonPositiveEntry { row, col });
        }
    }
    Ok(())
}

/// Log-sum-exp over a slice of already-log-domain values.
fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Sinkhorn-Knopp balancing of a strictly positive matrix to uniform
/// marginals `r = 1/N`, in the log domain.
///
/// Dual vectors `log a`, `log b` start at 0 — the literal iteration-0 state
/// of the entropic formulation `exp((−δ·P + ζ·log a + ζ·log b)/ζ)` — and are
/// updated alternately:
///
/// ```text
/// log a(i) ← log r − logΣexp_j( log P(i,j) + log b(j) )
/// log b(j) ← log r − logΣexp_i( log P(i,j) + log a(i) )
/// ```
///
/// The loop stops when `max|a₁ − a| < ξ` and `max|b₁ − b| < ξ` in the linear
/// domain (comparing the vectors before and after a sweep), or at
/// `max_iterations`. The result is `K = diag(a)·P·diag(b)`, which satisfies
/// that identity to floating-point rounding; when converged, every row and
/// column of K sums to 1/N within ξ.
///
/// The (a, b) pair is reported in a canonical gauge: the decomposition is
/// only determined up to the rescaling (c·a, b/c), so equal log-means are
/// chosen — and for exactly symmetric P the two duals are averaged outright,
/// giving a = b and making K a congruence `diag(a)·P·diag(a)`.
pub fn sinkhorn_balance(
    p: &Array2<f64>,
    config: &GramPipelineConfig,
) -> Result<BalancedKernel, GramError> {
    config.validate()?;
    let (rows, cols) = p.dim();
    if rows != cols {
        return Err(GramError::NotSquare { rows, cols });
    }
    check_strictly_positive(p)?;
    let n = rows;
    let log_p = p.mapv(f64::ln);
    let log_r = -(n as f64).ln();

    let mut log_a = Array1::zeros(n);
    let mut log_b = Array1::zeros(n);
    let mut converged = false;
    let mut iterations_used = 0;
    let mut marginal_residuals = Vec::new();
    let mut scratch = vec![0.0; n];

    for iteration in 1..=config.max_iterations {
        iterations_used = iteration;
        let a_before = log_a.mapv(f64::exp);
        let b_before = log_b.mapv(f64::exp);

        for i in 0..n {
            for j in 0..n {
                scratch[j] = log_p[(i, j)] + log_b[j];
            }
            log_a[i] = log_r - logsumexp(&scratch);
        }
        for j in 0..n {
            for i in 0..n {
                scratch[i] = log_p[(i, j)] + log_a[i];
            }
            log_b[j] = log_r - logsumexp(&scratch);
        }
        if log_a.iter().chain(log_b.iter()).any(|v| !v.is_finite()) {
            return Err(GramError::NonFiniteValue {
                stage: "sinkhorn balancing",
            });
        }

        let a_after = log_a.mapv(f64::exp);
        let b_after = log_b.mapv(f64::exp);
        let delta_a = max_abs_diff(&a_after, &a_before);
        let delta_b = max_abs_diff(&b_after, &b_before);

        let target = 1.0 / n as f64;
        let mut residual = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                scratch[j] = log_a[i] + log_p[(i, j)] + log_b[j];
            }
            residual = residual.max((logsumexp(&scratch).exp() - target).abs());
        }
        marginal_residuals.push(residual);

        if delta_a < config.xi && delta_b < config.xi {
            converged = true;
            break;
        }
    }

    // The decomposition K = diag(a)·P·diag(b) carries a free scale: (c·a,
    // b/c) is the same solution, and the alternating updates also leave a
    // residual offset between a and b that flips sign each half-sweep
    // instead of decaying — on slowly-mixing inputs it can dwarf ξ. For
    // symmetric P the solution itself has a = b and the flip cancels exactly
    // in the element-wise dual average, so project onto that representative;
    // K becomes a literal congruence diag(a)·P·diag(a), which also keeps PSD
    // inputs PSD. For asymmetric P only the scale is free: pick equal
    // log-means.
    let symmetric = (0..n).all(|i| (0..i).all(|j| p[(i, j)] == p[(j, i)]));
    if symmetric {
        let mean = (&log_a + &log_b) / 2.0;
        log_a.assign(&mean);
        log_b.assign(&mean);
    } else {
        let gauge = (log_b.mean().unwrap_or(0.0) - log_a.mean().unwrap_or(0.0)) / 2.0;
        log_a += gauge;
        log_b -= gauge;
    }

    let mut kernel = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            kernel[(i, j)] = (log_a[i] + log_p[(i, j)] + log_b[j]).exp();
        }
    }
    if kernel.iter().any(|v| !v.is_finite()) {
        return Err(GramError::NonFiniteValue {
            stage: "kernel assembly",
        });
    }

    Ok(BalancedKernel {
        distance_matrix: p.clone(),
        probability_matrix: p.clone(),
        scaling_a: log_a.mapv(f64::exp),
        scaling_b: log_b.mapv(f64::exp),
        kernel,
        iterations_used,
        converged,
        marginal_residuals,
    })
}

fn max_abs_diff(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The full pipeline: Gaussian matrix → probability normalization →
/// Sinkhorn balancing, then `K ← (K + Kᵀ)/2`. The symmetrization perturbs
/// each entry by at most the converged row/column asymmetry (below ξ), and
/// downstream kernel PCA requires exact symmetry.
pub fn build_gram(
    features: &[FeatureVector],
    config: &GramPipelineConfig,
) -> Result<BalancedKernel, GramError> {
    config.validate()?;
    let d = gaussian_distance_matrix(features, config.sigma)?;
    let p = normalize_to_probability(&d)?;
    let mut balanced = sinkhorn_balance(&p, config)?;
    balanced.distance_matrix = d;
    balanced.kernel = 0.5 * (&balanced.kernel + &balanced.kernel.t());
    Ok(balanced)
}

/// Kernel value between two embeddings against a background set: builds the
/// Gram matrix over `{f1, f2} ∪ background` and returns `N·K(0,1)`, the
/// rescaling that makes values comparable across background sizes (each row
/// of K sums to 1/N). The background may be empty (a bare pair, N = 2).
pub fn kernel_value_between(
    f1: &FeatureVector,
    f2: &FeatureVector,
    background: &[FeatureVector],
    config: &GramPipelineConfig,
) -> Result<f64, GramError> {
    let mut features = Vec::with_capacity(2 + background.len());
    features.push(f1.clone());
    features.push(f2.clone());
    features.extend_from_slice(background);
    let balanced = build_gram(&features, config)?;
    Ok(features.len() as f64 * balanced.kernel[(0, 1)])
}
