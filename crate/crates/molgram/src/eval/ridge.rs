//! Linear / ridge regression with an unpenalized intercept.

use nalgebra::{DMatrix, DVector};
use ndarray::ArrayView2;

use super::EvalError;

/// Fit `w = (XᵀX + αI)⁻¹ Xᵀ y` on mean-centered X and y and predict
/// `X_test·w + intercept`. Centering keeps the intercept out of the penalty.
///
/// `alpha = 0` selects plain least squares through a rank-revealing SVD, so
/// rank-deficient designs get the minimum-norm solution instead of a crash.
/// For `alpha > 0` the normal equations are solved in whichever of the
/// primal (p×p) or dual (n×n) form is smaller — the two are algebraically
/// identical, and feature counts often dwarf sample counts here.
pub fn ridge_regress(
    train_x: ArrayView2<f64>,
    train_y: &[f64],
    test_x: ArrayView2<f64>,
    alpha: f64,
) -> Result<Vec<f64>, EvalError> {
    let n = train_x.nrows();
    let p = train_x.ncols();
    if train_y.len() != n {
        return Err(EvalError::LengthMismatch {
            left: n,
            right: train_y.len(),
        });
    }
    if n == 0 {
        return Err(EvalError::DatasetTooSmall { n });
    }
    if test_x.ncols() != p {
        return Err(EvalError::LengthMismatch {
            left: p,
            right: test_x.ncols(),
        });
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(EvalError::InvalidAlpha(alpha));
    }
    if train_x.iter().any(|v| !v.is_finite())
        || test_x.iter().any(|v| !v.is_finite())
        || train_y.iter().any(|v| !v.is_finite())
    {
        return Err(EvalError::NonFiniteInput);
    }

    let col_means: Vec<f64> = (0..p).map(|j| train_x.column(j).sum() / n as f64).collect();
    let y_mean = train_y.iter().sum::<f64>() / n as f64;
    let xc = DMatrix::from_fn(n, p, |i, j| train_x[(i, j)] - col_means[j]);
    let yc = DVector::from_fn(n, |i, _| train_y[i] - y_mean);

    let weights: DVector<f64> = if alpha == 0.0 {
        let svd = xc.clone().svd(true, true);
        let max_sv = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let eps = max_sv * 1e-12;
        svd.solve(&yc, eps)
            .map_err(|_| EvalError::NonFiniteInput)?
            .column(0)
            .into_owned()
    } else if p <= n {
        let mut gram = xc.transpose() * &xc;
        for i in 0..p {
            gram[(i, i)] += alpha;
        }
        let rhs = xc.transpose() * &yc;
        gram.cholesky()
            .ok_or(EvalError::NonFiniteInput)?
            .solve(&rhs)
    } else {
        // Dual form: w = Xᵀ (X Xᵀ + αI)⁻¹ y.
        let mut outer = &xc * xc.transpose();
        for i in 0..n {
            outer[(i, i)] += alpha;
        }
        let dual = outer
            .cholesky()
            .ok_or(EvalError::NonFiniteInput)?
            .solve(&yc);
        xc.transpose() * dual
    };

    let predictions = (0..test_x.nrows())
        .map(|t| {
            let mut value = y_mean;
            for j in 0..p {
                value += (test_x[(t, j)] - col_means[j]) * weights[j];
            }
            value
        })
        .collect();
    Ok(predictions)
}
