use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Offline ridge regression: `w_outᵀ = (XᵀX + lambda I)⁻¹ Xᵀ Y` with
/// `states` as the `T x n_res` design matrix and `targets` `T x n_out`.
/// Solved by Cholesky on the regularized normal equations; `lambda = 0`
/// with a rank-deficient design is rejected.
pub fn ridge_fit(
    states: &DMatrix<f64>,
    targets: &DMatrix<f64>,
    lambda: f64,
) -> Result<DMatrix<f64>> {
    if states.nrows() == 0 {
        return Err(Error::InvalidParameter("ridge_fit needs at least one sample".into()));
    }
    if states.nrows() != targets.nrows() {
        return Err(Error::dim("ridge_fit targets", states.nrows(), targets.nrows()));
    }
    if lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ridge lambda must be >= 0, got {lambda}"
        )));
    }
    let n = states.ncols();
    let mut gram = states.transpose() * states;
    for i in 0..n {
        gram[(i, i)] += lambda;
    }
    let rhs = states.transpose() * targets;
    let chol = gram.cholesky().ok_or_else(|| {
        Error::InvalidParameter(
            "normal equations are singular (rank-deficient states with lambda = 0)".into(),
        )
    })?;
    Ok(chol.solve(&rhs).transpose())
}
